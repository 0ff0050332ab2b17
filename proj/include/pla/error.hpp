#pragma once

#include <stdexcept>
#include <string>

namespace pla {

// Failure categories surfaced by the library. Each maps to one misuse or
// malformed-data condition; tests match on the code, not the message.
enum class Errc {
  EqualTimestamps,
  NonContiguous,
  TimestampBeforeFirstKnot,
  MalformedKnotStream,
  DegenerateSpan,
  ParallelExtremes,
  NonMonotonicTime,
  TooFewPoints,
  ZeroVariance,
  NonPositiveTimestamp,
  CorruptStream,
  TruncatedStream,
  UncoveredIndex,
  DoubleCoverage,
  EmptyInput,
  IllegalPairing,
  ParseError,
  NonFiniteValue,
  BadParams,
};

const char* errc_name(Errc code) noexcept;

class PlaError : public std::runtime_error {
 public:
  PlaError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw PlaError(code, what);
}

}  // namespace pla
