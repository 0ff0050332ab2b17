#include "pla/error.hpp"

namespace pla {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EqualTimestamps:
      return "EqualTimestamps";
    case Errc::NonContiguous:
      return "NonContiguous";
    case Errc::TimestampBeforeFirstKnot:
      return "TimestampBeforeFirstKnot";
    case Errc::MalformedKnotStream:
      return "MalformedKnotStream";
    case Errc::DegenerateSpan:
      return "DegenerateSpan";
    case Errc::ParallelExtremes:
      return "ParallelExtremes";
    case Errc::NonMonotonicTime:
      return "NonMonotonicTime";
    case Errc::TooFewPoints:
      return "TooFewPoints";
    case Errc::ZeroVariance:
      return "ZeroVariance";
    case Errc::NonPositiveTimestamp:
      return "NonPositiveTimestamp";
    case Errc::CorruptStream:
      return "CorruptStream";
    case Errc::TruncatedStream:
      return "TruncatedStream";
    case Errc::UncoveredIndex:
      return "UncoveredIndex";
    case Errc::DoubleCoverage:
      return "DoubleCoverage";
    case Errc::EmptyInput:
      return "EmptyInput";
    case Errc::IllegalPairing:
      return "IllegalPairing";
    case Errc::ParseError:
      return "ParseError";
    case Errc::NonFiniteValue:
      return "NonFiniteValue";
    case Errc::BadParams:
      return "BadParams";
  }
  return "UnknownError";
}

}  // namespace pla
