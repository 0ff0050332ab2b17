#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "pla/geometry.hpp"
#include "pla/types.hpp"

namespace pla {

enum class MethodId : std::uint8_t {
  Swing = 0,     // joined segments pivoting on the previous boundary point
  Angle = 1,     // disjoint segments pivoting on a two-point apex
  Disjoint = 2,  // disjoint segments via envelope feasibility (fewest segments)
  Linear = 3,    // least-squares line kept while it stays within tolerance
};

std::string_view method_name(MethodId id) noexcept;
std::optional<MethodId> method_from_name(std::string_view name) noexcept;

enum class CloseKind {
  Break,   // next tuple did not fit; it already starts the following segment
  Cap,     // segment reached the maximum length with its final tuple
  Finish,  // end of input flushed the remainder
};

struct ClosedSegment {
  SegmentSummary summary;
  CloseKind kind = CloseKind::Break;
};

// Online segmenter: feed tuples, collect finished segments. Segments
// partition the input in order; every covered tuple sits within the error
// threshold of its segment's line.
class PlaMethod {
 public:
  PlaMethod(ErrorThreshold eps, std::size_t max_segment_length);
  virtual ~PlaMethod() = default;

  // Feeds one tuple (strictly increasing t). Returns the segment this tuple
  // closed, if any: a Break close does not cover the tuple (it opens the next
  // segment), a Cap close does.
  std::optional<ClosedSegment> push(const InputTuple& p);

  // Flushes the trailing partial segment and resets for a fresh stream.
  std::optional<ClosedSegment> finish();

  ErrorThreshold epsilon() const noexcept { return eps_; }
  std::size_t max_segment_length() const noexcept { return cap_; }
  std::size_t buffered() const noexcept { return buffer_.size(); }
  virtual MethodId id() const noexcept = 0;

 protected:
  // Tries to extend the open segment with p (buffer_ holds prior tuples
  // only). Must leave state unchanged and return false when p does not fit;
  // a first tuple always fits.
  virtual bool accept(const InputTuple& p) = 0;

  // Approximation line for the buffered tuples (buffer_ non-empty).
  virtual LineCoefficients current_line() const = 0;

  // Carry information across the boundary (line and last covered timestamp
  // of the segment just closed).
  virtual void on_close(const LineCoefficients& line, double last_t);

  // Whether the open segment's line is pinned to the previous boundary.
  virtual bool joins_previous() const noexcept;

  // Drop per-segment working state.
  virtual void reset_segment_state() = 0;

  // Drop everything carried across segments too (called by finish()).
  virtual void reset_stream_state() { reset_segment_state(); }

  const std::vector<InputTuple>& buffer() const noexcept { return buffer_; }
  double eps_value() const noexcept { return eps_.value(); }

 private:
  SegmentSummary make_summary() const;
  void close_current(CloseKind kind, std::optional<ClosedSegment>& out);
  void validate_input(const InputTuple& p) const;

  ErrorThreshold eps_;
  std::size_t cap_;
  std::vector<InputTuple> buffer_;
  std::size_t next_index_ = 0;
  std::size_t seg_start_index_ = 0;
  bool have_last_t_ = false;
  double last_t_ = 0.0;
};

std::unique_ptr<PlaMethod> make_method(MethodId id, ErrorThreshold eps,
                                       std::size_t max_segment_length);

// Convenience for tests and batch use: run a whole stream through a method.
std::vector<SegmentSummary> segment_stream(MethodId id, std::span<const InputTuple> points,
                                           ErrorThreshold eps, std::size_t max_segment_length);

}  // namespace pla
