#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "pla/types.hpp"

namespace pla {

// Line through the end anchor of `prev` and the start... more precisely:
// through (prev.t, prev.y_start) and (cur.t, cur.y_end), i.e. the segment
// bounded by the two knots. Throws EqualTimestamps when prev.t == cur.t.
LineCoefficients segment_from_knots(const Knot& prev, const Knot& cur);

// Converts an ordered segment sequence plus the tuples it covers into the
// knot representation. `tuples` must be exactly the covered tuples, in
// order; segment index ranges must be contiguous (throws NonContiguous).
//
// Boundary between consecutive segments:
//   - joined: one joint knot at the earlier segment's last covered
//     timestamp (both lines pass through that shared endpoint);
//   - not joined: one disjoint knot at the later segment's first covered
//     timestamp, ending the earlier line there and starting the later one.
// A closing joint knot at the last covered timestamp ends the sequence,
// except when the boundary knot already sits at that timestamp (final
// one-tuple segment after a disjoint boundary) — then the disjoint knot is
// last, and its y_start still reconstructs the final tuple exactly.
std::vector<Knot> segments_to_knots(std::span<const SegmentSummary> segments,
                                    std::span<const InputTuple> tuples);

// Streaming reconstruction: timestamps and knots arrive independently, each
// strictly increasing; every timestamp is paired with the value of the
// segment that starts at the latest knot at-or-before it. A timestamp equal
// to a knot's t takes that knot's y_start and is emitted immediately; one
// strictly between two knots waits for the bounding pair.
class Reconstructor {
 public:
  void push_timestamp(double t);

  // Appends every newly determined tuple to `out`.
  void push_knot(const Knot& k, std::vector<ReconstructedTuple>& out);

  // Throws MalformedKnotStream if timestamps beyond the final knot remain.
  void finish(std::vector<ReconstructedTuple>& out);

 private:
  std::deque<double> pending_;
  std::optional<Knot> prev_;
  bool have_ts_ = false;
  double last_ts_ = 0.0;
};

// Batch convenience over Reconstructor.
std::vector<ReconstructedTuple> reconstruct(std::span<const double> timestamps,
                                            std::span<const Knot> knots);

}  // namespace pla
