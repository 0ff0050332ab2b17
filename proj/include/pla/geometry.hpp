#pragma once

#include <cstddef>
#include <deque>
#include <span>

#include "pla/types.hpp"

namespace pla {

struct Point {
  double t = 0.0;
  double y = 0.0;
};

// Vertical tolerance segment [(t, lo), (t, hi)] around one tuple.
struct ErrorSegment {
  double t = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  static ErrorSegment around(const InputTuple& p, ErrorThreshold eps) {
    return ErrorSegment{p.t, p.y - eps.value(), p.y + eps.value()};
  }
};

// Range of slopes for lines through a fixed origin that cut every tolerance
// segment seen so far. a_min never decreases, a_max never increases.
class SlopeCone {
 public:
  // Opens the cone over `first`'s tolerance segment.
  // Throws DegenerateSpan when first.t == origin.t.
  SlopeCone(Point origin, const InputTuple& first, ErrorThreshold eps);

  // Narrows the cone with one more tuple. Returns false (state unchanged)
  // when no slope through the origin reaches the new tolerance segment.
  bool update(const InputTuple& p);

  Point origin() const noexcept { return origin_; }
  double a_min() const noexcept { return a_min_; }
  double a_max() const noexcept { return a_max_; }

  // Middle slope of the cone, anchored at the origin.
  LineCoefficients bisector() const noexcept;

 private:
  Point origin_;
  double eps_;
  double a_min_ = 0.0;
  double a_max_ = 0.0;
};

// Apex for a two-point cone construction: intersection of the steepest line
// (through (p0.t, p0.y-eps), (p1.t, p1.y+eps)) and the shallowest (through
// (p0.t, p0.y+eps), (p1.t, p1.y-eps)). Every slope of the cone opened there
// over p1 also cuts p0's tolerance segment.
Point angle_origin(const InputTuple& p0, const InputTuple& p1, ErrorThreshold eps);

// Incremental two-hull feasibility structure for unconstrained lines.
//
// Keeps the upper envelope of the lower tolerance endpoints and the lower
// envelope of the upper ones, plus the two extreme-slope lines that cut
// every inserted segment. Envelope vertices that no longer constrain any
// such line are discarded, so vertex counts stay small while line_valid
// stays exact.
class PartialHulls {
 public:
  enum class Insert { Extended, Breakup };

  // Strictly-later-in-time segments only (throws NonMonotonicTime).
  // Breakup (state unchanged) when no line cuts the open tolerance band of
  // every stored segment plus this one.
  Insert insert(const ErrorSegment& s);

  std::size_t size() const noexcept { return n_; }

  // Extreme-slope lines over everything inserted; TooFewPoints when size()<2.
  LineCoefficients min_line() const;
  LineCoefficients max_line() const;

  // True iff the line stays within the closed tolerance band of every
  // inserted segment; evaluated against hull vertices only.
  bool line_valid(const LineCoefficients& line) const noexcept;

  void clear();

 private:
  void rotate_min(Point lo_pt);
  void rotate_max(Point hi_pt);
  void prune_heads();

  std::deque<Point> lower_;  // upper envelope of the lower endpoints
  std::deque<Point> upper_;  // lower envelope of the upper endpoints
  std::size_t n_ = 0;
  double last_t_ = 0.0;
  LineCoefficients min_line_{};
  LineCoefficients max_line_{};
  // Envelope contact vertices of the extreme lines.
  std::size_t min_left_ = 0;   // min line on upper_
  std::size_t min_right_ = 0;  // min line on lower_
  std::size_t max_left_ = 0;   // max line on lower_
  std::size_t max_right_ = 0;  // max line on upper_
};

// Incremental simple linear regression over (t, y) pairs.
class RegressionAccumulator {
 public:
  void push(const InputTuple& p) noexcept;
  std::size_t count() const noexcept { return n_; }

  // Least-squares line of everything pushed. Throws TooFewPoints when
  // count()<2 and ZeroVariance when all timestamps coincide.
  LineCoefficients line() const;

  void clear() noexcept { *this = RegressionAccumulator{}; }

 private:
  // Mean-centered running moments (Welford): immune to the cancellation that
  // raw power sums suffer when timestamps sit far from zero.
  std::size_t n_ = 0;
  double mean_t_ = 0.0;
  double mean_y_ = 0.0;
  double m2_t_ = 0.0;   // sum of squared t deviations
  double c_ty_ = 0.0;   // sum of co-deviations
};

// Reference feasibility check used by tests: some line stays within the
// closed tolerance band of every tuple. Exhaustive over candidate lines
// through pairs of tolerance endpoints; O(n^3), independent of PartialHulls.
bool stabbing_feasible_oracle(std::span<const InputTuple> points, ErrorThreshold eps);

}  // namespace pla
