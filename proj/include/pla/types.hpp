#pragma once

#include <cmath>
#include <cstddef>

#include "pla/error.hpp"

namespace pla {

// One raw stream element. Timestamps must be finite and strictly increasing
// within a stream; values must be finite.
struct InputTuple {
  double t = 0.0;
  double y = 0.0;
};

// Maximum allowed absolute deviation between a value and its reconstruction.
// Validity everywhere in the library means |y - approx| < epsilon (strict).
class ErrorThreshold {
 public:
  explicit ErrorThreshold(double epsilon) : epsilon_(epsilon) {
    if (!(std::isfinite(epsilon) && epsilon > 0.0))
      fail(Errc::BadParams, "error threshold must be finite and > 0");
  }

  double value() const noexcept { return epsilon_; }

 private:
  double epsilon_;
};

// y = a*t + b
struct LineCoefficients {
  double a = 0.0;
  double b = 0.0;

  double eval(double t) const noexcept { return a * t + b; }
};

// A knot bounds piecewise-linear segments. A joint knot is shared by the two
// adjacent segments; a disjoint knot closes the previous segment at
// (t, y_end) and opens the next at (t, y_start).
struct Knot {
  double t = 0.0;
  double y_end = 0.0;    // value ending the earlier segment at t
  double y_start = 0.0;  // value starting the later segment at t
  bool joint = true;

  static Knot joint_knot(double t, double y) { return Knot{t, y, y, true}; }
  static Knot disjoint_knot(double t, double y_end, double y_start) {
    return Knot{t, y_end, y_start, false};
  }
};

// One closed approximation segment over a contiguous run of input tuples.
struct SegmentSummary {
  std::size_t start_index = 0;  // ordinal of the first covered tuple
  double start_t = 0.0;         // timestamp of the first covered tuple
  std::size_t length = 0;       // number of covered tuples
  LineCoefficients line;
  bool joined_to_previous = false;  // segment starts at the previous segment's endpoint
};

struct ReconstructedTuple {
  double t = 0.0;
  double y_approx = 0.0;
};

}  // namespace pla
