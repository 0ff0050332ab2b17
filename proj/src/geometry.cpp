#include "pla/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "pla/error.hpp"

namespace pla {

namespace {

// Line through two points with distinct abscissae; evaluates exactly to p.y
// at p.t up to one rounding step.
LineCoefficients line_through(Point p, Point q) {
  const double denom = q.t - p.t;
  if (denom == 0.0) {
    fail(Errc::EqualTimestamps, "line through two points needs distinct timestamps");
  }
  return LineCoefficients{(q.y - p.y) / denom, (q.t * p.y - p.t * q.y) / denom};
}

double slope(Point from, Point to) { return (to.y - from.y) / (to.t - from.t); }

// Positive when o->a->b turns counter-clockwise.
double cross(Point o, Point a, Point b) {
  return (a.t - o.t) * (b.y - o.y) - (a.y - o.y) * (b.t - o.t);
}

}  // namespace

// ---------------------------------------------------------------------------
// SlopeCone

SlopeCone::SlopeCone(Point origin, const InputTuple& first, ErrorThreshold eps)
    : origin_(origin), eps_(eps.value()) {
  const double dt = first.t - origin_.t;
  if (!(dt > 0.0)) {
    fail(Errc::DegenerateSpan, "cone opened over a point not after its origin");
  }
  a_min_ = (first.y - eps_ - origin_.y) / dt;
  a_max_ = (first.y + eps_ - origin_.y) / dt;
}

bool SlopeCone::update(const InputTuple& p) {
  const double dt = p.t - origin_.t;
  if (!(dt > 0.0)) {
    fail(Errc::DegenerateSpan, "cone updated with a point not after its origin");
  }
  const double lo = (p.y - eps_ - origin_.y) / dt;
  const double hi = (p.y + eps_ - origin_.y) / dt;
  const double na_min = std::max(a_min_, lo);
  const double na_max = std::min(a_max_, hi);
  if (na_min > na_max) {
    return false;
  }
  a_min_ = na_min;
  a_max_ = na_max;
  return true;
}

LineCoefficients SlopeCone::bisector() const noexcept {
  const double a = (a_min_ + a_max_) / 2.0;
  return LineCoefficients{a, origin_.y - a * origin_.t};
}

// ---------------------------------------------------------------------------
// angle_origin

Point angle_origin(const InputTuple& p0, const InputTuple& p1, ErrorThreshold eps) {
  const double dt = p1.t - p0.t;
  if (dt == 0.0) {
    fail(Errc::EqualTimestamps, "apex construction needs distinct timestamps");
  }
  const double e = eps.value();
  // Steepest line: (p0.t, p0.y-e) -> (p1.t, p1.y+e).
  const double a1 = (p1.y + e - (p0.y - e)) / dt;
  const double b1 = (p0.y - e) - a1 * p0.t;
  // Shallowest line: (p0.t, p0.y+e) -> (p1.t, p1.y-e).
  const double a2 = (p1.y - e - (p0.y + e)) / dt;
  const double b2 = (p0.y + e) - a2 * p0.t;
  const double da = a1 - a2;
  if (da == 0.0) {
    fail(Errc::ParallelExtremes, "extreme lines do not intersect");
  }
  const double t = (b2 - b1) / da;
  return Point{t, a1 * t + b1};
}

// ---------------------------------------------------------------------------
// PartialHulls

PartialHulls::Insert PartialHulls::insert(const ErrorSegment& s) {
  if (n_ > 0 && !(s.t > last_t_)) {
    fail(Errc::NonMonotonicTime, "tolerance segments must arrive in strictly increasing time");
  }

  if (n_ == 0) {
    lower_.assign(1, Point{s.t, s.lo});
    upper_.assign(1, Point{s.t, s.hi});
    min_left_ = min_right_ = max_left_ = max_right_ = 0;
    n_ = 1;
    last_t_ = s.t;
    return Insert::Extended;
  }

  if (n_ == 1) {
    // Two segments always admit a cutting line; the extreme slopes connect
    // opposite endpoints.
    min_line_ = line_through(upper_.front(), Point{s.t, s.lo});
    max_line_ = line_through(lower_.front(), Point{s.t, s.hi});
    lower_.push_back(Point{s.t, s.lo});
    upper_.push_back(Point{s.t, s.hi});
    min_left_ = 0;   // upper_[0]
    min_right_ = 1;  // lower_[1]
    max_left_ = 0;   // lower_[0]
    max_right_ = 1;  // upper_[1]
    n_ = 2;
    last_t_ = s.t;
    return Insert::Extended;
  }

  // No line can cut every stored segment's open band plus this one when the
  // new segment lies entirely on or below the shallowest reachable value, or
  // on or above the steepest.
  if (s.hi <= min_line_.eval(s.t) || s.lo >= max_line_.eval(s.t)) {
    return Insert::Breakup;
  }

  const bool rot_min = s.lo > min_line_.eval(s.t);
  const bool rot_max = s.hi < max_line_.eval(s.t);
  if (rot_min) {
    rotate_min(Point{s.t, s.lo});
  }
  if (rot_max) {
    rotate_max(Point{s.t, s.hi});
  }

  // Extend the envelopes. lower_ keeps the chain every lower endpoint lies
  // on or below (pop non-right turns); upper_ the chain every upper endpoint
  // lies on or above (pop non-left turns).
  const Point lp{s.t, s.lo};
  while (lower_.size() >= 2 && cross(lower_[lower_.size() - 2], lower_.back(), lp) >= 0.0) {
    lower_.pop_back();
  }
  lower_.push_back(lp);
  const Point up{s.t, s.hi};
  while (upper_.size() >= 2 && cross(upper_[upper_.size() - 2], upper_.back(), up) <= 0.0) {
    upper_.pop_back();
  }
  upper_.push_back(up);

  if (rot_min) {
    min_right_ = lower_.size() - 1;
  }
  if (rot_max) {
    max_right_ = upper_.size() - 1;
  }
  // Contacts of unrotated lines survive the pops; clamp defensively so an
  // index can never dangle.
  min_left_ = std::min(min_left_, upper_.size() - 1);
  max_right_ = std::min(max_right_, upper_.size() - 1);
  max_left_ = std::min(max_left_, lower_.size() - 1);
  min_right_ = std::min(min_right_, lower_.size() - 1);

  prune_heads();

  ++n_;
  last_t_ = s.t;
  return Insert::Extended;
}

void PartialHulls::rotate_min(Point lo_pt) {
  // The new lower endpoint pokes above the shallowest line, so that line
  // pivots upward around it. Among lines through lo_pt, the shallowest one
  // still under every stored upper endpoint touches the contact vertex that
  // maximizes the slope toward lo_pt; that contact only ever moves forward.
  std::size_t q = min_left_;
  while (q + 1 < upper_.size() && slope(upper_[q + 1], lo_pt) >= slope(upper_[q], lo_pt)) {
    ++q;
  }
  min_left_ = q;
  min_line_ = line_through(upper_[q], lo_pt);
}

void PartialHulls::rotate_max(Point hi_pt) {
  // Mirror image: the steepest line pivots downward around the new upper
  // endpoint; its contact minimizes the slope toward hi_pt.
  std::size_t q = max_left_;
  while (q + 1 < lower_.size() && slope(lower_[q + 1], hi_pt) <= slope(lower_[q], hi_pt)) {
    ++q;
  }
  max_left_ = q;
  max_line_ = line_through(lower_[q], hi_pt);
}

void PartialHulls::prune_heads() {
  // Vertices left of every contact no longer constrain any line between the
  // extremes, so they can be dropped without changing line_valid.
  const std::size_t drop_lower = std::min(min_right_, max_left_);
  if (drop_lower > 0) {
    lower_.erase(lower_.begin(), lower_.begin() + static_cast<std::ptrdiff_t>(drop_lower));
    min_right_ -= drop_lower;
    max_left_ -= drop_lower;
  }
  const std::size_t drop_upper = std::min(min_left_, max_right_);
  if (drop_upper > 0) {
    upper_.erase(upper_.begin(), upper_.begin() + static_cast<std::ptrdiff_t>(drop_upper));
    min_left_ -= drop_upper;
    max_right_ -= drop_upper;
  }
}

LineCoefficients PartialHulls::min_line() const {
  if (n_ < 2) {
    fail(Errc::TooFewPoints, "extreme lines need at least two segments");
  }
  return min_line_;
}

LineCoefficients PartialHulls::max_line() const {
  if (n_ < 2) {
    fail(Errc::TooFewPoints, "extreme lines need at least two segments");
  }
  return max_line_;
}

bool PartialHulls::line_valid(const LineCoefficients& line) const noexcept {
  for (const Point& v : lower_) {
    if (line.eval(v.t) < v.y) {
      return false;
    }
  }
  for (const Point& v : upper_) {
    if (line.eval(v.t) > v.y) {
      return false;
    }
  }
  return true;
}

void PartialHulls::clear() {
  lower_.clear();
  upper_.clear();
  n_ = 0;
  last_t_ = 0.0;
  min_line_ = LineCoefficients{};
  max_line_ = LineCoefficients{};
  min_left_ = min_right_ = max_left_ = max_right_ = 0;
}

// ---------------------------------------------------------------------------
// RegressionAccumulator

void RegressionAccumulator::push(const InputTuple& p) noexcept {
  ++n_;
  const double n = static_cast<double>(n_);
  const double dt = p.t - mean_t_;
  const double dy = p.y - mean_y_;
  mean_t_ += dt / n;
  mean_y_ += dy / n;
  m2_t_ += dt * (p.t - mean_t_);
  c_ty_ += dt * (p.y - mean_y_);
}

LineCoefficients RegressionAccumulator::line() const {
  if (n_ < 2) {
    fail(Errc::TooFewPoints, "least-squares line needs at least two points");
  }
  if (!(m2_t_ > 0.0)) {
    fail(Errc::ZeroVariance, "least-squares line needs spread in the timestamps");
  }
  const double a = c_ty_ / m2_t_;
  return LineCoefficients{a, mean_y_ - a * mean_t_};
}

// ---------------------------------------------------------------------------
// stabbing_feasible_oracle

bool stabbing_feasible_oracle(std::span<const InputTuple> points, ErrorThreshold eps) {
  const std::size_t n = points.size();
  if (n <= 2) {
    return true;
  }
  const double e = eps.value();
  // Candidate lines pass exactly through tolerance endpoints, so at their
  // defining points the deviation equals the threshold up to rounding; a
  // scale-aware slack keeps those boundary hits from flipping the verdict.
  const auto valid = [&](double a, double b) {
    for (const InputTuple& p : points) {
      const double v = a * p.t + b;
      const double slack = 1e-9 * (e + std::abs(p.y) + std::abs(v));
      if (std::abs(v - p.y) > e + slack) {
        return false;
      }
    }
    return true;
  };
  // If any line fits, some line touching two tolerance endpoints fits too,
  // so trying every endpoint pair is exhaustive.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dt = points[j].t - points[i].t;
      if (dt == 0.0) {
        continue;
      }
      for (const double si : {-e, +e}) {
        for (const double sj : {-e, +e}) {
          const double yi = points[i].y + si;
          const double yj = points[j].y + sj;
          const double a = (yj - yi) / dt;
          const double b = yi - a * points[i].t;
          if (valid(a, b)) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

}  // namespace pla
