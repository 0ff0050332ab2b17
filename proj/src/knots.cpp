#include "pla/knots.hpp"

#include <cmath>

namespace pla {

LineCoefficients segment_from_knots(const Knot& prev, const Knot& cur) {
  const double u = prev.t, v = prev.y_start;
  const double u2 = cur.t, v2 = cur.y_end;
  if (u == u2) fail(Errc::EqualTimestamps, "knots share a timestamp");
  const double denom = u2 - u;
  return LineCoefficients{(v2 - v) / denom, (u2 * v - v2 * u) / denom};
}

namespace {

// Timestamp of the last tuple covered by `seg`, given the covered tuples
// re-based so that tuples[0] is the first segment's first tuple.
double seg_end_t(const SegmentSummary& seg, std::span<const InputTuple> tuples,
                 std::size_t base) {
  return tuples[seg.start_index - base + seg.length - 1].t;
}

}  // namespace

std::vector<Knot> segments_to_knots(std::span<const SegmentSummary> segments,
                                    std::span<const InputTuple> tuples) {
  if (segments.empty()) return {};
  const std::size_t base = segments.front().start_index;
  std::size_t expect = base, total = 0;
  for (const SegmentSummary& s : segments) {
    if (s.length == 0 || s.start_index != expect)
      fail(Errc::NonContiguous, "segments must cover adjacent index ranges");
    expect += s.length;
    total += s.length;
  }
  if (tuples.size() != total)
    fail(Errc::NonContiguous, "tuple span does not match covered range");

  std::vector<Knot> knots;
  knots.reserve(segments.size() + 1);
  const SegmentSummary& first = segments.front();
  knots.push_back(Knot::joint_knot(first.start_t, first.line.eval(first.start_t)));

  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    const SegmentSummary& cur = segments[k];
    const SegmentSummary& nxt = segments[k + 1];
    if (nxt.joined_to_previous) {
      const double tb = seg_end_t(cur, tuples, base);
      knots.push_back(Knot::joint_knot(tb, cur.line.eval(tb)));
    } else {
      const double tb = nxt.start_t;
      knots.push_back(
          Knot::disjoint_knot(tb, cur.line.eval(tb), nxt.line.eval(tb)));
    }
  }

  const SegmentSummary& last = segments.back();
  const double t_last = seg_end_t(last, tuples, base);
  if (t_last != knots.back().t)
    knots.push_back(Knot::joint_knot(t_last, last.line.eval(t_last)));
  return knots;
}

void Reconstructor::push_timestamp(double t) {
  if (!std::isfinite(t)) fail(Errc::NonFiniteValue, "timestamp not finite");
  if (have_ts_ && t <= last_ts_)
    fail(Errc::NonMonotonicTime, "timestamps must strictly increase");
  have_ts_ = true;
  last_ts_ = t;
  pending_.push_back(t);
}

void Reconstructor::push_knot(const Knot& k, std::vector<ReconstructedTuple>& out) {
  if (!prev_) {
    if (!k.joint) fail(Errc::MalformedKnotStream, "knot stream must start joint");
    if (!pending_.empty() && pending_.front() < k.t)
      fail(Errc::TimestampBeforeFirstKnot, "timestamp precedes the first knot");
    if (!pending_.empty() && pending_.front() == k.t) {
      out.push_back({k.t, k.y_start});
      pending_.pop_front();
    }
    prev_ = k;
    return;
  }
  if (k.t <= prev_->t)
    fail(Errc::MalformedKnotStream, "knot timestamps must strictly increase");
  const LineCoefficients line = segment_from_knots(*prev_, k);
  while (!pending_.empty() && pending_.front() < k.t) {
    out.push_back({pending_.front(), line.eval(pending_.front())});
    pending_.pop_front();
  }
  if (!pending_.empty() && pending_.front() == k.t) {
    out.push_back({k.t, k.y_start});
    pending_.pop_front();
  }
  prev_ = k;
}

void Reconstructor::finish(std::vector<ReconstructedTuple>& out) {
  (void)out;
  if (!pending_.empty())
    fail(Errc::MalformedKnotStream, "timestamps extend beyond the final knot");
}

std::vector<ReconstructedTuple> reconstruct(std::span<const double> timestamps,
                                            std::span<const Knot> knots) {
  Reconstructor r;
  std::vector<ReconstructedTuple> out;
  out.reserve(timestamps.size());
  for (double t : timestamps) r.push_timestamp(t);
  for (const Knot& k : knots) r.push_knot(k, out);
  r.finish(out);
  return out;
}

}  // namespace pla
