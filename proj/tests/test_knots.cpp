#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pla/knots.hpp"

using namespace pla;

TEST_CASE("line through adjacent knot anchors") {
  SUBCASE("two joint knots") {
    const LineCoefficients l = segment_from_knots(Knot::joint_knot(0, 0), Knot::joint_knot(2, 2));
    CHECK(l.a == 1.0);
    CHECK(l.b == 0.0);
  }
  SUBCASE("disjoint predecessor anchors at its start value") {
    const LineCoefficients l =
        segment_from_knots(Knot::disjoint_knot(1, 5, 3), Knot::joint_knot(3, 7));
    CHECK(l.a == 2.0);
    CHECK(l.b == 1.0);
  }
  SUBCASE("disjoint successor anchors at its end value") {
    const LineCoefficients l =
        segment_from_knots(Knot::joint_knot(0, 1), Knot::disjoint_knot(2, 5, 100));
    CHECK(l.a == 2.0);
    CHECK(l.b == 1.0);
  }
  SUBCASE("shared timestamp is rejected") {
    CHECK(testsupport::throws_errc(
        [] { (void)segment_from_knots(Knot::joint_knot(1, 4), Knot::joint_knot(1, 9)); },
        Errc::EqualTimestamps));
  }
}

namespace {

std::vector<InputTuple> tuples_on(const std::vector<double>& ts, const LineCoefficients& l) {
  std::vector<InputTuple> out;
  for (double t : ts) out.push_back({t, l.eval(t)});
  return out;
}

}  // namespace

TEST_CASE("segment sequences convert to knot sequences") {
  SUBCASE("single segment brackets with two joint knots") {
    const std::vector<SegmentSummary> segs = {{0, 0.0, 3, {0.0, 5.0}, false}};
    const std::vector<InputTuple> pts = tuples_on({0, 1, 2}, {0.0, 5.0});
    const std::vector<Knot> knots = segments_to_knots(segs, pts);
    REQUIRE(knots.size() == 2);
    CHECK(knots[0].joint);
    CHECK(knots[0].t == 0.0);
    CHECK(knots[0].y_start == 5.0);
    CHECK(knots[1].joint);
    CHECK(knots[1].t == 2.0);
    CHECK(knots[1].y_end == 5.0);
  }

  SUBCASE("unjoined boundary becomes one disjoint knot at the later start") {
    const std::vector<SegmentSummary> segs = {{0, 0.0, 2, {1.0, 0.0}, false},
                                              {2, 2.0, 2, {0.0, 9.0}, false}};
    std::vector<InputTuple> pts = tuples_on({0, 1}, {1.0, 0.0});
    const std::vector<InputTuple> tail = tuples_on({2, 3}, {0.0, 9.0});
    pts.insert(pts.end(), tail.begin(), tail.end());
    const std::vector<Knot> knots = segments_to_knots(segs, pts);
    REQUIRE(knots.size() == 3);
    CHECK(knots[0].joint);
    CHECK(knots[0].t == 0.0);
    CHECK(knots[0].y_start == 0.0);
    CHECK_FALSE(knots[1].joint);
    CHECK(knots[1].t == 2.0);
    CHECK(knots[1].y_end == 2.0);    // earlier line extended to t=2
    CHECK(knots[1].y_start == 9.0);  // later line at t=2
    CHECK(knots[2].joint);
    CHECK(knots[2].t == 3.0);
    CHECK(knots[2].y_end == 9.0);
  }

  SUBCASE("joined boundary becomes one joint knot at the shared endpoint") {
    const std::vector<SegmentSummary> segs = {{0, 0.0, 3, {1.0, 0.0}, false},
                                              {3, 3.0, 2, {0.0, 2.0}, true}};
    std::vector<InputTuple> pts = tuples_on({0, 1, 2}, {1.0, 0.0});
    const std::vector<InputTuple> tail = tuples_on({3, 4}, {0.0, 2.0});
    pts.insert(pts.end(), tail.begin(), tail.end());
    const std::vector<Knot> knots = segments_to_knots(segs, pts);
    REQUIRE(knots.size() == 3);
    CHECK(knots[0].joint);
    CHECK(knots[1].joint);
    CHECK(knots[1].t == 2.0);  // earlier segment's last covered timestamp
    CHECK(knots[1].y_end == 2.0);
    CHECK(knots[1].y_start == 2.0);
    CHECK(knots[2].joint);
    CHECK(knots[2].t == 4.0);
    CHECK(knots[2].y_end == 2.0);
  }

  SUBCASE("final one-tuple segment after a disjoint boundary ends on that knot") {
    const std::vector<SegmentSummary> segs = {{0, 0.0, 2, {1.0, 0.0}, false},
                                              {2, 2.0, 1, {0.0, 9.0}, false}};
    std::vector<InputTuple> pts = tuples_on({0, 1}, {1.0, 0.0});
    pts.push_back({2, 9.0});
    const std::vector<Knot> knots = segments_to_knots(segs, pts);
    REQUIRE(knots.size() == 2);
    CHECK_FALSE(knots[1].joint);
    CHECK(knots[1].t == 2.0);
    CHECK(knots[1].y_start == 9.0);
    // The final tuple still reconstructs exactly from the knot's start value.
    const std::vector<double> ts = {0, 1, 2};
    const std::vector<ReconstructedTuple> rec = reconstruct(ts, knots);
    REQUIRE(rec.size() == 3);
    CHECK(rec[2].y_approx == 9.0);
  }

  SUBCASE("gaps and overlaps in coverage are rejected") {
    const std::vector<InputTuple> pts = tuples_on({0, 1, 2, 3}, {1.0, 0.0});
    CHECK(testsupport::throws_errc(
        [&] {
          const std::vector<SegmentSummary> segs = {{0, 0.0, 2, {1.0, 0.0}, false},
                                                    {3, 3.0, 1, {1.0, 0.0}, false}};
          (void)segments_to_knots(segs, pts);
        },
        Errc::NonContiguous));
    CHECK(testsupport::throws_errc(
        [&] {
          const std::vector<SegmentSummary> segs = {{0, 0.0, 3, {1.0, 0.0}, false},
                                                    {2, 2.0, 2, {1.0, 0.0}, false}};
          (void)segments_to_knots(segs, pts);
        },
        Errc::NonContiguous));
  }
}

TEST_CASE("reconstruction pairs each timestamp with the latest started piece") {
  SUBCASE("interpolation between two joint knots") {
    const std::vector<double> ts = {0, 1, 2};
    const std::vector<Knot> knots = {Knot::joint_knot(0, 0), Knot::joint_knot(2, 2)};
    const std::vector<ReconstructedTuple> rec = reconstruct(ts, knots);
    REQUIRE(rec.size() == 3);
    CHECK(rec[0].y_approx == 0.0);
    CHECK(rec[1].y_approx == 1.0);
    CHECK(rec[2].y_approx == 2.0);
  }

  SUBCASE("a timestamp on a disjoint knot belongs to the later piece") {
    const std::vector<double> ts = {0, 1, 2, 3};
    const std::vector<Knot> knots = {Knot::joint_knot(0, 0), Knot::disjoint_knot(2, 2, 9),
                                     Knot::joint_knot(3, 9)};
    const std::vector<ReconstructedTuple> rec = reconstruct(ts, knots);
    REQUIRE(rec.size() == 4);
    CHECK(rec[0].y_approx == 0.0);
    CHECK(rec[1].y_approx == 1.0);
    CHECK(rec[2].y_approx == 9.0);
    CHECK(rec[3].y_approx == 9.0);
  }

  SUBCASE("timestamp before the first knot is rejected") {
    const std::vector<double> ts = {-1, 0};
    const std::vector<Knot> knots = {Knot::joint_knot(0, 0), Knot::joint_knot(2, 2)};
    CHECK(testsupport::throws_errc([&] { (void)reconstruct(ts, knots); },
                                   Errc::TimestampBeforeFirstKnot));
  }

  SUBCASE("a timestamp equal to a knot's time is served without waiting") {
    Reconstructor r;
    std::vector<ReconstructedTuple> out;
    r.push_timestamp(0);
    r.push_timestamp(1);
    r.push_timestamp(2);
    r.push_knot(Knot::joint_knot(0, 0), out);
    CHECK(out.size() == 1);  // t=0 resolved by the knot itself
    CHECK(out[0].y_approx == 0.0);
    r.push_knot(Knot::joint_knot(2, 2), out);
    REQUIRE(out.size() == 3);
    CHECK(out[1].y_approx == 1.0);
    CHECK(out[2].y_approx == 2.0);
    r.finish(out);
    CHECK(out.size() == 3);
  }

  SUBCASE("timestamps beyond the final knot are malformed") {
    Reconstructor r;
    std::vector<ReconstructedTuple> out;
    r.push_timestamp(0);
    r.push_timestamp(5);
    r.push_knot(Knot::joint_knot(0, 0), out);
    r.push_knot(Knot::joint_knot(2, 2), out);
    CHECK(testsupport::throws_errc([&] { r.finish(out); }, Errc::MalformedKnotStream));
  }

  SUBCASE("knot times must strictly increase") {
    CHECK(testsupport::throws_errc(
        [] {
          Reconstructor r;
          std::vector<ReconstructedTuple> out;
          r.push_knot(Knot::joint_knot(2, 2), out);
          r.push_knot(Knot::joint_knot(1, 1), out);
        },
        Errc::MalformedKnotStream));
  }

  SUBCASE("a knot stream must open with a joint knot") {
    CHECK(testsupport::throws_errc(
        [] {
          Reconstructor r;
          std::vector<ReconstructedTuple> out;
          r.push_knot(Knot::disjoint_knot(1, 2, 3), out);
        },
        Errc::MalformedKnotStream));
  }

  SUBCASE("timestamps must strictly increase") {
    CHECK(testsupport::throws_errc(
        [] {
          Reconstructor r;
          r.push_timestamp(1);
          r.push_timestamp(1);
        },
        Errc::NonMonotonicTime));
  }
}

TEST_CASE("knot conversion round-trips random segmentations") {
  std::mt19937_64 rng(20260822);
  std::uniform_int_distribution<int> seg_count(1, 8);
  std::uniform_int_distribution<int> seg_len(2, 6);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::bernoulli_distribution joined(0.5);

  for (int iter = 0; iter < 200; ++iter) {
    // Build a random piecewise line over t = 1, 2, 3, ... and sample tuples
    // exactly on it, joining segments at shared endpoints half the time.
    std::vector<SegmentSummary> segs;
    std::vector<InputTuple> pts;
    const int n_segs = seg_count(rng);
    double t = 1.0;
    std::size_t index = 0;
    for (int s = 0; s < n_segs; ++s) {
      SegmentSummary seg;
      seg.start_index = index;
      seg.start_t = t;
      seg.length = static_cast<std::size_t>(seg_len(rng));
      const double a = coef(rng);
      if (s > 0 && joined(rng)) {
        // Pin this line to the previous segment's endpoint.
        const SegmentSummary& prev = segs.back();
        const double bt = pts.back().t;
        seg.line = {a, prev.line.eval(bt) - a * bt};
        seg.joined_to_previous = true;
      } else {
        seg.line = {a, coef(rng)};
        seg.joined_to_previous = false;
      }
      for (std::size_t k = 0; k < seg.length; ++k) {
        pts.push_back({t, seg.line.eval(t)});
        t += 1.0;
      }
      index += seg.length;
      segs.push_back(seg);
    }

    const std::vector<Knot> knots = segments_to_knots(segs, pts);
    REQUIRE(knots.size() == segs.size() + 1);

    // Every adjacent knot pair reproduces its segment's coefficients.
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const LineCoefficients l = segment_from_knots(knots[s], knots[s + 1]);
      const double tol_a = 1e-9 * std::max(1.0, std::abs(segs[s].line.a));
      const double tol_b = 1e-9 * std::max(1.0, std::abs(segs[s].line.b));
      CHECK(std::abs(l.a - segs[s].line.a) <= tol_a);
      CHECK(std::abs(l.b - segs[s].line.b) <= tol_b);
    }

    // Reconstruction over the original timestamps lands on the sampled values.
    const std::vector<double> ts = testsupport::timestamps_of(pts);
    const std::vector<ReconstructedTuple> rec = reconstruct(ts, knots);
    REQUIRE(rec.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(rec[i].t == pts[i].t);
      CHECK(std::abs(rec[i].y_approx - pts[i].y) <= 1e-9 * std::max(1.0, std::abs(pts[i].y)));
    }
  }
}
