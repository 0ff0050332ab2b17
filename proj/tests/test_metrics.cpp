#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pla/generate.hpp"
#include "pla/metrics.hpp"

using namespace pla;

namespace {

std::vector<ReconstructedTuple> echo(std::span<const InputTuple> pts) {
  std::vector<ReconstructedTuple> out;
  for (const InputTuple& p : pts) out.push_back({p.t, p.y});
  return out;
}

}  // namespace

TEST_CASE("per-point cost, wait, and deviation") {
  SUBCASE("singletons cost 1.125 values apiece on the single stream") {
    const auto pts = generate_alternating(6, 4.0);
    const EncodedStreams enc =
        encode_stream(MethodId::Disjoint, ProtocolId::SingleStream, ErrorThreshold(1.0), pts);
    const auto rec =
        decode_single_stream(testsupport::timestamps_of(pts), enc.primary);
    const auto stats = attribute(enc.units, pts, rec);
    REQUIRE(stats.size() == 6);
    const double expected_latency[6] = {2, 2, 2, 2, 2, 1};
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(stats[i].index == i);
      CHECK(stats[i].ratio == 1.125);
      CHECK(stats[i].latency == expected_latency[i]);
      CHECK(stats[i].error == 0.0);
    }
  }

  SUBCASE("a segment spreads its bytes over everything it covers") {
    const auto pts = generate_constant(17, 5.0);
    const EncodedStreams enc =
        encode_stream(MethodId::Disjoint, ProtocolId::SingleStream, ErrorThreshold(0.5), pts);
    const auto rec =
        decode_single_stream(testsupport::timestamps_of(pts), enc.primary);
    const auto stats = attribute(enc.units, pts, rec);
    REQUIRE(stats.size() == 17);
    for (std::size_t i = 0; i < 17; ++i) {
      CHECK(stats[i].ratio == 0.125);  // 17 bytes over 17 values
      CHECK(stats[i].latency == static_cast<double>(17 - i));
      CHECK(stats[i].error == 0.0);
    }
  }

  SUBCASE("a hand-built unit yields countdown latencies") {
    const auto pts = generate_constant(5, 2.0);
    const std::vector<AttributionUnit> units{{5.0, 5, 0, 5}};
    const auto stats = attribute(units, pts, echo(pts));
    REQUIRE(stats.size() == 5);
    const double want[5] = {5, 4, 3, 2, 1};
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(stats[i].latency == want[i]);
      CHECK(stats[i].ratio == 1.0);
    }
  }

  SUBCASE("deviation is the absolute reconstruction gap") {
    const auto pts = generate_constant(3, 2.0);
    auto rec = echo(pts);
    rec[1].y_approx = 2.75;
    const std::vector<AttributionUnit> units{{3.0, 3, 0, 3}};
    const auto stats = attribute(units, pts, rec);
    CHECK(stats[0].error == 0.0);
    CHECK(stats[1].error == 0.75);
    CHECK(stats[2].error == 0.0);
  }
}

TEST_CASE("attribution insists on a clean partition") {
  const auto pts = generate_constant(4, 1.0);
  const auto rec = echo(pts);

  SUBCASE("a gap is an uncovered index") {
    const std::vector<AttributionUnit> units{{1.0, 4, 0, 2}, {1.0, 4, 3, 1}};
    CHECK(testsupport::throws_errc([&] { (void)attribute(units, pts, rec); },
                                   Errc::UncoveredIndex));
  }
  SUBCASE("an overlap is double coverage") {
    const std::vector<AttributionUnit> units{{1.0, 4, 0, 3}, {1.0, 4, 2, 2}};
    CHECK(testsupport::throws_errc([&] { (void)attribute(units, pts, rec); },
                                   Errc::DoubleCoverage));
  }
  SUBCASE("coverage past the end is a parameter error") {
    const std::vector<AttributionUnit> units{{1.0, 4, 0, 5}};
    CHECK(testsupport::throws_errc([&] { (void)attribute(units, pts, rec); },
                                   Errc::BadParams));
  }
  SUBCASE("originals and reconstruction must pair up") {
    const std::vector<AttributionUnit> units{{4.0, 4, 0, 4}};
    auto short_rec = rec;
    short_rec.pop_back();
    CHECK(testsupport::throws_errc([&] { (void)attribute(units, pts, short_rec); },
                                   Errc::BadParams));
    auto shifted = rec;
    shifted[2].t += 0.5;
    CHECK(testsupport::throws_errc([&] { (void)attribute(units, pts, shifted); },
                                   Errc::BadParams));
  }
}

TEST_CASE("per-point ratios conserve total wire bytes") {
  const auto pts = testsupport::jittered_walk(321, 300, 1.0);
  for (const auto& [m, pr] : testsupport::legal_pairings()) {
    const auto rt = testsupport::round_trip(m, pr, ErrorThreshold(0.9), pts);
    const auto stats = attribute(rt.enc.units, pts, rt.rec);
    double total = 0.0;
    for (const auto& s : stats) total += s.ratio;
    CHECK(total * 8.0 ==
          doctest::Approx(static_cast<double>(rt.enc.total_record_bytes()))
              .epsilon(1e-12));
  }
}

TEST_CASE("box-plot aggregation") {
  SUBCASE("identical values collapse the box") {
    const std::vector<double> v(9, 3.5);
    const Aggregate a = aggregate(v);
    CHECK(a.mean == 3.5);
    CHECK(a.p25 == 3.5);
    CHECK(a.p75 == 3.5);
    CHECK(a.whisker_lo == 3.5);
    CHECK(a.whisker_hi == 3.5);
    CHECK(a.max == 3.5);
  }
  SUBCASE("1..100 has the textbook quartiles") {
    std::vector<double> v;
    for (int i = 100; i >= 1; --i) v.push_back(i);  // order must not matter
    const Aggregate a = aggregate(v);
    CHECK(a.mean == 50.5);
    CHECK(a.p25 == 25.0);
    CHECK(a.p75 == 75.0);
    CHECK(a.whisker_lo == 1.0);  // 25 - 1.5*50 < 1, so the whisker hits the min
    CHECK(a.whisker_hi == 100.0);
    CHECK(a.max == 100.0);
  }
  SUBCASE("an outlier sits beyond the whisker") {
    const std::vector<double> v{1, 2, 2, 3, 3, 3, 4, 4, 1000};
    const Aggregate a = aggregate(v);
    CHECK(a.max == 1000.0);
    CHECK(a.whisker_hi < 1000.0);
    CHECK(a.p25 == 2.0);
    CHECK(a.p75 == 4.0);
    CHECK(a.whisker_hi == 4.0);  // largest point within 4 + 1.5*2
    CHECK(a.whisker_lo == 1.0);
  }
  SUBCASE("a single value is its own summary") {
    const std::vector<double> v{7.0};
    const Aggregate a = aggregate(v);
    CHECK(a.mean == 7.0);
    CHECK(a.p25 == 7.0);
    CHECK(a.whisker_hi == 7.0);
    CHECK(a.max == 7.0);
  }
  SUBCASE("empty input is refused") {
    CHECK(testsupport::throws_errc([] { (void)aggregate({}); }, Errc::EmptyInput));
  }
  SUBCASE("agrees with a straightforward reference on random batches") {
    std::mt19937_64 rng(20260822u);
    std::uniform_real_distribution<double> val(-50.0, 50.0);
    std::uniform_int_distribution<std::size_t> len(1, 400);
    for (int iter = 0; iter < 200; ++iter) {
      std::vector<double> v(len(rng));
      for (double& x : v) x = val(rng);
      const Aggregate got = aggregate(v);
      const Aggregate want = testsupport::naive_aggregate(v);
      CHECK(got.p25 == want.p25);
      CHECK(got.p75 == want.p75);
      CHECK(got.whisker_lo == want.whisker_lo);
      CHECK(got.whisker_hi == want.whisker_hi);
      CHECK(got.max == want.max);
      CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-12));
    }
  }
}

TEST_CASE("the stats report prints one labelled row per aggregate") {
  std::vector<StatsRow> rows;
  rows.push_back({"walk-1", "swing", "implicit", 0.5, "ratio",
                  Aggregate{0.25, 0.125, 0.5, 0.125, 0.5, 2.0}});
  rows.push_back({"walk-1", "swing", "implicit", 0.5, "latency",
                  Aggregate{3, 1, 4, 1, 6, 6}});
  std::ostringstream os;
  write_stats_csv(os, rows);
  const std::string text = os.str();
  CHECK(text.find("run_id,method,protocol,epsilon,metric,mean,p25,p75,"
                  "whisker_lo,whisker_hi,max\n") == 0);
  CHECK(text.find("walk-1,swing,implicit,0.5,ratio,0.25,0.125,0.5,0.125,0.5,2\n") !=
        std::string::npos);
  CHECK(text.find("walk-1,swing,implicit,0.5,latency,3,1,4,1,6,6\n") !=
        std::string::npos);
}
