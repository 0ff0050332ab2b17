#include "pla/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace pla {

std::vector<PerPointStats> attribute(
    std::span<const AttributionUnit> units,
    std::span<const InputTuple> originals,
    std::span<const ReconstructedTuple> reconstructed) {
  const std::size_t n = originals.size();
  if (reconstructed.size() != n) {
    fail(Errc::BadParams, "originals and reconstruction differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reconstructed[i].t != originals[i].t) {
      fail(Errc::BadParams, "reconstruction timestamps do not match originals");
    }
  }

  constexpr std::size_t kUncovered = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, kUncovered);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const AttributionUnit& unit = units[u];
    if (unit.count == 0 || unit.first_index + unit.count > n) {
      fail(Errc::BadParams, "attribution unit covers indices outside the stream");
    }
    for (std::size_t i = unit.first_index; i < unit.first_index + unit.count; ++i) {
      if (owner[i] != kUncovered) {
        fail(Errc::DoubleCoverage, "input index covered by two units");
      }
      owner[i] = u;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] == kUncovered) {
      fail(Errc::UncoveredIndex, "input index covered by no unit");
    }
  }

  std::vector<PerPointStats> stats;
  stats.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const AttributionUnit& unit = units[owner[i]];
    PerPointStats s;
    s.index = i;
    s.ratio = unit.size_yunits / static_cast<double>(unit.count);
    s.latency = static_cast<double>(unit.emitted_at) - static_cast<double>(i);
    s.error = std::abs(reconstructed[i].y_approx - originals[i].y);
    stats.push_back(s);
  }
  return stats;
}

Aggregate aggregate(std::span<const double> values) {
  if (values.empty()) {
    fail(Errc::EmptyInput, "cannot aggregate an empty value stream");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  const auto nearest_rank = [&](double percentile) {
    auto rank = static_cast<std::size_t>(
        std::ceil(percentile / 100.0 * static_cast<double>(n)));
    if (rank == 0) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
  };

  Aggregate agg;
  agg.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
             static_cast<double>(n);
  agg.p25 = nearest_rank(25.0);
  agg.p75 = nearest_rank(75.0);
  agg.max = sorted.back();

  const double iqr = agg.p75 - agg.p25;
  const double lo_bound = agg.p25 - 1.5 * iqr;
  const double hi_bound = agg.p75 + 1.5 * iqr;
  // Lowest datum at or above lo_bound; p25 itself qualifies, so this exists.
  agg.whisker_lo = *std::lower_bound(sorted.begin(), sorted.end(), lo_bound);
  // Highest datum at or below hi_bound; p75 itself qualifies.
  agg.whisker_hi = *std::prev(std::upper_bound(sorted.begin(), sorted.end(),
                                               hi_bound));
  return agg;
}

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_stats_csv(std::ostream& os, std::span<const StatsRow> rows) {
  os << "run_id,method,protocol,epsilon,metric,mean,p25,p75,whisker_lo,"
        "whisker_hi,max\n";
  for (const StatsRow& r : rows) {
    os << r.run_id << ',' << r.method << ',' << r.protocol << ','
       << g17(r.epsilon) << ',' << r.metric << ',' << g17(r.agg.mean) << ','
       << g17(r.agg.p25) << ',' << g17(r.agg.p75) << ',' << g17(r.agg.whisker_lo)
       << ',' << g17(r.agg.whisker_hi) << ',' << g17(r.agg.max) << '\n';
  }
}

}  // namespace pla
