#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pla/protocols.hpp"
#include "pla/types.hpp"

namespace pla {

// The three per-point measurements: wire cost share, reconstruction wait, and
// value deviation.
struct PerPointStats {
  std::size_t index = 0;
  double ratio = 0.0;    // record y-units divided by tuples the record covers
  double latency = 0.0;  // emission ordinal minus the tuple's own ordinal
  double error = 0.0;    // |reconstructed - original|
};

// Distributes unit costs over the points they cover. The units must
// partition [0, n) exactly (UncoveredIndex / DoubleCoverage); originals and
// reconstructed must pair up one-to-one with matching timestamps (BadParams).
std::vector<PerPointStats> attribute(
    std::span<const AttributionUnit> units,
    std::span<const InputTuple> originals,
    std::span<const ReconstructedTuple> reconstructed);

// Box-plot style summary: nearest-rank percentiles, whiskers reaching the
// extreme data points within 1.5 IQR beyond the quartiles.
struct Aggregate {
  double mean = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  double max = 0.0;
};

// Throws EmptyInput on an empty value stream.
Aggregate aggregate(std::span<const double> values);

// One row of the stats report CSV.
struct StatsRow {
  std::string run_id;
  std::string method;
  std::string protocol;
  double epsilon = 0.0;
  std::string metric;
  Aggregate agg;
};

// Writes the report with a header line:
// run_id,method,protocol,epsilon,metric,mean,p25,p75,whisker_lo,whisker_hi,max
void write_stats_csv(std::ostream& os, std::span<const StatsRow> rows);

}  // namespace pla
