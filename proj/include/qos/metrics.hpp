#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qos/sim.hpp"

namespace qos {

struct RunMetrics {
  double revenue = 0.0;
  double net_utility = 0.0;   // sum of delivered value minus price
  double utilization = 0.0;   // busy node-seconds over capacity x horizon
  double node_periods = 0.0;  // node-minutes sold
  double admission_rate = 0.0;  // quoted arrivals over all arrivals
  double success_rate = 0.0;    // contracts meeting their promise
  int max_load = 0;
};

// The utilization horizon is the configured horizon extended to the last
// release, so jobs running past the end are not truncated. Buyer declines
// count as admitted for quoting; only no-quote rejections reduce admission.
RunMetrics compute_metrics(const RunResult& run, int capacity,
                           double horizon_s);

struct SweepRow {
  int capacity = 0;
  double mean_iat_s = 0.0;
  std::uint64_t seed = 0;
  double contention = 0.0;  // 1 / (mean IAT x capacity)
  RunMetrics revop;
  RunMetrics bench;
};

std::vector<SweepRow> build_rows(const SweepResult& sweep, double horizon_s);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// Two CSV lines per row, one per strategy, ordered by
// (capacity, mean_iat_s, seed, strategy). Byte-identical across reruns.
std::string to_csv(const std::vector<SweepRow>& rows);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

struct GainStat {
  bool defined = false;
  double mean = 0.0;
  double se = 0.0;  // sample standard error across IAT cells
};

struct CapacityGains {
  int capacity = 0;
  GainStat revenue;
  GainStat net_utility;
  GainStat utilization;
  GainStat node_periods;
  GainStat admission_rate;
  GainStat success_rate;
  GainStat max_load;
};

// Relative gains (revop - bench) / bench per metric. Seeds collapse to a
// per-cell mean first; the mean and standard error are then taken across the
// IAT axis for each capacity. Cells with a zero bench value are excluded
// and the gain is marked undefined when no cell remains.
std::vector<CapacityGains> paired_gains(const std::vector<SweepRow>& rows);

struct PooledStat {
  double mean = 0.0;
  double half_ci95 = 0.0;  // 1.96 x standard error across runs
};

struct StrategySummary {
  std::size_t runs = 0;
  PooledStat revenue;
  PooledStat net_utility;
  PooledStat utilization;
  PooledStat node_periods;
  PooledStat admission_rate;
  PooledStat success_rate;
  PooledStat max_load;
};

// Pools every run of one strategy across all cells and seeds.
StrategySummary pooled_summary(const std::vector<SweepRow>& rows,
                               StrategyKind strategy);

// Spearman rank correlation with average ranks for ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qos
