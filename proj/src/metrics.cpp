#include "qos/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

namespace qos {

RunMetrics compute_metrics(const RunResult& run, int capacity,
                           double horizon_s) {
  if (capacity < 0 || !(horizon_s > 0.0)) {
    throw std::invalid_argument("capacity and horizon must be valid");
  }
  RunMetrics m;
  double busy_node_s = 0.0;
  double last_release = 0.0;
  std::size_t succeeded = 0;
  for (const auto& c : run.contracts) {
    m.revenue += c.price;
    m.net_utility += c.delivered_value - c.price;
    busy_node_s += c.nodes * (c.actual_completion - c.start);
    last_release = std::max(last_release, c.actual_completion);
    if (c.succeeded) ++succeeded;
  }
  m.node_periods = busy_node_s / 60.0;
  double span = std::max(horizon_s, last_release);
  m.utilization = capacity > 0 ? busy_node_s / (capacity * span) : 0.0;
  m.admission_rate =
      run.arrivals > 0
          ? static_cast<double>(run.arrivals - run.rejected) / run.arrivals
          : 0.0;
  m.success_rate = run.contracts.empty()
                       ? 0.0
                       : static_cast<double>(succeeded) / run.contracts.size();
  m.max_load = run.max_load;
  return m;
}

std::vector<SweepRow> build_rows(const SweepResult& sweep, double horizon_s) {
  std::vector<SweepRow> rows;
  rows.reserve(sweep.runs.size());
  for (const auto& run : sweep.runs) {
    SweepRow row;
    row.capacity = run.capacity;
    row.mean_iat_s = run.mean_iat_s;
    row.seed = run.seed;
    row.contention =
        run.capacity > 0 ? 1.0 / (run.mean_iat_s * run.capacity) : 0.0;
    row.revop = compute_metrics(run.revop, run.capacity, horizon_s);
    row.bench = compute_metrics(run.bench, run.capacity, horizon_s);
    rows.push_back(row);
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void append_line(std::string& out, const SweepRow& r, StrategyKind s) {
  const RunMetrics& m = s == StrategyKind::revop ? r.revop : r.bench;
  out += std::to_string(r.capacity);
  out += ',';
  out += format_double(r.mean_iat_s);
  out += ',';
  out += std::to_string(r.seed);
  out += ',';
  out += to_string(s);
  out += ',';
  out += format_double(r.contention);
  out += ',';
  out += format_double(m.revenue);
  out += ',';
  out += format_double(m.net_utility);
  out += ',';
  out += format_double(m.utilization);
  out += ',';
  out += format_double(m.node_periods);
  out += ',';
  out += format_double(m.admission_rate);
  out += ',';
  out += format_double(m.success_rate);
  out += ',';
  out += std::to_string(m.max_load);
  out += '\n';
}

}  // namespace

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::vector<const SweepRow*> ordered;
  ordered.reserve(rows.size());
  for (const auto& r : rows) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SweepRow* a, const SweepRow* b) {
                     return std::tie(a->capacity, a->mean_iat_s, a->seed) <
                            std::tie(b->capacity, b->mean_iat_s, b->seed);
                   });
  std::string out =
      "capacity,mean_iat_s,seed,strategy,contention,revenue,net_utility,"
      "utilization,node_periods,admission_rate,success_rate,max_load\n";
  for (const SweepRow* r : ordered) {
    append_line(out, *r, StrategyKind::bench);
    append_line(out, *r, StrategyKind::revop);
  }
  return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("no rows to emit");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_csv(rows);
  if (!f) throw std::runtime_error("failed writing " + path);
}

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (xs.size() - 1)) / std::sqrt(double(xs.size()));
  }
  return out;
}

using MetricField = double (*)(const RunMetrics&);

constexpr MetricField kFields[] = {
    [](const RunMetrics& m) { return m.revenue; },
    [](const RunMetrics& m) { return m.net_utility; },
    [](const RunMetrics& m) { return m.utilization; },
    [](const RunMetrics& m) { return m.node_periods; },
    [](const RunMetrics& m) { return m.admission_rate; },
    [](const RunMetrics& m) { return m.success_rate; },
    [](const RunMetrics& m) { return static_cast<double>(m.max_load); },
};

GainStat* gain_slots(CapacityGains& g, int i) {
  GainStat* slots[] = {&g.revenue,        &g.net_utility,  &g.utilization,
                       &g.node_periods,   &g.admission_rate, &g.success_rate,
                       &g.max_load};
  return slots[i];
}

}  // namespace

std::vector<CapacityGains> paired_gains(const std::vector<SweepRow>& rows) {
  // capacity -> iat -> accumulated per-strategy metric sums over seeds
  std::map<int, std::map<double, std::vector<std::array<double, 2>>>> cells;
  std::map<int, std::map<double, std::size_t>> counts;
  constexpr int kMetricCount = 7;
  for (const auto& r : rows) {
    auto& cell = cells[r.capacity][r.mean_iat_s];
    if (cell.empty()) cell.resize(kMetricCount, {0.0, 0.0});
    for (int i = 0; i < kMetricCount; ++i) {
      cell[i][0] += kFields[i](r.revop);
      cell[i][1] += kFields[i](r.bench);
    }
    ++counts[r.capacity][r.mean_iat_s];
  }

  std::vector<CapacityGains> out;
  for (auto& [capacity, by_iat] : cells) {
    CapacityGains g;
    g.capacity = capacity;
    for (int i = 0; i < kMetricCount; ++i) {
      std::vector<double> gains;
      for (auto& [iat, sums] : by_iat) {
        double n = static_cast<double>(counts[capacity][iat]);
        double revop_mean = sums[i][0] / n;
        double bench_mean = sums[i][1] / n;
        if (bench_mean == 0.0) continue;
        gains.push_back((revop_mean - bench_mean) / bench_mean);
      }
      GainStat* slot = gain_slots(g, i);
      if (!gains.empty()) {
        auto ms = mean_se(gains);
        slot->defined = true;
        slot->mean = ms.mean;
        slot->se = ms.se;
      }
    }
    out.push_back(g);
  }
  return out;
}

StrategySummary pooled_summary(const std::vector<SweepRow>& rows,
                               StrategyKind strategy) {
  StrategySummary s;
  constexpr int kMetricCount = 7;
  std::vector<double> samples[kMetricCount];
  for (const auto& r : rows) {
    const RunMetrics& m = strategy == StrategyKind::revop ? r.revop : r.bench;
    for (int i = 0; i < kMetricCount; ++i) samples[i].push_back(kFields[i](m));
  }
  s.runs = rows.size();
  PooledStat* slots[] = {&s.revenue,        &s.net_utility,  &s.utilization,
                         &s.node_periods,   &s.admission_rate, &s.success_rate,
                         &s.max_load};
  for (int i = 0; i < kMetricCount; ++i) {
    auto ms = mean_se(samples[i]);
    slots[i]->mean = ms.mean;
    slots[i]->half_ci95 = 1.96 * ms.se;
  }
  return s;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("rank correlation needs two equal-length series");
  }
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

}  // namespace qos
