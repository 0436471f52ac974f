#include "qos/sim.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace qos {

std::string to_string(StrategyKind s) {
  return s == StrategyKind::revop ? "revop" : "bench";
}

Trace generate_trace(const SimConfig& cfg, const CustomerMix& mix,
                     const JobCatalog& catalog) {
  validate(mix);
  validate(catalog);
  if (!(cfg.mean_iat_s > 0.0)) {
    throw std::invalid_argument("mean interarrival time must be positive");
  }
  if (!(cfg.horizon_s > 0.0)) {
    throw std::invalid_argument("horizon must be positive");
  }
  RandomStream rng(stream_seed(cfg.seed, 0));
  std::vector<std::size_t> tenant_type(kTenantCount);
  for (auto& tt : tenant_type) tt = rng.uniform_int(mix.types.size());

  Trace trace;
  double t = 0.0;
  for (;;) {
    t += rng.exponential(cfg.mean_iat_s);
    if (t >= cfg.horizon_s) break;
    ArrivalEvent ev;
    ev.arrival_time = t;
    ev.tenant_id = static_cast<int>(rng.uniform_int(kTenantCount));
    ev.job_type = sample_job_type(catalog, rng);
    ev.customer_type = tenant_type[ev.tenant_id];
    ev.realization = sample_realization(mix.types[ev.customer_type], rng);
    trace.arrivals.push_back(ev);
  }
  return trace;
}

OptimizedMenu MenuCache::get(const CustomerMix& mix, const PricingConfig& cfg,
                             const TierLayout& tiers, double contention) {
  double effective = cfg.contention_premium_slope > 0.0 ? contention : 0.0;
  Key key{tiers.fast.has_value(), tiers.fast ? tiers.fast->minutes : 0.0,
          tiers.fast ? tiers.fast->nodes : 0,  tiers.slow.has_value(),
          tiers.slow ? tiers.slow->minutes : 0.0,
          tiers.slow ? tiers.slow->nodes : 0,  effective};
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  // Computed outside the lock; a concurrent duplicate lands on the same
  // deterministic value.
  OptimizedMenu result = optimize_menu(mix, tiers, cfg, effective);
  std::lock_guard lock(mu_);
  return cache_.emplace(key, std::move(result)).first->second;
}

namespace {

std::string log_line(const ArrivalEvent& ev, const std::string& job_name,
                     const PriceMenu* menu, const std::string& decision,
                     const MenuTier* taken) {
  nlohmann::json j;
  j["t"] = ev.arrival_time;
  j["tenant"] = ev.tenant_id;
  j["job"] = job_name;
  auto tiers = nlohmann::json::array();
  if (menu) {
    for (const auto& t : menu->tiers) {
      tiers.push_back({{"tier", to_string(t.tier)},
                       {"minutes", t.completion_minutes},
                       {"price", t.price},
                       {"nodes", t.nodes}});
    }
  }
  j["menu"] = tiers;
  j["decision"] = decision;
  if (taken) {
    j["tier"] = to_string(taken->tier);
    j["price"] = taken->price;
  }
  return j.dump();
}

}  // namespace

RunResult run_simulation(const Trace& trace, const SimConfig& cfg,
                         const CustomerMix& mix, const JobCatalog& catalog,
                         const PricingConfig& pricing, MenuCache* cache) {
  if (cfg.capacity < 0) throw std::invalid_argument("capacity must be >= 0");
  if (cfg.strategy == StrategyKind::bench) validate(cfg.bench_rate);
  MenuCache local;
  if (!cache) cache = &local;

  ClusterLedger ledger(cfg.capacity);
  double contention =
      cfg.capacity > 0 ? 1.0 / (cfg.mean_iat_s * cfg.capacity) : 0.0;

  RunResult result;
  result.arrivals = trace.arrivals.size();
  double prev_time = -1.0;
  for (const auto& ev : trace.arrivals) {
    if (!(ev.arrival_time > prev_time)) {
      throw std::invalid_argument("trace must be sorted by arrival time");
    }
    prev_time = ev.arrival_time;
    double now = ev.arrival_time;
    ledger.release_due(now);
    int avail = ledger.available(now);
    const JobType& job = catalog.types.at(ev.job_type);
    bool fast_ok = job.fast.nodes <= avail;
    bool slow_ok = job.slow.nodes <= avail;
    if (!fast_ok && !slow_ok) {
      ++result.rejected;
      if (cfg.collect_log) {
        result.log.push_back(log_line(ev, job.name, nullptr, "rejected", nullptr));
      }
      continue;
    }

    PriceMenu menu;
    if (cfg.strategy == StrategyKind::revop) {
      TierLayout tiers;
      if (fast_ok) tiers.fast = job.fast;
      if (slow_ok) tiers.slow = job.slow;
      menu = cache->get(mix, pricing, tiers, contention).menu;
    } else {
      menu = bench_menu(job, cfg.bench_rate, fast_ok, slow_ok);
    }

    Choice choice = choose(ev.realization, menu);
    if (!choice.selected) {
      ++result.declined;
      if (cfg.collect_log) {
        result.log.push_back(log_line(ev, job.name, &menu, "declined", nullptr));
      }
      continue;
    }

    const MenuTier* tier = find_tier(menu, *choice.selected);
    double load_after =
        static_cast<double>(ledger.in_use(now) + tier->nodes) / cfg.capacity;
    double multiplier = 1.0;
    if (cfg.slowdown) {
      multiplier = cfg.slowdown(load_after);
      if (!(multiplier >= 1.0)) {
        throw std::runtime_error("slowdown multiplier must be >= 1");
      }
    }
    double duration_s = tier->completion_minutes * 60.0 * multiplier;
    std::uint64_t id = result.contracts.size() + 1;
    if (!ledger.try_admit(id, tier->nodes, now, duration_s)) {
      throw std::logic_error("admission failed after feasibility check");
    }

    Contract c;
    c.contract_id = id;
    c.tenant_id = ev.tenant_id;
    c.tier = tier->tier;
    c.price = tier->price;
    c.nodes = tier->nodes;
    c.start = now;
    c.promised_completion = now + tier->completion_minutes * 60.0;
    c.actual_completion = now + duration_s;
    c.succeeded = c.actual_completion <= c.promised_completion;
    c.delivered_value =
        wtp_value(ev.realization, (c.actual_completion - c.start) / 60.0);
    result.contracts.push_back(c);
    if (cfg.collect_log) {
      result.log.push_back(log_line(ev, job.name, &menu, "accepted", tier));
    }
  }
  result.max_load = ledger.max_load();
  return result;
}

void validate(const SweepAxes& axes) {
  if (axes.capacities.empty() || axes.mean_iats_s.empty() || axes.seeds.empty()) {
    throw std::invalid_argument("sweep axes must be nonempty");
  }
  for (int c : axes.capacities) {
    if (c < 0) throw std::invalid_argument("capacity must be >= 0");
  }
  for (double iat : axes.mean_iats_s) {
    if (!(iat > 0.0)) throw std::invalid_argument("mean IAT must be positive");
  }
  if (!(axes.horizon_s > 0.0)) {
    throw std::invalid_argument("horizon must be positive");
  }
}

SweepResult run_sweep(const SweepAxes& axes, const CustomerMix& mix,
                      const JobCatalog& catalog, const PricingConfig& pricing,
                      const SlowdownHook& slowdown, int parallelism) {
  validate(axes);
  SweepResult result;
  result.bench_rate = calibrate_fixed_price(catalog, mix, pricing);

  struct Task {
    int capacity;
    double mean_iat_s;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int cap : axes.capacities) {
    for (double iat : axes.mean_iats_s) {
      for (std::uint64_t seed : axes.seeds) tasks.push_back({cap, iat, seed});
    }
  }
  result.runs.resize(tasks.size());

  MenuCache cache;
  auto run_one = [&](std::size_t i) {
    const Task& task = tasks[i];
    SimConfig cfg;
    cfg.capacity = task.capacity;
    cfg.mean_iat_s = task.mean_iat_s;
    cfg.horizon_s = axes.horizon_s;
    // Every (capacity, IAT, seed) cell gets its own trace stream.
    cfg.seed = stream_seed(
        stream_seed(task.seed, static_cast<std::uint64_t>(task.capacity)),
        static_cast<std::uint64_t>(std::llround(task.mean_iat_s * 1000.0)));
    cfg.slowdown = slowdown;
    Trace trace = generate_trace(cfg, mix, catalog);

    PairedRun& out = result.runs[i];
    out.capacity = task.capacity;
    out.mean_iat_s = task.mean_iat_s;
    out.seed = task.seed;
    cfg.strategy = StrategyKind::revop;
    out.revop = run_simulation(trace, cfg, mix, catalog, pricing, &cache);
    cfg.strategy = StrategyKind::bench;
    cfg.bench_rate = result.bench_rate;
    out.bench = run_simulation(trace, cfg, mix, catalog, pricing, &cache);
  };

  if (parallelism <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        run_one(i);
      }
    };
    std::vector<std::thread> pool;
    int threads = std::min<std::size_t>(parallelism, tasks.size());
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return result;
}

}  // namespace qos
