#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "qos/buyer.hpp"
#include "qos/jobs.hpp"
#include "qos/ledger.hpp"
#include "qos/pricing.hpp"
#include "qos/wtp.hpp"

namespace qos {

inline constexpr int kTenantCount = 50;

struct ArrivalEvent {
  double arrival_time = 0.0;  // seconds
  int tenant_id = 0;
  std::size_t job_type = 0;       // index into the catalog
  std::size_t customer_type = 0;  // index into the mix; the tenant's type
  WtpRealization realization;     // private to the buyer
};

struct Trace {
  std::vector<ArrivalEvent> arrivals;
};

enum class StrategyKind { revop, bench };
std::string to_string(StrategyKind s);

// Maps the load fraction right after admission to a completion-time
// multiplier >= 1. An empty hook means jobs complete exactly as promised.
using SlowdownHook = std::function<double(double)>;

struct SimConfig {
  int capacity = 50;
  double mean_iat_s = 30.0;
  double horizon_s = 3600.0;
  std::uint64_t seed = 1;
  StrategyKind strategy = StrategyKind::revop;
  FixedPrice bench_rate;  // used when strategy == bench
  SlowdownHook slowdown;
  bool collect_log = false;
};

struct Contract {
  std::uint64_t contract_id = 0;
  int tenant_id = 0;
  TierId tier = TierId::fast;
  double price = 0.0;
  int nodes = 0;
  double start = 0.0;
  double promised_completion = 0.0;
  double actual_completion = 0.0;
  bool succeeded = true;
  // Buyer's willingness to pay at the delivered completion time; recorded at
  // acceptance so utility accounting does not need the private realization.
  double delivered_value = 0.0;
};

struct RunResult {
  std::vector<Contract> contracts;
  std::size_t arrivals = 0;
  std::size_t rejected = 0;  // no feasible tier, so no quote was given
  std::size_t declined = 0;  // quoted, but the buyer walked away
  int max_load = 0;
  // One structured line per arrival when SimConfig::collect_log is set.
  std::vector<std::string> log;
};

// Poisson arrivals until the horizon. Each of the 50 tenants is bound to a
// customer type once per trace, uniformly across types; every job then draws
// a private realization from its tenant's type.
Trace generate_trace(const SimConfig& cfg, const CustomerMix& mix,
                     const JobCatalog& catalog);

// Thread-safe memo for optimized menus. Within one sweep the optimal menu
// depends only on the tier layout and the effective contention, so runs can
// share results. A cache instance assumes a fixed (mix, pricing) pair.
class MenuCache {
 public:
  OptimizedMenu get(const CustomerMix& mix, const PricingConfig& cfg,
                    const TierLayout& tiers, double contention);

 private:
  using Key = std::tuple<bool, double, int, bool, double, int, double>;
  std::mutex mu_;
  std::map<Key, OptimizedMenu> cache_;
};

// Replays one trace against one pricing strategy: per arrival, free due
// nodes, offer the feasible tiers (none feasible means rejection), quote via
// the strategy, let the buyer choose, and admit the selected tier. Revenue
// is recognized at acceptance. The strategy sees only distribution
// parameters and tier structure, never the private realization.
RunResult run_simulation(const Trace& trace, const SimConfig& cfg,
                         const CustomerMix& mix, const JobCatalog& catalog,
                         const PricingConfig& pricing,
                         MenuCache* cache = nullptr);

struct SweepAxes {
  std::vector<int> capacities;
  std::vector<double> mean_iats_s;
  std::vector<std::uint64_t> seeds;
  double horizon_s = 3600.0;
};

void validate(const SweepAxes& axes);

struct PairedRun {
  int capacity = 0;
  double mean_iat_s = 0.0;
  std::uint64_t seed = 0;
  RunResult revop;
  RunResult bench;
};

struct SweepResult {
  FixedPrice bench_rate;
  std::vector<PairedRun> runs;
};

// Full factorial over (capacity, mean IAT, seed). Each cell generates one
// trace and replays it through both strategies, so the comparison shares its
// random numbers. The bench rate is calibrated once per sweep. Rows are
// ordered by (capacity, mean IAT, seed) regardless of parallelism.
SweepResult run_sweep(const SweepAxes& axes, const CustomerMix& mix,
                      const JobCatalog& catalog, const PricingConfig& pricing,
                      const SlowdownHook& slowdown = {}, int parallelism = 1);

}  // namespace qos
