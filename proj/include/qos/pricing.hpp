#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "qos/buyer.hpp"
#include "qos/jobs.hpp"
#include "qos/wtp.hpp"

namespace qos {

enum class EstimatorKind { quadrature, monte_carlo };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::quadrature;
  int quadrature_resolution = 512;
  std::size_t monte_carlo_samples = 100000;
  std::uint64_t monte_carlo_seed = 1;
};

struct PricingConfig {
  double price_upper_bound = 150.0;
  int coarse_grid_points = 64;
  int refinement_rounds = 3;
  // Optional post-optimization markup under load: prices are scaled by
  // (1 + slope * contention) when a contention value is supplied. Off by
  // default; zero slope leaves results bit-identical.
  double contention_premium_slope = 0.0;
  EstimatorConfig estimator;
};

void validate(const PricingConfig& cfg, const CustomerMix& mix);

// Step between adjacent grid points in the optimizer's final refinement
// round; the spacing at which returned prices and rates are resolved.
double final_grid_step(const PricingConfig& cfg);

// Dispatches to the configured estimator. Monte Carlo seeds are decorrelated
// per customer type via stream_seed(seed, stream).
PurchaseProbabilities purchase_probabilities(const CustomerType& ct,
                                             const PriceMenu& menu,
                                             const EstimatorConfig& est,
                                             std::uint64_t stream = 0);

// Expected revenue from one arriving job facing the menu: the sum over
// customer types of probability-weighted tier price times tier take rate.
double expected_revenue(const CustomerMix& mix, const PriceMenu& menu,
                        const EstimatorConfig& est);

// The tier structure to price: completion time and node count for the fast
// and/or slow cluster size. At least one tier must be present.
struct TierLayout {
  std::optional<JobTier> fast;
  std::optional<JobTier> slow;
};

struct OptimizedMenu {
  PriceMenu menu;
  double expected_revenue = 0.0;
};

// Coarse-to-fine grid search for the revenue-maximizing prices over
// [0, price_upper_bound] per offered tier: coarse_grid_points per axis, then
// refinement_rounds passes that zoom 4x around the incumbent. Grid ties
// resolve to the lexicographically smallest (fast price, slow price). The
// reported revenue is re-scored with the configured estimator at the
// returned prices.
OptimizedMenu optimize_menu(const CustomerMix& mix, const TierLayout& tiers,
                            const PricingConfig& cfg, double contention = 0.0);

struct FixedPrice {
  double rate = 0.0;  // currency per node-minute
  double expected_revenue = 0.0;
};

void validate(const FixedPrice& fp);

// Calibrates the single per-node-minute rate that maximizes expected revenue
// per arrival across the job mix: each job type h is offered both its tiers
// at rate * nodes * minutes and buyers select via choose. 1-D coarse-to-fine
// search over [0, price_upper_bound]; grid ties resolve to the smallest rate.
FixedPrice calibrate_fixed_price(const JobCatalog& catalog,
                                 const CustomerMix& mix,
                                 const PricingConfig& cfg);

// Menu for one job type at a fixed per-node-minute rate: each offered tier
// is priced at rate * nodes * minutes. Callers drop tiers that do not fit
// the free capacity.
PriceMenu bench_menu(const JobType& job, const FixedPrice& fp,
                     bool offer_fast = true, bool offer_slow = true);

}  // namespace qos
