#include "qos/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qos {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Weighted evaluation point of a customer-type rectangle: willingness to pay
// at the fast and slow completion times plus the probability mass it carries.
// Pricing a menu against a mix reduces to threshold counts over these atoms,
// which is what makes dense price grids affordable.
struct Atom {
  double a;  // wtp at the fast completion time
  double b;  // wtp at the slow completion time
  double w;
};

template <typename Fn>
void for_each_midpoint(const CustomerType& ct, int resolution, Fn&& fn) {
  int res_m = ct.max_wtp_lo == ct.max_wtp_hi ? 1 : resolution;
  int res_d = ct.deadline_lo == ct.deadline_hi ? 1 : resolution;
  double step_m = (ct.max_wtp_hi - ct.max_wtp_lo) / res_m;
  double step_d = (ct.deadline_hi - ct.deadline_lo) / res_d;
  double cell = 1.0 / (static_cast<double>(res_m) * res_d);
  for (int i = 0; i < res_m; ++i) {
    for (int j = 0; j < res_d; ++j) {
      WtpRealization r{ct.max_wtp_lo + (i + 0.5) * step_m,
                       ct.deadline_lo + (j + 0.5) * step_d};
      fn(r, cell);
    }
  }
}

std::vector<Atom> build_atoms(const CustomerMix& mix, double t_fast,
                              double t_slow, int resolution) {
  std::vector<Atom> atoms;
  for (const auto& ct : mix.types) {
    for_each_midpoint(ct, resolution, [&](const WtpRealization& r, double cell) {
      atoms.push_back({wtp_value(r, t_fast), wtp_value(r, t_slow),
                       ct.probability * cell});
    });
  }
  return atoms;
}

struct Best2d {
  double x = 0.0;
  double y = 0.0;
  double g = kNegInf;
};

// Evaluates expected revenue at every point of an n x n price grid over
// [xlo, xhi] x [ylo, yhi] (x = fast price, y = slow price). For a fixed
// column x, an atom with a >= x buys fast exactly when y >= (x - a) + b and
// slow below that threshold; an atom priced out of fast buys slow up to
// y = b. Each atom therefore contributes interval masses over the y grid,
// accumulated with difference arrays, and one prefix scan per column yields
// all n revenues. Ascending scan order with strict improvement implements
// the lexicographic smallest-price tie-break.
void eval_box_2d(const std::vector<Atom>& atoms, double xlo, double xhi,
                 double ylo, double yhi, int n, Best2d& best) {
  double xstep = (xhi - xlo) / (n - 1);
  double ystep = (yhi - ylo) / (n - 1);
  std::vector<double> fast_add(n + 1), slow_add(n + 1);
  for (int jx = 0; jx < n; ++jx) {
    double x = xlo + xstep * jx;
    std::fill(fast_add.begin(), fast_add.end(), 0.0);
    std::fill(slow_add.begin(), slow_add.end(), 0.0);
    for (const auto& at : atoms) {
      if (at.a >= x) {
        double c = (x - at.a) + at.b;
        long idx = 0;
        if (c > ylo) {
          idx = static_cast<long>(std::ceil((c - ylo) / ystep));
          if (idx < 0) idx = 0;
          if (idx > n) idx = n;
        }
        fast_add[idx] += at.w;
        slow_add[0] += at.w;
        slow_add[idx] -= at.w;
      } else if (at.b >= ylo) {
        long hi = static_cast<long>(std::floor((at.b - ylo) / ystep)) + 1;
        if (hi > n) hi = n;
        if (hi > 0) {
          slow_add[0] += at.w;
          slow_add[hi] -= at.w;
        }
      }
    }
    double f = 0.0, s = 0.0;
    for (int l = 0; l < n; ++l) {
      f += fast_add[l];
      s += slow_add[l];
      double g = x * f + (ylo + ystep * l) * s;
      if (g > best.g) best = {x, ylo + ystep * l, g};
    }
  }
}

struct Best1d {
  double p = 0.0;
  double g = kNegInf;
};

// Single-tier variant: sorted willingness-to-pay thresholds with suffix
// masses give the take rate at any price by binary search.
struct ThresholdTable {
  std::vector<double> value;
  std::vector<double> suffix_mass;
};

ThresholdTable build_thresholds(const CustomerMix& mix, double t, int resolution) {
  std::vector<std::pair<double, double>> vw;
  for (const auto& ct : mix.types) {
    for_each_midpoint(ct, resolution, [&](const WtpRealization& r, double cell) {
      vw.emplace_back(wtp_value(r, t), ct.probability * cell);
    });
  }
  std::sort(vw.begin(), vw.end());
  ThresholdTable table;
  table.value.reserve(vw.size());
  table.suffix_mass.assign(vw.size() + 1, 0.0);
  for (const auto& [v, w] : vw) table.value.push_back(v);
  for (std::size_t i = vw.size(); i-- > 0;) {
    table.suffix_mass[i] = table.suffix_mass[i + 1] + vw[i].second;
  }
  return table;
}

void eval_box_1d(const ThresholdTable& table, double lo, double hi, int n,
                 Best1d& best) {
  double step = (hi - lo) / (n - 1);
  for (int j = 0; j < n; ++j) {
    double p = lo + step * j;
    auto it = std::lower_bound(table.value.begin(), table.value.end(), p);
    double q = table.suffix_mass[it - table.value.begin()];
    double g = p * q;
    if (g > best.g) best = {p, g};
  }
}

// Shifts a refinement window of the given span to stay inside [0, ub].
double clamp_window(double center, double span, double ub) {
  double lo = center - span / 2.0;
  if (lo < 0.0) lo = 0.0;
  if (lo > ub - span) lo = ub - span;
  return lo;
}

void validate_layout(const TierLayout& tiers) {
  if (!tiers.fast && !tiers.slow) {
    throw std::invalid_argument("tier layout needs at least one tier");
  }
  for (const auto* t : {&tiers.fast, &tiers.slow}) {
    if (*t && ((*t)->nodes < 1 || !((*t)->minutes > 0.0))) {
      throw std::invalid_argument("tier layout entries must be valid");
    }
  }
  if (tiers.fast && tiers.slow &&
      !(tiers.fast->minutes < tiers.slow->minutes)) {
    throw std::invalid_argument("fast tier must be strictly faster than slow");
  }
}

int search_resolution(const PricingConfig& cfg) {
  return cfg.estimator.kind == EstimatorKind::quadrature
             ? cfg.estimator.quadrature_resolution
             : 512;
}

}  // namespace

void validate(const PricingConfig& cfg, const CustomerMix& mix) {
  validate(mix);
  double max_wtp = 0.0;
  for (const auto& ct : mix.types) max_wtp = std::max(max_wtp, ct.max_wtp_hi);
  if (!std::isfinite(cfg.price_upper_bound) || cfg.price_upper_bound < max_wtp ||
      !(cfg.price_upper_bound > 0.0)) {
    throw std::invalid_argument(
        "price upper bound must be positive and cover every max wtp");
  }
  if (cfg.coarse_grid_points < 16) {
    throw std::invalid_argument("coarse grid needs at least 16 points");
  }
  if (cfg.refinement_rounds < 0) {
    throw std::invalid_argument("refinement rounds must be nonnegative");
  }
  if (cfg.contention_premium_slope < 0.0) {
    throw std::invalid_argument("contention premium slope must be nonnegative");
  }
  if (cfg.estimator.quadrature_resolution <= 0) {
    throw std::invalid_argument("quadrature resolution must be positive");
  }
  if (cfg.estimator.monte_carlo_samples == 0) {
    throw std::invalid_argument("monte carlo sample count must be positive");
  }
}

double final_grid_step(const PricingConfig& cfg) {
  double span = cfg.price_upper_bound;
  for (int i = 0; i < cfg.refinement_rounds; ++i) span /= 4.0;
  return span / (cfg.coarse_grid_points - 1);
}

PurchaseProbabilities purchase_probabilities(const CustomerType& ct,
                                             const PriceMenu& menu,
                                             const EstimatorConfig& est,
                                             std::uint64_t stream) {
  if (est.kind == EstimatorKind::quadrature) {
    return purchase_probabilities_quadrature(ct, menu,
                                             est.quadrature_resolution);
  }
  return purchase_probabilities_mc(ct, menu, est.monte_carlo_samples,
                                   stream_seed(est.monte_carlo_seed, stream));
}

double expected_revenue(const CustomerMix& mix, const PriceMenu& menu,
                        const EstimatorConfig& est) {
  validate(mix);
  validate(menu);
  double total = 0.0;
  for (std::size_t k = 0; k < mix.types.size(); ++k) {
    auto q = purchase_probabilities(mix.types[k], menu, est, k);
    double revenue = 0.0;
    for (const auto& t : menu.tiers) {
      revenue += t.price * (t.tier == TierId::fast ? q.fast : q.slow);
    }
    total += mix.types[k].probability * revenue;
  }
  return total;
}

OptimizedMenu optimize_menu(const CustomerMix& mix, const TierLayout& tiers,
                            const PricingConfig& cfg, double contention) {
  validate(cfg, mix);
  validate_layout(tiers);
  if (contention < 0.0) {
    throw std::invalid_argument("contention must be nonnegative");
  }
  int res = search_resolution(cfg);
  int n = cfg.coarse_grid_points;
  double ub = cfg.price_upper_bound;

  PriceMenu menu;
  if (tiers.fast && tiers.slow) {
    auto atoms = build_atoms(mix, tiers.fast->minutes, tiers.slow->minutes, res);
    Best2d best;
    eval_box_2d(atoms, 0.0, ub, 0.0, ub, n, best);
    double span = ub;
    for (int round = 0; round < cfg.refinement_rounds; ++round) {
      span /= 4.0;
      double xlo = clamp_window(best.x, span, ub);
      double ylo = clamp_window(best.y, span, ub);
      eval_box_2d(atoms, xlo, xlo + span, ylo, ylo + span, n, best);
    }
    menu.tiers.push_back(
        {TierId::fast, tiers.fast->minutes, best.x, tiers.fast->nodes});
    menu.tiers.push_back(
        {TierId::slow, tiers.slow->minutes, best.y, tiers.slow->nodes});
  } else {
    const JobTier& only = tiers.fast ? *tiers.fast : *tiers.slow;
    auto table = build_thresholds(mix, only.minutes, res);
    Best1d best;
    eval_box_1d(table, 0.0, ub, n, best);
    double span = ub;
    for (int round = 0; round < cfg.refinement_rounds; ++round) {
      span /= 4.0;
      double lo = clamp_window(best.p, span, ub);
      eval_box_1d(table, lo, lo + span, n, best);
    }
    menu.tiers.push_back({tiers.fast ? TierId::fast : TierId::slow,
                          only.minutes, best.p, only.nodes});
  }

  if (cfg.contention_premium_slope > 0.0 && contention > 0.0) {
    double scale = 1.0 + cfg.contention_premium_slope * contention;
    for (auto& t : menu.tiers) t.price *= scale;
  }
  validate(menu);
  return {menu, expected_revenue(mix, menu, cfg.estimator)};
}

void validate(const FixedPrice& fp) {
  if (!std::isfinite(fp.rate) || fp.rate < 0.0) {
    throw std::invalid_argument("fixed rate must be finite and nonnegative");
  }
}

FixedPrice calibrate_fixed_price(const JobCatalog& catalog,
                                 const CustomerMix& mix,
                                 const PricingConfig& cfg) {
  validate(catalog);
  validate(cfg, mix);
  int res = search_resolution(cfg);

  // Accumulation order is fixed by sorting job types by name, so the result
  // does not depend on catalog ordering.
  std::vector<const JobType*> jobs;
  for (const auto& jt : catalog.types) jobs.push_back(&jt);
  std::sort(jobs.begin(), jobs.end(),
            [](const JobType* l, const JobType* r) { return l->name < r->name; });

  struct CalAtom {
    double a, b, w;
    double k_fast, k_slow;  // node-minutes per tier, so price = rate * k
  };
  std::vector<CalAtom> atoms;
  for (const JobType* jt : jobs) {
    double k_fast = jt->fast.nodes * jt->fast.minutes;
    double k_slow = jt->slow.nodes * jt->slow.minutes;
    for (const auto& ct : mix.types) {
      for_each_midpoint(ct, res, [&](const WtpRealization& r, double cell) {
        atoms.push_back({wtp_value(r, jt->fast.minutes),
                         wtp_value(r, jt->slow.minutes),
                         jt->mix_probability * ct.probability * cell, k_fast,
                         k_slow});
      });
    }
  }

  auto eval = [&](double rate) {
    double g = 0.0;
    for (const auto& at : atoms) {
      double p_fast = rate * at.k_fast;
      double p_slow = rate * at.k_slow;
      double s_fast = at.a - p_fast;
      double s_slow = at.b - p_slow;
      if (s_fast >= 0.0 && s_fast >= s_slow) {
        g += at.w * p_fast;
      } else if (s_slow >= 0.0) {
        g += at.w * p_slow;
      }
    }
    return g;
  };

  int n = cfg.coarse_grid_points;
  double ub = cfg.price_upper_bound;
  Best1d best;
  auto scan = [&](double lo, double hi) {
    double step = (hi - lo) / (n - 1);
    for (int j = 0; j < n; ++j) {
      double rate = lo + step * j;
      double g = eval(rate);
      if (g > best.g) best = {rate, g};
    }
  };
  scan(0.0, ub);
  double span = ub;
  for (int round = 0; round < cfg.refinement_rounds; ++round) {
    span /= 4.0;
    double lo = clamp_window(best.p, span, ub);
    scan(lo, lo + span);
  }
  return {best.p, best.g};
}

PriceMenu bench_menu(const JobType& job, const FixedPrice& fp, bool offer_fast,
                     bool offer_slow) {
  validate(job);
  validate(fp);
  PriceMenu menu;
  if (offer_fast) {
    menu.tiers.push_back({TierId::fast, job.fast.minutes,
                          fp.rate * job.fast.nodes * job.fast.minutes,
                          job.fast.nodes});
  }
  if (offer_slow) {
    menu.tiers.push_back({TierId::slow, job.slow.minutes,
                          fp.rate * job.slow.nodes * job.slow.minutes,
                          job.slow.nodes});
  }
  validate(menu);
  return menu;
}

}  // namespace qos
