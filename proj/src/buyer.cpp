#include "qos/buyer.hpp"

#include <cmath>
#include <stdexcept>

namespace qos {

std::string to_string(TierId t) { return t == TierId::fast ? "fast" : "slow"; }

void validate(const PriceMenu& menu) {
  if (menu.tiers.empty() || menu.tiers.size() > 2) {
    throw std::invalid_argument("menu must have 1 or 2 tiers");
  }
  for (const auto& t : menu.tiers) {
    if (!std::isfinite(t.price) || t.price < 0.0) {
      throw std::invalid_argument("tier price must be finite and nonnegative");
    }
    if (t.nodes < 1) throw std::invalid_argument("tier node count must be >= 1");
    if (!(t.completion_minutes > 0.0)) {
      throw std::invalid_argument("tier completion time must be positive");
    }
  }
  if (menu.tiers.size() == 2) {
    if (menu.tiers[0].tier == menu.tiers[1].tier) {
      throw std::invalid_argument("menu tiers must be distinct");
    }
    if (menu.tiers[0].tier != TierId::fast ||
        !(menu.tiers[0].completion_minutes < menu.tiers[1].completion_minutes)) {
      throw std::invalid_argument(
          "two-tier menu must list fast first with increasing times");
    }
  }
}

const MenuTier* find_tier(const PriceMenu& menu, TierId id) {
  for (const auto& t : menu.tiers) {
    if (t.tier == id) return &t;
  }
  return nullptr;
}

Choice choose(const WtpRealization& r, const PriceMenu& menu) {
  validate(menu);
  Choice best;
  // Tiers are ordered fast-first, so a strict comparison leaves exact ties
  // with the faster tier.
  for (const auto& t : menu.tiers) {
    double surplus = wtp_value(r, t.completion_minutes) - t.price;
    if (surplus < 0.0) continue;
    if (!best.selected || surplus > best.surplus) {
      best.selected = t.tier;
      best.surplus = surplus;
    }
  }
  return best;
}

PurchaseProbabilities purchase_probabilities_mc(const CustomerType& ct,
                                                const PriceMenu& menu,
                                                std::size_t n,
                                                std::uint64_t seed) {
  validate(ct);
  validate(menu);
  if (n == 0) throw std::invalid_argument("sample count must be positive");
  RandomStream rng(seed);
  std::size_t fast = 0, slow = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = sample_realization(ct, rng);
    auto c = choose(r, menu);
    if (c.selected == TierId::fast) ++fast;
    if (c.selected == TierId::slow) ++slow;
  }
  return {static_cast<double>(fast) / static_cast<double>(n),
          static_cast<double>(slow) / static_cast<double>(n)};
}

PurchaseProbabilities purchase_probabilities_quadrature(const CustomerType& ct,
                                                        const PriceMenu& menu,
                                                        int resolution) {
  validate(ct);
  validate(menu);
  if (resolution <= 0) throw std::invalid_argument("resolution must be positive");
  int res_m = ct.max_wtp_lo == ct.max_wtp_hi ? 1 : resolution;
  int res_d = ct.deadline_lo == ct.deadline_hi ? 1 : resolution;
  double step_m = (ct.max_wtp_hi - ct.max_wtp_lo) / res_m;
  double step_d = (ct.deadline_hi - ct.deadline_lo) / res_d;
  double cell = 1.0 / (static_cast<double>(res_m) * res_d);
  double fast = 0.0, slow = 0.0;
  for (int i = 0; i < res_m; ++i) {
    for (int j = 0; j < res_d; ++j) {
      WtpRealization r{ct.max_wtp_lo + (i + 0.5) * step_m,
                       ct.deadline_lo + (j + 0.5) * step_d};
      auto c = choose(r, menu);
      if (c.selected == TierId::fast) fast += cell;
      if (c.selected == TierId::slow) slow += cell;
    }
  }
  return {fast, slow};
}

}  // namespace qos
