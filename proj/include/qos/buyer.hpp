#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qos/wtp.hpp"

namespace qos {

enum class TierId { fast, slow };

std::string to_string(TierId t);

struct MenuTier {
  TierId tier = TierId::fast;
  double completion_minutes = 0.0;
  double price = 0.0;
  int nodes = 1;
};

// One or two tiers. Two-tier menus list fast first, with strictly increasing
// completion times. Single-tier menus are first-class: they arise whenever
// free capacity admits only one cluster size.
struct PriceMenu {
  std::vector<MenuTier> tiers;
};

void validate(const PriceMenu& menu);
const MenuTier* find_tier(const PriceMenu& menu, TierId id);

struct Choice {
  std::optional<TierId> selected;
  double surplus = 0.0;
};

// Picks the tier maximizing wtp_value(t) - price among tiers with nonnegative
// surplus; returns no selection when every tier is too expensive. Exact ties
// resolve to the faster tier, in both this rule and the estimators below, so
// the tier probabilities never double-count a boundary.
Choice choose(const WtpRealization& r, const PriceMenu& menu);

struct PurchaseProbabilities {
  double fast = 0.0;
  double slow = 0.0;
};

// Probability that a customer of the given type selects each tier, under the
// type's product-uniform (M, D) distribution. The tier probability for a tier
// absent from the menu is 0.

// Empirical estimate from n sampled realizations; deterministic given seed.
PurchaseProbabilities purchase_probabilities_mc(const CustomerType& ct,
                                                const PriceMenu& menu,
                                                std::size_t n,
                                                std::uint64_t seed);

// Midpoint-rule integration of the selection indicator over the (M, D)
// rectangle on a resolution x resolution grid. Degenerate ranges collapse to
// a single point on that axis, making the estimate exact for atoms.
PurchaseProbabilities purchase_probabilities_quadrature(const CustomerType& ct,
                                                        const PriceMenu& menu,
                                                        int resolution);

}  // namespace qos
