#include "qos/wtp.hpp"

#include <cmath>
#include <stdexcept>

namespace qos {

void validate(const CustomerType& ct) {
  if (!(ct.probability > 0.0) || ct.probability > 1.0) {
    throw std::invalid_argument("customer type probability must be in (0, 1]");
  }
  if (!(ct.max_wtp_lo <= ct.max_wtp_hi) || ct.max_wtp_lo < 0.0) {
    throw std::invalid_argument("max wtp range must satisfy 0 <= lo <= hi");
  }
  if (!(ct.deadline_lo > 1.0) || !(ct.deadline_lo <= ct.deadline_hi)) {
    throw std::invalid_argument("deadline range must satisfy 1 < lo <= hi");
  }
}

void validate(const CustomerMix& mix) {
  if (mix.types.empty()) {
    throw std::invalid_argument("customer mix must have at least one type");
  }
  double total = 0.0;
  for (const auto& ct : mix.types) {
    validate(ct);
    total += ct.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("customer type probabilities must sum to 1");
  }
}

void validate(const WtpRealization& r) {
  if (!(r.max_wtp >= 0.0)) {
    throw std::invalid_argument("max wtp must be nonnegative");
  }
  if (!(r.deadline > 1.0)) {
    throw std::invalid_argument("deadline must exceed 1 minute");
  }
}

double wtp_value(const WtpRealization& r, double t_minutes) {
  validate(r);
  if (t_minutes < 0.0) {
    throw std::invalid_argument("completion time must be nonnegative");
  }
  double remaining = r.deadline - t_minutes;
  if (remaining <= 0.0) return 0.0;
  return remaining * r.max_wtp / (r.deadline - 1.0);
}

WtpRealization sample_realization(const CustomerType& ct, RandomStream& rng) {
  validate(ct);
  WtpRealization r;
  r.max_wtp = rng.uniform(ct.max_wtp_lo, ct.max_wtp_hi);
  r.deadline = rng.uniform(ct.deadline_lo, ct.deadline_hi);
  return r;
}

std::size_t sample_customer_type(const CustomerMix& mix, RandomStream& rng) {
  validate(mix);
  double u = rng.canonical();
  double cum = 0.0;
  for (std::size_t i = 0; i < mix.types.size(); ++i) {
    cum += mix.types[i].probability;
    if (u < cum) return i;
  }
  return mix.types.size() - 1;
}

}  // namespace qos
