#pragma once

#include <cstddef>
#include <vector>

#include "qos/rng.hpp"

namespace qos {

// One customer segment: uniform ranges for the maximum willingness to pay
// (value of completing in one minute) and for the deadline in minutes.
struct CustomerType {
  int id = 0;
  double probability = 0.0;
  double max_wtp_lo = 0.0;
  double max_wtp_hi = 0.0;
  double deadline_lo = 0.0;
  double deadline_hi = 0.0;
};

struct CustomerMix {
  std::vector<CustomerType> types;
};

// A single customer's private draw from their type's distribution.
struct WtpRealization {
  double max_wtp = 0.0;   // M
  double deadline = 0.0;  // D, minutes
};

void validate(const CustomerType& ct);
void validate(const CustomerMix& mix);
void validate(const WtpRealization& r);

// Willingness to pay for completion in t minutes: max(D - t, 0) * M / (D - 1).
// Linear decay from M at t = 1 down to zero at the deadline.
double wtp_value(const WtpRealization& r, double t_minutes);

WtpRealization sample_realization(const CustomerType& ct, RandomStream& rng);

// Categorical draw by type probability; returns an index into mix.types.
std::size_t sample_customer_type(const CustomerMix& mix, RandomStream& rng);

}  // namespace qos
