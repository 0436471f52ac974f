#include "qos/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace qos {

ClusterLedger::ClusterLedger(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw std::invalid_argument("capacity must be nonnegative");
}

int ClusterLedger::in_use(double now) const {
  int used = 0;
  for (const auto& a : live_) {
    if (a.release_time > now) used += a.nodes;
  }
  return used;
}

int ClusterLedger::available(double now) const { return capacity_ - in_use(now); }

bool ClusterLedger::try_admit(std::uint64_t contract_id, int nodes, double now,
                              double duration_s) {
  if (nodes < 1) throw std::invalid_argument("allocation needs >= 1 node");
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (seen_ids_.count(contract_id)) {
    throw std::invalid_argument("duplicate contract id");
  }
  if (available(now) < nodes) return false;
  live_.push_back({contract_id, nodes, now + duration_s});
  seen_ids_.insert(contract_id);
  max_load_ = std::max(max_load_, in_use(now));
  return true;
}

std::vector<std::uint64_t> ClusterLedger::release_due(double now) {
  std::vector<std::uint64_t> released;
  auto keep = live_.begin();
  for (auto& a : live_) {
    if (a.release_time <= now) {
      released.push_back(a.contract_id);
    } else {
      *keep++ = a;
    }
  }
  live_.erase(keep, live_.end());
  return released;
}

}  // namespace qos
