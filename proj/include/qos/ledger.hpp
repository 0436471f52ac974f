#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

namespace qos {

// Tracks node capacity and live allocations under no-delay, no-queue
// admission: a request either fits in currently free nodes or is turned
// away, and an admitted allocation holds its nodes untouched until its
// release time. Mutations must be externally serialized; the simulator uses
// one ledger per run and the quote service guards its ledger with a mutex.
class ClusterLedger {
 public:
  explicit ClusterLedger(int capacity);

  int capacity() const { return capacity_; }

  // Free nodes at the given instant; allocations releasing at or before
  // `now` no longer count against capacity.
  int available(double now) const;

  int in_use(double now) const;

  // Admits the allocation if it fits, holding `nodes` until now + duration_s.
  // Returns false (state unchanged) when it does not fit. Reusing a
  // contract id is an error.
  bool try_admit(std::uint64_t contract_id, int nodes, double now,
                 double duration_s);

  // Drops every allocation with release_time <= now and returns their ids,
  // in admission order. Idempotent at a fixed time.
  std::vector<std::uint64_t> release_due(double now);

  // Peak concurrent allocated nodes seen so far.
  int max_load() const { return max_load_; }

 private:
  struct Allocation {
    std::uint64_t contract_id;
    int nodes;
    double release_time;
  };

  int capacity_;
  int max_load_ = 0;
  std::vector<Allocation> live_;
  std::unordered_set<std::uint64_t> seen_ids_;
};

}  // namespace qos
