#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "qos/buyer.hpp"
#include "qos/config.hpp"
#include "qos/jobs.hpp"
#include "qos/ledger.hpp"
#include "qos/pricing.hpp"
#include "qos/sim.hpp"

namespace qos {

// Quote and contract front end over a live ledger. Quoting never mutates
// the ledger; accepting a quote re-checks feasibility and admits atomically
// under one lock, so concurrent clients can never over-allocate. Quotes
// expire after a configurable wall-clock interval. The clock is injectable
// so tests can drive time; the default reads the system clock.
class QuoteService {
 public:
  using Clock = std::function<double()>;

  QuoteService(const ServiceConfig& cfg, CustomerMix mix, JobCatalog catalog,
               PricingConfig pricing, Clock clock = {});

  enum class QuoteError { none, unknown_job, no_quote };

  struct QuoteReply {
    QuoteError error = QuoteError::none;
    std::string quote_id;
    PriceMenu menu;
    double expires_at = 0.0;
  };

  // Offers the tiers that fit free capacity right now, priced by the menu
  // optimizer; no feasible tier yields a no-quote reply.
  QuoteReply request_quote(int tenant_id, const std::string& job_type);

  enum class ContractError {
    none,
    unknown_quote,
    expired,
    already_accepted,
    unknown_tier,
    infeasible
  };

  struct ContractReply {
    ContractError error = ContractError::none;
    Contract contract;
  };

  ContractReply accept_quote(const std::string& quote_id, TierId tier);

  std::optional<Contract> contract(std::uint64_t contract_id) const;

  struct ClusterInfo {
    int capacity = 0;
    int available = 0;
  };
  ClusterInfo cluster() const;

  double now() const { return clock_(); }

 private:
  struct Session {
    int tenant_id = 0;
    PriceMenu menu;
    double expires_at = 0.0;
    bool accepted = false;
  };

  ServiceConfig cfg_;
  CustomerMix mix_;
  JobCatalog catalog_;
  PricingConfig pricing_;
  Clock clock_;
  MenuCache menus_;

  mutable std::mutex mu_;
  ClusterLedger ledger_;
  std::uint64_t next_quote_ = 1;
  std::uint64_t next_contract_ = 1;
  std::map<std::string, Session> sessions_;
  std::map<std::uint64_t, Contract> contracts_;
};

std::string to_string(QuoteService::QuoteError e);
std::string to_string(QuoteService::ContractError e);

}  // namespace qos
