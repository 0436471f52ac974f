#include "qos/service.hpp"

#include <chrono>
#include <stdexcept>

namespace qos {

namespace {

double wall_seconds() {
  return std::chrono::duration<double>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

QuoteService::QuoteService(const ServiceConfig& cfg, CustomerMix mix,
                           JobCatalog catalog, PricingConfig pricing,
                           Clock clock)
    : cfg_(cfg),
      mix_(std::move(mix)),
      catalog_(std::move(catalog)),
      pricing_(std::move(pricing)),
      clock_(clock ? std::move(clock) : Clock(wall_seconds)),
      ledger_(cfg.capacity) {
  validate(mix_);
  validate(catalog_);
  validate(pricing_, mix_);
  if (!(cfg_.quote_expiry_s > 0.0)) {
    throw std::invalid_argument("quote expiry must be positive");
  }
}

QuoteService::QuoteReply QuoteService::request_quote(
    int tenant_id, const std::string& job_type) {
  const JobType* job = find_job(catalog_, job_type);
  if (!job) return {QuoteError::unknown_job, {}, {}, 0.0};

  double now = clock_();
  TierLayout tiers;
  {
    std::lock_guard lock(mu_);
    ledger_.release_due(now);
    int avail = ledger_.available(now);
    if (job->fast.nodes <= avail) tiers.fast = job->fast;
    if (job->slow.nodes <= avail) tiers.slow = job->slow;
  }
  if (!tiers.fast && !tiers.slow) return {QuoteError::no_quote, {}, {}, 0.0};

  // The optimizer runs outside the ledger lock; acceptance re-checks
  // feasibility anyway.
  PriceMenu menu = menus_.get(mix_, pricing_, tiers, 0.0).menu;

  std::lock_guard lock(mu_);
  QuoteReply reply;
  reply.quote_id = "q-" + std::to_string(next_quote_++);
  reply.menu = menu;
  reply.expires_at = now + cfg_.quote_expiry_s;
  sessions_[reply.quote_id] = {tenant_id, menu, reply.expires_at, false};
  return reply;
}

QuoteService::ContractReply QuoteService::accept_quote(
    const std::string& quote_id, TierId tier) {
  double now = clock_();
  std::lock_guard lock(mu_);
  auto it = sessions_.find(quote_id);
  if (it == sessions_.end()) return {ContractError::unknown_quote, {}};
  Session& session = it->second;
  if (session.accepted) return {ContractError::already_accepted, {}};
  if (now > session.expires_at) return {ContractError::expired, {}};
  const MenuTier* t = find_tier(session.menu, tier);
  if (!t) return {ContractError::unknown_tier, {}};

  ledger_.release_due(now);
  if (ledger_.available(now) < t->nodes) return {ContractError::infeasible, {}};

  Contract c;
  c.contract_id = next_contract_++;
  c.tenant_id = session.tenant_id;
  c.tier = t->tier;
  c.price = t->price;
  c.nodes = t->nodes;
  c.start = now;
  c.promised_completion = now + t->completion_minutes * 60.0;
  c.actual_completion = c.promised_completion;
  c.succeeded = true;
  if (!ledger_.try_admit(c.contract_id, c.nodes, now,
                         t->completion_minutes * 60.0)) {
    throw std::logic_error("admission failed after feasibility check");
  }
  session.accepted = true;
  contracts_[c.contract_id] = c;
  return {ContractError::none, c};
}

std::optional<Contract> QuoteService::contract(std::uint64_t contract_id) const {
  std::lock_guard lock(mu_);
  auto it = contracts_.find(contract_id);
  if (it == contracts_.end()) return std::nullopt;
  return it->second;
}

QuoteService::ClusterInfo QuoteService::cluster() const {
  double now = clock_();
  std::lock_guard lock(mu_);
  return {ledger_.capacity(), ledger_.available(now)};
}

std::string to_string(QuoteService::QuoteError e) {
  switch (e) {
    case QuoteService::QuoteError::none: return "none";
    case QuoteService::QuoteError::unknown_job: return "unknown job type";
    default: return "no feasible tier";
  }
}

std::string to_string(QuoteService::ContractError e) {
  switch (e) {
    case QuoteService::ContractError::none: return "none";
    case QuoteService::ContractError::unknown_quote: return "unknown quote";
    case QuoteService::ContractError::expired: return "quote expired";
    case QuoteService::ContractError::already_accepted:
      return "quote already accepted";
    case QuoteService::ContractError::unknown_tier:
      return "tier not in quoted menu";
    default: return "tier no longer feasible";
  }
}

}  // namespace qos
