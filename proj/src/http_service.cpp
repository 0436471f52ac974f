#include "qos/http_service.hpp"

#include <json.hpp>

namespace qos {

namespace {

using nlohmann::json;

void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json menu_json(const PriceMenu& menu) {
  auto tiers = json::array();
  for (const auto& t : menu.tiers) {
    tiers.push_back({{"tier", to_string(t.tier)},
                     {"completion_minutes", t.completion_minutes},
                     {"price", t.price},
                     {"nodes", t.nodes}});
  }
  return tiers;
}

}  // namespace

HttpQuoteServer::HttpQuoteServer(QuoteService& service) : service_(service) {
  install_routes();
}

HttpQuoteServer::~HttpQuoteServer() { stop(); }

void HttpQuoteServer::install_routes() {
  server_.Post("/v1/quote", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("tenant_id") ||
        !body.contains("job_type")) {
      reply_json(res, 400, {{"error", "expected tenant_id and job_type"}});
      return;
    }
    auto reply = service_.request_quote(body["tenant_id"].get<int>(),
                                        body["job_type"].get<std::string>());
    if (reply.error == QuoteService::QuoteError::unknown_job) {
      reply_json(res, 400, {{"error", to_string(reply.error)}});
      return;
    }
    if (reply.error == QuoteService::QuoteError::no_quote) {
      reply_json(res, 409, {{"error", to_string(reply.error)}});
      return;
    }
    reply_json(res, 200,
               {{"quote_id", reply.quote_id},
                {"tiers", menu_json(reply.menu)},
                {"expires_at", reply.expires_at}});
  });

  server_.Post("/v1/contract", [this](const httplib::Request& req,
                                      httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("quote_id") ||
        !body.contains("tier")) {
      reply_json(res, 400, {{"error", "expected quote_id and tier"}});
      return;
    }
    auto tier_name = body["tier"].get<std::string>();
    if (tier_name != "fast" && tier_name != "slow") {
      reply_json(res, 400, {{"error", "tier must be fast or slow"}});
      return;
    }
    auto reply = service_.accept_quote(
        body["quote_id"].get<std::string>(),
        tier_name == "fast" ? TierId::fast : TierId::slow);
    if (reply.error != QuoteService::ContractError::none) {
      reply_json(res, 409, {{"error", to_string(reply.error)}});
      return;
    }
    reply_json(res, 200,
               {{"contract_id", reply.contract.contract_id},
                {"start", reply.contract.start},
                {"promised_completion", reply.contract.promised_completion}});
  });

  server_.Get(R"(/v1/contracts/(\d+))", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    auto c = service_.contract(std::stoull(req.matches[1]));
    if (!c) {
      reply_json(res, 404, {{"error", "unknown contract"}});
      return;
    }
    bool done = service_.now() >= c->promised_completion;
    reply_json(res, 200,
               {{"contract_id", c->contract_id},
                {"tenant_id", c->tenant_id},
                {"tier", to_string(c->tier)},
                {"price", c->price},
                {"nodes", c->nodes},
                {"start", c->start},
                {"promised_completion", c->promised_completion},
                {"status", done ? "completed" : "running"}});
  });

  server_.Get("/v1/cluster",
              [this](const httplib::Request&, httplib::Response& res) {
                auto info = service_.cluster();
                reply_json(res, 200,
                           {{"capacity", info.capacity},
                            {"available", info.available}});
              });
}

bool HttpQuoteServer::listen(const std::string& host, int port) {
  return server_.listen(host, port);
}

int HttpQuoteServer::start_background(const std::string& host) {
  int port = server_.bind_to_any_port(host);
  if (port < 0) return -1;
  thread_ = std::thread([this] { server_.listen_after_bind(); });
  server_.wait_until_ready();
  return port;
}

void HttpQuoteServer::stop() {
  if (server_.is_running()) server_.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace qos
