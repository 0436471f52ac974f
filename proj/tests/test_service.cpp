#include <doctest.h>

#include <qos/http_service.hpp>
#include <qos/service.hpp>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <thread>
#include <vector>

using json = nlohmann::json;
using qos::CustomerMix;
using qos::CustomerType;
using qos::JobCatalog;
using qos::JobTier;
using qos::JobType;
using qos::PricingConfig;
using qos::QuoteService;
using qos::ServiceConfig;
using qos::TierId;

namespace {

CustomerMix nominal_mix() {
    return CustomerMix{{CustomerType{1, 0.5, 100.0, 120.0, 20.0, 30.0},
                        CustomerType{2, 0.5, 45.0, 55.0, 60.0, 70.0}}};
}

JobCatalog nominal_catalog() {
    JobCatalog cat;
    cat.types.push_back(JobType{"IO", JobTier{10, 23.0}, JobTier{3, 51.0}, 0.5});
    cat.types.push_back(JobType{"CPU", JobTier{10, 5.0}, JobTier{3, 9.0}, 0.5});
    return cat;
}

PricingConfig fast_cfg() {
    PricingConfig cfg;
    cfg.estimator.quadrature_resolution = 128;
    return cfg;
}

struct FakeClock {
    std::shared_ptr<double> t = std::make_shared<double>(0.0);
    QuoteService::Clock fn() const {
        auto p = t;
        return [p] { return *p; };
    }
};

QuoteService make_service(const FakeClock& clk, int capacity = 50) {
    ServiceConfig cfg;
    cfg.capacity = capacity;
    cfg.quote_expiry_s = 60.0;
    return QuoteService(cfg, nominal_mix(), nominal_catalog(), fast_cfg(), clk.fn());
}

}  // namespace

TEST_CASE("quoting offers both tiers and leaves the cluster untouched") {
    FakeClock clk;
    QuoteService svc = make_service(clk);
    const auto reply = svc.request_quote(1, "IO");
    REQUIRE(reply.error == QuoteService::QuoteError::none);
    CHECK(!reply.quote_id.empty());
    CHECK(reply.expires_at == 60.0);
    REQUIRE(reply.menu.tiers.size() == 2);
    CHECK(reply.menu.tiers[0].tier == TierId::fast);
    CHECK(reply.menu.tiers[0].nodes == 10);
    CHECK(reply.menu.tiers[0].price > 0.0);
    // Quoting reserves nothing.
    CHECK(svc.cluster().available == 50);
    // Quote ids are unique.
    CHECK(svc.request_quote(1, "IO").quote_id != reply.quote_id);
}

TEST_CASE("unknown jobs cannot be quoted") {
    FakeClock clk;
    QuoteService svc = make_service(clk);
    CHECK(svc.request_quote(1, "GPU").error == QuoteService::QuoteError::unknown_job);
}

TEST_CASE("no free tier means no quote") {
    FakeClock clk;
    QuoteService svc = make_service(clk, 2);  // below even the slow tier
    CHECK(svc.request_quote(1, "IO").error == QuoteService::QuoteError::no_quote);
}

TEST_CASE("tight capacity degrades the quote to the slow tier") {
    FakeClock clk;
    QuoteService svc = make_service(clk, 5);
    const auto reply = svc.request_quote(1, "IO");
    REQUIRE(reply.error == QuoteService::QuoteError::none);
    REQUIRE(reply.menu.tiers.size() == 1);
    CHECK(reply.menu.tiers[0].tier == TierId::slow);
}

TEST_CASE("accepting a quote books nodes and returns the contract") {
    FakeClock clk;
    QuoteService svc = make_service(clk);
    const auto quote = svc.request_quote(3, "IO");
    *clk.t = 10.0;
    const auto reply = svc.accept_quote(quote.quote_id, TierId::fast);
    REQUIRE(reply.error == QuoteService::ContractError::none);
    CHECK(reply.contract.tenant_id == 3);
    CHECK(reply.contract.nodes == 10);
    CHECK(reply.contract.start == 10.0);
    CHECK(reply.contract.promised_completion == doctest::Approx(10.0 + 23.0 * 60.0));
    CHECK(reply.contract.price == quote.menu.tiers[0].price);
    CHECK(svc.cluster().available == 40);

    const auto fetched = svc.contract(reply.contract.contract_id);
    REQUIRE(fetched.has_value());
    CHECK(fetched->price == reply.contract.price);
    CHECK_FALSE(svc.contract(999).has_value());

    // Nodes come back after the promised completion.
    *clk.t = 10.0 + 23.0 * 60.0 + 1.0;
    CHECK(svc.cluster().available == 50);
}

TEST_CASE("a quote can be accepted once and only before expiry") {
    FakeClock clk;
    QuoteService svc = make_service(clk);
    const auto quote = svc.request_quote(1, "IO");

    const auto ok = svc.accept_quote(quote.quote_id, TierId::slow);
    REQUIRE(ok.error == QuoteService::ContractError::none);
    const auto dup = svc.accept_quote(quote.quote_id, TierId::slow);
    CHECK(dup.error == QuoteService::ContractError::already_accepted);

    const auto stale = svc.request_quote(1, "IO");
    *clk.t = 61.0;  // past expires_at = 60
    const auto late = svc.accept_quote(stale.quote_id, TierId::fast);
    CHECK(late.error == QuoteService::ContractError::expired);

    CHECK(svc.accept_quote("q-9999", TierId::fast).error ==
          QuoteService::ContractError::unknown_quote);
}

TEST_CASE("accepting a tier that was never quoted fails") {
    FakeClock clk;
    QuoteService svc = make_service(clk, 5);  // slow-only quotes
    const auto quote = svc.request_quote(1, "IO");
    REQUIRE(quote.menu.tiers.size() == 1);
    const auto reply = svc.accept_quote(quote.quote_id, TierId::fast);
    CHECK(reply.error == QuoteService::ContractError::unknown_tier);
}

TEST_CASE("capacity taken after quoting makes acceptance infeasible") {
    FakeClock clk;
    QuoteService svc = make_service(clk, 12);
    const auto a = svc.request_quote(1, "IO");
    const auto b = svc.request_quote(2, "IO");
    REQUIRE(a.error == QuoteService::QuoteError::none);
    REQUIRE(b.error == QuoteService::QuoteError::none);
    REQUIRE(svc.accept_quote(a.quote_id, TierId::fast).error ==
            QuoteService::ContractError::none);
    // Only 2 nodes remain; the second fast quote no longer fits.
    const auto reply = svc.accept_quote(b.quote_id, TierId::fast);
    CHECK(reply.error == QuoteService::ContractError::infeasible);
    CHECK(svc.cluster().available == 2);
}

TEST_CASE("concurrent acceptances never oversubscribe the cluster") {
    FakeClock clk;
    QuoteService svc = make_service(clk, 50);
    // 20 tenants hold fast quotes needing 10 nodes each; at most 5 can land.
    std::vector<std::string> ids;
    for (int i = 0; i < 20; ++i) ids.push_back(svc.request_quote(i, "IO").quote_id);
    std::atomic<int> won{0};
    std::vector<std::thread> threads;
    threads.reserve(ids.size());
    for (const auto& id : ids) {
        threads.emplace_back([&svc, &won, id] {
            if (svc.accept_quote(id, TierId::fast).error ==
                QuoteService::ContractError::none) {
                won.fetch_add(1);
            }
        });
    }
    for (auto& t : threads) t.join();
    CHECK(won.load() == 5);
    CHECK(svc.cluster().available == 0);
}

TEST_CASE("http round trip covers quote, contract, and status") {
    FakeClock clk;
    QuoteService svc = make_service(clk);
    qos::HttpQuoteServer server(svc);
    const int port = server.start_background("127.0.0.1");
    REQUIRE(port > 0);
    httplib::Client client("127.0.0.1", port);

    auto cluster = client.Get("/v1/cluster");
    REQUIRE(cluster);
    CHECK(cluster->status == 200);
    CHECK(json::parse(cluster->body)["capacity"] == 50);

    auto quote = client.Post("/v1/quote", R"({"tenant_id": 4, "job_type": "IO"})",
                             "application/json");
    REQUIRE(quote);
    REQUIRE(quote->status == 200);
    const json q = json::parse(quote->body);
    CHECK(q["tiers"].size() == 2);
    const std::string quote_id = q["quote_id"];

    auto contract = client.Post(
        "/v1/contract",
        json{{"quote_id", quote_id}, {"tier", "fast"}}.dump(),
        "application/json");
    REQUIRE(contract);
    REQUIRE(contract->status == 200);
    const json c = json::parse(contract->body);
    const auto cid = c["contract_id"].get<std::uint64_t>();

    auto status = client.Get("/v1/contracts/" + std::to_string(cid));
    REQUIRE(status);
    CHECK(status->status == 200);
    CHECK(json::parse(status->body)["status"] == "running");

    *clk.t = 23.0 * 60.0 + 1.0;
    auto done = client.Get("/v1/contracts/" + std::to_string(cid));
    REQUIRE(done);
    CHECK(json::parse(done->body)["status"] == "completed");

    server.stop();
}

TEST_CASE("http surfaces client errors with useful statuses") {
    FakeClock clk;
    QuoteService svc = make_service(clk);
    qos::HttpQuoteServer server(svc);
    const int port = server.start_background("127.0.0.1");
    REQUIRE(port > 0);
    httplib::Client client("127.0.0.1", port);

    auto bad_json = client.Post("/v1/quote", "{oops", "application/json");
    REQUIRE(bad_json);
    CHECK(bad_json->status == 400);

    auto bad_job = client.Post("/v1/quote", R"({"tenant_id": 1, "job_type": "GPU"})",
                               "application/json");
    REQUIRE(bad_job);
    CHECK(bad_job->status == 400);

    auto bad_tier = client.Post("/v1/contract",
                                R"({"quote_id": "q-1", "tier": "warp"})",
                                "application/json");
    REQUIRE(bad_tier);
    CHECK(bad_tier->status == 400);

    auto missing_quote = client.Post("/v1/contract",
                                     R"({"quote_id": "q-404", "tier": "fast"})",
                                     "application/json");
    REQUIRE(missing_quote);
    CHECK(missing_quote->status == 409);

    auto missing_contract = client.Get("/v1/contracts/424242");
    REQUIRE(missing_contract);
    CHECK(missing_contract->status == 404);

    server.stop();
}

TEST_CASE("error descriptions render") {
    CHECK(qos::to_string(QuoteService::QuoteError::unknown_job) == "unknown job type");
    CHECK(!qos::to_string(QuoteService::ContractError::expired).empty());
    CHECK(!qos::to_string(QuoteService::ContractError::infeasible).empty());
}
