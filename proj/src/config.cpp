#include "qos/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qos {

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.mix.types = {
      {1, 0.5, 100.0, 120.0, 20.0, 30.0},
      {2, 0.5, 45.0, 55.0, 60.0, 70.0},
  };
  cfg.catalog.types = {
      {"IO", {10, 23.0}, {3, 51.0}, 0.5},
      {"CPU", {10, 5.0}, {3, 9.0}, 0.5},
  };
  cfg.sweep.capacities = {50, 75, 100, 125, 150};
  cfg.sweep.mean_iats_s = {20.0, 25.0, 30.0, 35.0, 40.0, 45.0};
  cfg.sweep.seeds = {1, 2, 3, 4, 5};
  cfg.sweep.horizon_s = 3600.0;
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.schema_version != 1) {
    throw std::invalid_argument("unsupported schema_version");
  }
  validate(cfg.mix);
  validate(cfg.catalog);
  validate(cfg.pricing, cfg.mix);
  validate(cfg.sweep);
  if (cfg.service.capacity < 0) {
    throw std::invalid_argument("service capacity must be >= 0");
  }
  if (cfg.service.port < 1 || cfg.service.port > 65535) {
    throw std::invalid_argument("service port out of range");
  }
  if (!(cfg.service.quote_expiry_s > 0.0)) {
    throw std::invalid_argument("quote expiry must be positive");
  }
  if (cfg.output_path.empty()) {
    throw std::invalid_argument("output path must be set");
  }
}

namespace {

using nlohmann::json;

void parse_mix(const json& j, CustomerMix& mix) {
  mix.types.clear();
  for (const auto& t : j.at("types")) {
    CustomerType ct;
    ct.id = t.at("id").get<int>();
    ct.probability = t.at("probability").get<double>();
    auto m = t.at("max_wtp");
    auto d = t.at("deadline");
    ct.max_wtp_lo = m.at(0).get<double>();
    ct.max_wtp_hi = m.at(1).get<double>();
    ct.deadline_lo = d.at(0).get<double>();
    ct.deadline_hi = d.at(1).get<double>();
    mix.types.push_back(ct);
  }
}

void parse_catalog(const json& j, JobCatalog& catalog) {
  catalog.types.clear();
  for (const auto& t : j.at("types")) {
    JobType jt;
    jt.name = t.at("name").get<std::string>();
    jt.mix_probability = t.at("mix_probability").get<double>();
    jt.fast = {t.at("fast").at("nodes").get<int>(),
               t.at("fast").at("minutes").get<double>()};
    jt.slow = {t.at("slow").at("nodes").get<int>(),
               t.at("slow").at("minutes").get<double>()};
    catalog.types.push_back(jt);
  }
}

void parse_pricing(const json& j, PricingConfig& p) {
  if (j.contains("price_upper_bound")) {
    p.price_upper_bound = j["price_upper_bound"].get<double>();
  }
  if (j.contains("coarse_grid_points")) {
    p.coarse_grid_points = j["coarse_grid_points"].get<int>();
  }
  if (j.contains("refinement_rounds")) {
    p.refinement_rounds = j["refinement_rounds"].get<int>();
  }
  if (j.contains("contention_premium_slope")) {
    p.contention_premium_slope = j["contention_premium_slope"].get<double>();
  }
  if (j.contains("estimator")) {
    const auto& e = j["estimator"];
    if (e.contains("kind")) {
      auto kind = e["kind"].get<std::string>();
      if (kind == "quadrature") {
        p.estimator.kind = EstimatorKind::quadrature;
      } else if (kind == "monte_carlo") {
        p.estimator.kind = EstimatorKind::monte_carlo;
      } else {
        throw std::invalid_argument("unknown estimator kind: " + kind);
      }
    }
    if (e.contains("quadrature_resolution")) {
      p.estimator.quadrature_resolution = e["quadrature_resolution"].get<int>();
    }
    if (e.contains("monte_carlo_samples")) {
      p.estimator.monte_carlo_samples =
          e["monte_carlo_samples"].get<std::size_t>();
    }
    if (e.contains("monte_carlo_seed")) {
      p.estimator.monte_carlo_seed =
          e["monte_carlo_seed"].get<std::uint64_t>();
    }
  }
}

void parse_sweep(const json& j, SweepAxes& s) {
  if (j.contains("capacities")) {
    s.capacities = j["capacities"].get<std::vector<int>>();
  }
  if (j.contains("mean_iats_s")) {
    s.mean_iats_s = j["mean_iats_s"].get<std::vector<double>>();
  }
  if (j.contains("seeds")) {
    s.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  }
  if (j.contains("horizon_s")) s.horizon_s = j["horizon_s"].get<double>();
}

void parse_service(const json& j, ServiceConfig& s) {
  if (j.contains("port")) s.port = j["port"].get<int>();
  if (j.contains("capacity")) s.capacity = j["capacity"].get<int>();
  if (j.contains("quote_expiry_s")) {
    s.quote_expiry_s = j["quote_expiry_s"].get<double>();
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed config JSON: ") +
                                e.what());
  }
  ExperimentConfig cfg = default_config();
  try {
    if (j.contains("schema_version")) {
      cfg.schema_version = j["schema_version"].get<int>();
    }
    if (j.contains("customer_mix")) parse_mix(j["customer_mix"], cfg.mix);
    if (j.contains("job_catalog")) parse_catalog(j["job_catalog"], cfg.catalog);
    if (j.contains("pricing")) parse_pricing(j["pricing"], cfg.pricing);
    if (j.contains("sweep")) parse_sweep(j["sweep"], cfg.sweep);
    if (j.contains("service")) parse_service(j["service"], cfg.service);
    if (j.contains("output")) cfg.output_path = j["output"].get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config field: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qos
