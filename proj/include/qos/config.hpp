#pragma once

#include <string>

#include "qos/jobs.hpp"
#include "qos/pricing.hpp"
#include "qos/sim.hpp"
#include "qos/wtp.hpp"

namespace qos {

struct ServiceConfig {
  int port = 8080;
  int capacity = 50;
  double quote_expiry_s = 60.0;
};

// Everything an experiment needs, loadable from one JSON file. Absent keys
// keep their built-in defaults, which reproduce the shipped two-type,
// two-job setup.
struct ExperimentConfig {
  int schema_version = 1;
  CustomerMix mix;
  JobCatalog catalog;
  PricingConfig pricing;
  SweepAxes sweep;
  ServiceConfig service;
  std::string output_path = "sweep.csv";
};

ExperimentConfig default_config();

void validate(const ExperimentConfig& cfg);

// Parses the JSON text, overlaying it on the defaults; throws on malformed
// input, unsupported schema_version, or invariant violations.
ExperimentConfig parse_config(const std::string& json_text);

ExperimentConfig load_config(const std::string& path);

}  // namespace qos
