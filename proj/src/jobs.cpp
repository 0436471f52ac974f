#include "qos/jobs.hpp"

#include <cmath>
#include <stdexcept>

namespace qos {

void validate(const JobType& jt) {
  if (jt.name.empty()) throw std::invalid_argument("job type needs a name");
  if (jt.fast.nodes < 1 || jt.slow.nodes < 1) {
    throw std::invalid_argument("job tier node counts must be >= 1");
  }
  if (!(jt.fast.minutes > 0.0) || !(jt.slow.minutes > 0.0)) {
    throw std::invalid_argument("job tier minutes must be positive");
  }
  if (!(jt.fast.minutes < jt.slow.minutes) || !(jt.fast.nodes > jt.slow.nodes)) {
    throw std::invalid_argument(
        "fast tier must use more nodes and finish sooner than slow");
  }
  if (!(jt.mix_probability > 0.0) || jt.mix_probability > 1.0) {
    throw std::invalid_argument("job mix probability must be in (0, 1]");
  }
}

void validate(const JobCatalog& catalog) {
  if (catalog.types.empty()) {
    throw std::invalid_argument("job catalog must have at least one type");
  }
  double total = 0.0;
  for (const auto& jt : catalog.types) {
    validate(jt);
    total += jt.mix_probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("job mix probabilities must sum to 1");
  }
  for (std::size_t i = 0; i < catalog.types.size(); ++i) {
    for (std::size_t j = i + 1; j < catalog.types.size(); ++j) {
      if (catalog.types[i].name == catalog.types[j].name) {
        throw std::invalid_argument("duplicate job type name: " +
                                    catalog.types[i].name);
      }
    }
  }
}

const JobType* find_job(const JobCatalog& catalog, const std::string& name) {
  for (const auto& jt : catalog.types) {
    if (jt.name == name) return &jt;
  }
  return nullptr;
}

double predict_minutes(const JobType& jt, int nodes) {
  if (nodes == jt.fast.nodes) return jt.fast.minutes;
  if (nodes == jt.slow.nodes) return jt.slow.minutes;
  throw std::invalid_argument("no prediction for node count " +
                              std::to_string(nodes));
}

std::size_t sample_job_type(const JobCatalog& catalog, RandomStream& rng) {
  validate(catalog);
  double u = rng.canonical();
  double cum = 0.0;
  for (std::size_t i = 0; i < catalog.types.size(); ++i) {
    cum += catalog.types[i].mix_probability;
    if (u < cum) return i;
  }
  return catalog.types.size() - 1;
}

}  // namespace qos
