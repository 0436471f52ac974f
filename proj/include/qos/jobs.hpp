#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qos/rng.hpp"

namespace qos {

struct JobTier {
  int nodes = 0;
  double minutes = 0.0;
};

// A workload class with its two offered cluster sizes and the predicted
// completion time for each, plus its share of the arriving traffic.
struct JobType {
  std::string name;
  JobTier fast;
  JobTier slow;
  double mix_probability = 0.0;
};

struct JobCatalog {
  std::vector<JobType> types;
};

void validate(const JobType& jt);
void validate(const JobCatalog& catalog);

// nullptr when no type carries that name.
const JobType* find_job(const JobCatalog& catalog, const std::string& name);

// Predicted completion time for one of the two offered node counts.
// Pure table lookup; no interpolation to other sizes.
double predict_minutes(const JobType& jt, int nodes);

// Categorical draw by traffic share; returns an index into catalog.types.
std::size_t sample_job_type(const JobCatalog& catalog, RandomStream& rng);

}  // namespace qos
