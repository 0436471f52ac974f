#include <doctest.h>

#include <qos/jobs.hpp>
#include <qos/rng.hpp>

#include <stdexcept>

using qos::JobCatalog;
using qos::JobTier;
using qos::JobType;
using qos::RandomStream;

namespace {

JobCatalog nominal_catalog() {
    JobCatalog cat;
    cat.types.push_back(JobType{"IO", JobTier{10, 23.0}, JobTier{3, 51.0}, 0.5});
    cat.types.push_back(JobType{"CPU", JobTier{10, 5.0}, JobTier{3, 9.0}, 0.5});
    return cat;
}

}  // namespace

TEST_CASE("runtime lookup returns the profiled minutes per cluster size") {
    const JobCatalog cat = nominal_catalog();
    CHECK(qos::predict_minutes(cat.types[0], 10) == 23.0);
    CHECK(qos::predict_minutes(cat.types[0], 3) == 51.0);
    CHECK(qos::predict_minutes(cat.types[1], 10) == 5.0);
    CHECK(qos::predict_minutes(cat.types[1], 3) == 9.0);
}

TEST_CASE("unprofiled cluster sizes are rejected") {
    const JobCatalog cat = nominal_catalog();
    CHECK_THROWS_AS(qos::predict_minutes(cat.types[0], 5), std::invalid_argument);
    CHECK_THROWS_AS(qos::predict_minutes(cat.types[0], 0), std::invalid_argument);
}

TEST_CASE("catalog validation enforces the speed-size tradeoff") {
    CHECK_NOTHROW(qos::validate(nominal_catalog()));

    JobCatalog slow_fast = nominal_catalog();
    slow_fast.types[0].fast.minutes = 60.0;  // fast tier must be faster
    CHECK_THROWS_AS(qos::validate(slow_fast), std::invalid_argument);

    JobCatalog small_fast = nominal_catalog();
    small_fast.types[0].fast.nodes = 2;  // fast tier must use more nodes
    CHECK_THROWS_AS(qos::validate(small_fast), std::invalid_argument);

    JobCatalog bad_mix = nominal_catalog();
    bad_mix.types[0].mix_probability = 0.7;  // mix must sum to one
    CHECK_THROWS_AS(qos::validate(bad_mix), std::invalid_argument);

    JobCatalog empty;
    CHECK_THROWS_AS(qos::validate(empty), std::invalid_argument);

    JobCatalog dup = nominal_catalog();
    dup.types[1].name = "IO";
    CHECK_THROWS_AS(qos::validate(dup), std::invalid_argument);
}

TEST_CASE("job type sampling follows the mix probabilities") {
    JobCatalog cat = nominal_catalog();
    cat.types[0].mix_probability = 0.25;
    cat.types[1].mix_probability = 0.75;
    RandomStream rng(19);
    int first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = qos::sample_job_type(cat, rng);
        REQUIRE(k < 2);
        if (k == 0) ++first;
    }
    CHECK(static_cast<double>(first) / n == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("catalog lookup by name") {
    const JobCatalog cat = nominal_catalog();
    const JobType* io = qos::find_job(cat, "IO");
    REQUIRE(io != nullptr);
    CHECK(io->fast.nodes == 10);
    CHECK(qos::find_job(cat, "GPU") == nullptr);
}
