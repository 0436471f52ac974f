#include <doctest.h>

#include <qos/ledger.hpp>
#include <qos/rng.hpp>

#include <stdexcept>
#include <vector>

using qos::ClusterLedger;

TEST_CASE("admission holds nodes until the release time passes") {
    ClusterLedger ledger(50);
    CHECK(ledger.available(0.0) == 50);
    CHECK(ledger.try_admit(1, 30, 0.0, 100.0));
    CHECK(ledger.available(50.0) == 20);
    CHECK(ledger.in_use(50.0) == 30);
    // Boundary: the allocation ends exactly at t=100 and frees its nodes there.
    CHECK(ledger.available(100.0) == 50);
    CHECK(ledger.available(99.999) == 20);
}

TEST_CASE("oversized requests are refused without side effects") {
    ClusterLedger ledger(50);
    CHECK(ledger.try_admit(1, 30, 0.0, 100.0));
    CHECK_FALSE(ledger.try_admit(2, 21, 10.0, 100.0));
    CHECK(ledger.available(10.0) == 20);
    CHECK(ledger.max_load() == 30);
    // The refused id remains usable later.
    CHECK(ledger.try_admit(2, 20, 10.0, 100.0));
    CHECK(ledger.available(10.0) == 0);
}

TEST_CASE("expired allocations make room for new ones") {
    ClusterLedger ledger(10);
    CHECK(ledger.try_admit(1, 10, 0.0, 60.0));
    CHECK_FALSE(ledger.try_admit(2, 1, 30.0, 60.0));
    CHECK(ledger.try_admit(3, 10, 60.0, 60.0));
    CHECK(ledger.max_load() == 10);
}

TEST_CASE("release_due reports expirations once, in admission order") {
    ClusterLedger ledger(50);
    CHECK(ledger.try_admit(11, 5, 0.0, 30.0));
    CHECK(ledger.try_admit(12, 5, 0.0, 10.0));
    CHECK(ledger.try_admit(13, 5, 0.0, 30.0));
    const std::vector<std::uint64_t> none = ledger.release_due(5.0);
    CHECK(none.empty());
    const std::vector<std::uint64_t> first = ledger.release_due(10.0);
    REQUIRE(first.size() == 1);
    CHECK(first[0] == 12);
    // Idempotent at the same instant.
    CHECK(ledger.release_due(10.0).empty());
    const std::vector<std::uint64_t> rest = ledger.release_due(30.0);
    REQUIRE(rest.size() == 2);
    CHECK(rest[0] == 11);
    CHECK(rest[1] == 13);
}

TEST_CASE("duplicate contract ids are rejected loudly") {
    ClusterLedger ledger(50);
    CHECK(ledger.try_admit(7, 5, 0.0, 10.0));
    CHECK_THROWS_AS(ledger.try_admit(7, 5, 0.0, 10.0), std::invalid_argument);
    // Even after the allocation expires the id stays burned.
    ledger.release_due(10.0);
    CHECK_THROWS_AS(ledger.try_admit(7, 5, 20.0, 10.0), std::invalid_argument);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(ClusterLedger(-1), std::invalid_argument);
    ClusterLedger ledger(10);
    CHECK_THROWS_AS(ledger.try_admit(1, 0, 0.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(ledger.try_admit(1, 5, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ledger.try_admit(1, 5, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("zero-capacity cluster admits nothing") {
    ClusterLedger ledger(0);
    CHECK(ledger.available(0.0) == 0);
    CHECK_FALSE(ledger.try_admit(1, 1, 0.0, 10.0));
    CHECK(ledger.max_load() == 0);
}

TEST_CASE("max load is a high-water mark") {
    ClusterLedger ledger(100);
    CHECK(ledger.try_admit(1, 40, 0.0, 50.0));
    CHECK(ledger.try_admit(2, 40, 10.0, 50.0));
    CHECK(ledger.max_load() == 80);
    ledger.release_due(60.0);
    CHECK(ledger.in_use(60.0) == 0);
    CHECK(ledger.max_load() == 80);
    CHECK(ledger.try_admit(3, 10, 70.0, 10.0));
    CHECK(ledger.max_load() == 80);
}

TEST_CASE("node conservation holds under random traffic") {
    // Dense random admissions and releases; at every step the ledger must
    // satisfy in_use + available == capacity and 0 <= in_use <= capacity.
    const int capacity = 37;
    ClusterLedger ledger(capacity);
    qos::RandomStream rng(12345);
    double now = 0.0;
    std::uint64_t next_id = 1;
    int admitted = 0;
    int refused = 0;
    for (int step = 0; step < 10000; ++step) {
        now += rng.exponential(5.0);
        ledger.release_due(now);
        const int nodes = static_cast<int>(rng.uniform_int(12)) + 1;
        const double hold = rng.uniform(1.0, 120.0);
        const bool ok = ledger.try_admit(next_id++, nodes, now, hold);
        (ok ? admitted : refused)++;
        const int used = ledger.in_use(now);
        const int avail = ledger.available(now);
        CHECK(used + avail == capacity);
        CHECK(used >= 0);
        CHECK(used <= capacity);
        CHECK(ledger.max_load() <= capacity);
        if (ok) CHECK(used >= nodes);
    }
    // The workload is heavy enough to exercise both outcomes.
    CHECK(admitted > 1000);
    CHECK(refused > 100);
}

TEST_CASE("admission is monotone in free capacity") {
    // If a request fits at some instant, the same request also fits after
    // more nodes have been released.
    ClusterLedger a(20);
    ClusterLedger b(20);
    CHECK(a.try_admit(1, 15, 0.0, 100.0));
    CHECK(b.try_admit(1, 15, 0.0, 50.0));
    // a still holds 15 nodes at t=60; b has released them.
    CHECK_FALSE(a.try_admit(2, 10, 60.0, 10.0));
    CHECK(b.try_admit(2, 10, 60.0, 10.0));
}
