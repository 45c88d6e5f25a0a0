#include <doctest.h>

#include <cmath>
#include <vector>

#include "thzsim/event_queue.hpp"
#include "thzsim/rng.hpp"
#include "thzsim/time.hpp"

using namespace thzsim;

TEST_CASE("events dispatch in time order") {
    EventQueue q;
    std::vector<int> order;
    q.schedule(100, EventKind::SimEnd, 0, [&] { order.push_back(100); });
    q.schedule(50, EventKind::SimEnd, 0, [&] { order.push_back(50); });
    CHECK(q.run_until(200) == 2);
    CHECK(order == std::vector<int>{50, 100});
    CHECK(q.now() == 200);
}

TEST_CASE("simultaneous events dispatch in insertion order") {
    EventQueue q;
    std::vector<int> order;
    q.schedule(0, EventKind::SimEnd, 0, [&] { order.push_back(1); });
    q.schedule(0, EventKind::SimEnd, 0, [&] { order.push_back(2); });
    q.schedule(0, EventKind::SimEnd, 0, [&] { order.push_back(3); });
    q.run_until(1);
    CHECK(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("cancelled events never dispatch") {
    EventQueue q;
    int fired = 0;
    EventHandle h = q.schedule(10, EventKind::WaitExpiry, 0, [&] { ++fired; });
    q.schedule(20, EventKind::SimEnd, 0, [&] { ++fired; });
    q.cancel(h);
    CHECK(q.run_until(100) == 1);
    CHECK(fired == 1);
}

TEST_CASE("scheduling in the past is a hard fault") {
    EventQueue q;
    q.schedule(10, EventKind::SimEnd, 0, [] {});
    q.run_until(50);
    CHECK_THROWS_AS(q.schedule(49, EventKind::SimEnd, 0, [] {}), std::logic_error);
}

TEST_CASE("empty queue run leaves clock at end") {
    EventQueue q;
    CHECK(q.run_until(500 * kMicrosecond) == 0);
    CHECK(q.now() == 500'000'000);  // 0.5 ms = 5e8 ps
}

TEST_CASE("events scheduled mid-run chain correctly") {
    EventQueue q;
    int count = 0;
    std::function<void()> chain = [&] {
        ++count;
        if (count < 5) q.schedule(q.now() + 7, EventKind::SimEnd, 0, chain);
    };
    q.schedule(0, EventKind::SimEnd, 0, chain);
    CHECK(q.run_until(100) == 5);
    CHECK(count == 5);
}

TEST_CASE("rng degenerate and invalid ranges") {
    RngStream r(42, "test");
    CHECK(r.uniform_int(1, 1) == 1);
    CHECK_THROWS_AS(r.uniform_int(2, 1), std::logic_error);
}

TEST_CASE("rng streams are reproducible per (seed, label)") {
    RngStream a(7, "backoff:3"), b(7, "backoff:3"), c(8, "backoff:3"), d(7, "backoff:4");
    bool all_eq = true, any_diff_seed = false, any_diff_label = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        all_eq &= va == b.next_u64();
        any_diff_seed |= va != c.next_u64();
        any_diff_label |= va != d.next_u64();
    }
    CHECK(all_eq);
    CHECK(any_diff_seed);
    CHECK(any_diff_label);
}

TEST_CASE("uniform_int frequencies within 5 sigma") {
    RngStream r(123, "chi");
    std::vector<int> freq(11, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const std::int64_t v = r.uniform_int(1, 10);
        REQUIRE(v >= 1);
        REQUIRE(v <= 10);
        ++freq[v];
    }
    // sigma = sqrt(n * 0.1 * 0.9) = 94.87, so 5 sigma = 474.3
    for (int v = 1; v <= 10; ++v) {
        CHECK(std::abs(freq[v] - 10000) < 474.35);
    }
}

TEST_CASE("uniform01 stays in [0, 1)") {
    RngStream r(5, "u01");
    for (int i = 0; i < 10000; ++i) {
        const double x = r.uniform01();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
}
