#include <doctest.h>

#include <cmath>
#include <limits>

#include "thzsim/coverage.hpp"
#include "thzsim/errors.hpp"
#include "thzsim/scenario.hpp"

using namespace thzsim;

namespace {

Plant default_plant() {
    return build_plant({52.36, 35.4, 8.5}, default_machine_layout());
}

ChannelModel default_channel() { return ChannelModel{}; }

}  // namespace

TEST_CASE("default layout clutter density is sparse") {
    const Plant p = default_plant();
    // 4 small (2 m) + 4 large (4 m): (4*4 + 4*16) / (52.36 * 35.4)
    CHECK(p.clutter_density() == doctest::Approx(0.0431606).epsilon(1e-4));
    CHECK(p.clutter_density() < 0.4);
    CHECK(p.clutter_height() == doctest::Approx(4.0));
}

TEST_CASE("empty plant has zero clutter") {
    const Plant p = build_plant({52.36, 35.4, 8.5}, {});
    CHECK(p.clutter_density() == 0.0);
}

TEST_CASE("invalid machine layouts are rejected") {
    CHECK_THROWS_AS(build_plant({52.36, 35.4, 8.5}, {{60.0, 10.0, 4.0}}), ConfigError);
    CHECK_THROWS_AS(build_plant({52.36, 35.4, 8.5}, {{1.0, 10.0, 4.0}}), ConfigError);
    CHECK_THROWS_AS(build_plant({52.36, 35.4, 8.5}, {{10, 10, 4}, {12, 10, 4}}),
                    ConfigError);
    CHECK_THROWS_AS(build_plant({52.36, 35.4, 8.5}, {{10, 10, 0}}), ConfigError);
}

TEST_CASE("BS sits centered on the ceiling") {
    const Plant p = default_plant();
    CHECK(p.bs_position() == Vec3{52.36 / 2, 35.4 / 2, 8.5});
}

TEST_CASE("intra-machine links are NLOS") {
    const Plant p = build_plant({52.36, 35.4, 8.5}, {{10, 10, 4}});
    const LinkClass lc = classify_link({9, 10, 1}, {11, 10, 2}, p);
    CHECK_FALSE(lc.los);
    CHECK(lc.height == HeightClass::Low);
}

TEST_CASE("links above the clutter with a clear path are LOS high") {
    const Plant p = build_plant({52.36, 35.4, 8.5}, {{10, 10, 4}});
    const LinkClass lc = classify_link({20, 20, 6}, {30, 20, 6}, p);
    CHECK(lc.los);
    CHECK(lc.height == HeightClass::High);
}

TEST_CASE("a UE inside a machine never sees the ceiling BS in LOS") {
    const Plant p = default_plant();
    for (const Box& m : p.machines) {
        const Vec3 inside{(m.lo.x + m.hi.x) / 2, (m.lo.y + m.hi.y) / 2,
                          (m.lo.z + m.hi.z) / 2};
        CHECK_FALSE(classify_link(inside, p.bs_position(), p).los);
        CHECK(classify_link(inside, p.bs_position(), p).height == HeightClass::High);
    }
}

TEST_CASE("classification is symmetric") {
    const Plant p = default_plant();
    RngStream rng(11, "sym");
    for (int i = 0; i < 200; ++i) {
        const Vec3 a{rng.uniform(0, 52.36), rng.uniform(0, 35.4), rng.uniform(0, 8.5)};
        const Vec3 b{rng.uniform(0, 52.36), rng.uniform(0, 35.4), rng.uniform(0, 8.5)};
        const LinkClass ab = classify_link(a, b, p);
        const LinkClass ba = classify_link(b, a, p);
        CHECK(ab == ba);
    }
}

TEST_CASE("placement meets the half-connected constraint") {
    const Plant p = default_plant();
    const ChannelModel ch = default_channel();
    for (int n : {4, 12}) {
        RngStream rng(21, "placement");
        const NodePlacement pl = place_ues(p, n, rng, ch);
        REQUIRE(static_cast<int>(pl.ue_pos.size()) == n);
        int connected = 0;
        for (const Vec3& u : pl.ue_pos) {
            if (uplink_budget(u, p, ch).decodable) ++connected;
        }
        CHECK(connected == n / 2);
        for (std::size_t j = 0; j < pl.ue_pos.size(); ++j) {
            const int m = pl.containing_machine[j];
            REQUIRE(m >= 0);
            CHECK(p.machines[m].contains(pl.ue_pos[j]));
            CHECK(p.machine_containing(pl.ue_pos[j]) == m);
            CHECK(distance(pl.ue_pos[j], pl.bs_pos) <= 63.78);
        }
    }
}

TEST_CASE("placement is deterministic under a fixed seed") {
    const Plant p = default_plant();
    const ChannelModel ch = default_channel();
    RngStream r1(77, "placement"), r2(77, "placement");
    const NodePlacement a = place_ues(p, 12, r1, ch);
    const NodePlacement b = place_ues(p, 12, r2, ch);
    for (int j = 0; j < 12; ++j) CHECK(a.ue_pos[j] == b.ue_pos[j]);
}

TEST_CASE("placement rejects invalid inputs and impossible constraints") {
    const Plant p = default_plant();
    ChannelModel ch = default_channel();
    RngStream rng(5, "placement");
    CHECK_THROWS_AS(place_ues(p, 3, rng, ch), ConfigError);
    CHECK_THROWS_AS(place_ues(p, 0, rng, ch), ConfigError);
    ch.params.snr_threshold_db = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(place_ues(p, 4, rng, ch, 500), ConfigError);
}

TEST_CASE("mobility epochs relocate UEs per p_move") {
    const Plant p = default_plant();
    const ChannelModel ch = default_channel();
    RngStream prng(31, "placement");
    NodePlacement pl = place_ues(p, 8, prng, ch);
    const NodePlacement before = pl;

    RngStream m0(31, "mobility");
    mobility_epoch(pl, p, 0.0, m0);
    for (int j = 0; j < 8; ++j) CHECK(pl.ue_pos[j] == before.ue_pos[j]);

    RngStream m1(31, "mobility");
    mobility_epoch(pl, p, 1.0, m1);
    for (int j = 0; j < 8; ++j) {
        CHECK_FALSE(pl.ue_pos[j] == before.ue_pos[j]);
        CHECK(p.machines[pl.containing_machine[j]].contains(pl.ue_pos[j]));
    }
}

TEST_CASE("mobility eventually changes someone's neighbor set") {
    const Plant p = default_plant();
    const ChannelModel ch = default_channel();
    auto neighbor_sets = [&](const NodePlacement& pl) {
        std::vector<std::vector<bool>> ns(pl.ue_pos.size());
        for (std::size_t a = 0; a < pl.ue_pos.size(); ++a) {
            for (std::size_t b = 0; b < pl.ue_pos.size(); ++b) {
                if (a == b) continue;
                const LinkBudget lb =
                    ch.link_budget(pl.ue_pos[a], pl.ue_pos[b], false, false,
                                   classify_link(pl.ue_pos[a], pl.ue_pos[b], p));
                ns[a].push_back(lb.decodable);
            }
        }
        return ns;
    };
    int changed = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RngStream prng(seed, "placement");
        NodePlacement pl = place_ues(p, 8, prng, ch);
        const auto before = neighbor_sets(pl);
        RngStream mrng(seed, "mobility");
        mobility_epoch(pl, p, 0.5, mrng);
        if (neighbor_sets(pl) != before) ++changed;
    }
    CHECK(changed >= 10);
}

TEST_CASE("coverage grid shape and qualitative structure") {
    const Plant p = default_plant();
    const ChannelModel ch = default_channel();
    const auto cells = coverage_grid(p, ch, 0.25, 1.5);
    CHECK(cells.size() == 210u * 142u);

    double best = -1e9, best_d = 1e9;
    bool any_covered = false, any_uncovered = false;
    for (const CoverageCell& c : cells) {
        REQUIRE(std::isfinite(c.snr_db));
        if (c.snr_db > best) {
            best = c.snr_db;
            best_d = distance({c.x, c.y, 1.5}, p.bs_position());
        }
        any_covered |= c.snr_db >= 7.0;
        any_uncovered |= c.snr_db < 7.0;
    }
    CHECK(any_covered);
    CHECK(any_uncovered);
    // the best cell is (nearly) under the BS
    CHECK(best_d < 8.0);
    // far corner is uncovered
    CHECK(uplink_budget({0.1, 0.1, 1.5}, p, ch).snr_db < 7.0);
}
