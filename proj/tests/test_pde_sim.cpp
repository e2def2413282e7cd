#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spikelab/pde_sim.hpp"

using namespace spikelab;

namespace {

const RadialProfile& profile() {
    static RadialProfile p = solve_ground_state(20.0, 4000, 1e-8);
    return p;
}

void add_bump(Field2D& f, double cx, double cy, double width, double amp) {
    for (int iy = 0; iy < f.ny; ++iy)
        for (int ix = 0; ix < f.nx; ++ix) {
            const double dx = f.x(ix) - cx, dy = f.y(iy) - cy;
            f.at(ix, iy) += amp * std::exp(-(dx * dx + dy * dy) / (width * width));
        }
}

SimConfig desk_config() {
    SimConfig c;
    c.params = make_params(std::sqrt(0.05 * 0.02), 0.02, 0.0, 1.0, 2.0);
    c.nx = 129;
    c.L = 0.6;
    c.dt = 0.005;
    return c;
}

double centroid_radius(const Snapshot& s) {
    REQUIRE(s.spikes.size() == 1);
    return std::hypot(s.spikes[0].x, s.spikes[0].y);
}

}  // namespace

TEST_CASE("field construction and validation") {
    const auto f = make_field(65, 0.5, 2.0);
    CHECK(f.nx == 65);
    CHECK(f.h == doctest::Approx(1.0 / 64.0));
    CHECK(f.x(0) == doctest::Approx(-0.5));
    CHECK(f.x(64) == doctest::Approx(0.5));
    CHECK(f.x(32) == doctest::Approx(0.0));
    CHECK(f.values.minCoeff() == 2.0);
    CHECK_THROWS_AS(make_field(2, 0.5), DomainError);
    CHECK_THROWS_AS(make_field(65, 0.0), DomainError);
}

TEST_CASE("detect_spikes on constructed fields") {
    auto f = make_field(101, 0.5);

    SUBCASE("flat field gives no spikes") {
        f.values.setConstant(3.0);
        CHECK(detect_spikes(f).empty());
        f.values.setZero();
        CHECK(detect_spikes(f).empty());
    }

    SUBCASE("single off-grid bump is located to sub-grid accuracy") {
        add_bump(f, 0.1037, -0.0513, 0.08, 2.0);
        const auto spikes = detect_spikes(f);
        REQUIRE(spikes.size() == 1);
        CHECK(std::abs(spikes[0].x - 0.1037) <= 0.5 * f.h);
        CHECK(std::abs(spikes[0].y + 0.0513) <= 0.5 * f.h);
        CHECK(spikes[0].amplitude == doctest::Approx(2.0).epsilon(0.01));
    }

    SUBCASE("two separated bumps give two spikes, a faint one is ignored") {
        add_bump(f, -0.25, 0.0, 0.06, 2.0);
        add_bump(f, 0.25, 0.1, 0.06, 1.8);
        add_bump(f, 0.0, -0.3, 0.06, 0.4);  // below half the global maximum
        CHECK(detect_spikes(f).size() == 2);
    }

    SUBCASE("twin peaks closer than 3h merge into one") {
        add_bump(f, 0.0, 0.0, 0.05, 2.0);
        add_bump(f, 2.0 * f.h, 0.0, 0.05, 1.9);
        CHECK(detect_spikes(f).size() == 1);
    }
}

TEST_CASE("asymmetry score of polygons") {
    std::vector<SpikeInfo> tri;
    for (int j = 0; j < 3; ++j)
        tri.push_back({std::cos(2.0 * M_PI * j / 3.0), std::sin(2.0 * M_PI * j / 3.0), 1.0});
    CHECK(asymmetry_score(tri) <= 1e-14);

    auto skew = tri;
    skew[0].x += 0.3;
    CHECK(asymmetry_score(skew) > 0.05);

    CHECK(asymmetry_score({}) == 0.0);
    CHECK(asymmetry_score({{0.1, 0.2, 1.0}}) == 0.0);
    CHECK(asymmetry_score({{0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}}) == 0.0);
}

TEST_CASE("homogeneous equilibrium with flat decay stays put for 100 steps") {
    SimConfig c;
    c.params = make_params(0.0316, 0.02, 0.0, 1.0, 0.0);  // mu == 1
    c.nx = 65;
    c.L = 0.5;
    c.dt = 0.01;
    c.init = InitKind::Homogeneous;
    Simulator sim(c, profile());
    for (int i = 0; i < 100; ++i) sim.step();
    CHECK((sim.state().A.values.array() - 1.0).abs().maxCoeff() <= 1e-10);
    CHECK((sim.state().H.values.array() - 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("zero activator: inhibitor decays monotonically and stays positive") {
    SimConfig c;
    c.params = make_params(0.02, 0.02, 0.5, 1.0, 2.0);
    c.nx = 33;
    c.L = 0.5;
    c.dt = 0.05;
    c.init = InitKind::ZeroActivator;
    c.quasi_steady = false;
    Simulator sim(c, profile());
    double prev = sim.state().H.values.maxCoeff();
    for (int i = 0; i < 60; ++i) {
        sim.step();
        const double cur = sim.state().H.values.maxCoeff();
        CHECK(cur < prev);
        CHECK(sim.state().H.values.minCoeff() > 0.0);
        prev = cur;
    }
    CHECK(sim.state().A.values.maxCoeff() == 0.0);
    // after 60 steps of dt/tau = 0.1, the field is well below its start
    CHECK(prev < 0.01);
}

TEST_CASE("configuration validation") {
    SimConfig c = desk_config();
    c.nx = 64;
    CHECK_THROWS_AS(Simulator(c, profile()), DomainError);
    c = desk_config();
    c.dt = -0.1;
    CHECK_THROWS_AS(Simulator(c, profile()), DomainError);
    c = desk_config();
    c.perturb_amp = 0.05;  // above the 1% cap
    CHECK_THROWS_AS(Simulator(c, profile()), DomainError);
    c = desk_config();
    c.dt = 0.2;  // violates the explicit-reaction bound at spike cores
    CHECK_THROWS_AS(Simulator(c, profile()), DomainError);
}

TEST_CASE("off-centre single spike drifts inward") {
    SimConfig c = desk_config();
    c.params = make_params(c.params.epsilon, c.params.D, 0.0, 1.0, 10.0);
    c.init = InitKind::SingleSpike;
    c.single_spike_radius = 0.2;
    c.t_end = 10.0;
    c.snapshot_every = 100;
    const auto res = run_simulation(c, profile());
    const auto& snaps = res.track.snapshots;
    REQUIRE(snaps.size() >= 10);
    int down = 0, pairs = 0;
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        ++pairs;
        if (centroid_radius(snaps[i]) < centroid_radius(snaps[i - 1])) ++down;
    }
    CHECK(down >= (8 * pairs) / 10);
    CHECK(centroid_radius(snaps.back()) <
          centroid_radius(snaps.front()) - res.state.A.h);
}

TEST_CASE("identical config and seed reproduce the track bit for bit") {
    SimConfig c = desk_config();
    c.k = 3;
    c.t_end = 1.0;
    c.snapshot_every = 50;
    c.seed = 7;
    const auto a = run_simulation(c, profile());
    const auto b = run_simulation(c, profile());
    REQUIRE(a.track.snapshots.size() == b.track.snapshots.size());
    for (std::size_t i = 0; i < a.track.snapshots.size(); ++i) {
        const auto& sa = a.track.snapshots[i];
        const auto& sb = b.track.snapshots[i];
        CHECK(sa.t == sb.t);
        CHECK(sa.asymmetry == sb.asymmetry);
        REQUIRE(sa.spikes.size() == sb.spikes.size());
        for (std::size_t j = 0; j < sa.spikes.size(); ++j) {
            CHECK(sa.spikes[j].x == sb.spikes[j].x);
            CHECK(sa.spikes[j].y == sb.spikes[j].y);
            CHECK(sa.spikes[j].amplitude == sb.spikes[j].amplitude);
        }
    }
    CHECK(a.state.A.values == b.state.A.values);
}

TEST_CASE("spatial consistency: refining the grid converges the spike height") {
    auto run_at = [&](int nx) {
        SimConfig c;
        c.params = make_params(0.1, 0.2, 0.0, 1.0, 2.0);  // wide spike, resolvable at nx=65
        c.nx = nx;
        c.L = 0.6;
        c.dt = 0.005;
        c.t_end = 0.5;
        c.init = InitKind::SingleSpike;
        c.single_spike_radius = 0.0;
        c.perturb_amp = 0.0;
        const auto res = run_simulation(c, profile());
        return res.state.A.values.maxCoeff();
    };
    const double m65 = run_at(65), m129 = run_at(129), m257 = run_at(257);
    const double e_coarse = std::abs(m65 - m257);
    const double e_fine = std::abs(m129 - m257);
    CHECK(e_coarse > 0.0);
    CHECK(e_fine <= 0.6 * e_coarse);
}

TEST_CASE("k=3 ring keeps three spikes with bounded asymmetry") {
    SimConfig c = desk_config();
    c.k = 3;
    c.t_end = 10.0;
    c.snapshot_every = 200;
    c.seed = 11;
    const auto res = run_simulation(c, profile());
    const double a0 = std::max(res.track.snapshots.front().asymmetry, 0.05);
    for (const auto& s : res.track.snapshots) {
        CHECK(s.spikes.size() == 3);
        CHECK(s.asymmetry <= 2.0 * a0);
    }
}

TEST_CASE("k=4 plus centre keeps five spikes") {
    SimConfig c = desk_config();
    c.k = 4;
    c.with_centre = true;
    c.L = 0.7;
    c.t_end = 10.0;
    c.snapshot_every = 200;
    c.seed = 3;
    const auto res = run_simulation(c, profile());
    for (const auto& s : res.track.snapshots) CHECK(s.spikes.size() == 5);
}

TEST_CASE("k=5 ring: instability detected or reported inconclusive") {
    SimConfig c = desk_config();
    c.k = 5;
    c.L = 0.7;
    c.t_end = 15.0;
    c.snapshot_every = 200;
    c.seed = 17;
    const auto res = run_simulation(c, profile());
    const auto& snaps = res.track.snapshots;
    const double a0 = std::max(snaps.front().asymmetry, 1e-3);
    bool unstable = false;
    for (const auto& s : snaps)
        if (s.spikes.size() != 5 || s.asymmetry >= 5.0 * a0) unstable = true;
    if (!unstable)
        MESSAGE("k=5 run stayed symmetric within the time budget: inconclusive, not stable");
    CHECK(true);  // a non-detection is reported, not failed
}
