#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spikelab/ground_state.hpp"

using namespace spikelab;

namespace {

// Independent shooting oracle: fixed-step 5th-order Fehlberg integrator at the
// given resolution, bisecting on the same crossed-zero criterion.
bool crosses_zero_rk5(double w0, double r_max, int steps) {
    const double a = (w0 - w0 * w0) / 4.0;
    const double b = (1.0 - 2.0 * w0) * a / 16.0;
    const double h = r_max / steps;
    double r = h;
    double w = w0 + a * h * h + b * h * h * h * h;
    double v = 2.0 * a * h + 4.0 * b * h * h * h;
    auto f = [](double rr, double ww, double vv) { return -vv / rr + ww - ww * ww; };
    for (int i = 1; i < steps; ++i) {
        const double k1w = v;
        const double k1v = f(r, w, v);
        const double k2w = v + h * (k1v / 4.0);
        const double k2v = f(r + h / 4.0, w + h * (k1w / 4.0), k2w);
        const double k3w = v + h * (3.0 * k1v / 32 + 9.0 * k2v / 32);
        const double k3v = f(r + 3.0 * h / 8.0, w + h * (3.0 * k1w / 32 + 9.0 * k2w / 32), k3w);
        const double k4w = v + h * (1932.0 * k1v / 2197 - 7200.0 * k2v / 2197 + 7296.0 * k3v / 2197);
        const double k4v = f(r + 12.0 * h / 13.0,
                             w + h * (1932.0 * k1w / 2197 - 7200.0 * k2w / 2197 + 7296.0 * k3w / 2197),
                             k4w);
        const double k5w =
            v + h * (439.0 * k1v / 216 - 8.0 * k2v + 3680.0 * k3v / 513 - 845.0 * k4v / 4104);
        const double k5v =
            f(r + h,
              w + h * (439.0 * k1w / 216 - 8.0 * k2w + 3680.0 * k3w / 513 - 845.0 * k4w / 4104),
              k5w);
        const double k6w = v + h * (-8.0 * k1v / 27 + 2.0 * k2v - 3544.0 * k3v / 2565 +
                                    1859.0 * k4v / 4104 - 11.0 * k5v / 40);
        const double k6v = f(r + h / 2.0,
                             w + h * (-8.0 * k1w / 27 + 2.0 * k2w - 3544.0 * k3w / 2565 +
                                      1859.0 * k4w / 4104 - 11.0 * k5w / 40),
                             k6w);
        w += h * (16.0 * k1w / 135 + 6656.0 * k3w / 12825 + 28561.0 * k4w / 56430 -
                  9.0 * k5w / 50 + 2.0 * k6w / 55);
        v += h * (16.0 * k1v / 135 + 6656.0 * k3v / 12825 + 28561.0 * k4v / 56430 -
                  9.0 * k5v / 50 + 2.0 * k6v / 55);
        r += h;
        if (w < 0.0) return true;
        if (v > 0.0 && w < 0.9 * w0) return false;
    }
    return false;
}

double shoot_w0_rk5(double r_max, int steps) {
    double lo = 1.0, hi = 4.0;
    for (int it = 0; it < 100 && (hi - lo) > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (crosses_zero_rk5(mid, r_max, steps) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

const RadialProfile& profile() {
    static RadialProfile p = solve_ground_state(20.0, 4000, 1e-8);
    return p;
}

}  // namespace

TEST_CASE("shooting converges with small residual") {
    const auto& p = profile();
    CHECK(p.residual_sup <= 1e-8);
    CHECK(p.w_derivs[0] == 0.0);
    CHECK(p.w0 == p.w_values[0]);
    CHECK(p.w0 > 1.0);
    CHECK(p.w0 < 4.0);
}

TEST_CASE("w0 agrees with independent higher-order shooting oracle") {
    const auto& p = profile();
    const double w0_oracle = shoot_w0_rk5(20.0, 8000);
    CHECK(std::abs(p.w0 - w0_oracle) < 1e-6);
}

TEST_CASE("w0 stable under grid doubling") {
    const auto& p = profile();
    const RadialProfile p2 = solve_ground_state(20.0, 8000, 1e-8);
    CHECK(std::abs(p.w0 - p2.w0) < 1e-6);
}

TEST_CASE("profile positive, strictly decreasing, decaying") {
    const auto& p = profile();
    const int n = static_cast<int>(p.r_grid.size()) - 1;
    for (int i = 0; i < n; ++i) {
        CHECK(p.w_values[i] > 0.0);
        CHECK(p.w_values[i + 1] < p.w_values[i]);
    }
    CHECK(p.w_values[n] < 1e-8 * p.w0);

    // exponential decay rate at least 0.9 on [10, r_max]
    auto at = [&](double r) {
        const int i = static_cast<int>(r / (p.r_grid[1] - p.r_grid[0]));
        return std::pair<double, double>{p.r_grid[i], p.w_values[i]};
    };
    for (double r1 = 10.0; r1 < 19.0; r1 += 1.5) {
        for (double r2 = r1 + 0.5; r2 < 20.0; r2 += 1.5) {
            auto [a1, v1] = at(r1);
            auto [a2, v2] = at(r2);
            CHECK(v2 / v1 <= std::exp(-0.9 * (a2 - a1)));
        }
    }
}

TEST_CASE("tail ratio w / (r^{-1/2} e^{-r}) levels off") {
    const auto& p = profile();
    std::vector<double> ratios;
    for (double r = 10.0; r <= 15.0; r += 0.5) {
        const double w = evaluate_w(p, r);
        ratios.push_back(w * std::sqrt(r) * std::exp(r));
    }
    for (double q : ratios) CHECK(q > 0.0);
    // all within 2% of the final ratio, and differences shrinking
    for (double q : ratios) CHECK(std::abs(q - ratios.back()) < 0.02 * ratios.back());
    CHECK(std::abs(ratios[1] - ratios[0]) > std::abs(ratios[ratios.size() - 1] - ratios[ratios.size() - 2]));
}

TEST_CASE("constants and the c2 identity") {
    const auto& p = profile();
    const auto g = integrals(p);
    CHECK(g.int_w2 > 0.0);
    CHECK(g.int_w3 > 0.0);
    CHECK(g.c1 > 0.0);
    CHECK(g.c2 < 0.0);
    CHECK(std::abs(g.c2 / g.int_w2 + 0.5) < 1e-6);
    CHECK(g.int_w3 > g.int_w2 * p.w_values[p.w_values.size() - 2]);
}

TEST_CASE("quadrature Richardson stability") {
    const auto& p = profile();
    // half-resolution copy: every other node
    RadialProfile half;
    half.w0 = p.w0;
    half.tail_C = p.tail_C;
    for (size_t i = 0; i < p.r_grid.size(); i += 2) {
        half.r_grid.push_back(p.r_grid[i]);
        half.w_values.push_back(p.w_values[i]);
        half.w_derivs.push_back(p.w_derivs[i]);
    }
    const auto g = integrals(p);
    const auto gh = integrals(half);
    CHECK(std::abs(g.int_w2 - gh.int_w2) < 1e-5 * g.int_w2);
    CHECK(std::abs(g.int_w3 - gh.int_w3) < 1e-5 * g.int_w3);
}

TEST_CASE("evaluate_w interpolation contract") {
    const auto& p = profile();
    CHECK(evaluate_w(p, 0.0) == p.w0);
    for (size_t i = 0; i < p.r_grid.size(); i += 137)
        CHECK(evaluate_w(p, p.r_grid[i]) == doctest::Approx(p.w_values[i]).epsilon(1e-13));
    double prev = evaluate_w(p, 0.0) + 1e-9;
    for (double r = 0.0; r < 25.0; r += 0.0371) {
        const double w = evaluate_w(p, r);
        CHECK(w < prev);
        prev = w;
    }
    // tail branch continuous across r_max
    const double rm = p.r_grid.back();
    CHECK(evaluate_w(p, rm + 1e-9) == doctest::Approx(evaluate_w(p, rm - 1e-9)).epsilon(1e-5));
}

TEST_CASE("precondition violations") {
    CHECK_THROWS_AS(solve_ground_state(10.0, 4000, 1e-8), DomainError);
    CHECK_THROWS_AS(solve_ground_state(20.0, 100, 1e-8), DomainError);
    CHECK_THROWS_AS(solve_ground_state(20.0, 4000, 0.0), DomainError);
}
