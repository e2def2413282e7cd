#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spikelab/greens.hpp"

using namespace spikelab;

namespace {

// Integral representation K0(z) = int_0^infty exp(-z cosh t) dt.
// The trapezoid rule is spectrally accurate here: the integrand decays
// double-exponentially and has vanishing odd derivatives at t = 0.
double k0_quadrature(double z) {
    const double h = 1e-3;
    double sum = 0.5 * std::exp(-z);
    for (int i = 1;; ++i) {
        const double t = i * h;
        const double term = std::exp(-z * std::cosh(t));
        sum += term;
        if (term < 1e-300 || t > 40.0) break;
    }
    return sum * h;
}

double k1_quadrature(double z) {
    // K1(z) = int_0^infty exp(-z cosh t) cosh t dt
    const double h = 1e-3;
    double sum = 0.5 * std::exp(-z);
    for (int i = 1;; ++i) {
        const double t = i * h;
        const double term = std::exp(-z * std::cosh(t)) * std::cosh(t);
        sum += term;
        if (term < 1e-300 || t > 40.0) break;
    }
    return sum * h;
}

}  // namespace

TEST_CASE("bessel_k0 matches integral-representation oracle") {
    for (double z : {0.05, 0.3, 1.0, 1.9, 2.0, 2.1, 3.0, 7.0, 15.0, 30.0}) {
        const double ref = k0_quadrature(z);
        CHECK(std::abs(bessel_k0(z) - ref) <= 1e-10 * ref + 1e-300);
    }
    CHECK(bessel_k0(1.0) == doctest::Approx(k0_quadrature(1.0)).epsilon(1e-10));
}

TEST_CASE("bessel_k1 matches integral-representation oracle") {
    for (double z : {0.05, 0.3, 1.0, 2.0, 2.5, 5.0, 12.0, 30.0}) {
        const double ref = k1_quadrature(z);
        CHECK(std::abs(bessel_k1(z) - ref) <= 1e-10 * ref);
    }
}

TEST_CASE("bessel_k0 small-argument logarithmic limit") {
    for (double z : {1e-3, 1e-4}) {
        const double rem = bessel_k0(z) + std::log(0.5 * z) + euler_gamma;
        CHECK(std::abs(rem) < 1e-5);  // leading correction is O(z^2 log z)
    }
}

TEST_CASE("bessel_k0 large-argument prefactor") {
    for (double z : {20.0, 40.0}) {
        const double lim = bessel_k0(z) * std::sqrt(z) * std::exp(z);
        // leading prefactor is sqrt(pi/2)(1 - 1/(8z) + O(z^-2)); the 1/(8z)
        // correction is 6e-3 at z = 20, so compare against the two-term form
        const double ref = std::sqrt(M_PI / 2.0) * (1.0 - 1.0 / (8.0 * z));
        CHECK(std::abs(lim - ref) < 1e-3 * ref);
        CHECK(std::abs(lim - std::sqrt(M_PI / 2.0)) < 2.0 / z);
    }
}

TEST_CASE("bessel domain errors") {
    CHECK_THROWS_AS(bessel_k0(0.0), DomainError);
    CHECK_THROWS_AS(bessel_k0(-1.0), DomainError);
    CHECK_THROWS_AS(bessel_k1(-2.0), DomainError);
}

TEST_CASE("green_free symmetry and near/far asymptotics") {
    GreenParams p(2.0);
    Point2 x{0.3, -0.7}, z{-0.1, 0.4};
    CHECK(green_free(p, x, z) == green_free(p, z, x));
    CHECK_THROWS_AS(green_free(p, x, x), SingularPoint);

    // near field: value - (1/2pi) log(1/(sigma r)) bounded over a decade
    GreenParams pu(1.0);
    double lo = 1e300, hi = -1e300;
    for (double r = 1e-4; r <= 1e-3 * 1.0000001; r *= 1.2589254117941673) {
        const double v = green_free(pu, {r, 0.0}, {0.0, 0.0});
        const double rem = v - std::log(1.0 / r) / (2.0 * M_PI);
        lo = std::min(lo, rem);
        hi = std::max(hi, rem);
    }
    CHECK(hi - lo < 1e-4);
    CHECK(std::abs(hi) < 1.0);

    // far field: value / (r^{-1/2} e^{-sigma r}) roughly constant over [10, 30]
    double ratio_lo = 1e300, ratio_hi = -1e300;
    for (double r = 10.0; r <= 30.0; r += 2.5) {
        const double v = green_free(pu, {r, 0.0}, {0.0, 0.0});
        const double ratio = v / (std::exp(-r) / std::sqrt(r));
        ratio_lo = std::min(ratio_lo, ratio);
        ratio_hi = std::max(ratio_hi, ratio);
    }
    CHECK((ratio_hi - ratio_lo) / ratio_hi < 0.05);
}

TEST_CASE("green_gradient against finite differences and symmetry") {
    GreenParams p(0.5);
    Point2 x{1.9, 3.1}, z{-0.4, 0.7};  // sigma |x-z| about 2
    const Point2 g = green_gradient(p, x, z);
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
        Point2 xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const double fd = (green_free(p, xp, z) - green_free(p, xm, z)) / (2.0 * h);
        CHECK(std::abs(g[c] - fd) < 1e-6);
    }

    // gradient in x at (x,z) is the negative of gradient in x at (z,x)
    const Point2 gz = green_gradient(p, z, x);
    CHECK(g[0] == doctest::Approx(-gz[0]).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(-gz[1]).epsilon(1e-14));

    CHECK_THROWS_AS(green_gradient(p, x, x), SingularPoint);
}

TEST_CASE("radial log-derivative tends to -1 far out") {
    GreenParams p(1.0);
    const double r = 30.0;
    const Point2 g = green_gradient(p, {r, 0.0}, {0.0, 0.0});
    const double v = green_free(p, {r, 0.0}, {0.0, 0.0});
    CHECK(std::abs(g[0] / v + 1.0) < 0.05);
}

TEST_CASE("5-point stencil annihilation at O(h^2)") {
    GreenParams p(1.3);
    const Point2 z{0.0, 0.0};
    const Point2 x{1.1, 0.6};
    auto stencil_residual = [&](double h) {
        const double c = green_free(p, x, z);
        const double e = green_free(p, {x[0] + h, x[1]}, z);
        const double w = green_free(p, {x[0] - h, x[1]}, z);
        const double n = green_free(p, {x[0], x[1] + h}, z);
        const double s = green_free(p, {x[0], x[1] - h}, z);
        const double lap = (e + w + n + s - 4.0 * c) / (h * h);
        return std::abs(lap - p.sigma * p.sigma * c);
    };
    const double r1 = stencil_residual(1e-2);
    const double r2 = stencil_residual(5e-3);
    CHECK(r1 < 1e-2);
    CHECK(r2 < 0.3 * r1);  // about 4x reduction expected
}

TEST_CASE("green_free monotone decreasing in separation") {
    GreenParams p(0.8);
    double prev = 1e300;
    for (double r = 0.1; r < 20.0; r *= 1.5) {
        const double v = green_free(p, {r, 0.0}, {0.0, 0.0});
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("GreenParams rejects nonpositive sigma") {
    CHECK_THROWS_AS(GreenParams(0.0), DomainError);
    CHECK_THROWS_AS(GreenParams(-1.0), DomainError);
}
