#include "spikelab/ground_state.hpp"

#include <algorithm>
#include <cmath>

#include "spikelab/greens.hpp"

namespace spikelab {

namespace {

struct Shot {
    std::vector<double> w, v;
    bool crossed_zero = false;  // w went negative: w(0) too high
};

// RK4 on (w, v)' = (v, -v/r + w - w^2) from the first grid node outward.
// The origin is handled by the series w = w0 + a r^2 + b r^4 with
// a = (w0 - w0^2)/4 and b = (1 - 2 w0) a / 16, valid on [0, h].
Shot integrate(double w0, double r_max, int n, int substeps) {
    const double h = r_max / n;
    Shot out;
    out.w.assign(n + 1, 0.0);
    out.v.assign(n + 1, 0.0);
    out.w[0] = w0;
    out.v[0] = 0.0;

    const double a = (w0 - w0 * w0) / 4.0;
    const double b = (1.0 - 2.0 * w0) * a / 16.0;
    double w = w0 + a * h * h + b * h * h * h * h;
    double v = 2.0 * a * h + 4.0 * b * h * h * h;
    out.w[1] = w;
    out.v[1] = v;

    const double hs = h / substeps;
    auto fv = [](double r, double wv, double vv) { return -vv / r + wv - wv * wv; };

    for (int i = 1; i < n; ++i) {
        for (int s = 0; s < substeps; ++s) {
            const double r = i * h + s * hs;
            const double k1w = v, k1v = fv(r, w, v);
            const double k2w = v + 0.5 * hs * k1v,
                         k2v = fv(r + 0.5 * hs, w + 0.5 * hs * k1w, v + 0.5 * hs * k1v);
            const double k3w = v + 0.5 * hs * k2v,
                         k3v = fv(r + 0.5 * hs, w + 0.5 * hs * k2w, v + 0.5 * hs * k2v);
            const double k4w = v + hs * k3v,
                         k4v = fv(r + hs, w + hs * k3w, v + hs * k3v);
            w += hs / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            v += hs / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        out.w[i + 1] = w;
        out.v[i + 1] = v;
        if (w < 0.0) {
            out.crossed_zero = true;
            break;
        }
        if (v > 0.0 && w < 0.9 * w0) break;  // turned back up: w(0) too low
    }
    return out;
}

}  // namespace

RadialProfile solve_ground_state(double r_max, int n, double tol) {
    if (r_max < 15.0 || n < 2000 || tol <= 0.0)
        throw DomainError("solve_ground_state: need r_max >= 15, n >= 2000, tol > 0");

    const int substeps = 4;
    double lo = 1.0, hi = 4.0;
    if (integrate(lo, r_max, n, substeps).crossed_zero ||
        !integrate(hi, r_max, n, substeps).crossed_zero)
        throw NonConvergence("solve_ground_state: bisection bracket [1,4] invalid");
    for (int it = 0; it < 200 && (hi - lo) > 4e-16 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        (integrate(mid, r_max, n, substeps).crossed_zero ? hi : lo) = mid;
    }

    const double w0 = 0.5 * (lo + hi);
    Shot shot = integrate(w0, r_max, n, substeps);
    const double h = r_max / n;

    RadialProfile p;
    p.w0 = w0;
    p.r_grid.resize(n + 1);
    for (int i = 0; i <= n; ++i) p.r_grid[i] = i * h;
    p.w_values = shot.w;
    p.w_derivs = shot.v;

    // Splice the decaying solution of the linearized far equation where w has
    // dropped below 1e-5: the shot itself loses relative accuracy out there
    // (sensitivity to w0 grows like e^r) and the quadratic term is ~1e-10.
    int s = -1;
    for (int i = 0; i <= n; ++i) {
        if (p.r_grid[i] > 5.0 && p.w_values[i] < 1e-5) {
            s = i;
            break;
        }
    }
    if (s < 0) throw NonConvergence("solve_ground_state: tail never reached 1e-5; r_max too small");
    const double A = p.w_values[s] / bessel_k0(p.r_grid[s]);
    for (int i = s; i <= n; ++i) {
        p.w_values[i] = A * bessel_k0(p.r_grid[i]);
        p.w_derivs[i] = -A * bessel_k1(p.r_grid[i]);
    }
    p.tail_C = A * std::sqrt(M_PI / 2.0);

    // Residual with w' straight from the integrator and w'' from a 4th-order
    // difference of those stored derivatives.
    double res = 0.0;
    const auto& W = p.w_values;
    const auto& V = p.w_derivs;
    for (int i = 1; i < n; ++i) {
        double wpp;
        if (i == 1)
            wpp = (-3.0 * V[0] - 10.0 * V[1] + 18.0 * V[2] - 6.0 * V[3] + V[4]) / (12.0 * h);
        else if (i == n - 1)
            wpp = (3.0 * V[n] + 10.0 * V[n - 1] - 18.0 * V[n - 2] + 6.0 * V[n - 3] - V[n - 4]) /
                  (12.0 * h);
        else
            wpp = (-V[i + 2] + 8.0 * V[i + 1] - 8.0 * V[i - 1] + V[i - 2]) / (12.0 * h);
        const double r = p.r_grid[i];
        res = std::max(res, std::abs(wpp + V[i] / r - W[i] + W[i] * W[i]));
    }
    p.residual_sup = res;
    if (res > tol) throw NonConvergence("solve_ground_state: residual above tolerance");

    for (int i = 0; i < n; ++i)
        if (!(W[i] > 0.0) || !(W[i + 1] < W[i]))
            throw NonConvergence("solve_ground_state: profile not positive decreasing");
    return p;
}

GroundStateConstants integrals(const RadialProfile& p) {
    const int n = static_cast<int>(p.r_grid.size()) - 1;
    const double h = p.r_grid[1] - p.r_grid[0];
    auto simpson = [&](auto f) {
        double acc = 0.0;
        int m = n;
        if (m % 2 == 1) m -= 1;  // trapezoid patch on a trailing odd interval
        for (int i = 0; i < m; i += 2)
            acc += h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
        if (m != n) acc += h / 2.0 * (f(n - 1) + f(n));
        return acc;
    };
    auto w = [&](int i) { return p.w_values[i]; };
    auto r = [&](int i) { return p.r_grid[i]; };

    const double r_max = p.r_grid[n];
    const double C = p.tail_C;
    // tails from w ~ C r^{-1/2} e^{-r}: w^2 r = C^2 e^{-2r},
    // w^3 r ~ C^3 r^{-1/2} e^{-3r}, w w' r^2 ~ -C^2 r e^{-2r}
    const double tail2 = C * C * std::exp(-2.0 * r_max) / 2.0;
    const double tail3 = C * C * C * std::exp(-3.0 * r_max) / (3.0 * std::sqrt(r_max));
    const double tailc2 = -C * C * std::exp(-2.0 * r_max) * (r_max / 2.0 + 0.25);

    GroundStateConstants g;
    g.int_w2 = 2.0 * M_PI * (simpson([&](int i) { return w(i) * w(i) * r(i); }) + tail2);
    g.int_w3 = 2.0 * M_PI * (simpson([&](int i) { return w(i) * w(i) * w(i) * r(i); }) + tail3);
    g.c2 = M_PI * (simpson([&](int i) { return w(i) * p.w_derivs[i] * r(i) * r(i); }) + tailc2);
    g.c1 = g.int_w2 * g.int_w3 / 3.0;
    return g;
}

double evaluate_w(const RadialProfile& p, double r) {
    const int n = static_cast<int>(p.r_grid.size()) - 1;
    const double r_max = p.r_grid[n];
    if (r >= r_max) return p.tail_C * std::exp(-r) / std::sqrt(r);
    if (r <= 0.0) return p.w0;
    const double h = p.r_grid[1] - p.r_grid[0];
    int i = std::min(static_cast<int>(r / h), n - 1);
    const double t = (r - p.r_grid[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * p.w_values[i] + (t3 - 2.0 * t2 + t) * h * p.w_derivs[i] +
           (-2.0 * t3 + 3.0 * t2) * p.w_values[i + 1] + (t3 - t2) * h * p.w_derivs[i + 1];
}

}  // namespace spikelab
