#include "spikelab/reduced_problem.hpp"

#include <cmath>
#include <iostream>

namespace spikelab {

namespace {

double kernel(double s) { return std::exp(-s) / std::sqrt(s); }
double kernel_deriv(double s) { return -std::exp(-s) * (1.0 / std::sqrt(s) + 0.5 * std::pow(s, -1.5)); }

double pair_sum(const PolygonCluster& q, const ReducedConstants& rc, const ModelParams& p) {
    const int n = static_cast<int>(q.positions.size());
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = q.positions[i][0] - q.positions[j][0];
            const double dy = q.positions[i][1] - q.positions[j][1];
            const double d = std::hypot(dx, dy);
            if (d == 0.0) throw CoincidentSpikes("potential: coincident spike positions");
            acc += 2.0 * rc.xi * kernel(p.sigma * d);  // ordered pairs: count both (i,j),(j,i)
        }
    }
    return acc;
}

double precursor_sum_centered(const PolygonCluster& q, const ReducedConstants& rc,
                              const ModelParams& p) {
    double acc = 0.0;
    for (const auto& pos : q.positions) {
        const double r2 = pos[0] * pos[0] + pos[1] * pos[1];
        acc += rc.c3_potential * 0.5 * p.mu_second * p.epsilon * p.epsilon * r2;
    }
    return acc;
}

// signed derivative of the potential along a uniform dilation of the polygon
// (centre pinned); equals k times the radial gradient component at vertex 1
double radial_slope(int k, const ModelParams& p, const ReducedConstants& rc, double r,
                    bool with_centre) {
    const PolygonCluster q = build_cluster(k, r, 0.0, with_centre);
    const auto g = potential_gradient(q, rc, p);
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
        const auto f = local_frame(q, j);
        acc += g[j][0] * f.radial[0] + g[j][1] * f.radial[1];
    }
    return acc;
}

}  // namespace

ModelParams make_params(double epsilon, double D, double tau, double domain_radius,
                        double mu_second) {
    if (epsilon <= 0.0 || D <= 0.0 || tau < 0.0 || domain_radius <= 0.0 || mu_second < 0.0)
        throw DomainError(
            "make_params: need epsilon, D, domain_radius > 0, tau >= 0, mu_second >= 0");
    ModelParams p;
    p.epsilon = epsilon;
    p.D = D;
    p.tau = tau;
    p.domain_radius = domain_radius;
    p.mu_second = mu_second;
    p.sigma = epsilon / std::sqrt(D);
    const double ratio = epsilon * epsilon / D;
    const double dlog = D * std::log(std::sqrt(D) / epsilon);
    p.regime_ok = (ratio <= 0.1) && (dlog <= 0.1);
    if (!p.regime_ok)
        std::cerr << "warning: parameters outside the asymptotic smallness regime "
                  << "(eps^2/D = " << ratio << ", D log(sqrt(D)/eps) = " << dlog << ")\n";
    return p;
}

double compute_xi(const ModelParams& params, double int_w2) {
    if (params.sigma >= 1.0) throw RegimeError("compute_xi: requires sigma < 1");
    return 2.0 * M_PI / (std::log(1.0 / params.sigma) * int_w2);
}

ReducedConstants make_reduced_constants(const ModelParams& params, const GroundStateConstants& g,
                                        int k) {
    if (k < 2) throw InvalidK("make_reduced_constants: k must be at least 2");
    if (params.mu_second <= 0.0)
        throw DomainError("make_reduced_constants: precursor curvature must be positive");
    ReducedConstants rc;
    rc.xi = compute_xi(params, g.int_w2);
    rc.c1 = g.c1;
    rc.c2 = g.c2;
    rc.c3_potential = -g.c2 / g.c1;
    const double s = std::sin(M_PI / k);
    rc.c3_balance = g.c2 * params.mu_second / (4.0 * g.c1 * s * s);
    return rc;
}

double potential(const PolygonCluster& q, const ReducedConstants& rc, const ModelParams& params) {
    double acc = pair_sum(q, rc, params) + precursor_sum_centered(q, rc, params);
    acc += rc.c3_potential * static_cast<double>(q.positions.size());  // mu(0) = 1 baseline
    return acc;
}

double potential_centered(const PolygonCluster& q, const ReducedConstants& rc,
                          const ModelParams& params) {
    return pair_sum(q, rc, params) + precursor_sum_centered(q, rc, params);
}

std::vector<Point2> potential_gradient(const PolygonCluster& q, const ReducedConstants& rc,
                                       const ModelParams& params) {
    const int n = static_cast<int>(q.positions.size());
    std::vector<Point2> g(n, Point2{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = q.positions[i][0] - q.positions[j][0];
            const double dy = q.positions[i][1] - q.positions[j][1];
            const double d = std::hypot(dx, dy);
            if (d == 0.0) throw CoincidentSpikes("potential_gradient: coincident spike positions");
            const double f = 2.0 * rc.xi * kernel_deriv(params.sigma * d) * params.sigma / d;
            g[i][0] += f * dx;
            g[i][1] += f * dy;
        }
        const double pre = rc.c3_potential * params.mu_second * params.epsilon * params.epsilon;
        g[i][0] += pre * q.positions[i][0];
        g[i][1] += pre * q.positions[i][1];
    }
    return g;
}

RadiusResult equilibrium_radius(int k, const ModelParams& params, const ReducedConstants& rc) {
    if (k < 2) throw InvalidK("equilibrium_radius: k must be at least 2");
    const double sk = std::sin(M_PI / k);
    auto f = [&](double s) { return rc.xi * std::pow(s, -1.5) * std::exp(-s) + rc.c3_balance * params.D; };
    auto fp = [&](double s) {
        return -rc.xi * std::exp(-s) * (1.5 * std::pow(s, -2.5) + std::pow(s, -1.5));
    };
    double lo = 1.5;
    if (f(lo) <= 0.0)
        throw NoRoot("equilibrium_radius: no sign change on the monotone branch s > 3/2");
    double hi = 3.0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw NoRoot("equilibrium_radius: bracket cap exceeded");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    for (int it = 0; it < 5; ++it) s -= f(s) / fp(s);

    RadiusResult out;
    out.radius = s / (2.0 * params.sigma * sk);
    out.residual = f(s);
    out.derivative = fp(s) * 2.0 * params.sigma * sk;
    if (std::abs(out.residual) > 1e-12 * std::abs(rc.c3_balance * params.D))
        throw NonConvergence("equilibrium_radius: residual tolerance unmet");
    return out;
}

double asymptotic_radius(int k, const ModelParams& params, const ReducedConstants& rc) {
    if (params.D >= std::exp(-1.0))
        throw DomainError("asymptotic_radius: requires D < 1/e");
    const double l = std::log(1.0 / params.D);
    const double c3 = std::abs(rc.c3_balance);
    return (l - 1.5 * std::log(l) - std::log(rc.xi / c3)) /
           (2.0 * params.sigma * std::sin(M_PI / k));
}

RadiusResult equilibrium_radius_centre(int k, const ModelParams& params,
                                       const ReducedConstants& rc) {
    if (k < 2) throw InvalidK("equilibrium_radius_centre: k must be at least 2");
    // balance of centre-vertex repulsion and precursor drift, in t = sigma * radius
    auto g = [&](double t) {
        return rc.c1 * rc.xi * std::exp(-t) / std::sqrt(t) +
               rc.c2 * params.mu_second * params.D * t;
    };
    auto gp = [&](double t) {
        return -rc.c1 * rc.xi * std::exp(-t) * (1.0 / std::sqrt(t) + 0.5 * std::pow(t, -1.5)) +
               rc.c2 * params.mu_second * params.D;
    };
    double lo = 1e-6;
    if (g(lo) <= 0.0) throw NoRoot("equilibrium_radius_centre: left end not positive");
    double hi = 1.0;
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw NoRoot("equilibrium_radius_centre: bracket cap exceeded");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 5; ++it) t -= g(t) / gp(t);

    RadiusResult out;
    out.radius = t / params.sigma;
    out.residual = g(t);
    out.derivative = gp(t) * params.sigma;
    if (std::abs(out.residual) > 1e-12 * std::abs(rc.c2 * params.mu_second * params.D * t))
        throw NonConvergence("equilibrium_radius_centre: residual tolerance unmet");
    return out;
}

double asymptotic_radius_centre(const ModelParams& params, const ReducedConstants& rc) {
    if (params.D >= std::exp(-1.0))
        throw DomainError("asymptotic_radius_centre: requires D < 1/e");
    const double l = std::log(1.0 / params.D);
    const double c3c = std::abs(rc.c2) * params.mu_second / rc.c1;
    return (l - 1.5 * std::log(l) - std::log(rc.xi / c3c)) / params.sigma;
}

double polish_radius_to_critical(int k, const ModelParams& params, const ReducedConstants& rc,
                                 double r0, bool with_centre) {
    double lo = 0.5 * r0, hi = 1.5 * r0;
    double flo = radial_slope(k, params, rc, lo, with_centre);
    double fhi = radial_slope(k, params, rc, hi, with_centre);
    int grow = 0;
    while (flo * fhi > 0.0) {
        lo *= 0.8;
        hi *= 1.25;
        flo = radial_slope(k, params, rc, lo, with_centre);
        fhi = radial_slope(k, params, rc, hi, with_centre);
        if (++grow > 40) throw NoRoot("polish_radius_to_critical: no bracket around r0");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = radial_slope(k, params, rc, mid, with_centre);
        if (fm == 0.0) return mid;
        if (fm * flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace spikelab
