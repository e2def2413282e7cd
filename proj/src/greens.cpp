#include "spikelab/greens.hpp"

#include <cmath>
#include <limits>

namespace spikelab {

namespace {

// Ascending series for I0, I1 and the log-coupled K series (A&S 9.6.10-9.6.13).
// Used on z <= 2 where the series converge in ~20 terms to machine precision.
void bessel_k_small(double z, double& k0, double& k1) {
    const double q = 0.25 * z * z;
    const double lz = std::log(0.5 * z);

    double i0 = 1.0, i1_half = 0.5;      // I1 = z * i1_half_series
    double s0 = 0.0, s1 = 0.0;           // K-series sums
    double term0 = 1.0;                  // (z^2/4)^m / (m!)^2
    double term1 = 0.5;                  // (z^2/4)^m / (m! (m+1)!), times 1/2 folded in
    double harm = 0.0;                   // H_m
    double psi_sum = -2.0 * euler_gamma; // psi(m+1) + psi(m+2) at m=0 is -2g + 1
    s1 = (psi_sum + 1.0) * term1;
    for (int m = 1; m < 40; ++m) {
        term0 *= q / (static_cast<double>(m) * m);
        term1 *= q / (static_cast<double>(m) * (m + 1));
        harm += 1.0 / m;
        i0 += term0;
        i1_half += term1;
        s0 += harm * term0;
        // psi(m+1) + psi(m+2) = -2g + H_m + H_{m+1}
        const double ps = -2.0 * euler_gamma + 2.0 * harm + 1.0 / (m + 1);
        s1 += ps * term1;
        if (term0 < 1e-18 * i0) break;
    }
    const double i1 = z * i1_half;
    k0 = -(lz + euler_gamma) * i0 + s0;
    k1 = 1.0 / z + lz * i1 - 0.5 * z * s1;
}

// Steed's continued fraction (CF2) for K_nu with nu = 0, after the classic
// besselik routine; yields K0 and K1 together for z >= 2.
void bessel_k_large(double z, double& k0, double& k1) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double a1 = 0.25;  // 0.25 - nu^2 with nu = 0
    double b = 2.0 * (1.0 + z);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 10000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= eps) break;
    }
    h = a1 * h;
    k0 = std::sqrt(M_PI / (2.0 * z)) * std::exp(-z) / s;
    k1 = k0 * (z + 0.5 - h) / z;
}

double dist(const Point2& x, const Point2& z) {
    const double dx = x[0] - z[0], dy = x[1] - z[1];
    return std::hypot(dx, dy);
}

}  // namespace

double bessel_k0(double z) {
    if (z <= 0.0) throw DomainError("bessel_k0: argument must be positive");
    double k0, k1;
    if (z <= 2.0)
        bessel_k_small(z, k0, k1);
    else
        bessel_k_large(z, k0, k1);
    return k0;
}

double bessel_k1(double z) {
    if (z <= 0.0) throw DomainError("bessel_k1: argument must be positive");
    double k0, k1;
    if (z <= 2.0)
        bessel_k_small(z, k0, k1);
    else
        bessel_k_large(z, k0, k1);
    return k1;
}

double green_free(const GreenParams& p, const Point2& x, const Point2& z) {
    const double r = dist(x, z);
    if (r == 0.0) throw SingularPoint("green_free: x == z");
    return bessel_k0(p.sigma * r) / (2.0 * M_PI);
}

Point2 green_gradient(const GreenParams& p, const Point2& x, const Point2& z) {
    const double r = dist(x, z);
    if (r == 0.0) throw SingularPoint("green_gradient: x == z");
    const double f = -p.sigma * bessel_k1(p.sigma * r) / (2.0 * M_PI * r);
    return {f * (x[0] - z[0]), f * (x[1] - z[1])};
}

}  // namespace spikelab
