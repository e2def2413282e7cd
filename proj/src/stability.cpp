#include "spikelab/stability.hpp"

#include <cmath>

namespace spikelab {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using std::complex;

MatrixXcd circulant(const CirculantSpec& spec) {
    const int k = static_cast<int>(spec.first_row.size());
    MatrixXcd b(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) b(r, c) = spec.first_row[((c - r) % k + k) % k];
    return b;
}

CirculantEigs circulant_eigs(const CirculantSpec& spec) {
    const int k = static_cast<int>(spec.first_row.size());
    CirculantEigs out;
    out.values.resize(k);
    out.vectors.resize(k, k);
    const MatrixXcd b = circulant(spec);
    double scale = 0.0;
    for (const auto& v : spec.first_row) scale += std::abs(v);
    for (int l = 0; l < k; ++l) {
        complex<double> lam = 0.0;
        for (int j = 0; j < k; ++j)
            lam += spec.first_row[j] * std::polar(1.0, 2.0 * M_PI * j * l / k);
        out.values[l] = lam;
        for (int r = 0; r < k; ++r)
            out.vectors(r, l) = std::polar(1.0 / std::sqrt(double(k)), 2.0 * M_PI * r * l / k);
        const double res = (b * out.vectors.col(l) - lam * out.vectors.col(l)).norm();
        if (res > 1e-12 * (1.0 + scale))
            throw NonConvergence("circulant_eigs: eigenpair residual above 1e-12");
    }
    return out;
}

MatrixXd build_A1(int k) {
    if (k < 3) throw InvalidK("build_A1: k must be at least 3");
    MatrixXd a = MatrixXd::Zero(k, k);
    for (int r = 0; r < k; ++r) {
        a(r, r) = -2.0;
        a(r, (r + 1) % k) = 1.0;
        a(r, (r + k - 1) % k) = 1.0;
    }
    return a;
}

MatrixXd build_A2(int k) {
    if (k < 3) throw InvalidK("build_A2: k must be at least 3");
    MatrixXd a = MatrixXd::Zero(k, k);
    for (int r = 0; r < k; ++r) {
        a(r, (r + 1) % k) = 1.0;
        a(r, (r + k - 1) % k) = -1.0;
    }
    return a;
}

MatrixXcd dft_matrix(int k) {
    MatrixXcd p(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            p(r, c) = std::polar(1.0 / std::sqrt(double(k)), 2.0 * M_PI * r * c / k);
    return p;
}

MatrixXd build_M_leading(int k) {
    const double s = std::sin(M_PI / k), c = std::cos(M_PI / k);
    const MatrixXd a1 = build_A1(k), a2 = build_A2(k);
    MatrixXd m(2 * k, 2 * k);
    m.topLeftCorner(k, k) = s * s * (a1 + 4.0 * MatrixXd::Identity(k, k));
    m.topRightCorner(k, k) = s * c * a2;
    m.bottomLeftCorner(k, k) = -s * c * a2;
    m.bottomRightCorner(k, k) = -c * c * a1;
    return m;
}

MatrixXd build_M_second(int k) {
    const double c2 = std::cos(2.0 * M_PI / k), s2 = std::sin(2.0 * M_PI / k);
    const MatrixXd a1 = build_A1(k), a2 = build_A2(k);
    MatrixXd m(2 * k, 2 * k);
    m.topLeftCorner(k, k) = c2 * a1;
    m.topRightCorner(k, k) = -s2 * a2;
    m.bottomLeftCorner(k, k) = s2 * a2;
    m.bottomRightCorner(k, k) = c2 * a1;
    return m;
}

StabilityMatrices build_stability_matrices(int k, const ModelParams& params,
                                           const ReducedConstants& rc, double d) {
    if (d <= 0.0) throw DomainError("build_stability_matrices: d must be positive");
    StabilityMatrices out;
    out.M_leading = build_M_leading(k);
    out.M_second = build_M_second(k);
    const double e = std::exp(-params.sigma * d);
    out.prefactor_leading = rc.xi * std::pow(params.sigma, 1.5) * e * std::pow(d, -2.5);
    out.prefactor_second = -rc.xi * std::sqrt(params.sigma) * e * std::pow(d, -1.5);
    return out;
}

Eigen::Matrix2cd leading_block(int k, int l) {
    if (l < 0 || l >= k) throw DomainError("leading_block: l out of range");
    const double s = std::sin(M_PI / k), c = std::cos(M_PI / k);
    const double sl = std::sin(l * M_PI / k), cl = std::cos(l * M_PI / k);
    const double off = std::sin(2.0 * M_PI / k) * std::sin(2.0 * l * M_PI / k);
    Eigen::Matrix2cd b;
    b << 4.0 * s * s * cl * cl, complex<double>(0.0, off),
        complex<double>(0.0, -off), 4.0 * c * c * sl * sl;
    return b;
}

Eigen::Vector2cd leading_kernel_vector(int k, int l) {
    const double s = std::sin(M_PI / k), c = std::cos(M_PI / k);
    const double sl = std::sin(l * M_PI / k), cl = std::cos(l * M_PI / k);
    Eigen::Vector2cd v;
    v << complex<double>(c * sl, 0.0), complex<double>(0.0, s * cl);
    return v;
}

Eigen::Matrix2cd second_block(int k, int l) {
    if (l < 0 || l >= k) throw DomainError("second_block: l out of range");
    const double c2 = std::cos(2.0 * M_PI / k), s2 = std::sin(2.0 * M_PI / k);
    const double sl = std::sin(l * M_PI / k);
    const double s2l = std::sin(2.0 * l * M_PI / k);
    Eigen::Matrix2cd b;
    b << -4.0 * c2 * sl * sl, complex<double>(0.0, -2.0 * s2 * s2l),
        complex<double>(0.0, 2.0 * s2 * s2l), -4.0 * c2 * sl * sl;
    return b;
}

std::vector<double> mu_spectrum(int k) {
    if (k < 3) throw InvalidK("mu_spectrum: k must be at least 3");
    std::vector<double> mu(k, 0.0);
    const double s = std::sin(M_PI / k), c = std::cos(M_PI / k);
    const double s2 = std::sin(2.0 * M_PI / k), c2 = std::cos(2.0 * M_PI / k);
    for (int l = 1; l < k; ++l) {
        const double sl = std::sin(l * M_PI / k), cl = std::cos(l * M_PI / k);
        const double a = c * sl, b = s * cl;
        const double den = a * a + b * b;
        const double closed =
            -4.0 * c2 * sl * sl + 4.0 * s2 * std::sin(2.0 * l * M_PI / k) * a * b / den;

        const Eigen::Vector2cd v = leading_kernel_vector(k, l);
        const double rayleigh = (v.adjoint() * second_block(k, l) * v).real()(0) / v.squaredNorm();
        if (std::abs(closed - rayleigh) > 1e-12)
            throw NonConvergence("mu_spectrum: closed form and Rayleigh quotient disagree");
        mu[l] = closed;
    }
    return mu;  // mu[0] stays 0: rotation mode
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "Stable";
        case Verdict::Marginal: return "Marginal";
        case Verdict::MarginalWithWarning: return "Marginal-with-warning";
        case Verdict::Unstable: return "Unstable";
    }
    return "?";
}

StabilityReport classify(int k) {
    if (k < 2) throw InvalidK("classify: k must be at least 2");
    StabilityReport rep;
    if (k == 2) {
        // two antipodal spikes: one rotation zero mode, every other direction
        // stiff (the pair block has no sign-indefinite second-order part)
        rep.mu_values = {0.0};
        rep.verdict = Verdict::Stable;
        rep.witness = -1;
        return rep;
    }
    rep.mu_values = mu_spectrum(k);
    for (int l = 0; l < k; ++l) rep.kernel_modes.emplace_back(l, leading_kernel_vector(k, l));
    const double tol = 1e-9;
    rep.verdict = Verdict::Stable;
    rep.witness = -1;
    for (int l = 1; l < k; ++l) {
        if (rep.mu_values[l] < -tol) {
            rep.verdict = Verdict::Unstable;
            rep.witness = l;
            return rep;
        }
    }
    for (int l = 1; l < k; ++l) {
        if (std::abs(rep.mu_values[l]) <= tol) {
            rep.verdict = Verdict::Marginal;
            rep.witness = l;
            return rep;
        }
    }
    return rep;
}

MatrixXd build_M_centre(int k) {
    if (k < 2) throw InvalidK("build_M_centre: k must be at least 2");
    const int n = 2 * k + 2;
    MatrixXd m = MatrixXd::Zero(n, n);
    for (int l = 0; l < k; ++l) {
        m(l, l) = 1.0;
        m(k, l) = m(l, k) = -std::cos(2.0 * M_PI * l / k);
        m(l, n - 1) = m(n - 1, l) = -std::sin(2.0 * M_PI * l / k);
    }
    m(k, k) = k / 2.0;
    m(n - 1, n - 1) = k / 2.0;
    return m;
}

StabilityReport classify_centre(int k) {
    if (k < 2) throw InvalidK("classify_centre: k must be at least 2");
    StabilityReport rep;
    rep.witness = -1;
    rep.verdict = (k <= 5) ? Verdict::Stable : Verdict::MarginalWithWarning;
    return rep;
}

HessianOracleResult hessian_oracle(int k, const ModelParams& params, const ReducedConstants& rc) {
    const auto eq = equilibrium_radius(k, params, rc);
    HessianOracleResult out;
    out.radius = polish_radius_to_critical(k, params, rc, eq.radius);

    const PolygonCluster base = build_cluster(k, out.radius);
    std::vector<Point2> dirs(2 * k);
    for (int j = 0; j < k; ++j) {
        const auto f = local_frame(base, j);
        dirs[2 * j] = f.radial;
        dirs[2 * j + 1] = f.tangential;
    }
    const double h = 1e-4 * out.radius;
    auto value = [&](int a, double ua, int b, double ub) {
        PolygonCluster c = base;
        c.positions[a / 2][0] += ua * dirs[a][0];
        c.positions[a / 2][1] += ua * dirs[a][1];
        c.positions[b / 2][0] += ub * dirs[b][0];
        c.positions[b / 2][1] += ub * dirs[b][1];
        return potential_centered(c, rc, params);
    };

    const int n = 2 * k;
    MatrixXd hess(n, n);
    const double f0 = value(0, 0.0, 0, 0.0);
    for (int a = 0; a < n; ++a) {
        hess(a, a) = (value(a, h, a, 0.0) - 2.0 * f0 + value(a, -h, a, 0.0)) / (h * h);
        for (int b = a + 1; b < n; ++b) {
            hess(a, b) = hess(b, a) = (value(a, h, b, h) - value(a, h, b, -h) -
                                       value(a, -h, b, h) + value(a, -h, b, -h)) /
                                      (4.0 * h * h);
        }
    }

    const double d = 2.0 * out.radius * std::sin(M_PI / k);
    const double scale =
        rc.xi * std::pow(params.sigma, 1.5) * std::exp(-params.sigma * d) / std::sqrt(d);
    out.hessian_scaled = hess / scale;

    const MatrixXd asym = out.hessian_scaled - out.hessian_scaled.transpose();
    const double rel = asym.cwiseAbs().maxCoeff() /
                       std::max(1e-300, out.hessian_scaled.cwiseAbs().maxCoeff());
    if (rel > 1e-4) throw StepError("hessian_oracle: Hessian asymmetry above 1e-4 relative");
    out.hessian_scaled = 0.5 * (out.hessian_scaled + out.hessian_scaled.transpose().eval());

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(out.hessian_scaled);
    out.eigenvalues_scaled = es.eigenvalues();
    out.n_negative = 0;
    out.n_zero = 0;
    for (int i = 0; i < n; ++i) {
        if (out.eigenvalues_scaled[i] < -out.tol)
            ++out.n_negative;
        else if (std::abs(out.eigenvalues_scaled[i]) <= out.tol)
            ++out.n_zero;
    }
    return out;
}

}  // namespace spikelab
