#include "spikelab/nlep.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace spikelab {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::complex;

struct Tridiag {
    VectorXd d;  // diagonal
    VectorXd e;  // subdiagonal (n-1)
};

// Symmetrized flux-form discretization: B = D A D^{-1} with D = diag(sqrt(r_i)).
Tridiag build_tridiag(const RadialOperator& op) {
    const int n = op.n;
    const double h2 = op.h * op.h;
    Tridiag t;
    t.d.resize(n);
    t.e.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        const double r = op.r[i];
        const double rp = r + 0.5 * op.h;
        const double rm = (i == 0) ? 0.0 : r - 0.5 * op.h;  // no flux through the origin
        t.d[i] = -(rp + rm) / (r * h2) - double(op.m) * op.m / (r * r) - 1.0 + 2.0 * op.w[i];
        if (i + 1 < n) t.e[i] = rp / (h2 * std::sqrt(r * op.r[i + 1]));
    }
    return t;
}

VectorXd tridiag_eigenvalues(const Tridiag& t) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    es.computeFromTridiagonal(t.d, t.e, Eigen::EigenvaluesOnly);
    return es.eigenvalues();  // ascending
}

// (T - lambda I) x = rhs, complex Thomas solve without pivoting (adequate for
// inverse/Rayleigh iteration where near-singularity is the working state).
VectorXcd shifted_solve(const Tridiag& t, complex<double> lambda, const VectorXcd& rhs) {
    const int n = static_cast<int>(t.d.size());
    VectorXcd c(n), x(n);
    complex<double> piv = t.d[0] - lambda;
    if (std::abs(piv) < 1e-300) piv = 1e-300;
    c[0] = (n > 1) ? t.e[0] / piv : 0.0;
    x[0] = rhs[0] / piv;
    for (int i = 1; i < n; ++i) {
        piv = t.d[i] - lambda - t.e[i - 1] * c[i - 1];
        if (std::abs(piv) < 1e-300) piv = 1e-300;
        if (i + 1 < n) c[i] = t.e[i] / piv;
        x[i] = (rhs[i] - t.e[i - 1] * x[i - 1]) / piv;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    return x;
}

VectorXd tridiag_apply(const Tridiag& t, const VectorXd& x) {
    const int n = static_cast<int>(t.d.size());
    VectorXd y = t.d.cwiseProduct(x);
    for (int i = 0; i + 1 < n; ++i) {
        y[i] += t.e[i] * x[i + 1];
        y[i + 1] += t.e[i] * x[i];
    }
    return y;
}

VectorXcd tridiag_apply(const Tridiag& t, const VectorXcd& x) {
    const int n = static_cast<int>(t.d.size());
    VectorXcd y = t.d.cwiseProduct(x);
    for (int i = 0; i + 1 < n; ++i) {
        y[i] += t.e[i] * x[i + 1];
        y[i + 1] += t.e[i] * x[i];
    }
    return y;
}

VectorXd inverse_iteration(const Tridiag& t, double lambda,
                           const std::vector<VectorXd>& orth_against) {
    const int n = static_cast<int>(t.d.size());
    VectorXd v = VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    for (int i = 0; i < n; i += 7) v[i] += 1e-3;  // break accidental orthogonality
    const complex<double> shift(lambda + 1e-12 * (1.0 + std::abs(lambda)), 0.0);
    for (int it = 0; it < 4; ++it) {
        for (const auto& u : orth_against) v -= u.dot(v) * u;
        VectorXcd z = shifted_solve(t, shift, v.cast<complex<double>>());
        v = z.real();
        if (v.norm() < 1e-300) v = z.imag();
        v.normalize();
    }
    for (const auto& u : orth_against) v -= u.dot(v) * u;
    v.normalize();
    return v;
}

// Shared machinery for one grid: symmetric part decomposition plus the
// rank-one data of the nonlocal term.
struct NlepCore {
    Tridiag t;
    VectorXd evals;          // ascending, all n
    std::vector<VectorXd> top_vecs;  // top M eigenvectors (descending eigenvalue)
    std::vector<double> top_vals;
    VectorXd p, q;           // nonlocal rank-one factors (symmetrized)
    double wnorm = 0.0;      // sum w^2 r

    explicit NlepCore(const RadialOperator& op, int m_modes = 80) {
        t = build_tridiag(op);
        evals = tridiag_eigenvalues(t);
        const int n = op.n;
        const int M = std::min(m_modes, n);
        for (int j = 0; j < M; ++j) {
            const double lam = evals[n - 1 - j];
            std::vector<VectorXd> cluster;
            for (size_t u = 0; u < top_vecs.size(); ++u)
                if (std::abs(top_vals[u] - lam) < 1e-3) cluster.push_back(top_vecs[u]);
            top_vecs.push_back(inverse_iteration(t, lam, cluster));
            top_vals.push_back(lam);
        }
        p.resize(n);
        q.resize(n);
        for (int i = 0; i < n; ++i) {
            const double sr = std::sqrt(op.r[i]);
            p[i] = sr * op.w[i] * op.w[i];
            q[i] = sr * op.w[i];
            wnorm += op.w[i] * op.w[i] * op.r[i];
        }
    }

    VectorXcd apply_full(double c, const VectorXcd& x) const {
        return tridiag_apply(t, x) - (c * q.dot(x)) * p.cast<complex<double>>();
    }

    // Rayleigh-quotient iteration on the full rank-one-perturbed operator,
    // linear solves via the Sherman-Morrison split.
    bool refine(double c, complex<double>& lambda, VectorXcd& x) const {
        x.normalize();
        double res = 1e300;
        for (int it = 0; it < 40; ++it) {
            const VectorXcd ax = apply_full(c, x);
            lambda = x.dot(ax);  // x is unit
            res = (ax - lambda * x).norm();
            if (res <= 1e-10 * (1.0 + std::abs(lambda))) return true;
            complex<double> sh = lambda;
            const VectorXcd s = shifted_solve(t, sh, x);
            const VectorXcd tt = shifted_solve(t, sh, p.cast<complex<double>>());
            const complex<double> denom = 1.0 - c * q.cast<complex<double>>().dot(tt);

            VectorXcd xn;
            if (std::abs(denom) < 1e-14) {
                xn = s;
            } else {
                xn = s + (c * q.cast<complex<double>>().dot(s) / denom) * tt;
            }
            const double nn = xn.norm();
            if (!(nn > 0.0) || !std::isfinite(nn)) return false;
            x = xn / nn;
        }
        return res <= 1e-8 * (1.0 + std::abs(lambda));
    }
};

double top_symmetric_eigenvalue(const RadialOperator& op) {
    return tridiag_eigenvalues(build_tridiag(op)).maxCoeff();
}

RadialOperator sample_operator(const RadialProfile& profile, int m, double gamma, int n,
                               double r_max) {
    RadialOperator op;
    op.m = m;
    op.gamma = gamma;
    op.n = n;
    op.r_max = r_max;
    op.h = r_max / n;
    op.r.resize(n);
    op.w.resize(n);
    for (int i = 0; i < n; ++i) {
        op.r[i] = (i + 0.5) * op.h;
        op.w[i] = evaluate_w(profile, op.r[i]);
    }
    return op;
}

}  // namespace

RadialOperator make_radial_operator(const RadialProfile& profile, int m, double gamma, int n,
                                    double r_max) {
    if (m < 0) throw DomainError("make_radial_operator: m must be nonnegative");
    if (gamma < 0.0) throw DomainError("make_radial_operator: gamma must be nonnegative");
    if (n < 2000) throw DomainError("make_radial_operator: n must be at least 2000");
    RadialOperator op = sample_operator(profile, m, gamma, n, r_max);
    // boundary-sensitivity check: enlarging the box must not move the top
    // localized mode. Modes at or below the essential-spectrum edge (-1) are
    // box modes and shift with r_max by construction, so they are exempt.
    const int n25 = static_cast<int>(std::lround(1.25 * n));
    const RadialOperator wide = sample_operator(profile, m, gamma, n25, 1.25 * r_max);
    const double t0 = top_symmetric_eigenvalue(op);
    const double t1 = top_symmetric_eigenvalue(wide);
    if ((t0 > -0.9 || t1 > -0.9) && std::abs(t0 - t1) > 1e-4)
        throw GridError("make_radial_operator: top eigenvalue sensitive to r_max truncation");
    return op;
}

std::vector<double> apply_operator(const RadialOperator& op, const std::vector<double>& phi) {
    if (static_cast<int>(phi.size()) != op.n)
        throw DomainError("apply_operator: size mismatch");
    const int n = op.n;
    const double h2 = op.h * op.h;
    std::vector<double> out(n);
    double wphi = 0.0, ww = 0.0;
    for (int i = 0; i < n; ++i) {
        wphi += op.w[i] * phi[i] * op.r[i];
        ww += op.w[i] * op.w[i] * op.r[i];
    }
    const double nonlocal = (op.m == 0 && op.gamma > 0.0) ? op.gamma * wphi / ww : 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = op.r[i];
        const double rp = r + 0.5 * op.h;
        const double rm = (i == 0) ? 0.0 : r - 0.5 * op.h;
        const double up = (i + 1 < n) ? phi[i + 1] : 0.0;
        const double um = (i > 0) ? phi[i - 1] : phi[i];
        double lap = rp * (up - phi[i]) / (r * h2);
        if (i > 0) lap -= rm * (phi[i] - um) / (r * h2);
        out[i] = lap - (double(op.m) * op.m / (r * r) + 1.0) * phi[i] + 2.0 * op.w[i] * phi[i] -
                 nonlocal * op.w[i] * op.w[i];
    }
    return out;
}

Spectrum local_spectrum(const RadialOperator& op, int count) {
    if (op.m > 2) throw DomainError("local_spectrum: m must be 0, 1 or 2");
    const Tridiag t = build_tridiag(op);
    const VectorXd ev = tridiag_eigenvalues(t);
    Spectrum s;
    for (int j = 0; j < count && j < op.n; ++j)
        s.values.emplace_back(ev[op.n - 1 - j], 0.0);
    const VectorXd v = inverse_iteration(t, ev[op.n - 1], {});
    s.top_function.resize(op.n);
    for (int i = 0; i < op.n; ++i) s.top_function[i] = v[i] / std::sqrt(op.r[i]);
    return s;
}

namespace {

Spectrum spectrum_from_core(const NlepCore& core, const RadialOperator& op, double gamma,
                            int count) {
    const double c = gamma / core.wnorm;
    const int M = static_cast<int>(core.top_vals.size());

    // project the rank-one term onto the top modes of the symmetric part
    MatrixXd a = MatrixXd::Zero(M, M);
    VectorXd pp(M), qq(M);
    for (int j = 0; j < M; ++j) {
        a(j, j) = core.top_vals[j];
        pp[j] = core.top_vecs[j].dot(core.p);
        qq[j] = core.top_vecs[j].dot(core.q);
    }
    a -= c * pp * qq.transpose();
    Eigen::EigenSolver<MatrixXd> es(a);

    std::vector<int> order(M);
    for (int j = 0; j < M; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return es.eigenvalues()[x].real() > es.eigenvalues()[y].real();
    });

    std::vector<complex<double>> found;
    VectorXcd top_vec;
    for (int idx : order) {
        if (static_cast<int>(found.size()) >= count) break;
        complex<double> lam = es.eigenvalues()[idx];
        VectorXcd x = VectorXcd::Zero(op.n);
        for (int j = 0; j < M; ++j)
            x += es.eigenvectors()(j, idx) * core.top_vecs[j].cast<complex<double>>();
        if (!core.refine(c, lam, x))
            throw NonConvergence("nlep_spectrum: eigenpair refinement residual above 1e-8");
        bool dup = false;
        for (const auto& f : found)
            if (std::abs(f - lam) < 1e-7 * (1.0 + std::abs(lam))) dup = true;
        if (dup) continue;
        if (found.empty()) top_vec = x;
        found.push_back(lam);
    }
    std::sort(found.begin(), found.end(),
              [](const complex<double>& x, const complex<double>& y) { return x.real() > y.real(); });

    Spectrum s;
    s.values = found;
    s.top_function.resize(op.n);
    for (int i = 0; i < op.n; ++i) s.top_function[i] = top_vec[i].real() / std::sqrt(op.r[i]);
    return s;
}

}  // namespace

Spectrum nlep_spectrum(const RadialOperator& op, int count) {
    if (op.m >= 1 || op.gamma == 0.0) return local_spectrum(op, count);
    const NlepCore core(op);
    return spectrum_from_core(core, op, op.gamma, count);
}

std::vector<TauScanEntry> nlep_tau_scan(const RadialProfile& profile,
                                        const std::vector<double>& taus, double lambda_guess) {
    RadialOperator op = make_radial_operator(profile, 0, 2.0, 2000, 20.0);
    const NlepCore core(op);
    std::vector<TauScanEntry> out;
    for (double tau : taus) {
        TauScanEntry entry;
        entry.tau = tau;
        if (tau < 0.0) {
            out.push_back(entry);
            continue;
        }
        double lam = lambda_guess;
        try {
            for (int it = 0; it < 60; ++it) {
                op.gamma = 2.0 / (1.0 + tau * lam);
                const Spectrum s = (op.gamma == 0.0) ? local_spectrum(op, 3)
                                                     : spectrum_from_core(core, op, op.gamma, 3);
                const complex<double> top = s.values.at(0);
                const double next = 0.5 * lam + 0.5 * top.real();
                ++entry.iterations;
                if (std::abs(next - lam) <= 1e-8 * (1.0 + std::abs(lam))) {
                    entry.lambda = top;
                    entry.converged = true;
                    break;
                }
                lam = next;
            }
            if (!entry.converged) entry.lambda = complex<double>(lam, 0.0);
        } catch (const NonConvergence&) {
            entry.converged = false;
        }
        out.push_back(entry);
    }
    return out;
}

}  // namespace spikelab
