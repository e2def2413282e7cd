#include "spikelab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "spikelab/nlep.hpp"
#include "spikelab/pde_sim.hpp"
#include "spikelab/stability.hpp"

namespace spikelab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Ctx {
    RadialProfile profile;
    RadialProfile profile_fine;
    GroundStateConstants consts;
};

CriterionResult run_one(const std::string& id, const std::string& title, bool expected_failure,
                        const std::function<void(CriterionResult&)>& body) {
    CriterionResult r;
    r.id = id;
    r.title = title;
    r.expected_failure = expected_failure;
    r.passed = true;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void require(CriterionResult& r, bool ok, const std::string& what) {
    if (!ok) {
        r.passed = false;
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += what;
    }
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

void circulant_spectra(CriterionResult& r) {
    double worst = 0.0;
    for (int k = 3; k <= 12; ++k) {
        CirculantSpec s1, s2;
        const MatrixXd a1 = build_A1(k), a2 = build_A2(k);
        for (int c = 0; c < k; ++c) {
            s1.first_row.push_back(a1(0, c));
            s2.first_row.push_back(a2(0, c));
        }
        const auto e1 = circulant_eigs(s1), e2 = circulant_eigs(s2);
        for (int l = 0; l < k; ++l) {
            const double s = std::sin(M_PI * l / k);
            worst = std::max(worst, std::abs(e1.values[l] - std::complex<double>(-4.0 * s * s)));
            worst = std::max(worst,
                             std::abs(e2.values[l] - std::complex<double>(
                                                         0.0, 2.0 * std::sin(2.0 * M_PI * l / k))));
        }
    }
    require(r, worst <= 1e-12, "closed-form deviation " + num(worst));
    r.detail = "max deviation " + num(worst);
}

void leading_blocks(CriterionResult& r) {
    double wdet = 0.0, wker = 0.0;
    bool traces = true;
    for (int k = 3; k <= 12; ++k) {
        for (int l = 0; l < k; ++l) {
            const auto b = leading_block(k, l);
            wdet = std::max(wdet, std::abs(b.determinant()));
            if (b.trace().real() < 0.0) traces = false;
            wker = std::max(wker, (b * leading_kernel_vector(k, l)).norm());
        }
    }
    require(r, wdet <= 1e-14, "max |det| " + num(wdet));
    require(r, traces, "negative trace found");
    require(r, wker <= 1e-14, "max kernel residual " + num(wker));
    r.detail = "max |det| " + num(wdet) + ", max kernel residual " + num(wker);
}

double mu_numerator(int k, int l) {
    const double a = std::cos(M_PI / k) * std::sin(M_PI * l / k);
    const double b = std::sin(M_PI / k) * std::cos(M_PI * l / k);
    return mu_spectrum(k)[l] * (a * a + b * b);
}

void mu_numerator_l1(CriterionResult& r) {
    double worst = 0.0;
    for (int k = 3; k <= 12; ++k) {
        const double want =
            8.0 * std::pow(std::sin(M_PI / k), 4) * std::pow(std::cos(M_PI / k), 2);
        worst = std::max(worst, std::abs(mu_numerator(k, 1) - want));
    }
    require(r, worst <= 1e-12, "deviation " + num(worst));
    r.detail = "max deviation " + num(worst);
}

void mu_numerator_l2(CriterionResult& r) {
    double worst = 0.0;
    for (int k = 3; k <= 12; ++k) {
        const double want = -4.0 * std::cos(2.0 * M_PI / k) *
                            std::pow(std::sin(2.0 * M_PI / k), 2) *
                            std::pow(std::sin(M_PI / k), 2);
        worst = std::max(worst, std::abs(mu_numerator(k, 2) - want));
    }
    require(r, worst <= 1e-12, "deviation " + num(worst));
    r.detail = "max deviation " + num(worst);
}

void mu_k4_table(CriterionResult& r) {
    const auto mu = mu_spectrum(4);
    const double table[4] = {2.0, 0.0, -2.0, 0.0};
    double worst = 0.0;
    for (int l = 0; l < 4; ++l) worst = std::max(worst, std::abs(mu[l] - table[l]));
    require(r, worst <= 1e-12, "computed (" + num(mu[0]) + ", " + num(mu[1]) + ", " + num(mu[2]) +
                                   ", " + num(mu[3]) +
                                   ") vs tabulated (2, 0, -2, 0); the tabulated row contradicts "
                                   "the pinned numerators (criteria 3a/3b) and the k=4 marginal "
                                   "verdict (criterion 4), which require (0, 2, 0, 2)");
}

void verdicts(CriterionResult& r) {
    require(r, classify(2).verdict == Verdict::Stable, "k=2 not Stable");
    require(r, classify(3).verdict == Verdict::Stable, "k=3 not Stable");
    require(r, classify(4).verdict == Verdict::Marginal, "k=4 not Marginal");
    for (int k = 5; k <= 12; ++k)
        require(r, classify(k).verdict == Verdict::Unstable, "k=" + std::to_string(k) +
                                                                 " not Unstable");
    for (int k = 2; k <= 5; ++k)
        require(r, classify_centre(k).verdict == Verdict::Stable,
                "centre k=" + std::to_string(k) + " not Stable");
    for (int k = 6; k <= 12; ++k)
        require(r, classify_centre(k).verdict == Verdict::MarginalWithWarning,
                "centre k=" + std::to_string(k) + " not Marginal-with-warning");
}

void centre_quadratic_form(CriterionResult& r) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double wform = 0.0, wker = 0.0;
    for (int k : {3, 4, 5}) {
        const MatrixXd m = build_M_centre(k);
        for (int trial = 0; trial < 100; ++trial) {
            VectorXd a = VectorXd::Zero(2 * k + 2);
            for (int l = 0; l < k; ++l) a[l] = u(rng);
            a[k] = u(rng);
            a[2 * k + 1] = u(rng);
            double want = 0.0;
            for (int l = 0; l < k; ++l) {
                const double t = a[l] - a[k] * std::cos(2.0 * M_PI * l / k) -
                                 a[2 * k + 1] * std::sin(2.0 * M_PI * l / k);
                want += t * t;
            }
            wform = std::max(wform, std::abs(a.dot(m * a) - want));
        }
        for (int trial = 0; trial < 10; ++trial) {
            const double alpha = u(rng), beta = u(rng);
            VectorXd a = VectorXd::Zero(2 * k + 2);
            for (int l = 0; l < k; ++l)
                a[l] = alpha * std::cos(2.0 * M_PI * l / k) + beta * std::sin(2.0 * M_PI * l / k);
            a[k] = alpha;
            a[2 * k + 1] = beta;
            wker = std::max(wker, std::abs(a.dot(m * a)));
        }
    }
    require(r, wform <= 1e-10, "sum-of-squares deviation " + num(wform));
    require(r, wker <= 1e-12, "kernel form " + num(wker));
    r.detail = "form deviation " + num(wform) + ", kernel form " + num(wker);
}

void ground_state_constants(CriterionResult& r, const Ctx& ctx) {
    require(r, ctx.profile.residual_sup <= 1e-8,
            "residual " + num(ctx.profile.residual_sup));
    const double dw0 = std::abs(ctx.profile.w0 - ctx.profile_fine.w0);
    require(r, dw0 <= 1e-6, "w0 grid-doubling movement " + num(dw0));
    const double rel = std::abs(ctx.consts.c2 + 0.5 * ctx.consts.int_w2) /
                       std::abs(ctx.consts.c2);
    require(r, rel <= 1e-6, "c2 identity relative error " + num(rel));
    r.detail = "residual " + num(ctx.profile.residual_sup) + ", w0 movement " + num(dw0) +
               ", c2 identity " + num(rel);
}

void equilibrium_radius_ladder(CriterionResult& r, const Ctx& ctx) {
    for (int k : {3, 5}) {
        double prev_plain = 2.0, prev_centre = 2.0;
        for (double D : {1e-2, 1e-3, 1e-4, 1e-5}) {
            const auto p = make_params(0.2 * std::sqrt(D), D);
            const auto rc = make_reduced_constants(p, ctx.consts, k);
            const auto root = equilibrium_radius(k, p, rc);
            require(r,
                    std::abs(root.residual) <= 1e-12 * std::abs(rc.c3_balance * D),
                    "relative residual too large at k=" + std::to_string(k));
            const double gap =
                std::abs(root.radius - asymptotic_radius(k, p, rc)) / root.radius;
            require(r, gap < prev_plain,
                    "gap not decreasing (k=" + std::to_string(k) + ", D=" + num(D) + ")");
            prev_plain = gap;

            const auto rootc = equilibrium_radius_centre(k, p, rc);
            const double gapc =
                std::abs(rootc.radius - asymptotic_radius_centre(p, rc)) / rootc.radius;
            require(r, gapc < prev_centre,
                    "centre gap not decreasing (k=" + std::to_string(k) + ", D=" + num(D) + ")");
            prev_centre = gapc;
        }
    }
}

void hessian_signs(CriterionResult& r, const Ctx& ctx) {
    const auto p = make_params(1e-4, 1e-5);
    const auto h3 = hessian_oracle(3, p, make_reduced_constants(p, ctx.consts, 3));
    require(r, h3.n_negative == 0 && h3.n_zero == 1,
            "k=3 signs: " + std::to_string(h3.n_negative) + " negative, " +
                std::to_string(h3.n_zero) + " zero");
    const auto h5 = hessian_oracle(5, p, make_reduced_constants(p, ctx.consts, 5));
    require(r, h5.n_negative >= 1, "k=5 has no negative direction");
    r.detail = "k=3: (" + std::to_string(h3.n_negative) + " neg, " + std::to_string(h3.n_zero) +
               " zero); k=5: " + std::to_string(h5.n_negative) + " neg";
}

void nlep_bounds(CriterionResult& r, const Ctx& ctx) {
    const auto op0 = make_radial_operator(ctx.profile, 0, 0.0);
    const auto s0 = local_spectrum(op0);
    require(r, s0.values[0].real() > 0.0, "m=0 top eigenvalue not positive");

    const auto op1 = make_radial_operator(ctx.profile, 1, 0.0);
    const auto s1 = local_spectrum(op1);
    require(r, std::abs(s1.values[0]) <= 1e-3,
            "m=1 top eigenvalue " + num(std::abs(s1.values[0])));
    double num_dot = 0.0, nf = 0.0, ng = 0.0;
    for (int i = 0; i < op1.n; ++i) {
        const double h = 1e-6;
        const double wp = (evaluate_w(ctx.profile, op1.r[i] + h) -
                           evaluate_w(ctx.profile, op1.r[i] - h)) /
                          (2.0 * h);
        const double f = s1.top_function[i];
        num_dot += f * wp * op1.r[i];
        nf += f * f * op1.r[i];
        ng += wp * wp * op1.r[i];
    }
    const double corr = std::abs(num_dot) / std::sqrt(nf * ng);
    require(r, corr >= 0.999, "m=1 translation-mode correlation " + num(corr));

    const auto opg = make_radial_operator(ctx.profile, 0, 2.0);
    const auto sg = nlep_spectrum(opg, 6);
    double maxre = -1e300;
    for (const auto& v : sg.values) maxre = std::max(maxre, v.real());
    require(r, maxre <= -0.05, "full-multiplier max real part " + num(maxre));

    const auto sg2 = nlep_spectrum(make_radial_operator(ctx.profile, 0, 2.0, 4000), 3);
    double move = 0.0;
    for (int j = 0; j < 3; ++j) move = std::max(move, std::abs(sg.values[j] - sg2.values[j]));
    require(r, move <= 1e-3, "grid-doubling movement " + num(move));
    r.detail = "m=0 top " + num(s0.values[0].real()) + ", m=1 |top| " +
               num(std::abs(s1.values[0])) + " corr " + num(corr) + ", gamma=2 max Re " +
               num(maxre) + ", doubling move " + num(move);
}

void simulation_smoke(CriterionResult& r, const Ctx& ctx) {
    {  // homogeneous invariance
        SimConfig c;
        c.params = make_params(0.0316, 0.02, 0.0, 1.0, 0.0);
        c.nx = 65;
        c.L = 0.5;
        c.dt = 0.01;
        c.init = InitKind::Homogeneous;
        Simulator sim(c, ctx.profile);
        for (int i = 0; i < 100; ++i) sim.step();
        const double drift =
            std::max((sim.state().A.values.array() - 1.0).abs().maxCoeff(),
                     (sim.state().H.values.array() - 1.0).abs().maxCoeff());
        require(r, drift <= 1e-10, "homogeneous drift " + num(drift));
    }

    const double eps = std::sqrt(0.05 * 0.02);
    {  // inward drift of an off-centre spike
        SimConfig c;
        c.params = make_params(eps, 0.02, 0.0, 1.0, 10.0);
        c.init = InitKind::SingleSpike;
        c.single_spike_radius = 0.2;
        c.t_end = 10.0;
        const auto res = run_simulation(c, ctx.profile);
        const auto& snaps = res.track.snapshots;
        int down = 0, pairs = 0;
        auto radius = [](const Snapshot& s) {
            return s.spikes.size() == 1 ? std::hypot(s.spikes[0].x, s.spikes[0].y) : -1.0;
        };
        bool single = true;
        for (const auto& s : snaps) single = single && s.spikes.size() == 1;
        for (std::size_t i = 1; i < snaps.size(); ++i) {
            ++pairs;
            if (radius(snaps[i]) < radius(snaps[i - 1])) ++down;
        }
        require(r, single, "spike count changed during the drift run");
        require(r, down >= (8 * pairs) / 10,
                "inward drift in only " + std::to_string(down) + "/" + std::to_string(pairs) +
                    " snapshot pairs");
    }

    {  // k=3 ring stays a symmetric triangle
        SimConfig c;
        c.params = make_params(eps, 0.02, 0.0, 1.0, 2.0);
        c.k = 3;
        c.t_end = 10.0;
        c.snapshot_every = 200;
        c.seed = 11;
        const auto res = run_simulation(c, ctx.profile);
        const double a0 = std::max(res.track.snapshots.front().asymmetry, 0.05);
        for (const auto& s : res.track.snapshots) {
            require(r, s.spikes.size() == 3, "k=3 spike count changed");
            require(r, s.asymmetry <= 2.0 * a0, "k=3 asymmetry grew beyond twice its start");
            if (!r.passed) break;
        }
    }

    {  // k=5 ring: a non-detection inside the budget is inconclusive, not a failure
        SimConfig c;
        c.params = make_params(eps, 0.02, 0.0, 1.0, 2.0);
        c.k = 5;
        c.L = 0.7;
        c.t_end = 15.0;
        c.snapshot_every = 200;
        c.seed = 17;
        const auto res = run_simulation(c, ctx.profile);
        const double a0 = std::max(res.track.snapshots.front().asymmetry, 1e-3);
        bool unstable = false;
        for (const auto& s : res.track.snapshots)
            if (s.spikes.size() != 5 || s.asymmetry >= 5.0 * a0) unstable = true;
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += unstable ? "k=5 instability detected"
                             : "k=5 stayed symmetric within budget: inconclusive";
    }
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
    Ctx ctx;
    ctx.profile = solve_ground_state(20.0, 4000, 1e-8);
    ctx.profile_fine = solve_ground_state(20.0, 8000, 1e-8);
    ctx.consts = integrals(ctx.profile);

    std::vector<CriterionResult> out;
    out.push_back(run_one("1", "circulant spectra match closed forms", false, circulant_spectra));
    out.push_back(run_one("2", "leading blocks are degenerate with annihilated kernel", false,
                          leading_blocks));
    out.push_back(run_one("3a", "small-eigenvalue numerator at mode 1", false, mu_numerator_l1));
    out.push_back(run_one("3b", "small-eigenvalue numerator at mode 2", false, mu_numerator_l2));
    out.push_back(run_one("3c", "k=4 tabulated small-eigenvalue row", true, mu_k4_table));
    out.push_back(run_one("4", "stability verdicts with and without centre", false, verdicts));
    out.push_back(run_one("5", "centre quadratic form is the sum of squares", false,
                          centre_quadratic_form));
    out.push_back(run_one("6", "ground-state residual, grid stability, c2 identity", false,
                          [&](CriterionResult& r) { ground_state_constants(r, ctx); }));
    out.push_back(run_one("7", "equilibrium radius residual and asymptotic gap ladder", false,
                          [&](CriterionResult& r) { equilibrium_radius_ladder(r, ctx); }));
    out.push_back(run_one("8", "finite-difference Hessian sign patterns", false,
                          [&](CriterionResult& r) { hessian_signs(r, ctx); }));
    out.push_back(run_one("9", "spectral bounds of the linearized operators", false,
                          [&](CriterionResult& r) { nlep_bounds(r, ctx); }));
    out.push_back(run_one("10", "simulation smoke suite", false,
                          [&](CriterionResult& r) { simulation_smoke(r, ctx); }));
    return out;
}

int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os) {
    int failed = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failed;
        os << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << " - " << r.title;
        if (!r.passed && r.expected_failure) os << " [documented contradiction]";
        if (!r.detail.empty()) os << " (" << r.detail << ")";
        os << " [" << num(r.elapsed_seconds) << " s]\n";
    }
    return failed;
}

}  // namespace spikelab
