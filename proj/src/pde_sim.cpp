#include "spikelab/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace spikelab {

namespace {

// 5-point Laplacian on the [-L, L]^2 node grid with homogeneous Neumann
// boundary: the ghost node across a wall mirrors the first interior node.
Eigen::SparseMatrix<double> build_laplacian(int nx, double h) {
    const int n = nx * nx;
    const double w = 1.0 / (h * h);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5) * n);
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int iy = 0; iy < nx; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const int row = iy * nx + ix;
            trip.emplace_back(row, row, -4.0 * w);
            for (int d = 0; d < 4; ++d) {
                int jx = ix + dx[d];
                int jy = iy + dy[d];
                if (jx < 0) jx = 1;
                if (jx >= nx) jx = nx - 2;
                if (jy < 0) jy = 1;
                if (jy >= nx) jy = nx - 2;
                trip.emplace_back(row, jy * nx + jx, w);
            }
        }
    }
    Eigen::SparseMatrix<double> lap(n, n);
    lap.setFromTriplets(trip.begin(), trip.end());
    return lap;
}

void factor(Eigen::SparseLU<Eigen::SparseMatrix<double>>& solver,
            const Eigen::SparseMatrix<double>& m, const char* what) {
    solver.compute(m);
    if (solver.info() != Eigen::Success)
        throw LinearSolveFailure(std::string("pde_sim: factorization failed for ") + what);
}

}  // namespace

Field2D make_field(int nx, double L, double fill) {
    if (nx < 3 || L <= 0.0) throw DomainError("make_field: need nx >= 3 and L > 0");
    Field2D f;
    f.nx = nx;
    f.ny = nx;
    f.L = L;
    f.h = 2.0 * L / (nx - 1);
    f.values = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(nx) * nx, fill);
    return f;
}

std::vector<SpikeInfo> detect_spikes(const Field2D& field) {
    std::vector<SpikeInfo> peaks;
    const int nx = field.nx, ny = field.ny;
    const double maxv = field.values.maxCoeff();
    const double minv = field.values.minCoeff();
    if (maxv <= 0.0 || maxv - minv <= 1e-12 * (std::abs(maxv) + 1.0)) return peaks;
    const double thresh = 0.5 * maxv;

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double f0 = field.at(ix, iy);
            if (f0 <= thresh) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                    if (field.at(jx, jy) >= f0) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (!is_max) continue;

            // sub-grid offset from a 1D quadratic fit along each axis
            auto offset = [&](double fm, double fc, double fp) {
                const double curv = fm - 2.0 * fc + fp;
                if (curv >= 0.0) return 0.0;
                return std::clamp(0.5 * (fm - fp) / curv, -0.5, 0.5);
            };
            double ox = 0.0, oy = 0.0;
            if (ix > 0 && ix < nx - 1)
                ox = offset(field.at(ix - 1, iy), f0, field.at(ix + 1, iy));
            if (iy > 0 && iy < ny - 1)
                oy = offset(field.at(ix, iy - 1), f0, field.at(ix, iy + 1));
            peaks.push_back({field.x(ix) + ox * field.h, field.y(iy) + oy * field.h, f0});
        }
    }

    // merge peaks closer than 3h into the stronger one
    std::sort(peaks.begin(), peaks.end(), [](const SpikeInfo& a, const SpikeInfo& b) {
        if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<SpikeInfo> kept;
    const double rmin = 3.0 * field.h;
    for (const auto& p : peaks) {
        bool close = false;
        for (const auto& q : kept) {
            if (std::hypot(p.x - q.x, p.y - q.y) < rmin) {
                close = true;
                break;
            }
        }
        if (!close) kept.push_back(p);
    }
    return kept;
}

double asymmetry_score(const std::vector<SpikeInfo>& spikes) {
    const int n = static_cast<int>(spikes.size());
    if (n < 3) return 0.0;
    double cx = 0.0, cy = 0.0;
    for (const auto& s : spikes) {
        cx += s.x;
        cy += s.y;
    }
    cx /= n;
    cy /= n;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::atan2(spikes[a].y - cy, spikes[a].x - cx) <
               std::atan2(spikes[b].y - cy, spikes[b].x - cx);
    });
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) {
        const auto& a = spikes[order[i]];
        const auto& b = spikes[order[(i + 1) % n]];
        d[i] = std::hypot(a.x - b.x, a.y - b.y);
    }
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= n;
    if (mean <= 0.0) return 0.0;
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    return std::sqrt(var / n) / mean;
}

Simulator::Simulator(const SimConfig& config, const RadialProfile& profile) : config_(config) {
    const auto& c = config_;
    if (c.nx < 9 || c.nx % 2 == 0)
        throw DomainError("Simulator: nx must be odd and at least 9");
    if (c.L <= 0.0 || c.dt <= 0.0 || c.t_end < 0.0 || c.snapshot_every < 1)
        throw DomainError("Simulator: need L, dt > 0, t_end >= 0, snapshot_every >= 1");
    if (c.perturb_amp < 0.0 || c.perturb_amp > 0.01 + 1e-15)
        throw DomainError("Simulator: perturbation amplitude must lie in [0, 0.01]");
    tau_eff_ = std::max(c.params.tau, c.tau_floor);

    state_.A = make_field(c.nx, c.L);
    state_.H = make_field(c.nx, c.L);
    const int n = c.nx * c.nx;
    mu_grid_.resize(n);
    for (int iy = 0; iy < c.nx; ++iy)
        for (int ix = 0; ix < c.nx; ++ix)
            mu_grid_[iy * c.nx + ix] =
                c.params.mu(std::hypot(state_.A.x(ix), state_.A.y(iy)));

    const auto lap = build_laplacian(c.nx, state_.A.h);
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    const double e2 = c.params.epsilon * c.params.epsilon;
    factor(solver_A_, Eigen::SparseMatrix<double>(eye - (c.dt * e2) * lap), "activator");
    factor(solver_Hq_, Eigen::SparseMatrix<double>(eye - c.params.D * lap),
           "quasi-steady inhibitor");
    if (!c.quasi_steady)
        factor(solver_H_, Eigen::SparseMatrix<double>(eye - (c.dt * c.params.D / tau_eff_) * lap),
               "inhibitor");

    init_fields(profile);

    // explicit-reaction stability bound, estimated on the initial fields
    double rate = c.quasi_steady ? 0.0 : 1.0 / tau_eff_;
    for (int i = 0; i < n; ++i) {
        const double a = state_.A.values[i], h = state_.H.values[i];
        if (h > 0.0) rate = std::max(rate, std::abs(-mu_grid_[i] + 2.0 * a / h));
    }
    if (c.dt * rate > 0.2)
        throw DomainError("Simulator: dt * max reaction rate exceeds 0.2; reduce dt");
}

void Simulator::init_fields(const RadialProfile& profile) {
    const auto& c = config_;
    auto& A = state_.A;
    auto& H = state_.H;

    if (c.init == InitKind::Homogeneous) {
        A.values.setOnes();
        H.values.setOnes();
        return;
    }
    if (c.init == InitKind::ZeroActivator) {
        A.values.setZero();
        H.values.setOnes();
        return;
    }

    const double eps = c.params.epsilon;
    double amp = c.spike_amplitude;
    if (amp < 0.0) {
        const auto g = integrals(profile);
        amp = compute_xi(c.params, g.int_w2) * c.params.D / (eps * eps);
    }

    std::vector<Point2> centres;
    if (c.init == InitKind::SingleSpike) {
        centres.push_back({c.single_spike_radius, 0.0});
    } else {
        double radius = c.cluster_radius;
        if (radius < 0.0) {
            const auto g = integrals(profile);
            const auto rc = make_reduced_constants(c.params, g, c.k);
            double r = equilibrium_radius(c.k, c.params, rc).radius;
            try {
                r = polish_radius_to_critical(c.k, c.params, rc, r, c.with_centre);
            } catch (const NoRoot&) {
                // keep the pairwise-balance radius; qualitative runs tolerate it
            }
            radius = eps * r;
        }
        const auto cluster = build_cluster(c.k, radius / eps, 0.0, c.with_centre);
        for (const auto& q : cluster.positions) centres.push_back({eps * q[0], eps * q[1]});
    }

    std::mt19937 rng(c.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> factor(centres.size());
    for (std::size_t j = 0; j < centres.size(); ++j)
        factor[j] = amp * (1.0 + c.perturb_amp * unit(rng));

    const double r_cut = eps * profile.r_grid.back();
    A.values.setZero();
    for (int iy = 0; iy < c.nx; ++iy) {
        for (int ix = 0; ix < c.nx; ++ix) {
            const double px = A.x(ix), py = A.y(iy);
            double acc = 0.0;
            for (std::size_t j = 0; j < centres.size(); ++j) {
                const double d = std::hypot(px - centres[j][0], py - centres[j][1]);
                if (d > r_cut) continue;
                const double w = evaluate_w(profile, d / eps);
                if (w > 1e-6) acc += factor[j] * w;
            }
            A.at(ix, iy) = acc;
        }
    }

    // consistent inhibitor from the quasi-steady elliptic balance
    solve_inhibitor_quasi_steady();
}

void Simulator::solve_inhibitor_quasi_steady() {
    const Eigen::VectorXd rhs = state_.A.values.array().square();
    state_.H.values = solver_Hq_.solve(rhs);
    if (solver_Hq_.info() != Eigen::Success)
        throw LinearSolveFailure("pde_sim: quasi-steady inhibitor solve failed");
}

void Simulator::check_positivity() const {
    const auto& A = state_.A.values;
    const auto& H = state_.H.values;
    if (A.allFinite() && H.allFinite() && A.minCoeff() >= 0.0 && H.minCoeff() > 0.0) return;
    std::ostringstream msg;
    msg << "pde_sim: positivity lost at step " << state_.step_count << " (t = " << state_.t
        << "): min A = " << A.minCoeff() << ", min H = " << H.minCoeff()
        << ", max A = " << A.maxCoeff();
    throw PositivityLoss(msg.str());
}

void Simulator::step() {
    const auto& c = config_;
    const int n = c.nx * c.nx;
    auto& A = state_.A.values;
    auto& H = state_.H.values;

    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i)
        rhs[i] = A[i] + c.dt * (-mu_grid_[i] * A[i] + A[i] * A[i] / H[i]);
    A = solver_A_.solve(rhs);
    if (solver_A_.info() != Eigen::Success)
        throw LinearSolveFailure("pde_sim: activator solve failed");
    // clip rounding-level undershoot; genuine negativity still trips the check
    for (int i = 0; i < n; ++i)
        if (A[i] < 0.0 && A[i] > -1e-12) A[i] = 0.0;

    if (c.quasi_steady) {
        solve_inhibitor_quasi_steady();
    } else {
        for (int i = 0; i < n; ++i) rhs[i] = H[i] + c.dt * (-H[i] + A[i] * A[i]) / tau_eff_;
        H = solver_H_.solve(rhs);
        if (solver_H_.info() != Eigen::Success)
            throw LinearSolveFailure("pde_sim: inhibitor solve failed");
    }

    ++state_.step_count;
    state_.t = state_.step_count * c.dt;
    check_positivity();
}

RunResult Simulator::run() {
    const auto& c = config_;
    const std::int64_t steps = std::llround(c.t_end / c.dt);
    auto snapshot = [&]() {
        Snapshot s;
        s.t = state_.t;
        s.spikes = detect_spikes(state_.A);
        s.asymmetry = asymmetry_score(s.spikes);
        return s;
    };
    RunResult out;
    out.track.snapshots.push_back(snapshot());
    for (std::int64_t i = 1; i <= steps; ++i) {
        step();
        if (i % c.snapshot_every == 0 || i == steps) out.track.snapshots.push_back(snapshot());
    }
    out.state = state_;
    return out;
}

RunResult run_simulation(const SimConfig& config, const RadialProfile& profile) {
    Simulator sim(config, profile);
    return sim.run();
}

}  // namespace spikelab
