#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cstdint>
#include <vector>

#include "spikelab/errors.hpp"
#include "spikelab/ground_state.hpp"
#include "spikelab/reduced_problem.hpp"

namespace spikelab {

/// Node-centred scalar field on the square [-L, L]^2; index = iy * nx + ix.
struct Field2D {
    int nx = 0, ny = 0;
    double h = 0.0;
    double L = 0.0;
    Eigen::VectorXd values;

    double x(int ix) const { return -L + ix * h; }
    double y(int iy) const { return -L + iy * h; }
    double& at(int ix, int iy) { return values[static_cast<Eigen::Index>(iy) * nx + ix]; }
    double at(int ix, int iy) const { return values[static_cast<Eigen::Index>(iy) * nx + ix]; }
};

Field2D make_field(int nx, double L, double fill = 0.0);

enum class InitKind {
    Cluster,        // k spikes on a ring (optionally + centre spike)
    Homogeneous,    // (A, H) = (1, 1); meaningful with mu_second = 0
    ZeroActivator,  // A = 0, H = 1
    SingleSpike,    // one spike at (single_spike_radius, 0)
};

struct SimConfig {
    ModelParams params;  // epsilon, D, tau, mu_second
    int nx = 129;        // odd so the origin is a grid node
    double L = 0.6;
    double dt = 0.005;
    double t_end = 10.0;
    InitKind init = InitKind::Cluster;
    int k = 3;
    bool with_centre = false;
    double cluster_radius = -1.0;  // physical radius; < 0 -> from the reduced equilibrium
    double single_spike_radius = 0.2;
    double spike_amplitude = -1.0;  // < 0 -> xi * D / eps^2
    unsigned seed = 1;
    double perturb_amp = 0.01;   // relative amplitude perturbation per spike
    int snapshot_every = 100;    // steps between SpikeTrack snapshots
    bool quasi_steady = true;    // solve (-D Lap + 1) H = A^2 instead of stepping H
    double tau_floor = 1e-3;     // regularizes tau -> 0 when stepping H in time
};

struct SimState {
    Field2D A, H;
    double t = 0.0;
    std::int64_t step_count = 0;
};

struct SpikeInfo {
    double x = 0.0, y = 0.0;
    double amplitude = 0.0;
};

/// Local maxima of the field above half its global maximum, located to
/// sub-grid accuracy with a quadratic fit; maxima closer than 3h are merged.
std::vector<SpikeInfo> detect_spikes(const Field2D& field);

/// std / mean of consecutive neighbour distances around the centroid mean;
/// zero for fewer than three spikes.
double asymmetry_score(const std::vector<SpikeInfo>& spikes);

struct Snapshot {
    double t = 0.0;
    std::vector<SpikeInfo> spikes;
    double asymmetry = 0.0;
};

struct SpikeTrack {
    std::vector<Snapshot> snapshots;
};

struct RunResult {
    SpikeTrack track;
    SimState state;
};

/// IMEX integrator: reactions explicit, diffusion implicit (5-point Laplacian,
/// Neumann boundary via ghost reflection, factored once).
class Simulator {
public:
    Simulator(const SimConfig& config, const RadialProfile& profile);

    const SimState& state() const { return state_; }
    const SimConfig& config() const { return config_; }

    void step();
    RunResult run();

private:
    void init_fields(const RadialProfile& profile);
    void solve_inhibitor_quasi_steady();
    void check_positivity() const;

    SimConfig config_;
    SimState state_;
    double tau_eff_ = 0.0;
    Eigen::VectorXd mu_grid_;  // precursor mu(|y|) sampled on the grid
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_A_;   // I - dt eps^2 Lap
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_H_;   // I - dt (D/tau) Lap
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_Hq_;  // I - D Lap
};

RunResult run_simulation(const SimConfig& config, const RadialProfile& profile);

}  // namespace spikelab
