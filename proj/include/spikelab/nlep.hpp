#pragma once

#include <complex>
#include <vector>

#include "spikelab/ground_state.hpp"

namespace spikelab {

/// Radial linearized operator phi'' + phi'/r - (m^2/r^2 + 1) phi + 2 w phi,
/// optionally with the nonlocal term -gamma (int w phi / int w^2) w^2 (m = 0).
/// Discretized in flux form on cell centres r_i = (i - 1/2) h.
struct RadialOperator {
    int m = 0;
    double gamma = 0.0;
    int n = 0;
    double r_max = 0.0;
    double h = 0.0;
    std::vector<double> r;  // cell centres
    std::vector<double> w;  // ground-state samples
};

RadialOperator make_radial_operator(const RadialProfile& profile, int m, double gamma,
                                    int n = 2000, double r_max = 20.0);

/// Apply the operator (including the nonlocal term) to grid samples.
std::vector<double> apply_operator(const RadialOperator& op, const std::vector<double>& phi);

struct Spectrum {
    std::vector<std::complex<double>> values;  // descending real part
    std::vector<double> top_function;          // eigenfunction of values[0] (real part)
};

/// Leading eigenvalues of the gamma = 0 operator (self-adjoint in the
/// r-weighted inner product).
Spectrum local_spectrum(const RadialOperator& op, int count = 3);

/// Leading eigenvalues of the nonlocally perturbed operator. The rank-one
/// term is handled by projection onto the top modes of the symmetric part
/// followed by Rayleigh-quotient refinement on the full operator; every
/// returned eigenpair has residual at most 1e-8 (times 1 + |lambda|).
Spectrum nlep_spectrum(const RadialOperator& op, int count = 6);

struct TauScanEntry {
    double tau = 0.0;
    std::complex<double> lambda{0.0, 0.0};  // converged top eigenvalue
    bool converged = false;
    int iterations = 0;
};

/// Damped fixed-point scan in lambda for the relaxation-dependent multiplier
/// 2/(1 + tau lambda); diagnostic only, non-convergence is recorded per entry.
std::vector<TauScanEntry> nlep_tau_scan(const RadialProfile& profile,
                                        const std::vector<double>& taus, double lambda_guess);

}  // namespace spikelab
