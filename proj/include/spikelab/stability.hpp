#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spikelab/reduced_problem.hpp"

namespace spikelab {

struct CirculantSpec {
    std::vector<std::complex<double>> first_row;
};

Eigen::MatrixXcd circulant(const CirculantSpec& spec);

struct CirculantEigs {
    std::vector<std::complex<double>> values;  // lambda_l, DFT formula
    Eigen::MatrixXcd vectors;                  // column l = X_l, unit norm
};

/// Eigen-decomposition of a circulant matrix by the discrete Fourier basis;
/// each pair is residual-checked to 1e-12.
CirculantEigs circulant_eigs(const CirculantSpec& spec);

/// Nearest-neighbour difference stencils on the cycle:
/// A1 = circ(-2,1,0,...,0,1) (symmetric), A2 = circ(0,1,0,...,0,-1) (antisymmetric).
Eigen::MatrixXd build_A1(int k);
Eigen::MatrixXd build_A2(int k);

/// Unitary DFT matrix, entry (r,c) = exp(2 pi i r c / k) / sqrt(k).
Eigen::MatrixXcd dft_matrix(int k);

struct StabilityMatrices {
    Eigen::MatrixXd M_leading;  // 2k x 2k, s^2(A1+4I) / s c A2 blocks
    Eigen::MatrixXd M_second;   // 2k x 2k, cos(2pi/k) A1 / sin(2pi/k) A2 blocks
    double prefactor_leading = 0.0;  // xi sigma^{3/2} e^{-sigma d} d^{-5/2}
    double prefactor_second = 0.0;   // -K(d) = -xi sigma^{1/2} e^{-sigma d} d^{-3/2}
};

Eigen::MatrixXd build_M_leading(int k);
Eigen::MatrixXd build_M_second(int k);
StabilityMatrices build_stability_matrices(int k, const ModelParams& params,
                                           const ReducedConstants& rc, double d);

/// l-th 2x2 block of the DFT-conjugated leading matrix (zero determinant,
/// nonnegative trace).
Eigen::Matrix2cd leading_block(int k, int l);

/// Kernel vector of leading_block(k, l).
Eigen::Vector2cd leading_kernel_vector(int k, int l);

/// l-th 2x2 block of the DFT-conjugated second-order matrix.
Eigen::Matrix2cd second_block(int k, int l);

/// Small-eigenvalue coefficients: Rayleigh quotient of the second-order block
/// on the leading kernel directions; mu_0 fixed to 0 (rotation mode).
std::vector<double> mu_spectrum(int k);

enum class Verdict { Stable, Marginal, MarginalWithWarning, Unstable };

const char* verdict_name(Verdict v);

struct StabilityReport {
    std::vector<double> mu_values;
    std::vector<std::pair<int, Eigen::Vector2cd>> kernel_modes;
    Verdict verdict = Verdict::Stable;
    int witness = -1;  // decisive mode index, -1 when none
};

StabilityReport classify(int k);

/// Interaction matrix for a polygon with an added centre spike, block form
/// (2k+2)x(2k+2); on radially-restricted vectors its quadratic form is an
/// explicit sum of squares.
Eigen::MatrixXd build_M_centre(int k);

StabilityReport classify_centre(int k);

struct HessianOracleResult {
    double radius = 0.0;                 // polished critical radius
    Eigen::MatrixXd hessian_scaled;      // local-coordinate FD Hessian / natural scale
    Eigen::VectorXd eigenvalues_scaled;  // ascending
    int n_negative = 0;
    int n_zero = 0;
    double tol = 1e-6;
};

/// Finite-difference Hessian of the interaction potential at the computed
/// equilibrium, in local (radial, tangential) coordinates, classified by
/// eigenvalue sign against tolerance 1e-6 on the scaled potential.
HessianOracleResult hessian_oracle(int k, const ModelParams& params, const ReducedConstants& rc);

}  // namespace spikelab
