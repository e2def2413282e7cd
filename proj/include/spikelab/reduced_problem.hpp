#pragma once

#include <vector>

#include "spikelab/cluster_geometry.hpp"
#include "spikelab/ground_state.hpp"

namespace spikelab {

struct ModelParams {
    double epsilon = 0.0;
    double D = 0.0;
    double tau = 0.0;
    double domain_radius = 1.0;
    double mu_second = 2.0;  // second derivative of the precursor at the origin
    double sigma = 0.0;      // epsilon / sqrt(D)
    bool regime_ok = true;   // smallness conditions satisfied (warned, not fatal)

    double mu(double r) const { return 1.0 + 0.5 * mu_second * r * r; }
};

/// Validates and derives sigma; prints a warning (and clears regime_ok) when
/// the smallness conditions eps^2/D <= 0.1 and D log(sqrt(D)/eps) <= 0.1 fail.
ModelParams make_params(double epsilon, double D, double tau = 0.0, double domain_radius = 1.0,
                        double mu_second = 2.0);

struct ReducedConstants {
    double xi = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3_potential = 0.0;  // -c2/c1  (> 0)
    double c3_balance = 0.0;    // c2 mu''(0) / (4 c1 sin^2(pi/k))  (< 0)
};

double compute_xi(const ModelParams& params, double int_w2);

ReducedConstants make_reduced_constants(const ModelParams& params, const GroundStateConstants& g,
                                        int k);

/// Interaction potential: sum over ordered pairs of
/// xi (sigma d)^{-1/2} e^{-sigma d} plus c3_potential sum of mu(eps |q_i|).
double potential(const PolygonCluster& q, const ReducedConstants& rc, const ModelParams& params);

/// Same with the constant part of the precursor removed (mu - 1); identical
/// derivatives, better conditioned for finite differencing.
double potential_centered(const PolygonCluster& q, const ReducedConstants& rc,
                          const ModelParams& params);

/// Analytic gradient with respect to each position, Cartesian components.
std::vector<Point2> potential_gradient(const PolygonCluster& q, const ReducedConstants& rc,
                                       const ModelParams& params);

struct RadiusResult {
    double radius = 0.0;      // polygon radius (inner length scale)
    double residual = 0.0;    // balance-equation residual at the root
    double derivative = 0.0;  // d(balance)/dR at the root, nondegeneracy witness
};

/// Radius balancing nearest-neighbour repulsion against the precursor drift
/// for a plain k-polygon; bisection on the monotone branch plus Newton polish.
RadiusResult equilibrium_radius(int k, const ModelParams& params, const ReducedConstants& rc);

/// Closed-form leading asymptotics of the same radius.
double asymptotic_radius(int k, const ModelParams& params, const ReducedConstants& rc);

/// Radius of the polygon when a spike sits at the centre: the centre-vertex
/// interaction dominates and sets the scale.
RadiusResult equilibrium_radius_centre(int k, const ModelParams& params,
                                       const ReducedConstants& rc);

double asymptotic_radius_centre(const ModelParams& params, const ReducedConstants& rc);

/// Polish a radius to the exact critical point of the potential along the
/// uniform radial direction (the balance equations drop subleading kernel
/// terms, so their roots are near, not at, the critical point).
double polish_radius_to_critical(int k, const ModelParams& params, const ReducedConstants& rc,
                                 double r0, bool with_centre = false);

}  // namespace spikelab
