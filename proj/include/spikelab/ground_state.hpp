#pragma once

#include <vector>

#include "spikelab/errors.hpp"

namespace spikelab {

/// Radial profile of the positive decaying solution of w'' + w'/r - w + w^2 = 0.
struct RadialProfile {
    std::vector<double> r_grid;    // uniform, 0 .. r_max
    std::vector<double> w_values;  // w(r), strictly decreasing, positive
    std::vector<double> w_derivs;  // w'(r), w'(0) = 0
    double w0 = 0.0;               // w(0)
    double residual_sup = 0.0;     // sup |w'' + w'/r - w + w^2| on interior nodes
    double tail_C = 0.0;           // w(r) ~ tail_C r^{-1/2} e^{-r} beyond r_max
};

struct GroundStateConstants {
    double int_w2 = 0.0;  // integral of w^2 over the plane
    double int_w3 = 0.0;  // integral of w^3 over the plane
    double c1 = 0.0;      // (1/3) int_w2 int_w3
    double c2 = 0.0;      // pi * int w w' r^2 dr  (= -int_w2/2, negative)
};

/// Shooting solve: bisect on w(0) in [1, 4] between trajectories that cross
/// zero and those that turn back up, RK4 on the radial ODE with a series
/// start near the origin. Far tail (w below ~1e-5) is filled with the decaying
/// solution of the linearized equation so the residual stays at the tolerance.
RadialProfile solve_ground_state(double r_max, int n, double tol);

GroundStateConstants integrals(const RadialProfile& profile);

/// Monotone cubic (Hermite) interpolation on the grid; fitted
/// tail_C r^{-1/2} e^{-r} beyond r_max.
double evaluate_w(const RadialProfile& profile, double r);

}  // namespace spikelab
