#pragma once

#include <array>

#include "spikelab/errors.hpp"

namespace spikelab {

// Euler-Mascheroni constant, 20 digits.
inline constexpr double euler_gamma = 0.57721566490153286061;

using Point2 = std::array<double, 2>;

/// Modified Bessel function of the second kind, order 0.
/// Series branch for z <= 2, continued-fraction branch for z > 2;
/// relative error below 1e-12 over the positive axis.
double bessel_k0(double z);

/// Modified Bessel function of the second kind, order 1.
double bessel_k1(double z);

struct GreenParams {
    double sigma;  // decay rate of the free-space kernel of (Laplacian - sigma^2)

    explicit GreenParams(double s) : sigma(s) {
        if (s <= 0.0) throw DomainError("GreenParams: sigma must be positive");
    }
};

/// Free-space kernel (1/2pi) K0(sigma |x-z|); symmetric in its two points.
double green_free(const GreenParams& p, const Point2& x, const Point2& z);

/// Gradient in x: -(sigma/2pi) K1(sigma |x-z|) (x-z)/|x-z|.
Point2 green_gradient(const GreenParams& p, const Point2& x, const Point2& z);

}  // namespace spikelab
