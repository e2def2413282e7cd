#include "spikelab/cluster_geometry.hpp"

#include <cmath>

namespace spikelab {

PolygonCluster build_cluster(int k, double radius, double phase, bool with_centre) {
    if (k < 2) throw InvalidK("build_cluster: k must be at least 2");
    if (radius <= 0.0) throw DomainError("build_cluster: radius must be positive");
    PolygonCluster c;
    c.k = k;
    c.radius = radius;
    c.phase = phase;
    c.with_centre = with_centre;
    c.positions.reserve(k + (with_centre ? 1 : 0));
    for (int j = 0; j < k; ++j) {
        const double th = 2.0 * M_PI * j / k + phase;
        c.positions.push_back({radius * std::cos(th), radius * std::sin(th)});
    }
    if (with_centre) c.positions.push_back({0.0, 0.0});
    return c;
}

LocalFrame local_frame(const PolygonCluster& cluster, int j) {
    if (j < 0 || j >= cluster.k)
        throw DomainError("local_frame: vertex index out of range (centre has no frame)");
    const double th = 2.0 * M_PI * j / cluster.k + cluster.phase;
    LocalFrame f;
    f.radial = {std::cos(th), std::sin(th)};
    f.tangential = {-std::sin(th), std::cos(th)};
    return f;
}

Mat4 second_derivative_pair(int k) {
    if (k < 2) throw InvalidK("second_derivative_pair: k must be at least 2");
    const double c = std::cos(2.0 * M_PI / k);
    const double s = std::sin(2.0 * M_PI / k);
    return Mat4{{{2.0, 0.0, -2.0 * c, 2.0 * s},
                 {0.0, 2.0, -2.0 * s, -2.0 * c},
                 {-2.0 * c, -2.0 * s, 2.0, 0.0},
                 {2.0 * s, -2.0 * c, 0.0, 2.0}}};
}

Mat2 second_derivative_self() { return Mat2{{{2.0, 0.0}, {0.0, 2.0}}}; }

double displaced_pair_distance_sq(int k, double radius, const std::array<double, 4>& u) {
    const double psi = 2.0 * M_PI / k;
    // q1 = (radius + u11) e_r(0) + u12 e_t(0); q2 likewise at angle psi
    const double x1 = radius + u[0];
    const double y1 = u[1];
    const double x2 = (radius + u[2]) * std::cos(psi) - u[3] * std::sin(psi);
    const double y2 = (radius + u[2]) * std::sin(psi) + u[3] * std::cos(psi);
    const double dx = x1 - x2, dy = y1 - y2;
    return dx * dx + dy * dy;
}

}  // namespace spikelab
