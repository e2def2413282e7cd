#pragma once

#include <array>
#include <vector>

#include "spikelab/greens.hpp"

namespace spikelab {

struct PolygonCluster {
    int k = 0;               // polygon vertex count
    double radius = 0.0;     // vertex distance from the origin
    double phase = 0.0;      // angular offset of vertex 1
    bool with_centre = false;
    std::vector<Point2> positions;  // vertices in order; centre appended last if present
};

/// Orthonormal frame at a vertex: component 1 radial, component 2 tangential
/// (radial rotated a quarter turn anti-clockwise).
struct LocalFrame {
    Point2 radial;
    Point2 tangential;
};

PolygonCluster build_cluster(int k, double radius, double phase = 0.0, bool with_centre = false);

LocalFrame local_frame(const PolygonCluster& cluster, int j);

using Mat4 = std::array<std::array<double, 4>, 4>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Second derivatives of the squared distance between adjacent vertices with
/// respect to local (radial, tangential) displacements of the two points.
/// Row/column order: point-1 radial, point-1 tangential, point-2 radial,
/// point-2 tangential.
Mat4 second_derivative_pair(int k);

/// Second derivatives of |q1|^2 with respect to local displacements of q1.
Mat2 second_derivative_self();

/// Squared distance between vertices 1 and 2 after displacing each by local
/// coordinates u = (u11, u12, u21, u22); exact, used by derivative oracles.
double displaced_pair_distance_sq(int k, double radius, const std::array<double, 4>& u);

}  // namespace spikelab
