#pragma once

#include "v2/mesh.hpp"

namespace v2 {

/// Axis-aligned box centered at the origin, 8 vertices and 12 triangles.
TriangleMesh make_box(const Eigen::Vector3d& half_extents = Eigen::Vector3d::Constant(0.5));

/// Subdivided icosahedron with every vertex on the sphere of `radius`.
/// Level L has 20 * 4^L triangles.
TriangleMesh make_icosphere(double radius, int subdivisions);

/// Closed cylinder along z, capped with center fans.
TriangleMesh make_cylinder(int segments, double radius = 0.5, double height = 1.0);

/// Closed cone along z with its apex at +height/2.
TriangleMesh make_cone(int segments, double radius = 0.5, double height = 1.0);

/// Torus around the z axis with `major_segments` x `minor_segments` quads,
/// 2 * major * minor triangles.
TriangleMesh make_torus(int major_segments, int minor_segments, double major_radius = 0.35,
                        double minor_radius = 0.15);

}  // namespace v2
