#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "v2/mesh.hpp"

namespace v2 {

using Ray = Eigen::ParametrizedLine<double, 3>;

/// Hits closer than this to the ray origin are ignored.
inline constexpr double kMinHitDistance = 1e-9;
/// Hits whose distances differ by less than this are ties; the lower triangle index wins.
inline constexpr double kTieTolerance = 1e-12;

struct RayHit {
  double t = 0.0;  // travelling distance from the ray origin
  std::int32_t triangle = -1;
  Eigen::Vector3d surface_normal;  // geometric normal, flipped to face the ray
  double cos_inc = 0.0;
  double sin_inc = 0.0;
};

/// Moller-Trumbore ray/triangle test. Returns the ray parameter of the
/// intersection, barycentric bounds inclusive, or nothing for a miss or a
/// ray parallel to the triangle plane.
template <typename Scalar>
std::optional<Scalar> intersect_triangle(const Eigen::Matrix<Scalar, 3, 1>& origin,
                                         const Eigen::Matrix<Scalar, 3, 1>& direction,
                                         const Eigen::Matrix<Scalar, 3, 1>& a, const Eigen::Matrix<Scalar, 3, 1>& b,
                                         const Eigen::Matrix<Scalar, 3, 1>& c) {
  const Eigen::Matrix<Scalar, 3, 1> e1 = b - a;
  const Eigen::Matrix<Scalar, 3, 1> e2 = c - a;
  const Eigen::Matrix<Scalar, 3, 1> p = direction.cross(e2);
  const Scalar det = e1.dot(p);
  if (std::abs(det) < Scalar(1e-14)) return std::nullopt;
  const Scalar inv_det = Scalar(1) / det;
  const Eigen::Matrix<Scalar, 3, 1> s = origin - a;
  const Scalar u = s.dot(p) * inv_det;
  if (u < Scalar(0) || u > Scalar(1)) return std::nullopt;
  const Eigen::Matrix<Scalar, 3, 1> q = s.cross(e1);
  const Scalar v = direction.dot(q) * inv_det;
  if (v < Scalar(0) || u + v > Scalar(1)) return std::nullopt;
  return e2.dot(q) * inv_det;
}

/// Zero-area triangles are kept in meshes but never reported as hits.
bool is_degenerate(const TriangleMesh& mesh, Eigen::Index triangle);

/// Binary bounding volume hierarchy over the non-degenerate triangles of a
/// mesh. Nodes are stored depth-first: an interior node's left child follows
/// it directly and `right_or_first` indexes its right child; a leaf's
/// triangles are `order()[right_or_first, right_or_first + count)`.
class Bvh {
 public:
  static constexpr int kMaxLeafSize = 4;

  struct Node {
    Aabb bounds;
    std::int32_t right_or_first = 0;
    std::int32_t count = 0;  // > 0 for leaves

    bool is_leaf() const { return count > 0; }
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::int32_t>& order() const { return order_; }
  Eigen::Index source_triangle_count() const { return source_triangles_; }

 private:
  friend Bvh build_bvh(const TriangleMesh& mesh);

  std::vector<Node> nodes_;
  std::vector<std::int32_t> order_;
  Eigen::Index source_triangles_ = 0;
};

/// Median split on the longest axis of the triangle-centroid bounds.
/// Throws std::invalid_argument if the mesh has no non-degenerate triangle.
Bvh build_bvh(const TriangleMesh& mesh);

/// Nearest hit with t >= kMinHitDistance over every triangle. Reference for `intersect`.
std::optional<RayHit> intersect_brute(const TriangleMesh& mesh, const Ray& ray);

/// Same contract and result as intersect_brute, accelerated by `bvh`, which
/// must have been built from `mesh`.
std::optional<RayHit> intersect(const Bvh& bvh, const TriangleMesh& mesh, const Ray& ray);

}  // namespace v2
