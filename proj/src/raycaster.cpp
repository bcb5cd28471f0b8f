#include "v2/raycaster.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace v2 {
namespace {

struct Candidate {
  double t = std::numeric_limits<double>::infinity();
  std::int32_t triangle = -1;
};

// Shared by brute force and traversal so both agree on ties regardless of visiting order.
bool better(double t, std::int32_t triangle, const Candidate& best) {
  if (best.triangle < 0) return true;
  if (t < best.t - kTieTolerance) return true;
  return std::abs(t - best.t) <= kTieTolerance && triangle < best.triangle;
}

void test_triangle(const TriangleMesh& mesh, std::int32_t triangle, const Ray& ray, Candidate& best) {
  const auto t = intersect_triangle<double>(ray.origin(), ray.direction(), mesh.corner(triangle, 0),
                                            mesh.corner(triangle, 1), mesh.corner(triangle, 2));
  if (t && *t >= kMinHitDistance && better(*t, triangle, best)) best = {*t, triangle};
}

RayHit finish(const TriangleMesh& mesh, const Ray& ray, const Candidate& best) {
  const Eigen::Vector3d a = mesh.corner(best.triangle, 0);
  const Eigen::Vector3d normal = (mesh.corner(best.triangle, 1) - a).cross(mesh.corner(best.triangle, 2) - a).normalized();
  const double signed_cos = ray.direction().dot(normal);
  RayHit hit;
  hit.t = best.t;
  hit.triangle = best.triangle;
  hit.surface_normal = signed_cos > 0.0 ? Eigen::Vector3d(-normal) : normal;
  hit.cos_inc = std::clamp(std::abs(signed_cos), 0.0, 1.0);
  hit.sin_inc = std::sqrt(1.0 - hit.cos_inc * hit.cos_inc);
  return hit;
}

// Entry distance of the ray into the box, or nothing if it misses within [0, t_max].
std::optional<double> enter_box(const Aabb& box, const Eigen::Vector3d& origin, const Eigen::Vector3d& direction,
                                const Eigen::Vector3d& inv_direction, double t_max) {
  double t_near = 0.0;
  double t_far = t_max;
  for (int axis = 0; axis < 3; ++axis) {
    if (direction[axis] == 0.0) {
      if (origin[axis] < box.min()[axis] || origin[axis] > box.max()[axis]) return std::nullopt;
      continue;
    }
    double t0 = (box.min()[axis] - origin[axis]) * inv_direction[axis];
    double t1 = (box.max()[axis] - origin[axis]) * inv_direction[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  return t_near;
}

class BvhBuilder {
 public:
  BvhBuilder(const TriangleMesh& mesh, std::vector<Bvh::Node>& nodes, std::vector<std::int32_t>& order)
      : mesh_(mesh), nodes_(nodes), order_(order) {
    centroids_.resize(mesh.triangle_count(), 3);
    for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
      centroids_.row(t) = (mesh.corner(t, 0) + mesh.corner(t, 1) + mesh.corner(t, 2)).transpose() / 3.0;
    }
  }

  std::int32_t build(std::size_t begin, std::size_t end) {
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({triangle_bounds(begin, end), 0, 0});
    const std::size_t count = end - begin;
    if (count <= static_cast<std::size_t>(Bvh::kMaxLeafSize)) {
      nodes_[index].right_or_first = static_cast<std::int32_t>(begin);
      nodes_[index].count = static_cast<std::int32_t>(count);
      return index;
    }
    Aabb centroid_bounds;
    for (std::size_t i = begin; i < end; ++i) centroid_bounds.extend(centroids_.row(order_[i]).transpose());
    int axis = 0;
    centroid_bounds.sizes().maxCoeff(&axis);
    const std::size_t mid = begin + count / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid), order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::int32_t lhs, std::int32_t rhs) {
                       const double cl = centroids_(lhs, axis);
                       const double cr = centroids_(rhs, axis);
                       return cl < cr || (cl == cr && lhs < rhs);
                     });
    build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes_[index].right_or_first = right;
    return index;
  }

 private:
  Aabb triangle_bounds(std::size_t begin, std::size_t end) const {
    Aabb box;
    for (std::size_t i = begin; i < end; ++i) {
      for (int k = 0; k < 3; ++k) box.extend(mesh_.corner(order_[i], k));
    }
    // Pad so slab-test rounding never rejects a hit the triangle test accepts.
    const double pad = 1e-9 * std::max(1.0, box.sizes().maxCoeff());
    box.min().array() -= pad;
    box.max().array() += pad;
    return box;
  }

  const TriangleMesh& mesh_;
  std::vector<Bvh::Node>& nodes_;
  std::vector<std::int32_t>& order_;
  Points3<double> centroids_;
};

}  // namespace

bool is_degenerate(const TriangleMesh& mesh, Eigen::Index triangle) {
  const Eigen::Vector3d a = mesh.corner(triangle, 0);
  return (mesh.corner(triangle, 1) - a).cross(mesh.corner(triangle, 2) - a).squaredNorm() < 1e-30;
}

Bvh build_bvh(const TriangleMesh& mesh) {
  validate(mesh);
  Bvh bvh;
  bvh.source_triangles_ = mesh.triangle_count();
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    if (!is_degenerate(mesh, t)) bvh.order_.push_back(static_cast<std::int32_t>(t));
  }
  if (bvh.order_.empty()) throw std::invalid_argument("build_bvh: mesh has no non-degenerate triangles");
  bvh.nodes_.reserve(2 * bvh.order_.size() / Bvh::kMaxLeafSize + 1);
  BvhBuilder(mesh, bvh.nodes_, bvh.order_).build(0, bvh.order_.size());
  return bvh;
}

std::optional<RayHit> intersect_brute(const TriangleMesh& mesh, const Ray& ray) {
  Candidate best;
  for (Eigen::Index t = 0; t < mesh.triangle_count(); ++t) {
    if (!is_degenerate(mesh, t)) test_triangle(mesh, static_cast<std::int32_t>(t), ray, best);
  }
  if (best.triangle < 0) return std::nullopt;
  return finish(mesh, ray, best);
}

std::optional<RayHit> intersect(const Bvh& bvh, const TriangleMesh& mesh, const Ray& ray) {
  if (bvh.source_triangle_count() != mesh.triangle_count()) {
    throw std::invalid_argument("intersect: BVH was built from a different mesh");
  }
  const auto& nodes = bvh.nodes();
  const auto& order = bvh.order();
  const Eigen::Vector3d& origin = ray.origin();
  const Eigen::Vector3d& direction = ray.direction();
  const Eigen::Vector3d inv_direction = direction.cwiseInverse();
  constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  Candidate best;
  std::array<std::int32_t, 128> stack{};
  std::size_t top = 0;
  if (!enter_box(nodes[0].bounds, origin, direction, inv_direction, kUnbounded)) return std::nullopt;
  stack[top++] = 0;

  while (top > 0) {
    const Bvh::Node& node = nodes[static_cast<std::size_t>(stack[--top])];
    const double limit = best.triangle < 0 ? kUnbounded : best.t + kTieTolerance;
    if (node.is_leaf()) {
      for (std::int32_t i = 0; i < node.count; ++i) {
        test_triangle(mesh, order[static_cast<std::size_t>(node.right_or_first + i)], ray, best);
      }
      continue;
    }
    const std::int32_t left = static_cast<std::int32_t>(&node - nodes.data()) + 1;
    const std::int32_t right = node.right_or_first;
    const auto t_left = enter_box(nodes[static_cast<std::size_t>(left)].bounds, origin, direction, inv_direction, limit);
    const auto t_right = enter_box(nodes[static_cast<std::size_t>(right)].bounds, origin, direction, inv_direction, limit);
    // Push the farther child first so the nearer one is visited next.
    if (t_left && t_right) {
      const bool left_first = *t_left <= *t_right;
      stack[top++] = left_first ? right : left;
      stack[top++] = left_first ? left : right;
    } else if (t_left) {
      stack[top++] = left;
    } else if (t_right) {
      stack[top++] = right;
    }
  }
  if (best.triangle < 0) return std::nullopt;
  return finish(mesh, ray, best);
}

}  // namespace v2
