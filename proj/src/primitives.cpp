#include "v2/primitives.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace v2 {
namespace {

class MeshBuilder {
 public:
  std::int32_t vertex(const Eigen::Vector3d& p) {
    vertices_.push_back(p);
    return static_cast<std::int32_t>(vertices_.size() - 1);
  }
  void triangle(std::int32_t a, std::int32_t b, std::int32_t c) { triangles_.push_back({a, b, c}); }
  const Eigen::Vector3d& at(std::int32_t i) const { return vertices_[static_cast<std::size_t>(i)]; }

  TriangleMesh finish() const {
    TriangleMesh mesh;
    mesh.vertices.resize(static_cast<Eigen::Index>(vertices_.size()), 3);
    for (std::size_t i = 0; i < vertices_.size(); ++i) mesh.vertices.row(static_cast<Eigen::Index>(i)) = vertices_[i];
    mesh.triangles.resize(static_cast<Eigen::Index>(triangles_.size()), 3);
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
      mesh.triangles.row(static_cast<Eigen::Index>(i)) << triangles_[i][0], triangles_[i][1], triangles_[i][2];
    }
    return mesh;
  }

 private:
  std::vector<Eigen::Vector3d> vertices_;
  std::vector<std::array<std::int32_t, 3>> triangles_;
};

Eigen::Vector3d ring_point(int segment, int segments, double radius, double z) {
  const double angle = 2.0 * std::numbers::pi * segment / segments;
  return {radius * std::cos(angle), radius * std::sin(angle), z};
}

void require_segments(int segments, int minimum, const char* what) {
  if (segments < minimum) throw std::invalid_argument(std::string(what) + ": too few segments");
}

}  // namespace

TriangleMesh make_box(const Eigen::Vector3d& half_extents) {
  MeshBuilder builder;
  for (int i = 0; i < 8; ++i) {
    builder.vertex(half_extents.cwiseProduct(
        Eigen::Vector3d((i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0)));
  }
  // Outward winding; corner index bits are (x, y, z).
  constexpr std::array<std::array<std::int32_t, 4>, 6> kFaces = {{
      {0, 2, 3, 1},  // -z
      {4, 5, 7, 6},  // +z
      {0, 1, 5, 4},  // -y
      {2, 6, 7, 3},  // +y
      {0, 4, 6, 2},  // -x
      {1, 3, 7, 5},  // +x
  }};
  for (const auto& f : kFaces) {
    builder.triangle(f[0], f[1], f[2]);
    builder.triangle(f[0], f[2], f[3]);
  }
  return builder.finish();
}

TriangleMesh make_icosphere(double radius, int subdivisions) {
  if (subdivisions < 0) throw std::invalid_argument("make_icosphere: negative subdivision level");
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> points = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                                         {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  for (auto& p : points) p = p.normalized();
  std::vector<std::array<std::int32_t, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> midpoints;
    auto midpoint = [&](std::int32_t a, std::int32_t b) {
      const auto key = std::minmax(a, b);
      if (const auto it = midpoints.find(key); it != midpoints.end()) return it->second;
      points.push_back((points[static_cast<std::size_t>(a)] + points[static_cast<std::size_t>(b)]).normalized());
      const auto index = static_cast<std::int32_t>(points.size() - 1);
      midpoints.emplace(key, index);
      return index;
    };
    std::vector<std::array<std::int32_t, 3>> refined;
    refined.reserve(faces.size() * 4);
    for (const auto& [a, b, c] : faces) {
      const std::int32_t ab = midpoint(a, b);
      const std::int32_t bc = midpoint(b, c);
      const std::int32_t ca = midpoint(c, a);
      refined.push_back({a, ab, ca});
      refined.push_back({b, bc, ab});
      refined.push_back({c, ca, bc});
      refined.push_back({ab, bc, ca});
    }
    faces = std::move(refined);
  }

  MeshBuilder builder;
  for (const auto& p : points) builder.vertex(radius * p);
  for (const auto& [a, b, c] : faces) builder.triangle(a, b, c);
  return builder.finish();
}

TriangleMesh make_cylinder(int segments, double radius, double height) {
  require_segments(segments, 3, "make_cylinder");
  MeshBuilder builder;
  const double h = height / 2.0;
  const std::int32_t bottom_center = builder.vertex({0, 0, -h});
  const std::int32_t top_center = builder.vertex({0, 0, h});
  std::vector<std::int32_t> bottom, top;
  for (int s = 0; s < segments; ++s) {
    bottom.push_back(builder.vertex(ring_point(s, segments, radius, -h)));
    top.push_back(builder.vertex(ring_point(s, segments, radius, h)));
  }
  for (int s = 0; s < segments; ++s) {
    const auto a = static_cast<std::size_t>(s);
    const auto b = static_cast<std::size_t>((s + 1) % segments);
    builder.triangle(bottom[a], bottom[b], top[b]);
    builder.triangle(bottom[a], top[b], top[a]);
    builder.triangle(bottom_center, bottom[b], bottom[a]);
    builder.triangle(top_center, top[a], top[b]);
  }
  return builder.finish();
}

TriangleMesh make_cone(int segments, double radius, double height) {
  require_segments(segments, 3, "make_cone");
  MeshBuilder builder;
  const double h = height / 2.0;
  const std::int32_t base_center = builder.vertex({0, 0, -h});
  const std::int32_t apex = builder.vertex({0, 0, h});
  std::vector<std::int32_t> ring;
  for (int s = 0; s < segments; ++s) ring.push_back(builder.vertex(ring_point(s, segments, radius, -h)));
  for (int s = 0; s < segments; ++s) {
    const auto a = static_cast<std::size_t>(s);
    const auto b = static_cast<std::size_t>((s + 1) % segments);
    builder.triangle(ring[a], ring[b], apex);
    builder.triangle(base_center, ring[b], ring[a]);
  }
  return builder.finish();
}

TriangleMesh make_torus(int major_segments, int minor_segments, double major_radius, double minor_radius) {
  require_segments(major_segments, 3, "make_torus");
  require_segments(minor_segments, 3, "make_torus");
  MeshBuilder builder;
  for (int i = 0; i < major_segments; ++i) {
    const double u = 2.0 * std::numbers::pi * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double v = 2.0 * std::numbers::pi * j / minor_segments;
      const double r = major_radius + minor_radius * std::cos(v);
      builder.vertex({r * std::cos(u), r * std::sin(u), minor_radius * std::sin(v)});
    }
  }
  auto at = [&](int i, int j) {
    return static_cast<std::int32_t>((i % major_segments) * minor_segments + (j % minor_segments));
  };
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      builder.triangle(at(i, j), at(i + 1, j), at(i + 1, j + 1));
      builder.triangle(at(i, j), at(i + 1, j + 1), at(i, j + 1));
    }
  }
  return builder.finish();
}

}  // namespace v2
