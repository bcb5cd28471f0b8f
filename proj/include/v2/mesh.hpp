#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace v2 {

template <typename Scalar>
using Points3 = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;
using TriangleIndices = Eigen::Matrix<std::int32_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Indexed triangle soup. Immutable in practice once built; every consumer
/// takes it by const reference.
template <typename Scalar>
struct BasicTriangleMesh {
  Points3<Scalar> vertices;
  TriangleIndices triangles;

  Eigen::Index vertex_count() const { return vertices.rows(); }
  Eigen::Index triangle_count() const { return triangles.rows(); }

  Eigen::Matrix<Scalar, 3, 1> corner(Eigen::Index triangle, int k) const {
    return vertices.row(triangles(triangle, k)).transpose();
  }
};

using TriangleMesh = BasicTriangleMesh<double>;

template <typename Scalar>
using BasicAabb = Eigen::AlignedBox<Scalar, 3>;
using Aabb = BasicAabb<double>;

/// Longest bounding-box side of a normalized object. The containing sphere
/// has diameter 1, so the worst case (a 0.4 cube) has circumradius 0.2*sqrt(3).
inline constexpr double kNormalizedExtent = 0.4;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

/// OFF reader. Polygons are fan-triangulated from their first vertex. A
/// header glued to its counts ("OFF492 18 0") is accepted.
TriangleMesh parse_off(std::istream& in);

/// OBJ reader. Only `v` and `f` records are honored; negative face indices
/// are resolved against the vertices seen so far.
TriangleMesh parse_obj(std::istream& in);

/// Dispatches on extension (.off / .obj, case-insensitive).
TriangleMesh load_mesh(const std::filesystem::path& path);

/// Shortest round-trip decimal representation of every coordinate.
void serialize_off(const TriangleMesh& mesh, std::ostream& out);

/// Throws std::invalid_argument on out-of-range indices or non-finite coordinates.
void validate(const TriangleMesh& mesh);

template <typename Scalar>
BasicAabb<Scalar> bounding_box(const BasicTriangleMesh<Scalar>& mesh) {
  if (mesh.vertex_count() == 0) throw std::invalid_argument("bounding_box: mesh has no vertices");
  return BasicAabb<Scalar>(mesh.vertices.colwise().minCoeff().transpose(),
                           mesh.vertices.colwise().maxCoeff().transpose());
}

/// Centers the bounding box at the origin and scales uniformly so that its
/// longest side is kNormalizedExtent. Connectivity is untouched.
template <typename Scalar>
BasicTriangleMesh<Scalar> normalize(const BasicTriangleMesh<Scalar>& mesh) {
  const BasicAabb<Scalar> box = bounding_box(mesh);
  const Scalar longest = box.sizes().maxCoeff();
  if (!(longest > Scalar(0))) throw std::invalid_argument("normalize: mesh has zero extent");
  const Scalar scale = Scalar(kNormalizedExtent) / longest;
  const Eigen::Matrix<Scalar, 1, 3> center = box.center().transpose();
  BasicTriangleMesh<Scalar> out;
  out.vertices = (mesh.vertices.rowwise() - center) * scale;
  out.triangles = mesh.triangles;
  return out;
}

/// True when the bounding box is centered at the origin with longest side
/// kNormalizedExtent, both within `tolerance`.
bool is_normalized(const TriangleMesh& mesh, double tolerance = 1e-7);

}  // namespace v2
