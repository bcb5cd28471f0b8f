#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "v2/mesh.hpp"

namespace v2 {

/// Radius of the containing sphere (diameter 1).
inline constexpr double kSphereRadius = 0.5;

/// The generation parameters of a V2 representation.
///
/// `m` counts latitude rows and `n` longitude columns of the view layout,
/// `x` by `y` is the ray grid of each view and `nc` the channels per ray.
/// The grid spacing is tied to the view width, d = 1/x, so a full-width
/// view spans the sphere diameter.
struct V2Config {
  int m = 1;
  int n = 1;
  int x = 1;
  int y = 1;
  int nc = 1;

  double d() const { return 1.0 / x; }
  std::int64_t view_count() const { return std::int64_t{m} * n; }
  std::int64_t pixels_per_view() const { return std::int64_t{x} * y; }
  std::int64_t total_pixels() const { return view_count() * pixels_per_view() * nc; }

  /// Throws std::invalid_argument unless every parameter is positive.
  void validate() const;

  /// "MxNxXxY", with a "cK" suffix when nc != 1.
  std::string to_string() const;
  /// Accepts "MxNxXxY" or "MxNxXxYcK".
  static V2Config parse(std::string_view text);

  bool operator==(const V2Config&) const = default;
};

struct SphericalDirection {
  double theta = 0.0;  // azimuth, [0, 2pi)
  double phi = 0.0;    // polar angle, (0, pi)

  Eigen::Vector3d to_point(double radius = kSphereRadius) const;
};

struct ViewCenter {
  SphericalDirection direction;
  Eigen::Vector3d point;
};

/// Orthonormal camera basis at a view center. `normal` points toward the
/// origin and right x up = normal.
struct ViewFrame {
  Eigen::Vector3d center;
  Eigen::Vector3d normal;
  Eigen::Vector3d right;
  Eigen::Vector3d up;
};

/// m latitude rows (equal-area, midpoint of each band) by n longitudes, row-major.
std::vector<ViewCenter> sample_view_centers(int m, int n);

ViewFrame build_view_frame(const Eigen::Vector3d& center);

/// Ray origins on the tangent plane; row `j * x + i` holds grid cell (row j, col i).
Points3<double> grid_ray_origins(const ViewFrame& frame, int x, int y, double d);

/// Every configuration reachable from `base` by splitting each view into
/// f x f sub-views, for each divisor f of base.x, in ascending f.
std::vector<V2Config> enumerate_continuum(const V2Config& base);

}  // namespace v2
