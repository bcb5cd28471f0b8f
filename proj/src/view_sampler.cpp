#include "v2/view_sampler.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace v2 {

void V2Config::validate() const {
  if (m < 1 || n < 1 || x < 1 || y < 1 || nc < 1) {
    throw std::invalid_argument("V2Config: all parameters must be positive, got " + to_string());
  }
}

std::string V2Config::to_string() const {
  std::string out = std::to_string(m) + "x" + std::to_string(n) + "x" + std::to_string(x) + "x" + std::to_string(y);
  if (nc != 1) out += "c" + std::to_string(nc);
  return out;
}

V2Config V2Config::parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&] { return std::invalid_argument("malformed config string '" + original + "', expected MxNxXxY[cK]"); };

  auto take_int = [&](char terminator, bool last) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data()) throw fail();
    text.remove_prefix(static_cast<std::size_t>(ptr - text.data()));
    if (!last) {
      if (text.empty() || text.front() != terminator) throw fail();
      text.remove_prefix(1);
    }
    return value;
  };

  V2Config config;
  config.m = take_int('x', false);
  config.n = take_int('x', false);
  config.x = take_int('x', false);
  config.y = take_int('c', true);
  if (!text.empty()) {
    if (text.front() != 'c') throw fail();
    text.remove_prefix(1);
    config.nc = take_int('\0', true);
    if (!text.empty()) throw fail();
  }
  config.validate();
  return config;
}

Eigen::Vector3d SphericalDirection::to_point(double radius) const {
  return radius * Eigen::Vector3d(std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi));
}

std::vector<ViewCenter> sample_view_centers(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("sample_view_centers: m and n must be positive");
  std::vector<ViewCenter> centers;
  centers.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (int row = 0; row < m; ++row) {
    // Uniform in cos(phi): equal-area latitude bands, no polar clustering.
    const double u = (row + 0.5) / m;
    const double phi = std::acos(1.0 - 2.0 * u);
    for (int col = 0; col < n; ++col) {
      const SphericalDirection direction{2.0 * std::numbers::pi * col / n, phi};
      centers.push_back({direction, direction.to_point()});
    }
  }
  return centers;
}

ViewFrame build_view_frame(const Eigen::Vector3d& center) {
  const double length = center.norm();
  if (!(length > 0.0)) throw std::invalid_argument("build_view_frame: zero-length view center");
  if (std::abs(length - kSphereRadius) > 1e-9) {
    throw std::invalid_argument("build_view_frame: view center is not on the containing sphere");
  }
  ViewFrame frame;
  frame.center = center;
  frame.normal = -center / length;
  const Eigen::Vector3d up_hint =
      std::abs(center.z()) / length > 1.0 - 1e-9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitZ();
  frame.right = up_hint.cross(frame.normal).normalized();
  frame.up = frame.normal.cross(frame.right);
  return frame;
}

Points3<double> grid_ray_origins(const ViewFrame& frame, int x, int y, double d) {
  if (x < 1 || y < 1 || !(d > 0.0)) throw std::invalid_argument("grid_ray_origins: need x, y >= 1 and d > 0");
  Points3<double> origins(static_cast<Eigen::Index>(x) * y, 3);
  const int ci = x / 2;
  const int cj = y / 2;
  for (int j = 0; j < y; ++j) {
    for (int i = 0; i < x; ++i) {
      origins.row(static_cast<Eigen::Index>(j) * x + i) =
          (frame.center + (i - ci) * d * frame.right + (j - cj) * d * frame.up).transpose();
    }
  }
  return origins;
}

std::vector<V2Config> enumerate_continuum(const V2Config& base) {
  base.validate();
  if (base.x != base.y) throw std::invalid_argument("enumerate_continuum: base view must be square");
  std::vector<V2Config> chain;
  for (int f = 1; f <= base.x; ++f) {
    if (base.x % f != 0) continue;
    chain.push_back({base.m * f, base.n * f, base.x / f, base.y / f, base.nc});
  }
  return chain;
}

}  // namespace v2
