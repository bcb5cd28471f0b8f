#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <png.h>
#include <unistd.h>

#include "v2/mesh.hpp"

namespace v2::testing {

/// Triangle soup with vertices uniform in [-1, 1]^3.
inline TriangleMesh random_soup(std::mt19937_64& rng, int triangles) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  TriangleMesh mesh;
  mesh.vertices.resize(3 * triangles, 3);
  mesh.triangles.resize(triangles, 3);
  for (int t = 0; t < triangles; ++t) {
    for (int k = 0; k < 3; ++k) {
      mesh.vertices.row(3 * t + k) << coord(rng), coord(rng), coord(rng);
      mesh.triangles(t, k) = 3 * t + k;
    }
  }
  return mesh;
}

inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("v2test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> pixels;
};

inline GrayImage read_gray_png(const std::filesystem::path& path) {
  GrayImage image;
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) return image;
  png.format = PNG_FORMAT_GRAY;
  image.width = static_cast<int>(png.width);
  image.height = static_cast<int>(png.height);
  image.pixels.resize(PNG_IMAGE_SIZE(png));
  png_image_finish_read(&png, nullptr, image.pixels.data(), 0, nullptr);
  return image;
}

}  // namespace v2::testing
