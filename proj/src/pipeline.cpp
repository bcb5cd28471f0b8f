#include "v2/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <png.h>

#include "v2/parallel.hpp"

namespace v2 {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

}  // namespace

V2Tensor generate(const TriangleMesh& mesh, const Bvh& bvh, const V2Config& config, std::span<const Channel> channels,
                  std::string source_id, int jobs) {
  if (!is_normalized(mesh)) throw std::invalid_argument("generate: mesh is not normalized");
  V2Tensor tensor = V2Tensor::zeros(config, channels, std::move(source_id));
  const auto centers = sample_view_centers(config.m, config.n);
  const double d = config.d();

  parallel_for(centers.size(), jobs, [&](std::size_t view) {
    const ViewFrame frame = build_view_frame(centers[view].point);
    const Points3<double> origins = grid_ray_origins(frame, config.x, config.y, d);
    const auto v = static_cast<Eigen::Index>(view);
    for (int j = 0; j < config.y; ++j) {
      for (int i = 0; i < config.x; ++i) {
        const Ray ray(origins.row(static_cast<Eigen::Index>(j) * config.x + i).transpose(), frame.normal);
        const auto hit = intersect(bvh, mesh, ray);
        for (int k = 0; k < config.nc; ++k) {
          float value = 0.0f;
          switch (tensor.channels[static_cast<std::size_t>(k)]) {
            case Channel::depth:
              value = hit ? static_cast<float>(std::min(hit->t, 1.0)) : kBackgroundDepth;
              break;
            case Channel::cos_inc:
              value = hit ? static_cast<float>(hit->cos_inc) : 0.0f;
              break;
            case Channel::sin_inc:
              value = hit ? static_cast<float>(hit->sin_inc) : 0.0f;
              break;
          }
          tensor(v, j, i, k) = value;
        }
      }
    }
  });
  return tensor;
}

void write_preview_png(const V2Tensor& tensor, const std::filesystem::path& path) {
  const auto depth = std::find(tensor.channels.begin(), tensor.channels.end(), Channel::depth);
  if (depth == tensor.channels.end()) throw std::invalid_argument("write_preview_png: tensor has no depth channel");
  const Montage montage = tile_montage(tensor);
  const Montage::Plane& plane = montage.planes[static_cast<std::size_t>(depth - tensor.channels.begin())];

  std::vector<png_byte> pixels(static_cast<std::size_t>(plane.size()));
  for (Eigen::Index r = 0; r < plane.rows(); ++r) {
    for (Eigen::Index c = 0; c < plane.cols(); ++c) {
      const double shade = std::round(255.0 * (1.0 - std::clamp(static_cast<double>(plane(r, c)), 0.0, 1.0)));
      pixels[static_cast<std::size_t>(r * plane.cols() + c)] = static_cast<png_byte>(shade);
    }
  }

  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(plane.cols()), static_cast<png_uint_32>(plane.rows()), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Eigen::Index r = 0; r < plane.rows(); ++r) png_write_row(png, pixels.data() + r * plane.cols());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

nlohmann::json make_manifest(const V2Tensor& tensor, const std::string& source_path) {
  nlohmann::json channels = nlohmann::json::array();
  for (const Channel channel : tensor.channels) channels.push_back(std::string(channel_name(channel)));
  return {{"source", source_path},
          {"config", tensor.config.to_string()},
          {"channels", channels},
          {"generated_at", utc_timestamp()},
          {"toolkit_version", kToolkitVersion}};
}

void save_v2(const V2Tensor& tensor, const std::filesystem::path& path, const std::string& source_path) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_v2(tensor, out);
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
  }
  std::ofstream manifest(path.string() + ".json", std::ios::trunc);
  manifest << make_manifest(tensor, source_path).dump(2) << '\n';
  manifest.close();
  if (!manifest) throw std::runtime_error("failed writing manifest for " + path.string());
}

V2Tensor load_v2(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_v2(in);
}

}  // namespace v2
