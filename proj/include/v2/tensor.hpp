#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "v2/view_sampler.hpp"

namespace v2 {

/// Per-ray channels, in their canonical storage order.
enum class Channel : std::uint8_t { depth, cos_inc, sin_inc };

std::string_view channel_name(Channel channel);
Channel parse_channel(std::string_view name);
/// Comma-separated names, returned in canonical order. Rejects duplicates and empty lists.
std::vector<Channel> parse_channel_list(std::string_view list);
std::string join_channel_names(std::span<const Channel> channels);
/// Sorts into canonical order; throws on duplicates or an empty list.
std::vector<Channel> canonical_channels(std::span<const Channel> channels);

/// A generated representation: NV views of y rows by x columns with nc
/// channels each, stored flat in (view, row, col, channel) order.
struct V2Tensor {
  V2Config config;
  std::vector<Channel> channels;
  Eigen::VectorXf values;
  std::string source_id;

  Eigen::Index index(Eigen::Index view, Eigen::Index row, Eigen::Index col, Eigen::Index channel) const {
    return ((view * config.y + row) * config.x + col) * config.nc + channel;
  }
  float operator()(Eigen::Index view, Eigen::Index row, Eigen::Index col, Eigen::Index channel) const {
    return values[index(view, row, col, channel)];
  }
  float& operator()(Eigen::Index view, Eigen::Index row, Eigen::Index col, Eigen::Index channel) {
    return values[index(view, row, col, channel)];
  }

  /// Allocates an all-zero tensor of the right shape.
  static V2Tensor zeros(const V2Config& config, std::span<const Channel> channels, std::string source_id = {});

  /// Throws std::invalid_argument if the value count or channel list disagree with the config.
  void validate() const;
};

/// All views tiled into one image: view (a, b) of the m x n layout occupies
/// rows [a*y, (a+1)*y) and cols [b*x, (b+1)*x). One plane per channel.
struct Montage {
  using Plane = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::vector<Plane> planes;

  Eigen::Index rows() const { return planes.empty() ? 0 : planes.front().rows(); }
  Eigen::Index cols() const { return planes.empty() ? 0 : planes.front().cols(); }
};

Montage tile_montage(const V2Tensor& tensor);
/// Inverse of tile_montage for the given layout.
V2Tensor untile_montage(const Montage& montage, const V2Config& config, std::span<const Channel> channels,
                        std::string source_id = {});

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kV2FormatVersion = 1;

/// Little-endian .v2 container: "V2R1", version, m, n, x, y, nc, channel
/// names, source id, then the float32 payload. Returns bytes written.
std::uint64_t write_v2(const V2Tensor& tensor, std::ostream& out);
V2Tensor read_v2(std::istream& in);

}  // namespace v2
