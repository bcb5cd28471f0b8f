#include "v2/tensor.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <istream>
#include <ostream>

namespace v2 {
namespace {

constexpr std::array<std::string_view, 3> kChannelNames = {"depth", "cos_inc", "sin_inc"};
constexpr std::array<char, 4> kMagic = {'V', '2', 'R', '1'};
// Guards against absurd allocations from corrupt headers.
constexpr std::uint32_t kMaxStringBytes = 1u << 20;

void put_u32(std::ostream& out, std::uint32_t value) {
  const std::array<char, 4> bytes = {static_cast<char>(value & 0xff), static_cast<char>((value >> 8) & 0xff),
                                     static_cast<char>((value >> 16) & 0xff), static_cast<char>((value >> 24) & 0xff)};
  out.write(bytes.data(), bytes.size());
}

void read_exact(std::istream& in, char* data, std::size_t size, const char* what) {
  in.read(data, static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in.gcount()) != size) throw FormatError(std::string("truncated payload reading ") + what);
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  std::array<unsigned char, 4> bytes{};
  read_exact(in, reinterpret_cast<char*>(bytes.data()), bytes.size(), what);
  return std::uint32_t{bytes[0]} | std::uint32_t{bytes[1]} << 8 | std::uint32_t{bytes[2]} << 16 |
         std::uint32_t{bytes[3]} << 24;
}

std::string get_string(std::istream& in, const char* what) {
  const std::uint32_t length = get_u32(in, what);
  if (length > kMaxStringBytes) throw FormatError(std::string("implausible length for ") + what);
  std::string text(length, '\0');
  read_exact(in, text.data(), length, what);
  return text;
}

int checked_dimension(std::uint32_t value, const char* what) {
  if (value == 0 || value > 1u << 24) throw FormatError(std::string("invalid header field ") + what);
  return static_cast<int>(value);
}

}  // namespace

std::string_view channel_name(Channel channel) { return kChannelNames.at(static_cast<std::size_t>(channel)); }

Channel parse_channel(std::string_view name) {
  for (std::size_t i = 0; i < kChannelNames.size(); ++i) {
    if (kChannelNames[i] == name) return static_cast<Channel>(i);
  }
  throw std::invalid_argument("unknown channel '" + std::string(name) + "' (expected depth, cos_inc, sin_inc)");
}

std::vector<Channel> canonical_channels(std::span<const Channel> channels) {
  std::vector<Channel> sorted(channels.begin(), channels.end());
  if (sorted.empty()) throw std::invalid_argument("channel list is empty");
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("channel list has duplicates");
  }
  return sorted;
}

std::vector<Channel> parse_channel_list(std::string_view list) {
  std::vector<Channel> channels;
  while (true) {
    const auto comma = list.find(',');
    channels.push_back(parse_channel(list.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return canonical_channels(channels);
}

std::string join_channel_names(std::span<const Channel> channels) {
  std::string out;
  for (const Channel channel : channels) {
    if (!out.empty()) out += ',';
    out += channel_name(channel);
  }
  return out;
}

V2Tensor V2Tensor::zeros(const V2Config& config, std::span<const Channel> channels, std::string source_id) {
  config.validate();
  V2Tensor tensor;
  tensor.config = config;
  tensor.channels = canonical_channels(channels);
  if (static_cast<int>(tensor.channels.size()) != config.nc) {
    throw std::invalid_argument("config nc = " + std::to_string(config.nc) + " but " +
                                std::to_string(tensor.channels.size()) + " channels requested");
  }
  tensor.values = Eigen::VectorXf::Zero(config.total_pixels());
  tensor.source_id = std::move(source_id);
  return tensor;
}

void V2Tensor::validate() const {
  config.validate();
  if (static_cast<int>(channels.size()) != config.nc) throw std::invalid_argument("channel count disagrees with nc");
  if (values.size() != config.total_pixels()) throw std::invalid_argument("value count disagrees with config");
}

Montage tile_montage(const V2Tensor& tensor) {
  tensor.validate();
  const V2Config& c = tensor.config;
  Montage montage;
  montage.planes.assign(static_cast<std::size_t>(c.nc), Montage::Plane(c.m * c.y, c.n * c.x));
  for (int a = 0; a < c.m; ++a) {
    for (int b = 0; b < c.n; ++b) {
      const Eigen::Index view = static_cast<Eigen::Index>(a) * c.n + b;
      for (int j = 0; j < c.y; ++j) {
        for (int i = 0; i < c.x; ++i) {
          for (int k = 0; k < c.nc; ++k) {
            montage.planes[static_cast<std::size_t>(k)](a * c.y + j, b * c.x + i) = tensor(view, j, i, k);
          }
        }
      }
    }
  }
  return montage;
}

V2Tensor untile_montage(const Montage& montage, const V2Config& config, std::span<const Channel> channels,
                        std::string source_id) {
  V2Tensor tensor = V2Tensor::zeros(config, channels, std::move(source_id));
  const V2Config& c = tensor.config;
  if (static_cast<int>(montage.planes.size()) != c.nc || montage.rows() != c.m * c.y || montage.cols() != c.n * c.x) {
    throw std::invalid_argument("untile_montage: montage shape disagrees with config " + c.to_string());
  }
  for (int a = 0; a < c.m; ++a) {
    for (int b = 0; b < c.n; ++b) {
      const Eigen::Index view = static_cast<Eigen::Index>(a) * c.n + b;
      for (int j = 0; j < c.y; ++j) {
        for (int i = 0; i < c.x; ++i) {
          for (int k = 0; k < c.nc; ++k) {
            tensor(view, j, i, k) = montage.planes[static_cast<std::size_t>(k)](a * c.y + j, b * c.x + i);
          }
        }
      }
    }
  }
  return tensor;
}

std::uint64_t write_v2(const V2Tensor& tensor, std::ostream& out) {
  tensor.validate();
  const std::string names = join_channel_names(tensor.channels);
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kV2FormatVersion);
  for (const int field : {tensor.config.m, tensor.config.n, tensor.config.x, tensor.config.y, tensor.config.nc}) {
    put_u32(out, static_cast<std::uint32_t>(field));
  }
  put_u32(out, static_cast<std::uint32_t>(names.size()));
  out.write(names.data(), static_cast<std::streamsize>(names.size()));
  put_u32(out, static_cast<std::uint32_t>(tensor.source_id.size()));
  out.write(tensor.source_id.data(), static_cast<std::streamsize>(tensor.source_id.size()));
  for (const float value : tensor.values) put_u32(out, std::bit_cast<std::uint32_t>(value));
  if (!out) throw std::runtime_error("write_v2: stream write failed");
  return 4 + 4 * 7 + names.size() + 4 + tensor.source_id.size() + 4 * static_cast<std::uint64_t>(tensor.values.size());
}

V2Tensor read_v2(std::istream& in) {
  std::array<char, 4> magic{};
  read_exact(in, magic.data(), magic.size(), "magic");
  if (magic != kMagic) throw FormatError("bad magic, not a .v2 container");
  if (const std::uint32_t version = get_u32(in, "version"); version != kV2FormatVersion) {
    throw FormatError("unsupported .v2 version " + std::to_string(version));
  }
  V2Config config;
  config.m = checked_dimension(get_u32(in, "m"), "m");
  config.n = checked_dimension(get_u32(in, "n"), "n");
  config.x = checked_dimension(get_u32(in, "x"), "x");
  config.y = checked_dimension(get_u32(in, "y"), "y");
  config.nc = checked_dimension(get_u32(in, "nc"), "nc");
  const std::string names = get_string(in, "channel names");
  std::string source_id = get_string(in, "source id");

  std::vector<Channel> channels;
  try {
    channels = parse_channel_list(names);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad channel block: ") + e.what());
  }
  if (static_cast<int>(channels.size()) != config.nc) throw FormatError("channel block disagrees with nc");

  V2Tensor tensor;
  tensor.config = config;
  tensor.channels = std::move(channels);
  tensor.source_id = std::move(source_id);
  tensor.values.resize(config.total_pixels());
  std::vector<unsigned char> payload(static_cast<std::size_t>(config.total_pixels()) * 4);
  read_exact(in, reinterpret_cast<char*>(payload.data()), payload.size(), "values");
  for (Eigen::Index i = 0; i < tensor.values.size(); ++i) {
    const unsigned char* p = payload.data() + 4 * i;
    tensor.values[i] = std::bit_cast<float>(std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
                                            std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24);
  }
  return tensor;
}

}  // namespace v2
