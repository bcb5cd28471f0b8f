#include "v2/mesh.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace v2 {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

double parse_coordinate(std::string_view token, long line) {
  double value = 0.0;
  if (!parse_number(token, value) || !std::isfinite(value)) {
    throw ParseError("invalid coordinate '" + std::string(token) + "'", line);
  }
  return value;
}

// Line reader that strips CR, '#' comments, and skips blank lines.
class ContentLines {
 public:
  explicit ContentLines(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\f\v") != std::string::npos) return true;
    }
    return false;
  }

  long number() const { return number_; }

 private:
  std::istream& in_;
  long number_ = 0;
};

void append_fan(std::vector<std::array<std::int32_t, 3>>& out, const std::vector<std::int32_t>& polygon) {
  for (std::size_t i = 1; i + 1 < polygon.size(); ++i) out.push_back({polygon[0], polygon[i], polygon[i + 1]});
}

TriangleMesh assemble(const std::vector<std::array<double, 3>>& vertices,
                      const std::vector<std::array<std::int32_t, 3>>& triangles) {
  TriangleMesh mesh;
  mesh.vertices.resize(static_cast<Eigen::Index>(vertices.size()), 3);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    mesh.vertices.row(static_cast<Eigen::Index>(i)) << vertices[i][0], vertices[i][1], vertices[i][2];
  }
  mesh.triangles.resize(static_cast<Eigen::Index>(triangles.size()), 3);
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    mesh.triangles.row(static_cast<Eigen::Index>(i)) << triangles[i][0], triangles[i][1], triangles[i][2];
  }
  return mesh;
}

}  // namespace

TriangleMesh parse_off(std::istream& in) {
  ContentLines lines(in);
  std::string line;
  if (!lines.next(line)) throw ParseError("missing OFF header", lines.number());

  auto tokens = split_ws(line);
  if (tokens.empty() || !tokens[0].starts_with("OFF")) {
    throw ParseError("expected OFF header", lines.number());
  }
  // ModelNet ships files whose header reads "OFF492 18 0".
  tokens[0].remove_prefix(3);
  if (tokens[0].empty()) tokens.erase(tokens.begin());
  if (tokens.empty()) {
    if (!lines.next(line)) throw ParseError("missing vertex/face counts", lines.number());
    tokens = split_ws(line);
  }
  long vertex_count = 0;
  long face_count = 0;
  if (tokens.size() < 2 || !parse_number(tokens[0], vertex_count) || !parse_number(tokens[1], face_count) ||
      vertex_count < 0 || face_count < 0) {
    throw ParseError("malformed vertex/face counts", lines.number());
  }

  std::vector<std::array<double, 3>> vertices;
  vertices.reserve(static_cast<std::size_t>(vertex_count));
  for (long i = 0; i < vertex_count; ++i) {
    if (!lines.next(line)) {
      throw ParseError("count mismatch: expected " + std::to_string(vertex_count) + " vertices, found " +
                           std::to_string(i),
                       lines.number());
    }
    const auto fields = split_ws(line);
    if (fields.size() < 3) throw ParseError("vertex needs 3 coordinates", lines.number());
    vertices.push_back({parse_coordinate(fields[0], lines.number()), parse_coordinate(fields[1], lines.number()),
                        parse_coordinate(fields[2], lines.number())});
  }

  std::vector<std::array<std::int32_t, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(face_count));
  std::vector<std::int32_t> polygon;
  for (long f = 0; f < face_count; ++f) {
    if (!lines.next(line)) {
      throw ParseError("count mismatch: expected " + std::to_string(face_count) + " faces, found " + std::to_string(f),
                       lines.number());
    }
    const auto fields = split_ws(line);
    long valence = 0;
    if (!parse_number(fields[0], valence)) throw ParseError("malformed face record", lines.number());
    if (valence < 3) throw ParseError("face needs at least 3 vertices", lines.number());
    if (static_cast<long>(fields.size()) < valence + 1) throw ParseError("face has too few indices", lines.number());
    polygon.clear();
    for (long k = 0; k < valence; ++k) {
      long index = 0;
      if (!parse_number(fields[static_cast<std::size_t>(k + 1)], index)) {
        throw ParseError("malformed face index", lines.number());
      }
      if (index < 0 || index >= vertex_count) {
        throw ParseError("face index " + std::to_string(index) + " out of range", lines.number());
      }
      polygon.push_back(static_cast<std::int32_t>(index));
    }
    append_fan(triangles, polygon);
  }

  if (lines.next(line)) throw ParseError("count mismatch: unexpected content after last face", lines.number());
  return assemble(vertices, triangles);
}

TriangleMesh parse_obj(std::istream& in) {
  ContentLines lines(in);
  std::string line;
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<std::int32_t, 3>> triangles;
  std::vector<std::int32_t> polygon;

  while (lines.next(line)) {
    const auto fields = split_ws(line);
    if (fields[0] == "v") {
      if (fields.size() < 4) throw ParseError("vertex needs 3 coordinates", lines.number());
      vertices.push_back({parse_coordinate(fields[1], lines.number()), parse_coordinate(fields[2], lines.number()),
                          parse_coordinate(fields[3], lines.number())});
    } else if (fields[0] == "f") {
      if (fields.size() < 4) throw ParseError("face needs at least 3 vertices", lines.number());
      polygon.clear();
      const long count = static_cast<long>(vertices.size());
      for (std::size_t k = 1; k < fields.size(); ++k) {
        // "v", "v/vt", "v//vn", "v/vt/vn": only the position index matters.
        const std::string_view ref = fields[k].substr(0, fields[k].find('/'));
        long index = 0;
        if (!parse_number(ref, index) || index == 0) throw ParseError("malformed face index", lines.number());
        const long resolved = index > 0 ? index - 1 : count + index;
        if (resolved < 0 || resolved >= count) {
          throw ParseError("face index " + std::to_string(index) + " out of range", lines.number());
        }
        polygon.push_back(static_cast<std::int32_t>(resolved));
      }
      append_fan(triangles, polygon);
    }
  }
  return assemble(vertices, triangles);
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".off") return parse_off(in);
  if (ext == ".obj") return parse_obj(in);
  throw std::runtime_error("unsupported mesh format: " + path.string());
}

void serialize_off(const TriangleMesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  std::array<char, 32> buffer{};
  for (Eigen::Index i = 0; i < mesh.vertex_count(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), mesh.vertices(i, k));
      out << (k ? " " : "") << std::string_view(buffer.data(), static_cast<std::size_t>(end - buffer.data()));
    }
    out << '\n';
  }
  for (Eigen::Index i = 0; i < mesh.triangle_count(); ++i) {
    out << "3 " << mesh.triangles(i, 0) << ' ' << mesh.triangles(i, 1) << ' ' << mesh.triangles(i, 2) << '\n';
  }
}

void validate(const TriangleMesh& mesh) {
  if (!mesh.vertices.allFinite()) throw std::invalid_argument("mesh has non-finite coordinates");
  if (mesh.triangle_count() == 0) return;
  if (mesh.triangles.minCoeff() < 0 || mesh.triangles.maxCoeff() >= mesh.vertex_count()) {
    throw std::invalid_argument("mesh has out-of-range triangle indices");
  }
}

bool is_normalized(const TriangleMesh& mesh, double tolerance) {
  if (mesh.vertex_count() == 0) return false;
  const Aabb box = bounding_box(mesh);
  return std::abs(box.sizes().maxCoeff() - kNormalizedExtent) <= tolerance &&
         box.center().cwiseAbs().maxCoeff() <= tolerance;
}

}  // namespace v2
