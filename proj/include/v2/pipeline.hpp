#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "v2/mesh.hpp"
#include "v2/raycaster.hpp"
#include "v2/tensor.hpp"
#include "v2/view_sampler.hpp"

namespace v2 {

inline constexpr const char* kToolkitVersion = "1.0.0";

/// Value stored for a ray that misses the object.
inline constexpr float kBackgroundDepth = 1.0f;

/// Casts every grid ray of every view against a normalized mesh.
///
/// Views follow sample_view_centers order; within a view, rows and columns
/// follow grid_ray_origins. A miss stores depth 1 and zero incidence. Views
/// are distributed across `jobs` workers but each cell has a fixed slot, so
/// the output does not depend on `jobs`.
V2Tensor generate(const TriangleMesh& mesh, const Bvh& bvh, const V2Config& config, std::span<const Channel> channels,
                  std::string source_id = {}, int jobs = 1);

/// 8-bit grayscale PNG of the montage's depth plane; nearer is brighter.
void write_preview_png(const V2Tensor& tensor, const std::filesystem::path& path);

/// Sidecar metadata written next to each .v2 file.
nlohmann::json make_manifest(const V2Tensor& tensor, const std::string& source_path);

/// Writes `path` (.v2) and `path` + ".json".
void save_v2(const V2Tensor& tensor, const std::filesystem::path& path, const std::string& source_path);
V2Tensor load_v2(const std::filesystem::path& path);

}  // namespace v2
