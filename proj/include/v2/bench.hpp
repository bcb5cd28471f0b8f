#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "v2/mesh.hpp"
#include "v2/tensor.hpp"
#include "v2/view_sampler.hpp"

namespace v2 {

enum class ShapeClass : std::uint8_t { box, icosphere, cylinder, cone, torus };

inline constexpr std::array<ShapeClass, 5> kAllShapeClasses = {ShapeClass::box, ShapeClass::icosphere,
                                                               ShapeClass::cylinder, ShapeClass::cone,
                                                               ShapeClass::torus};

std::string_view shape_class_name(ShapeClass shape);

/// One jittered instance of a procedural class.
struct ShapeSpec {
  ShapeClass shape = ShapeClass::box;
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();  // per axis, [0.7, 1.3]
  double rotation = 0.0;                            // about +z, [-pi/12, pi/12]
  std::uint64_t seed = 0;

  /// Jitter drawn deterministically from `seed`.
  static ShapeSpec draw(ShapeClass shape, std::uint64_t seed);
};

/// Base primitive with `spec.scale` and `spec.rotation` applied, not normalized.
TriangleMesh make_shape(const ShapeSpec& spec);

using Label = int;

struct LabeledMesh {
  TriangleMesh mesh;
  Label label = 0;
  std::string name;
};

/// `per_class` normalized instances of each class; labels index into `classes`.
std::vector<LabeledMesh> make_toy_dataset(std::span<const ShapeClass> classes, int per_class, std::uint64_t seed);

/// Loads every .off/.obj file in `directory` in lexicographic order and
/// normalizes it. The label is the filename stem up to its last '_'; labels
/// are numbered in sorted order of those prefixes, returned in `class_names`.
std::vector<LabeledMesh> load_labeled_directory(const std::filesystem::path& directory,
                                                std::vector<std::string>* class_names = nullptr);

struct Sample {
  Eigen::VectorXf features;
  Label label = 0;
};

/// Majority vote among the k nearest training samples (Euclidean).
/// Distance ties go to the lower training index; vote ties go to the label
/// whose closest member ranks first.
Label knn_classify(std::span<const Sample> train, const Eigen::VectorXf& query, int k);

/// Fraction of samples whose leave-one-out prediction matches their label.
double leave_one_out_accuracy(std::span<const Sample> samples, int k, int jobs = 1);

struct SweepRow {
  V2Config config;
  int f = 1;
  std::int64_t nv = 0;
  std::int64_t pv = 0;
  double accuracy = 0.0;
};

/// Leave-one-out kNN accuracy at every point of enumerate_continuum(base).
std::vector<SweepRow> sweep(std::span<const LabeledMesh> dataset, const V2Config& base,
                            std::span<const Channel> channels, int k, int jobs = 1);

/// Header "config,f,NV,PV,C,accuracy", one line per row.
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

}  // namespace v2
