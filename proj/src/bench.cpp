#include "v2/bench.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "v2/parallel.hpp"
#include "v2/pipeline.hpp"
#include "v2/primitives.hpp"
#include "v2/raycaster.hpp"

namespace v2 {
namespace {

constexpr std::array<std::string_view, 5> kShapeNames = {"box", "icosphere", "cylinder", "cone", "torus"};

// Box and cylinder get distinct proportions (flat slab, tall rod); with equal
// proportions their side silhouettes are the same rectangle.
TriangleMesh base_primitive(ShapeClass shape) {
  switch (shape) {
    case ShapeClass::box:
      return make_box(Eigen::Vector3d(0.5, 0.5, 0.3));
    case ShapeClass::icosphere:
      return make_icosphere(0.5, 3);
    case ShapeClass::cylinder:
      return make_cylinder(64, 0.3, 1.0);
    case ShapeClass::cone:
      return make_cone(64);
    case ShapeClass::torus:
      return make_torus(32, 16);
  }
  throw std::invalid_argument("unknown shape class");
}

Label knn_excluding(std::span<const Sample> train, const Eigen::VectorXf& query, int k, std::size_t excluded) {
  const std::size_t available = train.size() - (excluded < train.size() ? 1 : 0);
  if (k < 1 || static_cast<std::size_t>(k) > available) {
    throw std::invalid_argument("knn_classify: need 1 <= k <= " + std::to_string(available) + ", got k = " +
                                std::to_string(k));
  }
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(available);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (i == excluded) continue;
    if (train[i].features.size() != query.size()) throw std::invalid_argument("knn_classify: dimension mismatch");
    ranked.emplace_back((train[i].features - query).cast<double>().squaredNorm(), i);
  }
  // Pairs compare by distance then index, which is the distance tie-break.
  std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end());

  std::map<Label, std::pair<int, int>> votes;  // label -> (count, rank of closest member)
  for (int r = 0; r < k; ++r) {
    auto [it, inserted] = votes.try_emplace(train[ranked[static_cast<std::size_t>(r)].second].label, 0, r);
    ++it->second.first;
  }
  const auto winner = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first < b.second.first;
    return a.second.second > b.second.second;
  });
  return winner->first;
}

}  // namespace

std::string_view shape_class_name(ShapeClass shape) { return kShapeNames.at(static_cast<std::size_t>(shape)); }

ShapeSpec ShapeSpec::draw(ShapeClass shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.7, 1.3);
  std::uniform_real_distribution<double> rotation(-std::numbers::pi / 12.0, std::numbers::pi / 12.0);
  ShapeSpec spec;
  spec.shape = shape;
  spec.seed = seed;
  spec.scale = {scale(rng), scale(rng), scale(rng)};
  spec.rotation = rotation(rng);
  return spec;
}

TriangleMesh make_shape(const ShapeSpec& spec) {
  TriangleMesh mesh = base_primitive(spec.shape);
  const Eigen::Matrix3d transform =
      Eigen::AngleAxisd(spec.rotation, Eigen::Vector3d::UnitZ()).toRotationMatrix() * spec.scale.asDiagonal();
  mesh.vertices = mesh.vertices * transform.transpose();
  return mesh;
}

std::vector<LabeledMesh> make_toy_dataset(std::span<const ShapeClass> classes, int per_class, std::uint64_t seed) {
  if (classes.empty()) throw std::invalid_argument("make_toy_dataset: empty class list");
  if (per_class < 2) throw std::invalid_argument("make_toy_dataset: per_class must be at least 2");
  std::mt19937_64 seeds(seed);
  std::vector<LabeledMesh> dataset;
  dataset.reserve(classes.size() * static_cast<std::size_t>(per_class));
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int i = 0; i < per_class; ++i) {
      const ShapeSpec spec = ShapeSpec::draw(classes[c], seeds());
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%03d", std::string(shape_class_name(classes[c])).c_str(), i);
      dataset.push_back({normalize(make_shape(spec)), static_cast<Label>(c), name});
    }
  }
  return dataset;
}

std::vector<LabeledMesh> load_labeled_directory(const std::filesystem::path& directory,
                                                std::vector<std::string>* class_names) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (ext == ".off" || ext == ".obj") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  auto prefix = [](const std::filesystem::path& p) {
    const std::string stem = p.stem().string();
    const auto cut = stem.rfind('_');
    return cut == std::string::npos ? stem : stem.substr(0, cut);
  };
  std::map<std::string, Label> labels;
  for (const auto& file : files) labels.emplace(prefix(file), 0);
  Label next = 0;
  for (auto& [name, label] : labels) label = next++;
  if (class_names) {
    class_names->clear();
    for (const auto& [name, label] : labels) class_names->push_back(name);
  }

  std::vector<LabeledMesh> dataset;
  for (const auto& file : files) {
    dataset.push_back({normalize(load_mesh(file)), labels.at(prefix(file)), file.filename().string()});
  }
  return dataset;
}

Label knn_classify(std::span<const Sample> train, const Eigen::VectorXf& query, int k) {
  return knn_excluding(train, query, k, train.size());
}

double leave_one_out_accuracy(std::span<const Sample> samples, int k, int jobs) {
  if (samples.size() < 2) throw std::invalid_argument("leave_one_out_accuracy: need at least 2 samples");
  std::vector<char> correct(samples.size(), 0);
  parallel_for(samples.size(), jobs, [&](std::size_t i) {
    correct[i] = knn_excluding(samples, samples[i].features, k, i) == samples[i].label;
  });
  return static_cast<double>(std::count(correct.begin(), correct.end(), 1)) / static_cast<double>(samples.size());
}

std::vector<SweepRow> sweep(std::span<const LabeledMesh> dataset, const V2Config& base,
                            std::span<const Channel> channels, int k, int jobs) {
  std::map<Label, int> per_label;
  for (const auto& item : dataset) ++per_label[item.label];
  if (per_label.empty()) throw std::invalid_argument("sweep: empty dataset");
  for (const auto& [label, count] : per_label) {
    if (count < 2) throw std::invalid_argument("sweep: every class needs at least 2 meshes");
  }

  std::vector<Bvh> bvhs(dataset.size());
  parallel_for(dataset.size(), jobs, [&](std::size_t i) { bvhs[i] = build_bvh(dataset[i].mesh); });

  std::vector<SweepRow> rows;
  for (const V2Config& config : enumerate_continuum(base)) {
    std::vector<Sample> samples(dataset.size());
    parallel_for(dataset.size(), jobs, [&](std::size_t i) {
      samples[i] = {generate(dataset[i].mesh, bvhs[i], config, channels).values, dataset[i].label};
    });
    rows.push_back({config, base.x / config.x, config.view_count(), config.pixels_per_view(),
                    leave_one_out_accuracy(samples, k, jobs)});
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "config,f,NV,PV,C,accuracy\n";
  char accuracy[32];
  for (const SweepRow& row : rows) {
    std::snprintf(accuracy, sizeof(accuracy), "%.6f", row.accuracy);
    out << row.config.to_string() << ',' << row.f << ',' << row.nv << ',' << row.pv << ',' << row.config.total_pixels()
        << ',' << accuracy << '\n';
  }
}

}  // namespace v2
