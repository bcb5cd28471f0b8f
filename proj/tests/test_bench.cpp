#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "v2/bench.hpp"
#include "v2/pipeline.hpp"

using namespace v2;

namespace {

Sample sample(std::initializer_list<float> values, Label label) {
  Sample s;
  s.features = Eigen::VectorXf(static_cast<Eigen::Index>(values.size()));
  std::copy(values.begin(), values.end(), s.features.data());
  s.label = label;
  return s;
}

Eigen::VectorXf vec(std::initializer_list<float> values) { return sample(values, 0).features; }

}  // namespace

TEST_CASE("toy dataset") {
  const auto dataset = make_toy_dataset(kAllShapeClasses, 20, 7);
  REQUIRE(dataset.size() == 100);
  for (Label label = 0; label < 5; ++label) {
    CHECK(std::count_if(dataset.begin(), dataset.end(), [&](const LabeledMesh& m) { return m.label == label; }) == 20);
  }
  const std::pair<ShapeClass, Eigen::Index> triangles[] = {{ShapeClass::box, 12},
                                                           {ShapeClass::icosphere, 20 * 64},
                                                           {ShapeClass::cylinder, 4 * 64},
                                                           {ShapeClass::cone, 2 * 64},
                                                           {ShapeClass::torus, 2 * 32 * 16}};
  for (const auto& [shape, count] : triangles) {
    const auto& first = dataset[static_cast<std::size_t>(shape) * 20];
    CHECK(first.mesh.triangle_count() == count);
    CHECK(first.name.starts_with(shape_class_name(shape)));
  }
  for (const auto& item : dataset) CHECK(is_normalized(item.mesh, 1e-9));

  const auto again = make_toy_dataset(kAllShapeClasses, 20, 7);
  for (std::size_t i = 0; i < dataset.size(); ++i) CHECK(again[i].mesh.vertices == dataset[i].mesh.vertices);
  const auto other = make_toy_dataset(kAllShapeClasses, 20, 8);
  CHECK(other[0].mesh.vertices != dataset[0].mesh.vertices);

  CHECK_THROWS_AS(make_toy_dataset(kAllShapeClasses, 1, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_toy_dataset(std::span<const ShapeClass>{}, 5, 7), std::invalid_argument);
}

TEST_CASE("shape jitter stays in range") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ShapeSpec spec = ShapeSpec::draw(ShapeClass::cone, seed);
    CHECK(spec.scale.minCoeff() >= 0.7);
    CHECK(spec.scale.maxCoeff() <= 1.3);
    CHECK(std::abs(spec.rotation) <= std::numbers::pi / 12);
  }
  const ShapeSpec identity{ShapeClass::box, Eigen::Vector3d::Ones(), 0.0, 0};
  CHECK(bounding_box(make_shape(identity)).sizes().isApprox(Eigen::Vector3d(1.0, 1.0, 0.6)));
}

TEST_CASE("knn_classify") {
  const std::vector<Sample> two{sample({0, 0}, 0), sample({1, 1}, 1)};
  CHECK(knn_classify(two, vec({0.1f, 0}), 1) == 0);
  CHECK(knn_classify(two, vec({1, 1}), 1) == 1);

  const std::vector<Sample> three{sample({0}, 0), sample({0.1f}, 0), sample({0.2f}, 1), sample({5}, 1)};
  CHECK(knn_classify(three, vec({0.15f}), 3) == 0);

  SUBCASE("distance ties go to the lower training index") {
    const std::vector<Sample> tied{sample({1}, 4), sample({-1}, 2)};
    CHECK(knn_classify(tied, vec({0}), 1) == 4);
    const std::vector<Sample> swapped{sample({-1}, 2), sample({1}, 4)};
    CHECK(knn_classify(swapped, vec({0}), 1) == 2);
  }
  SUBCASE("vote ties go to the label of the nearest member") {
    const std::vector<Sample> train{sample({3}, 1), sample({1}, 0), sample({2}, 1), sample({0.5f}, 0)};
    // Four nearest: 0.5(A) 1(A) 2(B) 3(B) -> 2:2, nearest is A.
    CHECK(knn_classify(train, vec({0}), 4) == 0);
    CHECK(knn_classify(train, vec({3.2f}), 4) == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(knn_classify(two, vec({0, 0, 0}), 1), std::invalid_argument);
    CHECK_THROWS_AS(knn_classify(two, vec({0, 0}), 3), std::invalid_argument);
    CHECK_THROWS_AS(knn_classify(two, vec({0, 0}), 0), std::invalid_argument);
  }
}

TEST_CASE("knn predictions are invariant to training order on jittered data") {
  const auto dataset = make_toy_dataset(kAllShapeClasses, 6, 31);
  std::vector<Sample> samples;
  for (const auto& item : dataset) {
    samples.push_back({generate(item.mesh, build_bvh(item.mesh), {2, 4, 6, 6, 1}, std::vector{Channel::depth}).values,
                       item.label});
  }
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Sample> shuffled = samples;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t q = 0; q < samples.size(); ++q) {
      std::vector<Sample> train, train_shuffled;
      for (const auto& s : samples) {
        if (&s != &samples[q]) train.push_back(s);
      }
      for (const auto& s : shuffled) {
        if (s.features != samples[q].features) train_shuffled.push_back(s);
      }
      REQUIRE(train_shuffled.size() == train.size());
      CHECK(knn_classify(train, samples[q].features, 3) == knn_classify(train_shuffled, samples[q].features, 3));
    }
  }
}

TEST_CASE("leave_one_out_accuracy") {
  const std::vector<Sample> clusters{sample({0}, 0), sample({0.1f}, 0), sample({10}, 1), sample({10.1f}, 1)};
  CHECK(leave_one_out_accuracy(clusters, 1) == 1.0);
  const std::vector<Sample> crossed{sample({0}, 0), sample({0.1f}, 1), sample({10}, 0), sample({10.1f}, 1)};
  CHECK(leave_one_out_accuracy(crossed, 1) == 0.0);
  CHECK(leave_one_out_accuracy(crossed, 1, 4) == 0.0);
}

TEST_CASE("sweep") {
  const std::vector<Channel> depth{Channel::depth};
  SUBCASE("identical pair is always classified correctly") {
    const auto item = make_toy_dataset(std::vector{ShapeClass::torus}, 2, 1).front();
    const std::vector<LabeledMesh> pair{item, item};
    const auto rows = sweep(pair, {1, 4, 12, 12, 1}, depth, 1);
    REQUIRE(rows.size() == 6);
    for (const auto& row : rows) CHECK(row.accuracy == 1.0);
  }
  SUBCASE("rows follow the continuum") {
    const auto dataset = make_toy_dataset(std::vector{ShapeClass::box, ShapeClass::torus}, 3, 4);
    const auto rows = sweep(dataset, {1, 4, 10, 10, 1}, depth, 3, 2);
    REQUIRE(rows.size() == 4);
    const int factors[] = {1, 2, 5, 10};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].f == factors[i]);
      CHECK(rows[i].nv * rows[i].pv * rows[i].config.nc == 400);
      CHECK(rows[i].accuracy >= 0.0);
      CHECK(rows[i].accuracy <= 1.0);
      if (i > 0) CHECK(rows[i].nv > rows[i - 1].nv);
    }
    const auto again = sweep(dataset, {1, 4, 10, 10, 1}, depth, 3, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].accuracy == rows[i].accuracy);

    std::ostringstream csv;
    write_sweep_csv(rows, csv);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "config,f,NV,PV,C,accuracy");
    std::getline(lines, line);
    CHECK(line.starts_with("1x4x10x10,1,4,100,400,"));
  }
  SUBCASE("classes need two members") {
    auto dataset = make_toy_dataset(std::vector{ShapeClass::box, ShapeClass::cone}, 2, 4);
    dataset.pop_back();
    CHECK_THROWS_AS(sweep(dataset, {1, 4, 4, 4, 1}, depth, 1), std::invalid_argument);
  }
}

TEST_CASE("load_labeled_directory") {
  testing::TempDir dir;
  const auto dataset = make_toy_dataset(std::vector{ShapeClass::cone, ShapeClass::box}, 2, 3);
  for (const auto& item : dataset) {
    std::ofstream out(dir / (item.name + ".off"));
    serialize_off(item.mesh, out);
  }
  std::ofstream(dir / "notes.txt") << "ignored\n";
  std::vector<std::string> names;
  const auto loaded = load_labeled_directory(dir.path(), &names);
  CHECK(names == std::vector<std::string>{"box", "cone"});
  REQUIRE(loaded.size() == 4);
  CHECK(loaded[0].name == "box_000.off");
  CHECK(loaded[0].label == 0);
  CHECK(loaded[3].label == 1);
  CHECK((loaded[0].mesh.vertices - dataset[2].mesh.vertices).cwiseAbs().maxCoeff() < 1e-12);
}
