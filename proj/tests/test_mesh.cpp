#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "v2/mesh.hpp"
#include "v2/primitives.hpp"

using namespace v2;

namespace {

TriangleMesh off(const std::string& text) {
  std::istringstream in(text);
  return parse_off(in);
}

TriangleMesh obj(const std::string& text) {
  std::istringstream in(text);
  return parse_obj(in);
}

long off_error_line(const std::string& text) {
  try {
    off(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("parse_off reads a minimal file") {
  const auto mesh = off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2");
  CHECK(mesh.vertex_count() == 3);
  CHECK(mesh.triangle_count() == 1);
  CHECK(mesh.triangles.row(0) == Eigen::RowVector3i(0, 1, 2));
  CHECK(mesh.vertices(1, 0) == 1.0);
}

TEST_CASE("parse_off accepts a header glued to its counts") {
  std::ostringstream text;
  text << "OFF492 18 0\n";
  for (int i = 0; i < 492; ++i) text << i << " " << 0.5 * i << " -" << i << "\n";
  for (int f = 0; f < 18; ++f) text << "3 " << f << " " << f + 1 << " " << f + 2 << "\n";
  const auto mesh = off(text.str());
  CHECK(mesh.vertex_count() == 492);
  CHECK(mesh.triangle_count() == 18);
  CHECK(mesh.vertices(491, 2) == -491.0);
}

TEST_CASE("parse_off fan-triangulates polygons") {
  const auto mesh = off("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  REQUIRE(mesh.triangle_count() == 2);
  CHECK(mesh.triangles.row(0) == Eigen::RowVector3i(0, 1, 2));
  CHECK(mesh.triangles.row(1) == Eigen::RowVector3i(0, 2, 3));
}

TEST_CASE("parse_off tolerates CRLF, comments and face colors") {
  const auto mesh = off("OFF\r\n# comment\r\n3 1 0\r\n\r\n0 0 0\r\n1 0 0 # trailing\r\n0 1 0\r\n3 0 1 2 255 0 0\r\n");
  CHECK(mesh.vertex_count() == 3);
  CHECK(mesh.triangle_count() == 1);
}

TEST_CASE("parse_off reports errors with line numbers") {
  CHECK(off_error_line("PLY\n") == 1);
  CHECK(off_error_line("OFF\nthree 1 0\n") == 2);
  CHECK(off_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n") == 4);           // too few vertices
  CHECK(off_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 3\n") == 6);  // index out of range
  CHECK(off_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n2 0 1\n") == 6);    // degenerate valence
  CHECK(off_error_line("OFF\n3 1 0\n0 0 0\n1 0 x\n0 1 0\n3 0 1 2\n") == 4);  // bad coordinate
  CHECK(off_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n3 0 1 2\n") == 7);  // extra face
  CHECK(off_error_line("") == 0);
}

TEST_CASE("parse_obj honors v and f records") {
  const auto mesh = obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3");
  CHECK(mesh.vertex_count() == 3);
  REQUIRE(mesh.triangle_count() == 1);
  CHECK(mesh.triangles.row(0) == Eigen::RowVector3i(0, 1, 2));
}

TEST_CASE("parse_obj resolves negative indices against the current vertex count") {
  const auto mesh = obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\nv 5 5 5\nf -4 -2 -1\n");
  REQUIRE(mesh.triangle_count() == 2);
  CHECK(mesh.triangles.row(0) == Eigen::RowVector3i(0, 1, 2));
  CHECK(mesh.triangles.row(1) == Eigen::RowVector3i(0, 2, 3));
}

TEST_CASE("parse_obj ignores normals, texcoords and other records") {
  const auto mesh = obj(
      "# exported\r\nmtllib x.mtl\no thing\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nvt 0 0\n"
      "usemtl red\ns off\nf 1/1/1 2/1/1 3/1/1 4/1/1\nf 1//1 2//1 3//1\n");
  CHECK(mesh.vertex_count() == 4);
  REQUIRE(mesh.triangle_count() == 3);
  CHECK(mesh.triangles.row(1) == Eigen::RowVector3i(0, 2, 3));
  CHECK(mesh.vertices(2, 1) == 1.0);
}

TEST_CASE("parse_obj rejects bad indices") {
  CHECK_THROWS_AS(obj("v 0 0 0\nf 1 2 3\n"), ParseError);
  CHECK_THROWS_AS(obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n"), ParseError);
  CHECK_THROWS_AS(obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -4 1 2\n"), ParseError);
  CHECK_THROWS_AS(obj("v 0 0\n"), ParseError);
}

TEST_CASE("bounding_box") {
  SUBCASE("unit cube corners") {
    TriangleMesh cube = make_box();
    cube.vertices.array() += 0.5;
    const Aabb box = bounding_box(cube);
    CHECK(box.min() == Eigen::Vector3d::Zero());
    CHECK(box.max() == Eigen::Vector3d::Ones());
  }
  SUBCASE("single point") {
    TriangleMesh point;
    point.vertices.resize(1, 3);
    point.vertices << 1.5, -2.0, 3.0;
    const Aabb box = bounding_box(point);
    CHECK(box.min() == Eigen::Vector3d(1.5, -2.0, 3.0));
    CHECK(box.max() == box.min());
  }
  SUBCASE("componentwise min and max") {
    TriangleMesh two;
    two.vertices.resize(2, 3);
    two.vertices << -2, 0, 0, 3, 1, -1;
    const Aabb box = bounding_box(two);
    CHECK(box.min() == Eigen::Vector3d(-2, 0, -1));
    CHECK(box.max() == Eigen::Vector3d(3, 1, 0));
  }
  SUBCASE("empty mesh") { CHECK_THROWS_AS(bounding_box(TriangleMesh{}), std::invalid_argument); }
}

TEST_CASE("normalize") {
  SUBCASE("cube of side 2 becomes side 0.4 at the origin") {
    const TriangleMesh cube = normalize(make_box(Eigen::Vector3d::Ones()));
    CHECK(cube.vertices.cwiseAbs().maxCoeff() == doctest::Approx(0.2).epsilon(1e-12));
    const Aabb box = bounding_box(cube);
    CHECK(box.sizes().isApprox(Eigen::Vector3d::Constant(0.4), 1e-12));
  }
  SUBCASE("direct arithmetic on a 2x1x1 box") {
    TriangleMesh slab = make_box(Eigen::Vector3d(1.0, 0.5, 0.5));
    slab.vertices.rowwise() += Eigen::RowVector3d(1.0, 0.5, 0.5);  // [0,2]x[0,1]x[0,1]
    const Aabb box = bounding_box(normalize(slab));
    CHECK((box.min() - Eigen::Vector3d(-0.2, -0.1, -0.1)).norm() < 1e-12);
    CHECK((box.max() - Eigen::Vector3d(0.2, 0.1, 0.1)).norm() < 1e-12);
  }
  SUBCASE("worst case fits inside the containing sphere") {
    const TriangleMesh cube = normalize(make_box());
    const double diameter = 2.0 * cube.vertices.rowwise().norm().maxCoeff();
    CHECK(diameter == doctest::Approx(0.4 * std::sqrt(3.0)));
    CHECK(diameter < 1.0);
  }
  SUBCASE("zero extent") {
    TriangleMesh point;
    point.vertices = Points3<double>::Constant(3, 3, 0.25);
    point.triangles.resize(1, 3);
    point.triangles << 0, 1, 2;
    CHECK_THROWS_AS(normalize(point), std::invalid_argument);
  }
}

TEST_CASE("normalize properties on random soups") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> stretch(0.01, 50.0);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    TriangleMesh mesh = testing::random_soup(rng, 1 + trial);
    mesh.vertices = mesh.vertices * Eigen::Vector3d(stretch(rng), stretch(rng), stretch(rng)).asDiagonal();
    mesh.vertices.rowwise() += Eigen::RowVector3d(shift(rng), shift(rng), shift(rng));

    const TriangleMesh once = normalize(mesh);
    const Aabb box = bounding_box(once);
    CHECK(std::abs(box.sizes().maxCoeff() - 0.4) < 1e-9);
    CHECK(box.center().norm() < 1e-9);
    CHECK(once.vertices.rowwise().norm().maxCoeff() <= 0.2 * std::sqrt(3.0) + 1e-9);
    CHECK(once.triangles == mesh.triangles);
    // Aspect ratio is preserved by the uniform scale.
    const Eigen::Vector3d before = bounding_box(mesh).sizes();
    CHECK((box.sizes() / box.sizes().maxCoeff() - before / before.maxCoeff()).norm() < 1e-9);

    const TriangleMesh twice = normalize(once);
    CHECK((twice.vertices - once.vertices).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(is_normalized(once));
  }
}

TEST_CASE("serialize_off round-trips exactly") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const TriangleMesh mesh = testing::random_soup(rng, 20);
    std::stringstream text;
    serialize_off(mesh, text);
    const TriangleMesh back = parse_off(text);
    CHECK(back.vertices == mesh.vertices);
    CHECK(back.triangles == mesh.triangles);
  }
}

TEST_CASE("load_mesh dispatches on extension") {
  testing::TempDir dir;
  {
    std::ofstream(dir / "tri.OBJ") << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
    std::ofstream(dir / "tri.off") << "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
    std::ofstream(dir / "tri.stl") << "solid\n";
  }
  CHECK(load_mesh(dir / "tri.OBJ").triangle_count() == 1);
  CHECK(load_mesh(dir / "tri.off").triangle_count() == 1);
  CHECK_THROWS(load_mesh(dir / "tri.stl"));
  CHECK_THROWS(load_mesh(dir / "missing.off"));
}

TEST_CASE("validate") {
  TriangleMesh mesh = make_box();
  CHECK_NOTHROW(validate(mesh));
  mesh.triangles(3, 1) = 8;
  CHECK_THROWS_AS(validate(mesh), std::invalid_argument);
  mesh = make_box();
  mesh.vertices(0, 0) = std::nan("");
  CHECK_THROWS_AS(validate(mesh), std::invalid_argument);
}
