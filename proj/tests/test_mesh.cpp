#include "doctest.h"
#include "support.hpp"

#include "driftlap/mesh.hpp"
#include "driftlap/mesh_io.hpp"
#include "driftlap/shrinkers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

using namespace driftlap;
namespace fs = std::filesystem;

namespace {

std::vector<Vec3> two_triangle_vertices() {
  return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 5, 5}, {6, 5, 5}, {5, 6, 5}};
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("tetrahedron invariants") {
  const TriangleMesh m = testsupport::tetrahedron();
  CHECK(m.vertex_count() == 4);
  CHECK(m.face_count() == 4);
  CHECK(m.edge_count() == 6);
  CHECK(m.euler_characteristic() == 2);
  CHECK_FALSE(m.has_boundary());
  for (int i = 0; i < 4; ++i) {
    CHECK(m.boundary_flag[i] == 0);
    CHECK(m.neighbors[i].size() == 3);  // complete graph K4
    CHECK(std::is_sorted(m.neighbors[i].begin(), m.neighbors[i].end()));
  }
  // Outward orientation: every face normal points away from the centroid.
  for (int f = 0; f < m.face_count(); ++f)
    CHECK(face_normal(m, f).dot(face_centroid(m, f)) > 0.0);
}

TEST_CASE("validation rejects malformed input") {
  std::vector<Vec3> tri = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};

  SUBCASE("face index out of range") {
    std::vector<std::array<int, 3>> f = {{0, 1, 3}};
    CHECK_THROWS_AS(make_mesh(tri, f), std::invalid_argument);
  }
  SUBCASE("negative face index") {
    std::vector<std::array<int, 3>> f = {{0, 1, -1}};
    CHECK_THROWS_AS(make_mesh(tri, f), std::invalid_argument);
  }
  SUBCASE("repeated vertex within a face") {
    std::vector<std::array<int, 3>> f = {{0, 1, 1}};
    CHECK_THROWS_AS(make_mesh(tri, f), std::invalid_argument);
  }
  SUBCASE("non-manifold edge shared by three faces") {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                           {0, 0, 1}, {0, -1, 0}};
    std::vector<std::array<int, 3>> f = {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}};
    CHECK_THROWS_AS(make_mesh(v, f), std::invalid_argument);
  }
  SUBCASE("inconsistent orientation across an edge") {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    // Both faces traverse the shared edge 1 -> 2 in the same direction.
    std::vector<std::array<int, 3>> f = {{0, 1, 2}, {1, 2, 3}};
    CHECK_THROWS_AS(make_mesh(v, f), std::invalid_argument);
  }
  SUBCASE("degenerate sliver face") {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},
                           {0.5, 1e-13, 0}};
    std::vector<std::array<int, 3>> f = {{0, 1, 2}, {1, 0, 3}};
    CHECK_THROWS_AS(make_mesh(v, f), std::invalid_argument);
  }
}

TEST_CASE("boundary detection") {
  std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  std::vector<std::array<int, 3>> f = {{0, 1, 2}};
  const TriangleMesh single = make_mesh(v, f);
  CHECK(single.has_boundary());
  CHECK(single.boundary_flag == std::vector<std::uint8_t>{1, 1, 1});

  const TriangleMesh cyl = make_cylinder(2.0, 8, 4);
  CHECK(cyl.has_boundary());
  int boundary = 0;
  for (auto b : cyl.boundary_flag) boundary += b;
  CHECK(boundary == 16);  // the two truncation rings

  CHECK_FALSE(make_sphere(1).has_boundary());
}

TEST_CASE("connected components") {
  std::vector<std::array<int, 3>> f = {{0, 1, 2}, {3, 4, 5}};
  const TriangleMesh two = make_mesh(two_triangle_vertices(), f);
  const ComponentLabeling lab = connected_components(two);
  CHECK(lab.count == 2);
  CHECK(lab.labels[0] == lab.labels[1]);
  CHECK(lab.labels[0] == lab.labels[2]);
  CHECK(lab.labels[3] == lab.labels[4]);
  CHECK(lab.labels[0] != lab.labels[3]);

  CHECK(connected_components(make_sphere(1)).count == 1);
}

TEST_CASE("geometry helpers on a right triangle") {
  std::vector<Vec3> v = {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}};
  std::vector<std::array<int, 3>> f = {{0, 1, 2}};
  const TriangleMesh m = make_mesh(v, f);
  CHECK(face_area(m, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((face_centroid(m, 0) - Vec3(2.0 / 3, 2.0 / 3, 0)).norm() < 1e-14);
  CHECK((face_normal(m, 0) - Vec3(0, 0, 1)).norm() < 1e-14);
  CHECK(mean_face_area(m) == doctest::Approx(2.0));
  // Edges 2, 2, 2*sqrt(2).
  CHECK(mean_edge_length(m) ==
        doctest::Approx((4.0 + 2.0 * std::sqrt(2.0)) / 3.0));
}

TEST_CASE("mixed voronoi areas partition the surface") {
  const TriangleMesh sphere = make_sphere(2);
  const std::vector<double> areas = mixed_voronoi_areas(sphere);
  double total = 0.0;
  for (double a : areas) {
    CHECK(a > 0.0);
    total += a;
  }
  double face_total = 0.0;
  for (int f = 0; f < sphere.face_count(); ++f) face_total += face_area(sphere, f);
  CHECK(total == doctest::Approx(face_total).epsilon(1e-12));
}

TEST_CASE("vertex normals point outward on the sphere") {
  const TriangleMesh sphere = make_sphere(2);
  const std::vector<Vec3> normals = vertex_normals(sphere);
  for (int i = 0; i < sphere.vertex_count(); ++i) {
    CHECK(normals[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    // Radial within discretization error.
    CHECK(normals[i].dot(sphere.vertices[i].normalized()) > 0.99);
  }
}

TEST_CASE("plane partitions") {
  SUBCASE("normal validation") {
    CHECK_THROWS_AS(make_plane(Vec3(0, 0, 0)), std::invalid_argument);
    CHECK(make_plane(Vec3(0, 0, 5)).unit_normal.norm() ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("generic plane cuts the sphere into two pieces") {
    const TriangleMesh sphere = make_sphere(2);
    const PlanePartition p =
        plane_sign_partition(sphere, make_plane(Vec3(0.3, -0.7, 0.64)));
    CHECK_FALSE(p.degenerate);
    CHECK(p.positive_components == 1);
    CHECK(p.negative_components == 1);
  }
  SUBCASE("the carrier plane of a flat disk is degenerate") {
    const TriangleMesh disk = make_disk(4.0, 6);
    const PlanePartition p =
        plane_sign_partition(disk, make_plane(Vec3(0, 0, 1)));
    CHECK(p.degenerate);
    CHECK(p.banded_vertices == disk.vertex_count());
  }
  SUBCASE("band width scales with the mean edge length") {
    const TriangleMesh sphere = make_sphere(2);
    const PlanePartition narrow =
        plane_sign_partition(sphere, make_plane(Vec3(0, 0, 1)), 0.1);
    const PlanePartition wide =
        plane_sign_partition(sphere, make_plane(Vec3(0, 0, 1)), 2.0);
    CHECK(narrow.banded_vertices < wide.banded_vertices);
    CHECK(narrow.positive_components == 1);
    CHECK(narrow.negative_components == 1);
  }
}

TEST_CASE("vertex field binds to its mesh") {
  const TriangleMesh m = testsupport::tetrahedron();
  Eigen::VectorXd good(4), bad(3);
  good.setOnes();
  bad.setOnes();
  CHECK_NOTHROW(VertexScalarField(m, good));
  CHECK_THROWS_AS(VertexScalarField(m, bad), std::invalid_argument);
}

TEST_CASE("mesh file round trips") {
  const TriangleMesh m = testsupport::tetrahedron();
  Eigen::VectorXd field(4);
  field << 0.25, -1.0, 3.5, 1e-7;
  const NamedFields fields = {{"height", field}};
  const fs::path dir = testsupport::scratch_dir("meshio");

  SUBCASE("geometry formats preserve every coordinate bit") {
    for (const char* name : {"tetra.off", "tetra.obj"}) {
      const std::string path = (dir / name).string();
      export_mesh(m, fields, path, format_from_path(path));  // fields dropped
      const ImportedMesh back = import_mesh(path);
      REQUIRE(back.mesh.vertex_count() == 4);
      REQUIRE(back.mesh.face_count() == 4);
      CHECK(back.fields.empty());
      for (int i = 0; i < 4; ++i)
        CHECK((back.mesh.vertices[i] - m.vertices[i]).norm() == 0.0);
      CHECK(back.mesh.faces == m.faces);
    }
  }
  SUBCASE("field-carrying formats preserve fields") {
    for (const char* name : {"tetra.vtk", "tetra.json"}) {
      const std::string path = (dir / name).string();
      export_mesh(m, fields, path, format_from_path(path));
      const ImportedMesh back = import_mesh(path);
      REQUIRE(back.mesh.vertex_count() == 4);
      CHECK(back.mesh.faces == m.faces);
      REQUIRE(back.fields.count("height") == 1);
      const Eigen::VectorXd& h = back.fields.at("height");
      REQUIRE(h.size() == 4);
      for (int i = 0; i < 4; ++i) CHECK(h[i] == field[i]);
    }
  }
  SUBCASE("format parsing") {
    CHECK(parse_mesh_format("OFF") == MeshFormat::OFF);
    CHECK(parse_mesh_format("vtk") == MeshFormat::VTK);
    CHECK_THROWS_AS(parse_mesh_format("stl"), std::invalid_argument);
    CHECK_THROWS_AS(format_from_path("mesh.stl"), std::invalid_argument);
    CHECK(mesh_format_name(MeshFormat::JSON) == "json");
  }
  SUBCASE("unwritable path reports an error") {
    CHECK_THROWS_AS(
        export_mesh(m, (dir / "missing_dir" / "x.off").string(),
                    MeshFormat::OFF),
        std::runtime_error);
  }
  fs::remove_all(dir);
}

TEST_CASE("polyline export writes line elements") {
  const fs::path dir = testsupport::scratch_dir("polyline");
  const std::string path = (dir / "curves.obj").string();
  std::vector<std::vector<Vec3>> lines = {
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}},           // open chain
      {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 0, 1}}  // closed loop
  };
  export_polylines_obj(lines, {false, true}, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  int v_lines = 0, l_lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v_lines;
    if (line.rfind("l ", 0) == 0) ++l_lines;
  }
  CHECK(v_lines == 7);
  CHECK(l_lines == 2);
  fs::remove_all(dir);
}

}  // TEST_SUITE("mesh")
