// Indexed triangle-mesh kernel: storage, validation, adjacency, connectivity
// queries, and plane-sign partitions. Meshes are immutable once built.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace driftlap {

using Vec3 = Eigen::Vector3d;

// Indexed triangle surface. Construct through make_mesh, which validates the
// structural invariants (index ranges, manifold edges, consistent orientation,
// no degenerate faces) and fills the derived adjacency fields. Treat as
// immutable afterwards: analyses share meshes across threads read-only.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::uint8_t> boundary_flag;  // 1 if vertex lies on a boundary edge

  // Derived connectivity, filled by make_mesh.
  std::vector<std::vector<int>> neighbors;        // sorted vertex adjacency
  std::vector<std::array<int, 2>> edges;          // unique undirected edges (a < b)

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int euler_characteristic() const {
    return vertex_count() - edge_count() + face_count();
  }
  bool has_boundary() const;
};

// Scalar function sampled at mesh vertices, bound to its mesh by identity.
struct VertexScalarField {
  const TriangleMesh* mesh = nullptr;
  Eigen::VectorXd values;

  VertexScalarField() = default;
  VertexScalarField(const TriangleMesh& m, Eigen::VectorXd v);
};

// Plane through the origin given by a unit normal.
struct PlaneThroughOrigin {
  Vec3 unit_normal;
};

// Normalizes and validates the normal (rejects near-zero vectors).
PlaneThroughOrigin make_plane(const Vec3& normal);

// Validates invariants, computes boundary flags and adjacency. Throws
// std::invalid_argument with a diagnostic on any violation:
//   - face index out of range or repeated vertex in a face
//   - non-manifold edge (shared by more than two faces)
//   - inconsistent orientation (directed edge appearing twice)
//   - degenerate face (area below 1e-8 times the mean face area)
TriangleMesh make_mesh(std::vector<Vec3> vertices,
                       std::vector<std::array<int, 3>> faces);

// Geometry helpers.
double face_area(const TriangleMesh& mesh, int f);
Vec3 face_centroid(const TriangleMesh& mesh, int f);
Vec3 face_normal(const TriangleMesh& mesh, int f);  // unit, orientation-induced
double mean_edge_length(const TriangleMesh& mesh);
double mean_face_area(const TriangleMesh& mesh);
// Area-weighted unit vertex normals (orientation-induced).
std::vector<Vec3> vertex_normals(const TriangleMesh& mesh);
// Mixed Voronoi vertex areas (circumcentric regions, clamped on obtuse
// triangles); pairs with the cotangent operator for curvature estimates.
std::vector<double> mixed_voronoi_areas(const TriangleMesh& mesh);

// Connected components of the vertex-edge graph.
struct ComponentLabeling {
  std::vector<int> labels;  // component id per vertex, -1 never appears
  int count = 0;
};
ComponentLabeling connected_components(const TriangleMesh& mesh);

// Plane-sign partition: component counts of the vertex subgraphs strictly on
// each side of the plane. Vertices with |<v, normal>| <= band * (mean edge
// length) are excluded from both subgraphs. If at least 99% of the vertices
// fall in the excluded band the plane is flagged degenerate (e.g. the plane
// containing a flat mesh) and the counts are not meaningful.
struct PlanePartition {
  int positive_components = 0;
  int negative_components = 0;
  int banded_vertices = 0;
  bool degenerate = false;
};
PlanePartition plane_sign_partition(const TriangleMesh& mesh,
                                    const PlaneThroughOrigin& plane,
                                    double band = 0.5);

}  // namespace driftlap
