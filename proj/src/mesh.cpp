#include "driftlap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>

namespace driftlap {

namespace {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

bool TriangleMesh::has_boundary() const {
  return std::any_of(boundary_flag.begin(), boundary_flag.end(),
                     [](std::uint8_t f) { return f != 0; });
}

VertexScalarField::VertexScalarField(const TriangleMesh& m, Eigen::VectorXd v)
    : mesh(&m), values(std::move(v)) {
  if (values.size() != m.vertex_count())
    throw std::invalid_argument("field length does not match vertex count");
}

PlaneThroughOrigin make_plane(const Vec3& normal) {
  const double n = normal.norm();
  if (n < 1e-14) throw std::invalid_argument("plane normal is near zero");
  return PlaneThroughOrigin{normal / n};
}

TriangleMesh make_mesh(std::vector<Vec3> vertices,
                       std::vector<std::array<int, 3>> faces) {
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.faces = std::move(faces);
  const int nv = mesh.vertex_count();

  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      if (f[k] < 0 || f[k] >= nv)
        throw std::invalid_argument("face index out of range");
    }
    if (f[0] == f[1] || f[1] == f[2] || f[2] == f[0])
      throw std::invalid_argument("face repeats a vertex");
  }

  if (!mesh.faces.empty()) {
    double mean_area = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f) {
      mean_area += triangle_area(mesh.vertices[mesh.faces[f][0]],
                                 mesh.vertices[mesh.faces[f][1]],
                                 mesh.vertices[mesh.faces[f][2]]);
    }
    mean_area /= mesh.face_count();
    const double floor = 1e-8 * mean_area;
    for (int f = 0; f < mesh.face_count(); ++f) {
      const double a = triangle_area(mesh.vertices[mesh.faces[f][0]],
                                     mesh.vertices[mesh.faces[f][1]],
                                     mesh.vertices[mesh.faces[f][2]]);
      if (a < floor)
        throw std::invalid_argument("degenerate face " + std::to_string(f));
    }
  }

  // Undirected edge -> face count; directed edge -> count for orientation.
  std::map<std::pair<int, int>, int> undirected;
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const int a = f[k];
      const int b = f[(k + 1) % 3];
      ++undirected[{std::min(a, b), std::max(a, b)}];
      ++directed[{a, b}];
    }
  }
  for (const auto& [e, c] : undirected) {
    if (c > 2)
      throw std::invalid_argument("non-manifold edge shared by " +
                                  std::to_string(c) + " faces");
  }
  for (const auto& [e, c] : directed) {
    if (c > 1)
      throw std::invalid_argument(
          "inconsistent orientation: directed edge repeated");
  }

  mesh.boundary_flag.assign(nv, 0);
  mesh.edges.reserve(undirected.size());
  mesh.neighbors.assign(nv, {});
  for (const auto& [e, c] : undirected) {
    mesh.edges.push_back({e.first, e.second});
    mesh.neighbors[e.first].push_back(e.second);
    mesh.neighbors[e.second].push_back(e.first);
    if (c == 1) {
      mesh.boundary_flag[e.first] = 1;
      mesh.boundary_flag[e.second] = 1;
    }
  }
  for (auto& nbrs : mesh.neighbors) std::sort(nbrs.begin(), nbrs.end());
  return mesh;
}

double face_area(const TriangleMesh& mesh, int f) {
  const auto& t = mesh.faces[f];
  return triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]],
                       mesh.vertices[t[2]]);
}

Vec3 face_centroid(const TriangleMesh& mesh, int f) {
  const auto& t = mesh.faces[f];
  return (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
}

Vec3 face_normal(const TriangleMesh& mesh, int f) {
  const auto& t = mesh.faces[f];
  const Vec3 n = (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                     .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
  return n.normalized();
}

double mean_edge_length(const TriangleMesh& mesh) {
  if (mesh.edges.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : mesh.edges)
    sum += (mesh.vertices[e[0]] - mesh.vertices[e[1]]).norm();
  return sum / static_cast<double>(mesh.edges.size());
}

double mean_face_area(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) return 0.0;
  double sum = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) sum += face_area(mesh, f);
  return sum / mesh.face_count();
}

std::vector<Vec3> vertex_normals(const TriangleMesh& mesh) {
  std::vector<Vec3> normals(mesh.vertex_count(), Vec3::Zero());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& t = mesh.faces[f];
    const Vec3 n = (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                       .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
    for (int k = 0; k < 3; ++k) normals[t[k]] += 0.5 * n;  // area-weighted
  }
  for (auto& n : normals) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  return normals;
}

std::vector<double> mixed_voronoi_areas(const TriangleMesh& mesh) {
  std::vector<double> area(mesh.vertex_count(), 0.0);
  constexpr double kRightAngle = 1.5707963267948966 + 1e-14;
  for (const auto& t : mesh.faces) {
    const Vec3& p0 = mesh.vertices[t[0]];
    const Vec3& p1 = mesh.vertices[t[1]];
    const Vec3& p2 = mesh.vertices[t[2]];
    const double full = triangle_area(p0, p1, p2);
    double ang[3];
    const Vec3 pts[3] = {p0, p1, p2};
    for (int k = 0; k < 3; ++k) {
      const Vec3 u = pts[(k + 1) % 3] - pts[k];
      const Vec3 v = pts[(k + 2) % 3] - pts[k];
      ang[k] = std::atan2(u.cross(v).norm(), u.dot(v));
    }
    const bool obtuse =
        ang[0] > kRightAngle || ang[1] > kRightAngle || ang[2] > kRightAngle;
    for (int k = 0; k < 3; ++k) {
      double contrib;
      if (!obtuse) {
        // Circumcentric (Voronoi) portion: 1/8 (|e_next|^2 cot(angle opposite
        // e_next) + |e_prev|^2 cot(angle opposite e_prev)).
        const double l_next2 =
            (pts[(k + 1) % 3] - pts[k]).squaredNorm();  // opposite ang[(k+2)%3]
        const double l_prev2 =
            (pts[(k + 2) % 3] - pts[k]).squaredNorm();  // opposite ang[(k+1)%3]
        contrib = (l_next2 / std::tan(ang[(k + 2) % 3]) +
                   l_prev2 / std::tan(ang[(k + 1) % 3])) /
                  8.0;
      } else if (ang[k] > kRightAngle) {
        contrib = full / 2.0;
      } else {
        contrib = full / 4.0;
      }
      area[t[k]] += contrib;
    }
  }
  return area;
}

namespace {

// BFS component labeling over an implicit subgraph: vertices with keep[v]
// true, edges from mesh.neighbors restricted to kept endpoints.
int label_components(const TriangleMesh& mesh, const std::vector<char>& keep,
                     std::vector<int>* labels_out) {
  const int nv = mesh.vertex_count();
  std::vector<int> labels(nv, -1);
  int count = 0;
  std::queue<int> frontier;
  for (int s = 0; s < nv; ++s) {
    if (!keep[s] || labels[s] >= 0) continue;
    labels[s] = count;
    frontier.push(s);
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      for (int w : mesh.neighbors[v]) {
        if (keep[w] && labels[w] < 0) {
          labels[w] = count;
          frontier.push(w);
        }
      }
    }
    ++count;
  }
  if (labels_out) *labels_out = std::move(labels);
  return count;
}

}  // namespace

ComponentLabeling connected_components(const TriangleMesh& mesh) {
  ComponentLabeling out;
  const std::vector<char> keep(mesh.vertex_count(), 1);
  out.count = label_components(mesh, keep, &out.labels);
  return out;
}

PlanePartition plane_sign_partition(const TriangleMesh& mesh,
                                    const PlaneThroughOrigin& plane,
                                    double band) {
  if (band < 0.0) throw std::invalid_argument("band width must be >= 0");
  PlanePartition out;
  const int nv = mesh.vertex_count();
  if (nv == 0) return out;
  const double cutoff = band * mean_edge_length(mesh);

  std::vector<char> positive(nv, 0), negative(nv, 0);
  for (int v = 0; v < nv; ++v) {
    const double s = mesh.vertices[v].dot(plane.unit_normal);
    if (s > cutoff)
      positive[v] = 1;
    else if (s < -cutoff)
      negative[v] = 1;
    else
      ++out.banded_vertices;
  }
  if (out.banded_vertices >= static_cast<int>(0.99 * nv)) {
    out.degenerate = true;
    return out;
  }
  out.positive_components = label_components(mesh, positive, nullptr);
  out.negative_components = label_components(mesh, negative, nullptr);
  return out;
}

}  // namespace driftlap
