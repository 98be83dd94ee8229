#include "driftlap/symmetry.hpp"

#include "driftlap/point_index.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace driftlap {

namespace {

constexpr double kPi = 3.141592653589793238462643;

// Entries of dihedral elements are cosines/sines of multiples of pi/n; the
// quarter-turn cases produce values within one rounding error of 0 and +-1.
// Snapping those makes small-n groups exact (and z-symmetric meshes match
// their images bitwise), without touching any legitimate entry: for n <= 64
// the nearest non-exact value is cos(pi/2 +- pi/64) ~ 0.049.
double snap(double v) {
  if (std::abs(v) < 1e-15) return 0.0;
  if (std::abs(v - 1.0) < 1e-15) return 1.0;
  if (std::abs(v + 1.0) < 1e-15) return -1.0;
  return v;
}

Eigen::Matrix3d snap_matrix(Eigen::Matrix3d m) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = snap(m(r, c));
  return m;
}

Eigen::Matrix3d rotation_z(double angle) {
  Eigen::Matrix3d m;
  const double c = std::cos(angle), s = std::sin(angle);
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return snap_matrix(m);
}

// Half-turn about the horizontal unit axis (cos a, sin a, 0): 2uu^T - I.
Eigen::Matrix3d half_turn_horizontal(double axis_angle) {
  Eigen::Matrix3d m;
  const double c2 = std::cos(2.0 * axis_angle), s2 = std::sin(2.0 * axis_angle);
  m << c2, s2, 0, s2, -c2, 0, 0, 0, -1;
  return snap_matrix(m);
}

int find_element(const SymmetryGroup& group, const Eigen::Matrix3d& m,
                 double tol) {
  for (int i = 0; i < group.size(); ++i) {
    if ((group.elements[i].matrix - m).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return -1;
}

}  // namespace

std::string SymmetryGroup::tag() const {
  if (kind == "dihedral") return "D" + std::to_string(n);
  if (kind == "prismatic") return "D" + std::to_string(n) + "xZ2";
  return "trivial";
}

SymmetryGroup dihedral_group(int n) {
  if (n < 2) throw std::invalid_argument("dihedral group requires n >= 2");
  SymmetryGroup g;
  g.kind = "dihedral";
  g.n = n;
  g.elements.reserve(2 * n);
  for (int j = 0; j < n; ++j)
    g.elements.push_back({rotation_z(2.0 * kPi * j / n)});
  for (int k = 0; k < n; ++k)
    g.elements.push_back({half_turn_horizontal(kPi * k / n)});
  return g;
}

SymmetryGroup prismatic_group(int n) {
  if (n < 2) throw std::invalid_argument("prismatic group requires n >= 2");
  SymmetryGroup g = dihedral_group(n);
  g.kind = "prismatic";
  Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
  flip(2, 2) = -1.0;
  const int base = g.size();
  g.elements.reserve(4 * n);
  for (int i = 0; i < base; ++i)
    g.elements.push_back({snap_matrix(flip * g.elements[i].matrix)});
  return g;
}

SymmetryGroup trivial_group() {
  SymmetryGroup g;
  g.kind = "trivial";
  g.n = 1;
  g.elements.push_back({Eigen::Matrix3d::Identity()});
  return g;
}

SymmetryGroup parse_group(const std::string& text) {
  if (text == "trivial") return trivial_group();
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("group spec must be dihedral:N or prismatic:N");
  const std::string kind = text.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad group order in: " + text);
  }
  if (kind == "dihedral") return dihedral_group(n);
  if (kind == "prismatic") return prismatic_group(n);
  throw std::invalid_argument("unknown group kind: " + kind);
}

void verify_group_axioms(const SymmetryGroup& group, double tol) {
  if (group.elements.empty()) throw std::runtime_error("group is empty");
  if (find_element(group, Eigen::Matrix3d::Identity(), tol) < 0)
    throw std::runtime_error("group lacks the identity");
  for (int i = 0; i < group.size(); ++i) {
    const Eigen::Matrix3d& m = group.elements[i].matrix;
    if ((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() >
        1e-12)
      throw std::runtime_error("element " + std::to_string(i) +
                               " is not orthogonal");
    const double det = m.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-12)
      throw std::runtime_error("element " + std::to_string(i) +
                               " has |det| != 1");
    if (find_element(group, m.transpose(), tol) < 0)
      throw std::runtime_error("inverse of element " + std::to_string(i) +
                               " missing");
  }
  // Closure, recording the Cayley table for the associativity sweep.
  std::vector<std::vector<int>> table(group.size(),
                                      std::vector<int>(group.size(), -1));
  for (int i = 0; i < group.size(); ++i) {
    for (int j = 0; j < group.size(); ++j) {
      const int k = find_element(
          group, group.elements[i].matrix * group.elements[j].matrix, tol);
      if (k < 0)
        throw std::runtime_error("product of elements " + std::to_string(i) +
                                 " and " + std::to_string(j) +
                                 " leaves the group");
      table[i][j] = k;
    }
  }
  for (int i = 0; i < group.size(); ++i)
    for (int j = 0; j < group.size(); ++j)
      for (int k = 0; k < group.size(); ++k)
        if (table[table[i][j]][k] != table[i][table[j][k]])
          throw std::runtime_error("associativity failure in Cayley table");
}

VertexPermutation induced_permutation(const TriangleMesh& mesh,
                                      const Isometry& iso, double tolerance) {
  const int nv = mesh.vertex_count();
  VertexPermutation perm;
  perm.mapping.assign(nv, -1);
  const PointIndex index(mesh.vertices, std::max(tolerance, 1e-12));
  std::vector<char> used(nv, 0);
  for (int i = 0; i < nv; ++i) {
    const Vec3 image = iso.matrix * mesh.vertices[i];
    const int j = index.nearest_within(image, tolerance);
    if (j < 0)
      throw std::runtime_error(
          "mesh not invariant: image of vertex " + std::to_string(i) +
          " has no match within tolerance");
    if (used[j])
      throw std::runtime_error(
          "mesh not invariant: vertex matching is not injective at vertex " +
          std::to_string(j));
    used[j] = 1;
    perm.mapping[i] = j;
    perm.max_deviation =
        std::max(perm.max_deviation, (image - mesh.vertices[j]).norm());
  }

  // A matched vertex set is not enough: the triangulation itself must be
  // carried to itself, or the assembled operators do not commute with the
  // permutation.
  std::vector<std::array<int, 3>> face_keys;
  face_keys.reserve(mesh.faces.size());
  for (const auto& face : mesh.faces) {
    std::array<int, 3> key = face;
    std::sort(key.begin(), key.end());
    face_keys.push_back(key);
  }
  std::sort(face_keys.begin(), face_keys.end());
  for (const auto& face : mesh.faces) {
    std::array<int, 3> image = {perm.mapping[face[0]], perm.mapping[face[1]],
                                perm.mapping[face[2]]};
    std::sort(image.begin(), image.end());
    if (!std::binary_search(face_keys.begin(), face_keys.end(), image))
      throw std::runtime_error(
          "mesh not invariant: triangulation is not carried to itself");
  }
  return perm;
}

bool is_invariant(const TriangleMesh& mesh, const SymmetryGroup& group,
                  double tolerance, double* max_deviation) {
  double worst = 0.0;
  for (const auto& iso : group.elements) {
    try {
      const VertexPermutation perm = induced_permutation(mesh, iso, tolerance);
      worst = std::max(worst, perm.max_deviation);
    } catch (const std::runtime_error&) {
      return false;
    }
  }
  if (max_deviation) *max_deviation = worst;
  return true;
}

VertexScalarField pullback(const VertexScalarField& field,
                           const VertexPermutation& perm) {
  if (!field.mesh) throw std::invalid_argument("field is unbound");
  if (static_cast<int>(perm.mapping.size()) != field.values.size())
    throw std::invalid_argument("permutation size does not match field");
  Eigen::VectorXd out(field.values.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = field.values[perm.mapping[static_cast<std::size_t>(i)]];
  return VertexScalarField(*field.mesh, std::move(out));
}

VertexScalarField antisymmetrize(const VertexScalarField& field,
                                 const VertexPermutation& perm) {
  VertexScalarField composed = pullback(field, perm);
  composed.values = field.values - composed.values;
  return composed;
}

}  // namespace driftlap
