#include "driftlap/weighted_operator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace driftlap {

WeightedOperators assemble(const TriangleMesh& mesh) {
  const int nv = mesh.vertex_count();
  WeightedOperators ops;
  ops.mesh = &mesh;

  std::vector<Eigen::Triplet<double>> k_trip, m_trip;
  k_trip.reserve(9 * mesh.faces.size());
  m_trip.reserve(9 * mesh.faces.size());

  const double area_floor = 1e-12 * mean_face_area(mesh);
  for (const auto& t : mesh.faces) {
    const Vec3& p0 = mesh.vertices[t[0]];
    const Vec3& p1 = mesh.vertices[t[1]];
    const Vec3& p2 = mesh.vertices[t[2]];
    const Vec3 e[3] = {p2 - p1, p0 - p2, p1 - p0};  // e[a] opposite corner a
    const double area = 0.5 * e[1].cross(e[2]).norm();
    if (area <= area_floor)
      throw std::runtime_error("assemble: degenerate triangle");
    const Vec3 centroid = (p0 + p1 + p2) / 3.0;
    const double w = std::exp(-centroid.squaredNorm() / 4.0);

    // Cotangent stiffness K_ab = <e_a, e_b> / (4A) and consistent mass
    // (A/12) (1 + delta_ab), both scaled by the centroid weight. Only the
    // lower triangle is accumulated; selfadjointView restores exact symmetry.
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (t[a] < t[b]) continue;
        const double k = w * e[a].dot(e[b]) / (4.0 * area);
        const double m = w * area / 12.0 * (a == b ? 2.0 : 1.0);
        k_trip.emplace_back(t[a], t[b], k);
        m_trip.emplace_back(t[a], t[b], m);
      }
    }
  }

  Eigen::SparseMatrix<double> k_lower(nv, nv), m_lower(nv, nv);
  k_lower.setFromTriplets(k_trip.begin(), k_trip.end());
  m_lower.setFromTriplets(m_trip.begin(), m_trip.end());
  ops.K = k_lower.selfadjointView<Eigen::Lower>();
  ops.M = m_lower.selfadjointView<Eigen::Lower>();
  ops.K.makeCompressed();
  ops.M.makeCompressed();
  ops.lumped_mass = ops.M * Eigen::VectorXd::Ones(nv);
  return ops;
}

double rayleigh(const WeightedOperators& ops, const Eigen::VectorXd& f) {
  const double m_norm2 = f.dot(ops.M * f);
  if (m_norm2 <= 0.0)
    throw std::invalid_argument("rayleigh: field has zero M-norm");
  return f.dot(ops.K * f) / m_norm2;
}

double coordinate_residual(const WeightedOperators& ops, int axis) {
  if (axis < 0 || axis > 2)
    throw std::invalid_argument("axis must be 0, 1 or 2");
  const TriangleMesh& mesh = *ops.mesh;
  const int nv = mesh.vertex_count();
  Eigen::VectorXd x(nv);
  for (int v = 0; v < nv; ++v) x[v] = mesh.vertices[v][axis];

  const Eigen::VectorXd target = 0.5 * (ops.M * x);
  const Eigen::VectorXd resid = ops.K * x - target;
  double num = 0.0, den = 0.0;
  for (int v = 0; v < nv; ++v) {
    if (mesh.boundary_flag[v]) continue;
    num += resid[v] * resid[v] / ops.lumped_mass[v];
    den += target[v] * target[v] / ops.lumped_mass[v];
  }
  if (den <= 1e-28) return 0.0;  // coordinate vanishes on the surface
  return std::sqrt(num / den);
}

double mean_value(const WeightedOperators& ops, const Eigen::VectorXd& f) {
  // 1^T M f = (M 1)^T f, exact through the stored row sums.
  return ops.lumped_mass.dot(f) / ops.lumped_mass.sum();
}

Eigen::VectorXd project_out_constants(const WeightedOperators& ops,
                                      const Eigen::VectorXd& f) {
  return f.array() - mean_value(ops, f);
}

void export_matrix_market(const Eigen::SparseMatrix<double>& matrix,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  // Count the lower-triangle entries.
  long long nnz = 0;
  for (int col = 0; col < matrix.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, col); it; ++it)
      if (it.row() >= it.col()) ++nnz;
  out << "%%MatrixMarket matrix coordinate real symmetric\n"
      << matrix.rows() << ' ' << matrix.cols() << ' ' << nnz << '\n';
  char buf[64];
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, col); it; ++it) {
      if (it.row() < it.col()) continue;
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n",
                    static_cast<long long>(it.row()) + 1,
                    static_cast<long long>(it.col()) + 1, it.value());
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace driftlap
