// Gaussian-weighted P1 finite elements on a triangle mesh: the sparse
// stiffness K (weighted Dirichlet energy) and consistent mass M (weighted
// area) of the symmetric weak form
//   integral <grad u, grad w> e^{-|x|^2/4} dA  =  lambda integral u w e^{-|x|^2/4} dA,
// whose generalized eigenproblem K u = lambda M u discretizes the drift
// Laplacian (Ornstein-Uhlenbeck operator) on the surface. The weight is
// evaluated at face centroids (one-point quadrature), which preserves the
// constant kernel of K exactly; truncation boundaries are natural (Neumann).
#pragma once

#include "driftlap/mesh.hpp"

#include <Eigen/Sparse>

#include <string>

namespace driftlap {

struct WeightedOperators {
  Eigen::SparseMatrix<double> K;  // symmetric positive semidefinite
  Eigen::SparseMatrix<double> M;  // symmetric positive definite
  Eigen::VectorXd lumped_mass;    // row sums of M, for diagonal norm estimates
  const TriangleMesh* mesh = nullptr;
  std::string weight_descriptor = "gaussian exp(-|x|^2/4)";
};

// Assembles K and M; throws on degenerate triangles. The result keeps a
// pointer to `mesh`, so assembling from a temporary is rejected: the mesh
// must outlive the operators.
WeightedOperators assemble(const TriangleMesh& mesh);
WeightedOperators assemble(TriangleMesh&&) = delete;

// (f^T K f) / (f^T M f); throws when the M-norm of f vanishes.
double rayleigh(const WeightedOperators& ops, const Eigen::VectorXd& f);

// Relative residual of the coordinate-eigenfunction identity
// K x_i = (1/2) M x_i in the lumped-M^{-1} norm, restricted to interior
// vertices (a truncation boundary carries an O(1) natural-boundary flux that
// would otherwise mask the interior discretization error). Returns 0 when
// x_i vanishes identically on the surface (e.g. z on the flat disk).
double coordinate_residual(const WeightedOperators& ops, int axis);

// M-weighted mean: (1^T M f) / (1^T M 1).
double mean_value(const WeightedOperators& ops, const Eigen::VectorXd& f);

// f minus its M-weighted mean; idempotent, and 1^T M (result) = 0.
Eigen::VectorXd project_out_constants(const WeightedOperators& ops,
                                      const Eigen::VectorXd& f);

// Sparse matrix in Matrix Market coordinate format (symmetric, lower part).
void export_matrix_market(const Eigen::SparseMatrix<double>& matrix,
                          const std::string& path);

}  // namespace driftlap
