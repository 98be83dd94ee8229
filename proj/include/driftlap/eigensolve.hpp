// Sparse symmetric generalized eigensolver for the smallest eigenvalues of
// K u = lambda M u. The constant mode (exact kernel of K) is handled by
// explicit deflation: iterates are kept M-orthogonal to the constants and the
// pair (0, 1/||1||_M) is reported exactly. The iteration is a blocked
// locally-optimal preconditioned conjugate-gradient method (LOBPCG)
// preconditioned by a sparse LDL^T factorization of K + M; a dense
// brute-force reference solver is provided for small meshes.
#pragma once

#include "driftlap/weighted_operator.hpp"

#include <cstdint>
#include <vector>

namespace driftlap {

struct SolveOptions {
  int k = 6;                 // eigenpair count, including the constant mode
  double tol = 1e-8;         // per-vector residual target, lumped-M^{-1} norm
  int max_iter = 800;
  std::uint64_t seed = 0;    // seeds the random initial block
};

struct Spectrum {
  std::vector<double> eigenvalues;   // ascending, eigenvalues[0] == 0
  Eigen::MatrixXd eigenvectors;      // column i pairs with eigenvalues[i]
  std::vector<double> residuals;     // ||K u - lambda M u|| in lumped-M^{-1}
  int iterations = 0;
  bool converged = false;
};

// k smallest eigenpairs, deterministic for a given seed. Eigenvectors are
// M-orthonormal. Throws when k < 1, when the block does not fit
// (k + max(2, k/4) guards must stay below vertex_count / 4), or when M has
// a nonpositive lumped row (not SPD). Non-convergence within max_iter
// returns the partial result with converged == false.
Spectrum solve_smallest(const WeightedOperators& ops, const SolveOptions& opts);

// Dense generalized eigendecomposition reference for meshes up to 2000
// vertices; same output conventions.
Spectrum dense_spectrum(const WeightedOperators& ops, int k);

// ||K u - lambda M u|| in the lumped-M^{-1} norm, divided by ||u||_M.
double eig_residual(const WeightedOperators& ops, double lambda,
                    const Eigen::VectorXd& u);

// Groups consecutive eigenvalues whose gaps stay within
// gap_tol * max(1, |value|).
struct EigenvalueCluster {
  double value = 0.0;      // cluster mean
  int multiplicity = 0;
  int first_index = 0;     // index of the first member in the spectrum
};
std::vector<EigenvalueCluster> multiplicity_clusters(
    const std::vector<double>& eigenvalues, double gap_tol = 0.01);
std::vector<EigenvalueCluster> multiplicity_clusters(const Spectrum& spectrum,
                                                     double gap_tol = 0.01);

}  // namespace driftlap
