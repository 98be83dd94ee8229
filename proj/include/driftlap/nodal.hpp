#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "driftlap/mesh.hpp"

namespace driftlap {

// Partition of the mesh vertices into connected sign domains of a scalar
// field.  Vertices whose value lies within the zero band get label -1 and
// belong to no domain; every other vertex carries the id of its domain.
struct NodalDecomposition {
  std::vector<int> vertex_labels;  // -1 inside the zero band, else domain id
  std::vector<int> domain_signs;   // +1 or -1 per domain id
  int positive_count = 0;
  int negative_count = 0;
  int total_count = 0;
  int banded_vertices = 0;
};

// Connected components of {f > tol} and {f < -tol} where
// tol = zero_tol * max_i |f_i|.  Edges connect vertices only when both
// endpoints carry the same strict sign.  Throws std::invalid_argument if the
// field length does not match the mesh or if the field is identically zero.
NodalDecomposition nodal_domains(const TriangleMesh& mesh,
                                 const Eigen::VectorXd& values,
                                 double zero_tol = 1e-6);

// One row of the domain-count table for an eigenfunction: the count must not
// exceed index + 1 (counting eigenfunctions from zero).
struct CourantRow {
  int index = 0;
  double eigenvalue = 0.0;
  int domain_count = 0;
  int bound = 0;
  bool pass = false;
};

std::vector<CourantRow> courant_check(const TriangleMesh& mesh,
                                      const Eigen::MatrixXd& eigenvectors,
                                      const std::vector<double>& eigenvalues,
                                      double zero_tol = 1e-6);

// Random-plane bisection statistics: each sampled plane through the origin
// should cut the surface into exactly one positive and one negative piece.
struct TwoPieceReport {
  int planes_tested = 0;
  int degenerate_skipped = 0;
  int failures = 0;
  std::vector<std::array<int, 2>> piece_counts;  // non-degenerate planes only
};

TwoPieceReport two_piece_check(const TriangleMesh& mesh, int n_planes,
                               std::uint64_t seed, double band_scale = 0.5);

// Domain counts for random unit-coefficient combinations of the columns of
// `basis` (e.g. an eigenvalue cluster's eigenvectors).
std::vector<int> combination_domain_counts(const TriangleMesh& mesh,
                                           const Eigen::MatrixXd& basis,
                                           int n_combos, std::uint64_t seed,
                                           double zero_tol = 1e-6);

// Zero set of a vertex field traced across triangles as polylines.  Values
// within 1e-12 * max|f| of zero are snapped to zero so the curve may run
// through vertices and along whole edges.
struct NodalCurveSet {
  std::vector<std::vector<Eigen::Vector3d>> polylines;
  std::vector<std::uint8_t> closed;  // parallel to polylines
  int loop_count = 0;
  int open_chain_count = 0;
};

NodalCurveSet extract_nodal_curves(const TriangleMesh& mesh,
                                   const Eigen::VectorXd& values);

}  // namespace driftlap
