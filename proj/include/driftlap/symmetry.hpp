// Finite symmetry groups of R^3 acting on meshes: dihedral groups D_n
// (n rotations about the z-axis plus n half-turns about horizontal axes at
// angles k*pi/n) and prismatic groups D_n x Z_2 (adding the reflection
// z -> -z), their induced vertex permutations, and field pullbacks.
#pragma once

#include "driftlap/mesh.hpp"

#include <string>
#include <vector>

namespace driftlap {

struct Isometry {
  Eigen::Matrix3d matrix;  // orthogonal, det +-1
};

struct SymmetryGroup {
  std::string kind;  // "dihedral" | "prismatic" | "trivial"
  int n = 1;         // order parameter: |G| = 2n dihedral, 4n prismatic
  std::vector<Isometry> elements;  // identity first

  int size() const { return static_cast<int>(elements.size()); }
  // Short tag: "D4", "D4xZ2", "trivial".
  std::string tag() const;
};

// Order-2n dihedral group: rotations about z by 2*pi*j/n (j = 0..n-1) and
// half-turns about the horizontal axes h_k = (cos(k*pi/n), sin(k*pi/n), 0),
// k = 0..n-1. Throws for n < 2.
SymmetryGroup dihedral_group(int n);

// Order-4n prismatic group: the dihedral elements and their compositions
// with diag(1, 1, -1). Throws for n < 2.
SymmetryGroup prismatic_group(int n);

// The one-element group {identity}.
SymmetryGroup trivial_group();

// Parses "dihedral:N" | "prismatic:N" | "trivial".
SymmetryGroup parse_group(const std::string& text);

// Exhaustive axiom check: identity present, every element orthogonal with
// det +-1, closure and inverses within matching tolerance, associativity on
// all triples. Throws std::runtime_error naming the first violation.
void verify_group_axioms(const SymmetryGroup& group, double tol = 1e-10);

// Bijective nearest-vertex matching of an isometry's action on the mesh:
// mapping[i] is the vertex index nearest to matrix * vertex[i].
struct VertexPermutation {
  std::vector<int> mapping;
  double max_deviation = 0.0;
};

// Throws std::runtime_error ("mesh not invariant ...") if some image vertex
// has no mesh vertex within tolerance or the matching is not injective.
VertexPermutation induced_permutation(const TriangleMesh& mesh,
                                      const Isometry& iso,
                                      double tolerance = 1e-8);

// True iff induced_permutation succeeds for every group element; the largest
// deviation over all elements is reported through max_deviation if non-null.
bool is_invariant(const TriangleMesh& mesh, const SymmetryGroup& group,
                  double tolerance = 1e-8, double* max_deviation = nullptr);

// Pullback (f o sigma)_i = f_{perm(i)}.
VertexScalarField pullback(const VertexScalarField& field,
                           const VertexPermutation& perm);

// Antisymmetrization psi = f - f o sigma; identically zero iff f is
// sigma-invariant.
VertexScalarField antisymmetrize(const VertexScalarField& field,
                                 const VertexPermutation& perm);

}  // namespace driftlap
