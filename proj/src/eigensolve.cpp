#include "driftlap/eigensolve.hpp"

#include "driftlap/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftlap {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Weighted residual norm ||r||_{D^{-1}} with D the lumped mass.
double lumped_norm(const VectorXd& r, const VectorXd& lumped) {
  return std::sqrt((r.array().square() / lumped.array()).sum());
}

// M-orthonormalizes the columns of X in place (two SVQB passes, dropping
// directions whose Gram eigenvalue falls below drop_tol times the largest).
// Returns M*X for the surviving columns.
MatrixXd m_orthonormalize(const Eigen::SparseMatrix<double>& M, MatrixXd& X,
                          double drop_tol = 1e-12) {
  MatrixXd MX;
  for (int pass = 0; pass < 2; ++pass) {
    if (X.cols() == 0) return MatrixXd::Zero(X.rows(), 0);
    MX = M * X;
    MatrixXd G = X.transpose() * MX;
    G = 0.5 * (G + G.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
    const VectorXd& ev = es.eigenvalues();
    const double floor = std::max(ev[ev.size() - 1], 0.0) * drop_tol;
    int kept = 0;
    MatrixXd T(G.rows(), G.cols());
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] > floor && ev[i] > 0.0) {
        T.col(kept) = es.eigenvectors().col(i) / std::sqrt(ev[i]);
        ++kept;
      }
    }
    T.conservativeResize(Eigen::NoChange, kept);
    X = (X * T).eval();
    MX = (MX * T).eval();
  }
  return MX;
}

}  // namespace

Spectrum solve_smallest(const WeightedOperators& ops,
                        const SolveOptions& opts) {
  const Eigen::SparseMatrix<double>& K = ops.K;
  const Eigen::SparseMatrix<double>& M = ops.M;
  const int n = static_cast<int>(K.rows());
  const int k = opts.k;
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (ops.lumped_mass.minCoeff() <= 0.0)
    throw std::invalid_argument("mass matrix is not positive definite");
  const int guard = std::max(2, k / 4);
  if (k + guard > n / 4)
    throw std::invalid_argument(
        "block size k + guards exceeds a quarter of the vertex count");

  const VectorXd& lumped = ops.lumped_mass;
  const double mass_total = lumped.sum();
  // M-normalized constant mode and its M-image (M c = c0 * lumped).
  const double c0 = 1.0 / std::sqrt(mass_total);
  const VectorXd mc = c0 * lumped;

  Spectrum out;
  out.eigenvalues.assign(k, 0.0);
  out.eigenvectors = MatrixXd::Zero(n, k);
  out.residuals.assign(k, 0.0);
  out.eigenvectors.col(0).setConstant(c0);
  {
    const VectorXd r0 = K * out.eigenvectors.col(0);
    out.residuals[0] = lumped_norm(r0, lumped);
  }
  if (k == 1) {
    out.converged = true;
    return out;
  }

  const int nev = k - 1;       // nonzero modes to converge
  const int block = k + guard; // iterated block size

  auto deflate = [&](MatrixXd& X) {
    for (int j = 0; j < X.cols(); ++j)
      X.col(j).array() -= mc.dot(X.col(j)) * c0;
  };

  // Preconditioner: exact sparse factorization of the shifted operator
  // K + M (symmetric positive definite since M is).  One factorization per
  // solve; applying it to the residual block steers the iteration like a
  // shift-and-invert step and keeps iteration counts flat under refinement.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> precond;
  {
    Eigen::SparseMatrix<double> shifted = K + M;
    precond.compute(shifted);
    if (precond.info() != Eigen::Success)
      throw std::runtime_error("preconditioner factorization failed");
  }

  std::mt19937_64 rng(opts.seed);
  auto random_block = [&](int cols) {
    MatrixXd X(n, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < n; ++i) X(i, j) = standard_normal(rng);
    return X;
  };

  MatrixXd X = random_block(block);
  deflate(X);
  m_orthonormalize(M, X);
  MatrixXd P(n, 0);

  VectorXd theta = VectorXd::Zero(block);
  std::vector<double> resnorm(block, 1.0);
  out.converged = false;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    out.iterations = iter + 1;

    // Subspace: current block, preconditioned residuals of the still-active
    // leading vectors, and the previous block (conjugate directions).
    MatrixXd R(n, 0);
    if (iter > 0) {
      const MatrixXd KX = K * X;
      const MatrixXd MX = M * X;
      const int nres = std::min(nev + 1, static_cast<int>(X.cols()));
      for (int j = 0; j < nres; ++j) {
        if (j < nev && resnorm[j] <= opts.tol) continue;  // soft lock
        R.conservativeResize(Eigen::NoChange, R.cols() + 1);
        R.col(R.cols() - 1) =
            precond.solve(KX.col(j) - theta[j] * MX.col(j));
      }
      deflate(R);
      // Bring the correction directions to unit M-norm so they survive the
      // scale-sensitive basis cleanup next to the unit-norm Ritz vectors.
      for (Eigen::Index j = 0; j < R.cols(); ++j) {
        const double nrm = std::sqrt(std::max(0.0, R.col(j).dot(M * R.col(j))));
        if (nrm > 1e-280) R.col(j) /= nrm;
      }
    }
    MatrixXd S(n, X.cols() + R.cols() + P.cols());
    S.leftCols(X.cols()) = X;
    if (R.cols() > 0) S.middleCols(X.cols(), R.cols()) = R;
    if (P.cols() > 0) S.rightCols(P.cols()) = P;
    deflate(S);
    MatrixXd MS = m_orthonormalize(M, S);
    if (S.cols() < nev) {
      // Degenerate basis; refill with fresh random directions.
      MatrixXd extra = random_block(block - static_cast<int>(S.cols()));
      deflate(extra);
      const Eigen::Index old = S.cols();
      S.conservativeResize(Eigen::NoChange, old + extra.cols());
      S.rightCols(extra.cols()) = extra;
      MS = m_orthonormalize(M, S);
    }
    if (S.cols() < nev)
      throw std::runtime_error("eigensolver subspace collapsed");

    const MatrixXd KS = K * S;
    MatrixXd H = S.transpose() * KS;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("projected eigensolve failed");

    const int m_eff = std::min<int>(block, S.cols());
    const MatrixXd Q = es.eigenvectors().leftCols(m_eff);
    const MatrixXd X_new = S * Q;
    const MatrixXd KX_new = KS * Q;
    const MatrixXd MX_new = MS * Q;
    theta = es.eigenvalues().head(m_eff);

    bool all_converged = X_new.cols() >= nev;
    resnorm.assign(m_eff, 0.0);
    for (int j = 0; j < m_eff; ++j) {
      const VectorXd r = KX_new.col(j) - theta[j] * MX_new.col(j);
      resnorm[j] = lumped_norm(r, lumped);
      if (j < nev && resnorm[j] > opts.tol) all_converged = false;
    }

    // Conjugate block: previous X with its new-X component removed.
    P = X - X_new * (MX_new.transpose() * X);
    m_orthonormalize(M, P);
    if (P.cols() > block) P = P.leftCols(block).eval();
    X = X_new;

    if (all_converged) {
      out.converged = true;
      break;
    }
  }

  for (int j = 0; j < nev; ++j) {
    out.eigenvalues[j + 1] = theta[j];
    out.eigenvectors.col(j + 1) = X.col(j);
    out.residuals[j + 1] = resnorm[j];
  }
  return out;
}

Spectrum dense_spectrum(const WeightedOperators& ops, int k) {
  const int n = static_cast<int>(ops.K.rows());
  if (n > 2000)
    throw std::invalid_argument("dense reference limited to 2000 vertices");
  if (k < 1 || k > n) throw std::invalid_argument("bad k for dense solve");
  const MatrixXd K = MatrixXd(ops.K);
  const MatrixXd M = MatrixXd(ops.M);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(K, M);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense generalized eigensolve failed");

  Spectrum out;
  out.eigenvalues.assign(k, 0.0);
  out.residuals.assign(k, 0.0);
  out.eigenvectors = MatrixXd::Zero(n, k);
  for (int j = 0; j < k; ++j) {
    out.eigenvalues[j] = es.eigenvalues()[j];
    out.eigenvectors.col(j) = es.eigenvectors().col(j);
    out.residuals[j] =
        eig_residual(ops, out.eigenvalues[j], out.eigenvectors.col(j));
  }
  out.converged = true;
  return out;
}

double eig_residual(const WeightedOperators& ops, double lambda,
                    const Eigen::VectorXd& u) {
  const double unorm = std::sqrt(u.dot(ops.M * u));
  if (unorm <= 0.0) throw std::invalid_argument("eig_residual: zero vector");
  const VectorXd r = ops.K * u - lambda * (ops.M * u);
  return lumped_norm(r, ops.lumped_mass) / unorm;
}

std::vector<EigenvalueCluster> multiplicity_clusters(
    const std::vector<double>& eigenvalues, double gap_tol) {
  std::vector<EigenvalueCluster> clusters;
  for (int i = 0; i < static_cast<int>(eigenvalues.size()); ++i) {
    const double v = eigenvalues[i];
    if (!clusters.empty()) {
      const double prev = eigenvalues[i - 1];
      if (v - prev <= gap_tol * std::max(1.0, std::abs(v))) {
        EigenvalueCluster& c = clusters.back();
        c.value = (c.value * c.multiplicity + v) / (c.multiplicity + 1);
        ++c.multiplicity;
        continue;
      }
    }
    clusters.push_back({v, 1, i});
  }
  return clusters;
}

std::vector<EigenvalueCluster> multiplicity_clusters(const Spectrum& spectrum,
                                                     double gap_tol) {
  return multiplicity_clusters(spectrum.eigenvalues, gap_tol);
}

}  // namespace driftlap
