// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_EIGENSOLVE_HPP
#define PROM_EIGENSOLVE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>
#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include "prom/error.hpp"
#include "prom/linalg.hpp"

namespace prom
{

struct EigenPair
{
  double value = 0.0;
  Vector vector;  // B-normalized, largest-magnitude entry positive
};

struct SolverDiagnostics
{
  std::string method;
  int iterations = 0;  // operator applications
  int restarts = 0;
  double shift = 0.0;
  std::vector<double> residuals;  // ||Au - lambda Bu|| / (|lambda| ||Bu||) per pair
};

struct EigenSolution
{
  std::vector<EigenPair> pairs;  // ascending eigenvalue
  std::vector<double> parameter;
  SolverDiagnostics diagnostics;

  std::size_t size() const { return pairs.size(); }

  Vector values() const
  {
    Vector v(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); i++)
    {
      v(static_cast<Eigen::Index>(i)) = pairs[i].value;
    }
    return v;
  }

  Matrix vectors() const
  {
    if (pairs.empty())
    {
      return {};
    }
    Matrix X(pairs[0].vector.size(), static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); i++)
    {
      X.col(static_cast<Eigen::Index>(i)) = pairs[i].vector;
    }
    return X;
  }
};

struct EigenSolverOptions
{
  double tol = 1.0e-10;
  // Budget of shift-invert operator applications; 0 means 500 * k.
  int max_iterations = 0;
  // Krylov subspace dimension; 0 picks max(2k + 10, 20).
  int subspace = 0;
  // Spectral shift. Must lie below the wanted eigenvalues.
  double shift = 0.0;
  std::uint64_t seed = 0x243f6a8885a308d3ull;
};

// Groups of consecutive eigenvalues whose neighbors differ by at most rel_tol relative.
inline std::vector<std::vector<int>> eigenvalue_clusters(const Vector &values, double rel_tol)
{
  std::vector<std::vector<int>> clusters;
  for (Eigen::Index i = 0; i < values.size(); i++)
  {
    if (!clusters.empty())
    {
      const double prev = values(clusters.back().back());
      if (std::abs(values(i) - prev) <= rel_tol * std::max(std::abs(prev), std::abs(values(i))))
      {
        clusters.back().push_back(static_cast<int>(i));
        continue;
      }
    }
    clusters.push_back({static_cast<int>(i)});
  }
  return clusters;
}

namespace detail
{

inline double relative_residual(const Vector &Ax, const Vector &Bx, double lambda)
{
  const double denom = std::abs(lambda) * Bx.norm();
  const double r = (Ax - lambda * Bx).norm();
  return denom > 0.0 ? r / denom : r;
}

inline void normalize_pair(EigenPair &p, const Vector &Bx)
{
  const double nb = std::sqrt(std::max(p.vector.dot(Bx), 0.0));
  if (nb > 0.0)
  {
    p.vector /= nb;
  }
  fix_sign(p.vector);
}

}  // namespace detail

// Full spectrum of the dense symmetric-definite pencil (A, B): Cholesky B = LL', standard
// symmetric problem for L^-1 A L^-T (tridiagonal QR), back-transform.
inline EigenSolution dense_generalized_eig(const Matrix &A, const Matrix &B)
{
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
  {
    throw InvalidArgument("dense_generalized_eig: dimension mismatch");
  }
  const Eigen::Index n = A.rows();
  EigenSolution sol;
  sol.diagnostics.method = "dense-cholesky-tridiagonal";
  if (n == 0)
  {
    return sol;
  }
  Eigen::LLT<Matrix> llt(B);
  if (llt.info() != Eigen::Success)
  {
    throw DefinitenessError("dense_generalized_eig: Cholesky factorization of B failed");
  }
  const auto L = llt.matrixL();
  Matrix C = L.solve(A);
  C = L.solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(C);
  if (es.info() != Eigen::Success)
  {
    throw SolverFailure("dense_generalized_eig: tridiagonal QR did not converge", 0, 0.0);
  }
  Matrix X = llt.matrixU().solve(es.eigenvectors());
  sol.pairs.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; i++)
  {
    EigenPair &p = sol.pairs[static_cast<std::size_t>(i)];
    p.value = es.eigenvalues()(i);
    p.vector = X.col(i);
    Vector Bx = B * p.vector;
    detail::normalize_pair(p, Bx);
    Bx = B * p.vector;
    sol.diagnostics.residuals.push_back(detail::relative_residual(A * p.vector, Bx, p.value));
  }
  return sol;
}

// The k smallest eigenpairs of the sparse symmetric-definite pencil (A, B).
//
// Shift-invert with the sparse LDL' factorization of A - shift*B and a thick-restarted
// Krylov iteration in the B inner product (full reorthogonalization, explicit Rayleigh-Ritz
// on the projected operator). Problems whose dimension does not exceed the Krylov subspace
// size are solved densely.
inline EigenSolution smallest_eigenpairs(const SparseMatrix &A, const SparseMatrix &B, int k,
                                         const EigenSolverOptions &opts = {})
{
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || B.cols() != n)
  {
    throw InvalidArgument("smallest_eigenpairs: A and B must be square of equal size");
  }
  if (k < 1 || k > n)
  {
    throw InvalidArgument("smallest_eigenpairs: need 1 <= k <= n, got k=" + std::to_string(k));
  }
  const int m = static_cast<int>(
    std::min<Eigen::Index>(n, opts.subspace > 0 ? std::max(opts.subspace, k + 2)
                                                : std::max(2 * k + 10, 20)));

  {
    Eigen::SimplicialLLT<SparseMatrix> bchol(B);
    if (bchol.info() != Eigen::Success)
    {
      throw DefinitenessError("smallest_eigenpairs: B is not positive definite");
    }
  }

  if (m >= n)
  {
    EigenSolution full = dense_generalized_eig(Matrix(A), Matrix(B));
    full.pairs.resize(static_cast<std::size_t>(k));
    full.diagnostics.residuals.resize(static_cast<std::size_t>(k));
    return full;
  }

  const SparseMatrix K = opts.shift == 0.0 ? A : SparseMatrix(A - opts.shift * B);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(K);
  if (ldlt.info() != Eigen::Success)
  {
    throw DefinitenessError("smallest_eigenpairs: factorization of A - shift*B failed");
  }
  {
    // Sylvester inertia: negative pivots count eigenvalues below the shift.
    const Vector D = ldlt.vectorD();
    const auto below = (D.array() <= 0.0).count();
    if (below > 0)
    {
      throw SolverFailure("smallest_eigenpairs: " + std::to_string(below) +
                            " eigenvalue(s) lie at or below the shift " +
                            std::to_string(opts.shift) + "; lower the shift",
                          0, 0.0);
    }
  }

  const int budget = opts.max_iterations > 0 ? opts.max_iterations : 500 * k;
  std::mt19937_64 rng(opts.seed);
  auto random_vector = [&]()
  {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; i++)
    {
      v(i) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    }
    return v;
  };

  Matrix V(n, m), BV(n, m), Z(n, m);
  int cols = 0;

  // Two passes of classical Gram-Schmidt in the B inner product; returns the B-norm.
  auto orthogonalize = [&](Vector &w) -> double
  {
    for (int pass = 0; pass < 2; pass++)
    {
      if (cols > 0)
      {
        Vector h = BV.leftCols(cols).transpose() * w;
        w.noalias() -= V.leftCols(cols) * h;
      }
    }
    return std::sqrt(std::max(w.dot(B * w), 0.0));
  };

  auto next_direction = [&](Vector w)
  {
    const double before = std::sqrt(std::max(w.dot(B * w), 0.0));
    double beta = orthogonalize(w);
    while (beta <= 1.0e-10 * before || beta == 0.0)
    {
      // Invariant subspace reached: continue from a fresh random direction.
      w = random_vector();
      const double nw = std::sqrt(std::max(w.dot(B * w), 0.0));
      beta = orthogonalize(w);
      if (beta > 1.0e-8 * nw)
      {
        break;
      }
    }
    return Vector(w / beta);
  };

  Vector v = random_vector();
  v /= std::sqrt(v.dot(B * v));

  SolverDiagnostics diag;
  diag.method = "shift-invert-krylov";
  diag.shift = opts.shift;

  std::vector<double> lambdas(static_cast<std::size_t>(k));
  Matrix ritz;
  while (true)
  {
    while (cols < m)
    {
      V.col(cols) = v;
      BV.col(cols) = B * v;
      Z.col(cols) = ldlt.solve(Vector(BV.col(cols)));
      diag.iterations++;
      cols++;
      if (cols < m)
      {
        v = next_direction(Z.col(cols - 1));
      }
    }

    Matrix H = BV.transpose() * Z;
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    // Largest theta = 1 / (lambda - shift) first.
    Matrix Y = es.eigenvectors().rowwise().reverse();
    Vector theta = es.eigenvalues().reverse();

    ritz = V * Y.leftCols(k);
    Matrix Britz = BV * Y.leftCols(k);
    diag.residuals.assign(static_cast<std::size_t>(k), 0.0);
    bool converged = true;
    for (int i = 0; i < k; i++)
    {
      lambdas[static_cast<std::size_t>(i)] = opts.shift + 1.0 / theta(i);
      const Vector Ax = A * ritz.col(i);
      const double res = detail::relative_residual(Ax, Britz.col(i), lambdas[static_cast<std::size_t>(i)]);
      diag.residuals[static_cast<std::size_t>(i)] = res;
      converged = converged && res <= opts.tol;
    }
    if (converged)
    {
      break;
    }
    if (diag.iterations >= budget)
    {
      throw SolverFailure("smallest_eigenpairs: no convergence after " +
                            std::to_string(diag.iterations) + " operator applications",
                          diag.iterations,
                          *std::max_element(diag.residuals.begin(), diag.residuals.end()));
    }

    // Thick restart: keep the leading Ritz vectors and continue from the Krylov residual.
    Vector f = Z.col(m - 1);
    v = next_direction(f);
    const int keep = k + (m - k) / 2;
    V.leftCols(keep) = (V * Y.leftCols(keep)).eval();
    BV.leftCols(keep) = (BV * Y.leftCols(keep)).eval();
    Z.leftCols(keep) = (Z * Y.leftCols(keep)).eval();
    cols = keep;
    diag.restarts++;
  }

  EigenSolution sol;
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lambdas[a] < lambdas[b]; });
  std::vector<double> residuals;
  for (int i : order)
  {
    EigenPair p;
    p.value = lambdas[static_cast<std::size_t>(i)];
    p.vector = ritz.col(i);
    detail::normalize_pair(p, B * p.vector);
    residuals.push_back(diag.residuals[static_cast<std::size_t>(i)]);
    sol.pairs.push_back(std::move(p));
  }
  diag.residuals = residuals;
  sol.diagnostics = diag;
  return sol;
}

}  // namespace prom

#endif  // PROM_EIGENSOLVE_HPP
