// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_POD_HPP
#define PROM_POD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include "prom/eigensolve.hpp"
#include "prom/error.hpp"
#include "prom/linalg.hpp"

namespace prom
{

struct SnapshotSource
{
  int sample = 0;      // 0-based index into the sample set
  int eigenindex = 0;  // 0-based eigenpair index
};

struct SnapshotMatrix
{
  Matrix S;  // N_h x (n_e * n_s)
  std::vector<SnapshotSource> provenance;
  int n_e = 0;
  int n_s = 0;
  // Eigenvectors are B-normalized by the solver; columns here are rescaled to unit
  // Euclidean length.
  std::string scaling = "euclidean-unit";
};

// Columns ordered sample-major, eigenindex-minor.
inline SnapshotMatrix build_snapshot_matrix(const std::vector<EigenSolution> &solutions, int n_e)
{
  if (n_e < 1)
  {
    throw InvalidArgument("build_snapshot_matrix: need n_e >= 1");
  }
  if (solutions.empty())
  {
    throw InsufficientData("build_snapshot_matrix: no solutions");
  }
  Eigen::Index rows = -1;
  for (std::size_t s = 0; s < solutions.size(); s++)
  {
    if (solutions[s].size() < static_cast<std::size_t>(n_e))
    {
      throw InsufficientData("build_snapshot_matrix: sample " + std::to_string(s) + " has " +
                             std::to_string(solutions[s].size()) + " eigenpairs, need " +
                             std::to_string(n_e));
    }
    for (int e = 0; e < n_e; e++)
    {
      const auto len = solutions[s].pairs[static_cast<std::size_t>(e)].vector.size();
      if (rows < 0)
      {
        rows = len;
      }
      else if (len != rows)
      {
        throw InvalidArgument("build_snapshot_matrix: inconsistent eigenvector lengths");
      }
    }
  }
  SnapshotMatrix snap;
  snap.n_e = n_e;
  snap.n_s = static_cast<int>(solutions.size());
  snap.S.resize(rows, static_cast<Eigen::Index>(n_e) * snap.n_s);
  Eigen::Index c = 0;
  for (int s = 0; s < snap.n_s; s++)
  {
    for (int e = 0; e < n_e; e++, c++)
    {
      const Vector &u = solutions[static_cast<std::size_t>(s)].pairs[static_cast<std::size_t>(e)].vector;
      const double nrm = u.norm();
      if (nrm == 0.0)
      {
        throw InvalidArgument("build_snapshot_matrix: zero eigenvector at sample " +
                              std::to_string(s));
      }
      snap.S.col(c) = u / nrm;
      snap.provenance.push_back({s, e});
    }
  }
  return snap;
}

struct PodBasis
{
  Matrix V;                      // N_h x N, orthonormal columns
  Vector singular_values;        // all numerically nonzero sigma_1 >= ... >= sigma_r
  int N = 0;
  int rank = 0;
  double eps_tol = 0.0;
  double retained_energy = 0.0;  // sum_{i<=N} sigma_i^2 / sum_{i<=r} sigma_i^2
  std::string method;

  Vector retained() const { return singular_values.head(N); }
  double discarded_energy() const { return 1.0 - retained_energy; }
};

// Cumulative energy ratio sum_{i<=n} s_i^2 / sum_{i<=r} s_i^2 for n = 0..r.
inline std::vector<double> energy_ratios(const Vector &sigma)
{
  std::vector<double> cum(static_cast<std::size_t>(sigma.size()) + 1, 0.0);
  for (Eigen::Index i = 0; i < sigma.size(); i++)
  {
    cum[static_cast<std::size_t>(i) + 1] = cum[static_cast<std::size_t>(i)] + sigma(i) * sigma(i);
  }
  const double total = cum.back();
  for (double &c : cum)
  {
    c /= total;
  }
  cum.back() = 1.0;
  return cum;
}

// Smallest N with energy ratio >= 1 - eps_tol.
inline int truncation_rank(const Vector &sigma, double eps_tol)
{
  const auto ratio = energy_ratios(sigma);
  for (std::size_t n = 1; n < ratio.size(); n++)
  {
    if (ratio[n] >= 1.0 - eps_tol)
    {
      return static_cast<int>(n);
    }
  }
  return static_cast<int>(sigma.size());
}

namespace detail
{

inline void check_pod_input(const Matrix &S, double eps_tol)
{
  if (S.size() == 0 || S.cwiseAbs().maxCoeff() == 0.0)
  {
    throw InvalidArgument("pod_basis: snapshot matrix is empty or all zero");
  }
  if (!(eps_tol > 0.0 && eps_tol < 1.0))
  {
    throw InvalidArgument("pod_basis: eps_tol must lie in (0, 1)");
  }
}

}  // namespace detail

// POD basis from the thin SVD of S. Singular values count toward the numerical rank while
// sigma_i > max(rows, cols) * eps * sigma_1.
inline PodBasis pod_basis(const Matrix &S, double eps_tol)
{
  detail::check_pod_input(S, eps_tol);
  Eigen::BDCSVD<Matrix> svd(S, Eigen::ComputeThinU);
  const Vector &sv = svd.singularValues();
  const double cutoff = static_cast<double>(std::max(S.rows(), S.cols())) *
                        std::numeric_limits<double>::epsilon() * sv(0);
  int r = 0;
  while (r < sv.size() && sv(r) > cutoff)
  {
    r++;
  }
  PodBasis b;
  b.method = "svd";
  b.eps_tol = eps_tol;
  b.rank = r;
  b.singular_values = sv.head(r);
  b.N = truncation_rank(b.singular_values, eps_tol);
  b.retained_energy = energy_ratios(b.singular_values)[static_cast<std::size_t>(b.N)];
  b.V = svd.matrixU().leftCols(b.N);
  fix_column_signs(b.V);
  return b;
}

inline PodBasis pod_basis(const SnapshotMatrix &snap, double eps_tol)
{
  return pod_basis(snap.S, eps_tol);
}

// Same basis from the eigendecomposition of the Gram matrix S'S (cheap when N_h >> n_k).
// Gram eigenvalues carry absolute error ~eps * sigma_1^2, so the rank cutoff is applied to
// sigma^2 rather than sigma. The left vectors S v / sigma are reorthogonalized.
inline PodBasis pod_basis_via_gram(const Matrix &S, double eps_tol)
{
  detail::check_pod_input(S, eps_tol);
  Matrix G = S.transpose() * S;
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  const Vector lam = es.eigenvalues().reverse();
  const Matrix W = es.eigenvectors().rowwise().reverse();
  const double cutoff = static_cast<double>(std::max(S.rows(), S.cols())) *
                        std::numeric_limits<double>::epsilon() * lam(0);
  int r = 0;
  while (r < lam.size() && lam(r) > cutoff)
  {
    r++;
  }
  PodBasis b;
  b.method = "gram";
  b.eps_tol = eps_tol;
  b.rank = r;
  b.singular_values = lam.head(r).cwiseSqrt();
  b.N = truncation_rank(b.singular_values, eps_tol);
  b.retained_energy = energy_ratios(b.singular_values)[static_cast<std::size_t>(b.N)];
  b.V = S * W.leftCols(b.N);
  for (int j = 0; j < b.N; j++)
  {
    b.V.col(j) /= b.singular_values(j);
  }
  // Two passes of modified Gram-Schmidt.
  for (int pass = 0; pass < 2; pass++)
  {
    for (int j = 0; j < b.N; j++)
    {
      for (int i = 0; i < j; i++)
      {
        b.V.col(j) -= b.V.col(i).dot(b.V.col(j)) * b.V.col(i);
      }
      b.V.col(j).normalize();
    }
  }
  fix_column_signs(b.V);
  return b;
}

inline PodBasis pod_basis_via_gram(const SnapshotMatrix &snap, double eps_tol)
{
  return pod_basis_via_gram(snap.S, eps_tol);
}

}  // namespace prom

#endif  // PROM_POD_HPP
