// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_LINALG_HPP
#define PROM_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>
#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Sparse>
#include "prom/error.hpp"

namespace prom
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

// Flip v so that its entry of largest magnitude is positive. Ties go to the lowest index.
inline void fix_sign(Eigen::Ref<Vector> v)
{
  if (v.size() == 0)
  {
    return;
  }
  // Entries tied in magnitude (symmetric eigenfunctions) resolve to the lowest index.
  const double vmax = v.cwiseAbs().maxCoeff();
  Eigen::Index imax = 0;
  while (std::abs(v(imax)) < (1.0 - 1e-6) * vmax)
  {
    imax++;
  }
  if (v(imax) < 0.0)
  {
    v = -v;
  }
}

inline void fix_column_signs(Matrix &X)
{
  for (Eigen::Index j = 0; j < X.cols(); j++)
  {
    fix_sign(X.col(j));
  }
}

// Build a compressed matrix from triplets with a summation order that depends only on the
// triplet multiset, not on its enumeration order.
inline SparseMatrix canonical_from_triplets(Eigen::Index rows, Eigen::Index cols,
                                            std::vector<Triplet> triplets)
{
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet &a, const Triplet &b)
            {
              return std::make_tuple(a.col(), a.row(), a.value()) <
                     std::make_tuple(b.col(), b.row(), b.value());
            });
  SparseMatrix A(rows, cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

// Largest |A(i,j) - A(j,i)| over stored entries.
inline double max_asymmetry(const SparseMatrix &A)
{
  SparseMatrix D = SparseMatrix(A.transpose()) - A;
  double m = 0.0;
  for (int k = 0; k < D.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(D, k); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

// Principal angles (radians, ascending) between the column spaces of X and Y. Both inputs
// are orthonormalized internally.
inline Vector principal_angles(const Matrix &X, const Matrix &Y)
{
  Eigen::HouseholderQR<Matrix> qx(X), qy(Y);
  Matrix Qx = qx.householderQ() * Matrix::Identity(X.rows(), X.cols());
  Matrix Qy = qy.householderQ() * Matrix::Identity(Y.rows(), Y.cols());
  // Cosines from Qx'Qy (descending), sines from the part of Qy outside span(Qx) (ascending).
  // Pairing them through atan2 keeps small angles accurate.
  Vector c = Eigen::JacobiSVD<Matrix>(Qx.transpose() * Qy).singularValues();
  Matrix R = Qy - Qx * (Qx.transpose() * Qy);
  Vector s = Eigen::JacobiSVD<Matrix>(R).singularValues();
  std::sort(s.data(), s.data() + s.size());
  const Eigen::Index m = std::min(c.size(), s.size());
  Vector angles(m);
  for (Eigen::Index i = 0; i < m; i++)
  {
    angles(i) = std::atan2(s(i), c(i));
  }
  return angles;
}

inline double max_principal_angle(const Matrix &X, const Matrix &Y)
{
  Vector a = principal_angles(X, Y);
  return a.size() ? a.maxCoeff() : 0.0;
}

// Matrix Market coordinate export of a symmetric matrix (lower triangle, 1-based).
inline void write_matrix_market(const SparseMatrix &A, const std::string &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw IoError("cannot open " + path + " for writing");
  }
  std::vector<std::tuple<int, int, double>> entries;
  for (int k = 0; k < A.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
    {
      if (it.row() >= it.col())
      {
        entries.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                             it.value());
      }
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << A.rows() << ' ' << A.cols() << ' ' << entries.size() << '\n';
  out << std::setprecision(17);
  for (const auto &[i, j, v] : entries)
  {
    out << i + 1 << ' ' << j + 1 << ' ' << v << '\n';
  }
  if (!out)
  {
    throw IoError("write failed: " + path);
  }
}

inline SparseMatrix read_matrix_market(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError("cannot open " + path);
  }
  std::string line;
  std::getline(in, line);
  const bool symmetric = line.find("symmetric") != std::string::npos;
  if (line.rfind("%%MatrixMarket matrix coordinate real", 0) != 0)
  {
    throw IoError("unsupported Matrix Market header in " + path);
  }
  while (std::getline(in, line) && !line.empty() && line[0] == '%')
  {
  }
  std::istringstream hdr(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(hdr >> rows >> cols >> nnz))
  {
    throw IoError("bad size line in " + path);
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (long e = 0; e < nnz; e++)
  {
    long i, j;
    double v;
    if (!(in >> i >> j >> v))
    {
      throw IoError("truncated entry list in " + path);
    }
    t.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j)
    {
      t.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
    }
  }
  SparseMatrix A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace prom

#endif  // PROM_LINALG_HPP
