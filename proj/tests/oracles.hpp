// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Test-only reference computations. Nothing here calls into the library's numerical paths.

#ifndef PROM_TESTS_ORACLES_HPP
#define PROM_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace oracle
{

using DenseRows = std::vector<std::vector<double>>;

// Lower-triangular Cholesky factor, textbook row-by-row algorithm.
inline DenseRows cholesky(const DenseRows &B)
{
  const std::size_t n = B.size();
  DenseRows L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = 0; j <= i; j++)
    {
      double s = B[i][j];
      for (std::size_t k = 0; k < j; k++)
      {
        s -= L[i][k] * L[j][k];
      }
      L[i][j] = (i == j) ? std::sqrt(s) : s / L[j][j];
    }
  }
  return L;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(DenseRows A)
{
  const std::size_t n = A.size();
  for (int sweep = 0; sweep < 100; sweep++)
  {
    double off = 0.0;
    for (std::size_t p = 0; p < n; p++)
    {
      for (std::size_t q = p + 1; q < n; q++)
      {
        off += A[p][q] * A[p][q];
      }
    }
    if (off < 1e-30)
    {
      break;
    }
    for (std::size_t p = 0; p < n; p++)
    {
      for (std::size_t q = p + 1; q < n; q++)
      {
        if (A[p][q] == 0.0)
        {
          continue;
        }
        const double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; k++)
        {
          const double akp = A[k][p], akq = A[k][q];
          A[k][p] = c * akp - s * akq;
          A[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; k++)
        {
          const double apk = A[p][k], aqk = A[q][k];
          A[p][k] = c * apk - s * aqk;
          A[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; i++)
  {
    ev[i] = A[i][i];
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Full spectrum of (A, B): forward/back substitution with a hand-rolled Cholesky, then Jacobi.
inline std::vector<double> generalized_eigenvalues(const DenseRows &A, const DenseRows &B)
{
  const std::size_t n = A.size();
  const DenseRows L = cholesky(B);
  // X = L^-1 A
  DenseRows X(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; c++)
  {
    for (std::size_t i = 0; i < n; i++)
    {
      double s = A[i][c];
      for (std::size_t k = 0; k < i; k++)
      {
        s -= L[i][k] * X[k][c];
      }
      X[i][c] = s / L[i][i];
    }
  }
  // C = X L^-T, i.e. C^T = L^-1 X^T
  DenseRows C(n, std::vector<double>(n));
  for (std::size_t r = 0; r < n; r++)
  {
    for (std::size_t i = 0; i < n; i++)
    {
      double s = X[r][i];
      for (std::size_t k = 0; k < i; k++)
      {
        s -= L[i][k] * C[r][k];
      }
      C[r][i] = s / L[i][i];
    }
  }
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = i + 1; j < n; j++)
    {
      const double m = 0.5 * (C[i][j] + C[j][i]);
      C[i][j] = C[j][i] = m;
    }
  }
  return jacobi_eigenvalues(C);
}

inline double factorial(int n)
{
  double f = 1.0;
  for (int i = 2; i <= n; i++)
  {
    f *= i;
  }
  return f;
}

// Exact integral of (x^2 + y^2) phi_i phi_j over a triangle, expanding x, y in barycentric
// coordinates and integrating monomials with int l1^a l2^b l3^c = 2|T| a! b! c! / (a+b+c+2)!.
inline std::array<std::array<double, 3>, 3>
exact_potential_mass(const std::array<std::array<double, 2>, 3> &p)
{
  const double area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) -
                             (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]));
  auto monomial = [&](std::array<int, 3> e)
  { return 2.0 * area * factorial(e[0]) * factorial(e[1]) * factorial(e[2]) /
           factorial(e[0] + e[1] + e[2] + 2); };
  std::array<std::array<double, 3>, 3> K{};
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      double s = 0.0;
      for (int a = 0; a < 3; a++)
      {
        for (int b = 0; b < 3; b++)
        {
          const double coef = p[a][0] * p[b][0] + p[a][1] * p[b][1];
          std::array<int, 3> e{0, 0, 0};
          e[a]++;
          e[b]++;
          e[i]++;
          e[j]++;
          s += coef * monomial(e);
        }
      }
      K[i][j] = s;
    }
  }
  return K;
}

// Point count of the isotropic Smolyak grid on nested Clenshaw-Curtis nodes from the
// closed-form increments: 1 new node at level 0, 2 at level 1, 2^(l-1) at level l >= 2.
inline long smolyak_count(int dim, int level)
{
  auto increment = [](int l) -> long { return l == 0 ? 1 : (l == 1 ? 2 : (1L << (l - 1))); };
  long total = 0;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  auto rec = [&](auto &&self, int d, int remaining, long prod) -> void
  {
    if (d == dim)
    {
      total += prod;
      return;
    }
    for (int l = 0; l <= remaining; l++)
    {
      self(self, d + 1, remaining - l, prod * increment(l));
    }
  };
  rec(rec, 0, level, 1);
  return total;
}

}  // namespace oracle

#endif  // PROM_TESTS_ORACLES_HPP
