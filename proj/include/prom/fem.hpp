// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_FEM_HPP
#define PROM_FEM_HPP

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>
#include "prom/error.hpp"
#include "prom/linalg.hpp"
#include "prom/mesh.hpp"

namespace prom
{

using ParameterView = std::span<const double>;
using ThetaFunction = std::function<double(ParameterView)>;

// Scalar side of an affine decomposition: the coefficient functions and the set of
// parameters for which the resulting operator pair is symmetric definite.
struct AffineCoefficients
{
  int parameter_dim = 0;
  std::vector<ThetaFunction> theta_a;
  std::vector<ThetaFunction> theta_b;
  // Returns a description of the violated constraint, or nothing if mu is admissible.
  std::function<std::optional<std::string>(ParameterView)> violation;

  void check(ParameterView mu) const
  {
    if (static_cast<int>(mu.size()) != parameter_dim)
    {
      throw DomainError("parameter has " + std::to_string(mu.size()) +
                        " components, operator expects " + std::to_string(parameter_dim));
    }
    if (violation)
    {
      if (auto why = violation(mu))
      {
        throw DomainError("inadmissible parameter: " + *why);
      }
    }
  }

  std::vector<double> eval_a(ParameterView mu) const
  {
    std::vector<double> w;
    w.reserve(theta_a.size());
    for (const auto &f : theta_a)
    {
      w.push_back(f(mu));
    }
    return w;
  }

  std::vector<double> eval_b(ParameterView mu) const
  {
    std::vector<double> w;
    w.reserve(theta_b.size());
    for (const auto &f : theta_b)
    {
      w.push_back(f(mu));
    }
    return w;
  }
};

// Parameter-independent sparse matrices paired with their coefficient functions:
// A(mu) = sum_l theta_a[l](mu) A_l,  B(mu) = sum_m theta_b[m](mu) B_m.
struct AffineOperator
{
  std::vector<SparseMatrix> a_components;
  std::vector<SparseMatrix> b_components;
  AffineCoefficients coefficients;

  int size() const { return a_components.empty() ? 0 : static_cast<int>(a_components[0].rows()); }
  int parameter_dim() const { return coefficients.parameter_dim; }
};

namespace detail
{

inline std::string fmt_param(ParameterView mu)
{
  std::string s = "(";
  for (std::size_t i = 0; i < mu.size(); i++)
  {
    s += (i ? "," : "") + std::to_string(mu[i]);
  }
  return s + ")";
}

}  // namespace detail

inline std::pair<SparseMatrix, SparseMatrix> evaluate_operator(const AffineOperator &op,
                                                               ParameterView mu)
{
  op.coefficients.check(mu);
  const auto wa = op.coefficients.eval_a(mu);
  const auto wb = op.coefficients.eval_b(mu);
  SparseMatrix A = wa[0] * op.a_components[0];
  for (std::size_t l = 1; l < wa.size(); l++)
  {
    A += wa[l] * op.a_components[l];
  }
  SparseMatrix B = wb[0] * op.b_components[0];
  for (std::size_t m = 1; m < wb.size(); m++)
  {
    B += wb[m] * op.b_components[m];
  }
  return {std::move(A), std::move(B)};
}

// Local P1 element data.
struct Element
{
  std::array<Point2, 3> p;
  double area = 0.0;
  // Constant gradients of the barycentric coordinates.
  std::array<std::array<double, 2>, 3> grad{};

  explicit Element(const std::array<Point2, 3> &pts) : p(pts)
  {
    area = 0.5 * ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
    for (int i = 0; i < 3; i++)
    {
      const Point2 &a = p[(i + 1) % 3], &b = p[(i + 2) % 3];
      grad[i] = {(a.y - b.y) / (2.0 * area), (b.x - a.x) / (2.0 * area)};
    }
  }
};

using LocalMatrix = std::array<std::array<double, 3>, 3>;
using LocalKernel = std::function<LocalMatrix(const Element &)>;

namespace kernels
{

// Local matrix of int d_a(phi_j) d_b(phi_i). With symmetrize, the pair (a,b)+(b,a) is
// returned instead, which is symmetric.
inline LocalKernel derivative_pair(int a, int b, bool symmetrize = false)
{
  return [=](const Element &e)
  {
    LocalMatrix K{};
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        double v = e.grad[j][a] * e.grad[i][b];
        if (symmetrize)
        {
          v += e.grad[j][b] * e.grad[i][a];
        }
        K[i][j] = e.area * v;
      }
    }
    return K;
  };
}

inline LocalMatrix mass(const Element &e)
{
  LocalMatrix K{};
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      K[i][j] = e.area / 12.0 * (i == j ? 2.0 : 1.0);
    }
  }
  return K;
}

// Weighted mass int w phi_j phi_i by the edge-midpoint rule (exact for quadratics).
inline LocalKernel weighted_mass(std::function<double(double, double)> w)
{
  return [w = std::move(w)](const Element &e)
  {
    LocalMatrix K{};
    for (int q = 0; q < 3; q++)
    {
      // Midpoint of edge (q, q+1): phi_q = phi_{q+1} = 1/2, third basis function vanishes.
      const int r = (q + 1) % 3;
      const double wq = w(0.5 * (e.p[q].x + e.p[r].x), 0.5 * (e.p[q].y + e.p[r].y));
      const double c = e.area / 3.0 * wq * 0.25;
      K[q][q] += c;
      K[r][r] += c;
      K[q][r] += c;
      K[r][q] += c;
    }
    return K;
  };
}

}  // namespace kernels

// Assemble a kernel over the mesh. index_of maps a vertex to a row/column, or -1 to drop it.
inline SparseMatrix assemble(const Mesh &mesh, const LocalKernel &kernel, int size,
                             const std::function<int(int)> &index_of)
{
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_triangles());
  for (const auto &tri : mesh.triangles)
  {
    const Element e({mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]});
    const LocalMatrix K = kernel(e);
    for (int i = 0; i < 3; i++)
    {
      const int gi = index_of(tri[i]);
      if (gi < 0)
      {
        continue;
      }
      for (int j = 0; j < 3; j++)
      {
        const int gj = index_of(tri[j]);
        if (gj >= 0)
        {
          t.emplace_back(gi, gj, K[i][j]);
        }
      }
    }
  }
  return canonical_from_triplets(size, size, std::move(t));
}

// Interior-dof system (Dirichlet elimination).
inline SparseMatrix assemble(const FemSpace &space, const LocalKernel &kernel)
{
  return assemble(space.mesh(), kernel, space.size(), [&](int v) { return space.dof(v); });
}

// All vertices, boundary included.
inline SparseMatrix assemble_all_vertices(const Mesh &mesh, const LocalKernel &kernel)
{
  return assemble(mesh, kernel, static_cast<int>(mesh.num_vertices()), [](int v) { return v; });
}

inline AffineCoefficients two_param_coefficients()
{
  AffineCoefficients c;
  c.parameter_dim = 2;
  c.theta_a = {[](ParameterView mu) { return 1.0 / (mu[0] * mu[0]); },
               [](ParameterView mu) { return 0.7 / mu[1]; },
               [](ParameterView mu) { return 1.0 / (mu[1] * mu[1]); }};
  c.theta_b = {[](ParameterView) { return 1.0; }};
  c.violation = [](ParameterView mu) -> std::optional<std::string>
  {
    if (!(std::abs(mu[0]) < 1.42) || mu[0] == 0.0)
    {
      return "mu_1 = " + std::to_string(mu[0]) +
             " outside (-1.42, 1.42)\\{0}; diffusion matrix not positive definite";
    }
    if (mu[1] == 0.0)
    {
      return std::string("mu_2 must be nonzero");
    }
    return std::nullopt;
  };
  return c;
}

inline AffineCoefficients three_param_coefficients()
{
  AffineCoefficients c = two_param_coefficients();
  c.parameter_dim = 3;
  c.theta_a.push_back([](ParameterView mu) { return 0.5 * mu[2] * mu[2]; });
  return c;
}

// -div(A(mu) grad u) = lambda u on the unit square with
// A(mu) = [[1/mu1^2, 0.7/mu2], [0.7/mu2, 1/mu2^2]].
// Components: [A_xx, A_xy + A_yx, A_yy], mass matrix on the right.
inline AffineOperator assemble_problem_two_param(const FemSpace &space)
{
  AffineOperator op;
  op.a_components = {assemble(space, kernels::derivative_pair(0, 0)),
                     assemble(space, kernels::derivative_pair(0, 1, true)),
                     assemble(space, kernels::derivative_pair(1, 1))};
  op.b_components = {assemble(space, kernels::mass)};
  op.coefficients = two_param_coefficients();
  return op;
}

// Adds the confining potential (mu3^2 / 2)(x^2 + y^2) to the two-parameter problem.
inline AffineOperator assemble_problem_three_param(const FemSpace &space)
{
  AffineOperator op = assemble_problem_two_param(space);
  op.a_components.push_back(
    assemble(space, kernels::weighted_mass([](double x, double y) { return x * x + y * y; })));
  op.coefficients = three_param_coefficients();
  return op;
}

}  // namespace prom

#endif  // PROM_FEM_HPP
