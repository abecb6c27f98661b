// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_ROM_HPP
#define PROM_ROM_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>
#include "prom/eigensolve.hpp"
#include "prom/error.hpp"
#include "prom/fem.hpp"
#include "prom/linalg.hpp"
#include "prom/pod.hpp"

namespace prom
{

// Galerkin projection of an affine operator onto span(V):
// A_l^N = V' A_l V, B_m^N = V' B_m V, sharing the full operator's coefficient functions.
struct ReducedModel
{
  std::vector<Matrix> a_reduced;
  std::vector<Matrix> b_reduced;
  AffineCoefficients coefficients;
  std::shared_ptr<const Matrix> basis;  // N_h x N, used to lift reduced eigenvectors

  int N() const { return a_reduced.empty() ? 0 : static_cast<int>(a_reduced[0].rows()); }

  std::pair<Matrix, Matrix> evaluate(ParameterView mu) const
  {
    coefficients.check(mu);
    const auto wa = coefficients.eval_a(mu);
    const auto wb = coefficients.eval_b(mu);
    Matrix A = Matrix::Zero(N(), N()), B = Matrix::Zero(N(), N());
    for (std::size_t l = 0; l < wa.size(); l++)
    {
      A += wa[l] * a_reduced[l];
    }
    for (std::size_t m = 0; m < wb.size(); m++)
    {
      B += wb[m] * b_reduced[m];
    }
    return {std::move(A), std::move(B)};
  }
};

inline Matrix project_symmetric(const SparseMatrix &A, const Matrix &V)
{
  Matrix AV = A * V;
  Matrix R = V.transpose() * AV;
  return 0.5 * (R + R.transpose());
}

inline ReducedModel project_operators(const AffineOperator &op, const Matrix &V)
{
  if (V.rows() != op.size())
  {
    throw InvalidArgument("project_operators: basis has " + std::to_string(V.rows()) +
                          " rows, operator dimension is " + std::to_string(op.size()));
  }
  ReducedModel model;
  for (const auto &A : op.a_components)
  {
    model.a_reduced.push_back(project_symmetric(A, V));
  }
  for (const auto &B : op.b_components)
  {
    model.b_reduced.push_back(project_symmetric(B, V));
  }
  model.coefficients = op.coefficients;
  model.basis = std::make_shared<const Matrix>(V);
  return model;
}

inline ReducedModel project_operators(const AffineOperator &op, const PodBasis &basis)
{
  return project_operators(op, basis.V);
}

struct RomResult
{
  std::vector<double> parameter;
  Vector lambda_rom;
  Matrix lifted;  // V u_N, one column per eigenvalue
  std::optional<Vector> lambda_fem;
  std::optional<Matrix> fem_vectors;
  Vector rel_error;  // |lambda_fem - lambda_rom| / lambda_fem, empty without reference
};

inline Vector relative_errors(const Vector &fem, const Vector &rom)
{
  return ((fem - rom).cwiseAbs().array() / fem.cwiseAbs().array()).matrix();
}

// Solve the reduced problem at mu and lift the eigenvectors. The reduced mass matrix gets a
// diagonal shift of 1e-14 * trace / N if its Cholesky factorization fails.
inline RomResult online_solve(const ReducedModel &model, ParameterView mu, int k)
{
  if (k < 0)
  {
    throw InvalidArgument("online_solve: negative eigencount");
  }
  if (k > model.N())
  {
    throw InvalidArgument("online_solve: reduced space too small for requested eigencount (k=" +
                          std::to_string(k) + ", N=" + std::to_string(model.N()) + ")");
  }
  RomResult res;
  res.parameter.assign(mu.begin(), mu.end());
  auto [A, B] = model.evaluate(mu);
  if (k == 0)
  {
    res.lambda_rom.resize(0);
    return res;
  }
  EigenSolution sol;
  try
  {
    sol = dense_generalized_eig(A, B);
  }
  catch (const DefinitenessError &)
  {
    const double reg = 1.0e-14 * B.trace() / model.N();
    warn("reduced mass matrix not positive definite at " + detail::fmt_param(mu) +
         "; adding diagonal regularization " + std::to_string(reg));
    B.diagonal().array() += reg;
    sol = dense_generalized_eig(A, B);
  }
  res.lambda_rom = sol.values().head(k);
  Matrix U = sol.vectors().leftCols(k);
  if (model.basis)
  {
    res.lifted = (*model.basis) * U;
    fix_column_signs(res.lifted);
  }
  return res;
}

inline void attach_reference(RomResult &res, const EigenSolution &fem)
{
  const auto k = res.lambda_rom.size();
  if (static_cast<Eigen::Index>(fem.size()) < k)
  {
    throw InsufficientData("attach_reference: FEM solution has fewer eigenpairs than requested");
  }
  res.lambda_fem = fem.values().head(k);
  res.fem_vectors = fem.vectors().leftCols(k);
  res.rel_error = relative_errors(*res.lambda_fem, res.lambda_rom);
}

// ||u_h - s V u_N||_B with the sign s chosen to minimize it.
inline double lifted_vector_error(const SparseMatrix &B, const Vector &u_fem, const Vector &u_lift)
{
  const Vector d1 = u_fem - u_lift, d2 = u_fem + u_lift;
  return std::sqrt(std::max(0.0, std::min(d1.dot(B * d1), d2.dot(B * d2))));
}

using FemReference = std::function<EigenSolution(ParameterView, int)>;

inline FemReference make_fem_reference(const AffineOperator &op, EigenSolverOptions opts = {})
{
  return [&op, opts](ParameterView mu, int k)
  {
    auto [A, B] = evaluate_operator(op, mu);
    EigenSolution s = smallest_eigenpairs(A, B, k, opts);
    s.parameter.assign(mu.begin(), mu.end());
    return s;
  };
}

namespace detail
{

template <typename Fn>
auto annotate(const std::string &where, Fn &&fn) -> decltype(fn())
{
  try
  {
    return fn();
  }
  catch (const DomainError &e)
  {
    throw DomainError(where + ": " + e.what());
  }
  catch (const DefinitenessError &e)
  {
    throw DefinitenessError(where + ": " + e.what());
  }
  catch (const SolverFailure &e)
  {
    throw SolverFailure(where + ": " + e.what(), e.iterations(), e.worst_residual());
  }
  catch (const InsufficientData &e)
  {
    throw InsufficientData(where + ": " + e.what());
  }
  catch (const InvalidArgument &e)
  {
    throw InvalidArgument(where + ": " + e.what());
  }
}

}  // namespace detail

// FEM and ROM solves with relative errors at each test point, in input order. A null
// reference skips the FEM solves.
inline std::vector<RomResult> evaluate_test_suite(const ReducedModel &model,
                                                  const FemReference &reference,
                                                  const std::vector<std::vector<double>> &points,
                                                  int k)
{
  std::vector<RomResult> out;
  out.reserve(points.size());
  for (const auto &mu : points)
  {
    out.push_back(detail::annotate("test point " + detail::fmt_param(mu),
                                   [&]
                                   {
                                     RomResult r = online_solve(model, mu, k);
                                     if (reference && k > 0)
                                     {
                                       attach_reference(r, reference(mu, k));
                                     }
                                     return r;
                                   }));
  }
  return out;
}

}  // namespace prom

#endif  // PROM_ROM_HPP
