// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <gtest/gtest.h>
#include "oracles.hpp"
#include "prom/eigensolve.hpp"
#include "prom/fem.hpp"
#include "prom/mesh.hpp"

using namespace prom;

namespace
{

constexpr double pi2 = std::numbers::pi * std::numbers::pi;

double lambda1_laplacian(int n)
{
  FemSpace space(build_structured_mesh(n));
  auto op = assemble_problem_two_param(space);
  SparseMatrix L = op.a_components[0] + op.a_components[2];
  return smallest_eigenpairs(L, op.b_components[0], 1).pairs[0].value;
}

}  // namespace

TEST(Mesh, RejectsTooFewSubdivisions)
{
  EXPECT_THROW(build_structured_mesh(1), InvalidArgument);
  EXPECT_THROW(build_structured_mesh(0), InvalidArgument);
}

TEST(Mesh, CountsFollowLatticeFormula)
{
  for (auto [n, nv, nt, nh] : {std::array{2, 9, 8, 1}, std::array{4, 25, 32, 9}})
  {
    auto mesh = std::make_shared<const Mesh>(build_structured_mesh(n));
    EXPECT_EQ(mesh->num_vertices(), static_cast<std::size_t>(nv));
    EXPECT_EQ(mesh->num_triangles(), static_cast<std::size_t>(nt));
    EXPECT_EQ(FemSpace(mesh).size(), nh);
  }
}

TEST(Mesh, TrianglesPositiveAndCoverSquare)
{
  const Mesh mesh = build_structured_mesh(100);
  for (std::size_t t = 0; t < mesh.num_triangles(); t++)
  {
    ASSERT_GT(mesh.signed_area(t), 0.0);
  }
  EXPECT_NEAR(mesh.total_area(), 1.0, 1e-12);
}

TEST(Mesh, BoundaryFlagsMatchCoordinates)
{
  const Mesh mesh = build_structured_mesh(7);
  for (std::size_t v = 0; v < mesh.num_vertices(); v++)
  {
    const auto &p = mesh.vertices[v];
    const bool edge = p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
    EXPECT_EQ(mesh.on_boundary[v], edge) << "vertex " << v;
  }
}

TEST(FemSpace, DofMapIsBijectionOntoInteriorVertices)
{
  FemSpace space(build_structured_mesh(6));
  ASSERT_EQ(space.size(), 25);
  std::vector<int> seen(static_cast<std::size_t>(space.size()), 0);
  for (std::size_t v = 0; v < space.mesh().num_vertices(); v++)
  {
    const int d = space.dof(static_cast<int>(v));
    if (space.mesh().on_boundary[v])
    {
      EXPECT_EQ(d, -1);
    }
    else
    {
      ASSERT_GE(d, 0);
      ASSERT_LT(d, space.size());
      seen[static_cast<std::size_t>(d)]++;
      EXPECT_EQ(space.vertex(d), static_cast<int>(v));
    }
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST(Assembly, ThetaValuesTwoParam)
{
  const auto c = two_param_coefficients();
  const std::vector<double> mu{0.3, 0.4};
  const auto w = c.eval_a(mu);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_NEAR(w[0], 1.0 / 0.09, 1e-12);
  EXPECT_NEAR(w[1], 1.75, 1e-12);
  EXPECT_NEAR(w[2], 6.25, 1e-12);
  EXPECT_EQ(c.eval_b(mu), std::vector<double>{1.0});
}

TEST(Assembly, ThetaValuesThreeParam)
{
  const auto w = three_param_coefficients().eval_a(std::vector<double>{0.4, 0.4, 6.0});
  ASSERT_EQ(w.size(), 4u);
  EXPECT_DOUBLE_EQ(w[3], 18.0);
}

TEST(Assembly, DirichletLaplacianFirstEigenvalue)
{
  EXPECT_NEAR(lambda1_laplacian(64) / (2.0 * pi2), 1.0, 1e-3);
}

TEST(Assembly, FullMassSumsToDomainArea)
{
  const Mesh mesh = build_structured_mesh(13);
  const SparseMatrix M = assemble_all_vertices(mesh, kernels::mass);
  EXPECT_NEAR(M.sum(), 1.0, 1e-12);
}

TEST(Assembly, ComponentsSymmetric)
{
  FemSpace space(build_structured_mesh(9));
  const auto op = assemble_problem_three_param(space);
  for (const auto &A : op.a_components)
  {
    EXPECT_LE(max_asymmetry(A), 1e-12 * A.coeffs().cwiseAbs().maxCoeff());
  }
  EXPECT_LE(max_asymmetry(op.b_components[0]), 1e-12 * op.b_components[0].coeffs().maxCoeff());
  EXPECT_EQ(op.a_components.size(), op.coefficients.theta_a.size());
  EXPECT_EQ(op.b_components.size(), op.coefficients.theta_b.size());
}

TEST(Assembly, GalerkinConsistencyOnRandomVectors)
{
  FemSpace space(build_structured_mesh(12));
  const auto op = assemble_problem_two_param(space);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; trial++)
  {
    Vector v(space.size());
    for (auto &x : v)
    {
      x = nd(rng);
    }
    EXPECT_GE(v.dot(op.a_components[0] * v), 0.0);
    EXPECT_GE(v.dot(op.a_components[2] * v), 0.0);
    EXPECT_GT(v.dot(op.b_components[0] * v), 0.0);
  }
}

TEST(Assembly, RefinementDecreasesFirstEigenvalue)
{
  double prev = lambda1_laplacian(4);
  for (int n : {8, 16, 32})
  {
    const double cur = lambda1_laplacian(n);
    EXPECT_LE(cur, prev + 1e-10) << "n=" << n;
    EXPECT_GE(cur, 2.0 * pi2);
    prev = cur;
  }
}

TEST(Assembly, IndependentOfTriangleOrder)
{
  auto mesh = build_structured_mesh(10);
  FemSpace space(mesh);
  auto shuffled = mesh;
  std::mt19937 rng(3);
  std::shuffle(shuffled.triangles.begin(), shuffled.triangles.end(), rng);
  FemSpace space2(shuffled);
  const auto a = assemble_problem_three_param(space);
  const auto b = assemble_problem_three_param(space2);
  for (std::size_t l = 0; l < a.a_components.size(); l++)
  {
    const SparseMatrix &X = a.a_components[l], &Y = b.a_components[l];
    ASSERT_EQ(X.nonZeros(), Y.nonZeros());
    EXPECT_TRUE(std::equal(X.valuePtr(), X.valuePtr() + X.nonZeros(), Y.valuePtr()));
    EXPECT_TRUE(std::equal(X.innerIndexPtr(), X.innerIndexPtr() + X.nonZeros(), Y.innerIndexPtr()));
  }
  const SparseMatrix &M1 = a.b_components[0], &M2 = b.b_components[0];
  EXPECT_TRUE(std::equal(M1.valuePtr(), M1.valuePtr() + M1.nonZeros(), M2.valuePtr()));
}

TEST(Assembly, EvaluateCombinesComponentsExactly)
{
  FemSpace space(build_structured_mesh(6));
  const auto op = assemble_problem_two_param(space);
  auto [A, B] = evaluate_operator(op, std::vector<double>{1.0, 1.0});
  const SparseMatrix expect = op.a_components[0] + 0.7 * op.a_components[1] + op.a_components[2];
  EXPECT_EQ((A - expect).norm(), 0.0);
  EXPECT_EQ((B - op.b_components[0]).norm(), 0.0);
  EXPECT_EQ(max_asymmetry(A), 0.0);
}

TEST(Assembly, EvaluateRejectsInadmissibleParameters)
{
  FemSpace space(build_structured_mesh(4));
  const auto op = assemble_problem_two_param(space);
  try
  {
    evaluate_operator(op, std::vector<double>{1.5, 1.0});
    FAIL() << "expected DomainError";
  }
  catch (const DomainError &e)
  {
    EXPECT_NE(std::string(e.what()).find("mu_1"), std::string::npos);
  }
  EXPECT_THROW(evaluate_operator(op, std::vector<double>{0.0, 1.0}), DomainError);
  EXPECT_THROW(evaluate_operator(op, std::vector<double>{0.5, 0.0}), DomainError);
  EXPECT_THROW(evaluate_operator(op, std::vector<double>{0.5}), DomainError);
  EXPECT_NO_THROW(evaluate_operator(op, std::vector<double>{-1.41, -0.2}));
}

TEST(Assembly, PotentialBoundedByTwiceMass)
{
  FemSpace space(build_structured_mesh(8));
  const auto op = assemble_problem_three_param(space);
  const Matrix C(op.a_components[3]), M(op.b_components[0]);
  EXPECT_TRUE(((2.0 * M - C).array() >= -1e-15).all());
  EXPECT_TRUE((C.array() >= 0.0).all());
}

TEST(Assembly, MidpointRuleExactForConstantWeight)
{
  const Element e({Point2{0.2, 0.1}, Point2{0.7, 0.3}, Point2{0.4, 0.9}});
  const auto K = kernels::weighted_mass([](double, double) { return 1.0; })(e);
  const auto M = kernels::mass(e);
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      EXPECT_NEAR(K[i][j], M[i][j], 1e-16);
    }
  }
}

// The edge-midpoint rule is exact to degree 2. The weight's linear part times phi_i phi_j is
// already cubic, so the element error relative to the element value scales like h.
TEST(Assembly, PotentialQuadratureAgainstSymbolicIntegral)
{
  auto kernel = kernels::weighted_mass([](double x, double y) { return x * x + y * y; });
  double prev_err = 0.0;
  for (double h : {0.2, 0.1, 0.05, 0.025})
  {
    const std::array<std::array<double, 2>, 3> p{{{0.3, 0.6}, {0.3 + h, 0.6}, {0.3, 0.6 + h}}};
    const auto exact = oracle::exact_potential_mass(p);
    const auto K = kernel(Element({Point2{p[0][0], p[0][1]}, Point2{p[1][0], p[1][1]},
                                   Point2{p[2][0], p[2][1]}}));
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        err = std::max(err, std::abs(K[i][j] - exact[i][j]));
        scale = std::max(scale, std::abs(exact[i][j]));
      }
    }
    const double rel = err / scale;
    EXPECT_LT(rel, 0.5 * h) << "h=" << h;
    if (prev_err > 0.0)
    {
      EXPECT_NEAR(prev_err / rel, 2.0, 0.25) << "h=" << h;
    }
    prev_err = rel;
  }
}

TEST(MatrixMarket, ExportsSymmetricCoordinateFormat)
{
  FemSpace space(build_structured_mesh(5));
  const auto op = assemble_problem_two_param(space);
  const auto path = std::filesystem::temp_directory_path() / "prom_test_mass.mtx";
  write_matrix_market(op.b_components[0], path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "%%MatrixMarket matrix coordinate real symmetric");
  const SparseMatrix back = read_matrix_market(path.string());
  EXPECT_EQ((back - op.b_components[0]).norm(), 0.0);
  std::filesystem::remove(path);
}
