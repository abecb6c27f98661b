// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_MESH_HPP
#define PROM_MESH_HPP

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>
#include "prom/error.hpp"

namespace prom
{

struct Point2
{
  double x = 0.0;
  double y = 0.0;
};

// Triangulation of the unit square. Triangles are counterclockwise vertex triples.
struct Mesh
{
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> on_boundary;
  int subdivisions = 0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  double signed_area(std::size_t t) const
  {
    const auto &[a, b, c] = triangles[t];
    const Point2 &p = vertices[a], &q = vertices[b], &r = vertices[c];
    return 0.5 * ((q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y));
  }

  double total_area() const
  {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles.size(); t++)
    {
      s += signed_area(t);
    }
    return s;
  }
};

// Uniform (n+1)x(n+1) lattice; every cell is split along its lower-left to upper-right
// diagonal. Doubling n gives a nested refinement.
inline Mesh build_structured_mesh(int n)
{
  if (n < 2)
  {
    throw InvalidArgument("build_structured_mesh: need n >= 2, got " + std::to_string(n));
  }
  Mesh mesh;
  mesh.subdivisions = n;
  const int side = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(side) * side);
  mesh.on_boundary.reserve(static_cast<std::size_t>(side) * side);
  for (int j = 0; j <= n; j++)
  {
    for (int i = 0; i <= n; i++)
    {
      // i/n rather than i*h so that the last lattice line is exactly 1.
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      mesh.on_boundary.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; j++)
  {
    for (int i = 0; i < n; i++)
    {
      const int v00 = j * side + i, v10 = v00 + 1, v01 = v00 + side, v11 = v01 + 1;
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

// Interior-vertex numbering of a mesh: the unknowns of the homogeneous Dirichlet problem.
class FemSpace
{
public:
  explicit FemSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh))
  {
    if (!mesh_)
    {
      throw InvalidArgument("FemSpace: null mesh");
    }
    dof_of_vertex_.assign(mesh_->num_vertices(), -1);
    for (std::size_t v = 0; v < mesh_->num_vertices(); v++)
    {
      if (!mesh_->on_boundary[v])
      {
        dof_of_vertex_[v] = static_cast<int>(vertex_of_dof_.size());
        vertex_of_dof_.push_back(static_cast<int>(v));
      }
    }
  }

  explicit FemSpace(Mesh mesh) : FemSpace(std::make_shared<const Mesh>(std::move(mesh))) {}

  const Mesh &mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }

  // Number of unknowns N_h.
  int size() const { return static_cast<int>(vertex_of_dof_.size()); }

  // -1 for boundary vertices.
  int dof(int vertex) const { return dof_of_vertex_[static_cast<std::size_t>(vertex)]; }
  int vertex(int dof) const { return vertex_of_dof_[static_cast<std::size_t>(dof)]; }

private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<int> dof_of_vertex_;
  std::vector<int> vertex_of_dof_;
};

}  // namespace prom

#endif  // PROM_MESH_HPP
