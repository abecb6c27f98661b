// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_SAMPLING_HPP
#define PROM_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>
#include "prom/error.hpp"

namespace prom
{

using Point = std::vector<double>;

// Closed box prod_d [lo_d, hi_d].
struct ParameterBox
{
  std::vector<double> lo;
  std::vector<double> hi;

  ParameterBox() = default;
  ParameterBox(std::vector<double> lo_, std::vector<double> hi_)
    : lo(std::move(lo_)), hi(std::move(hi_))
  {
    if (lo.size() != hi.size() || lo.empty())
    {
      throw InvalidArgument("ParameterBox: bounds must be nonempty and of equal length");
    }
    for (std::size_t d = 0; d < lo.size(); d++)
    {
      if (!(lo[d] < hi[d]))
      {
        throw InvalidArgument("ParameterBox: need lo < hi in dimension " + std::to_string(d));
      }
    }
  }

  std::size_t dim() const { return lo.size(); }

  bool contains(const Point &p) const
  {
    if (p.size() != dim())
    {
      return false;
    }
    for (std::size_t d = 0; d < dim(); d++)
    {
      if (p[d] < lo[d] || p[d] > hi[d])
      {
        return false;
      }
    }
    return true;
  }

  // Affine map of t in [0,1] onto [lo_d, hi_d]; t = 1 lands exactly on hi_d.
  double from_unit(std::size_t d, double t) const
  {
    if (t >= 1.0)
    {
      return hi[d];
    }
    return std::clamp(lo[d] + t * (hi[d] - lo[d]), lo[d], hi[d]);
  }
};

enum class SamplingScheme
{
  random,
  lhs,
  uniform,
  smolyak
};

inline std::string to_string(SamplingScheme s)
{
  switch (s)
  {
    case SamplingScheme::random:
      return "random";
    case SamplingScheme::lhs:
      return "lhs";
    case SamplingScheme::uniform:
      return "uniform";
    case SamplingScheme::smolyak:
      return "smolyak";
  }
  return "unknown";
}

inline SamplingScheme parse_scheme(const std::string &s)
{
  if (s == "random")
  {
    return SamplingScheme::random;
  }
  if (s == "lhs")
  {
    return SamplingScheme::lhs;
  }
  if (s == "uniform")
  {
    return SamplingScheme::uniform;
  }
  if (s == "smolyak")
  {
    return SamplingScheme::smolyak;
  }
  throw InvalidArgument("unknown sampling scheme '" + s + "'");
}

struct SampleSet
{
  std::vector<Point> points;
  SamplingScheme scheme = SamplingScheme::random;
  std::uint64_t seed = 0;
  std::vector<int> counts;  // uniform: points per dimension
  int level = -1;           // smolyak
  bool cell_centers = false;  // uniform: tensor grid augmented with cell centers

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
};

// Random numbers are drawn from std::mt19937_64, whose output sequence is fixed by the C++
// standard. Doubles use the top 53 bits, u = (x >> 11) * 2^-53 in [0, 1). The standard
// distributions are avoided because their algorithms are implementation-defined.
class PortableRng
{
public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Integer in [0, n) by floor(n u).
  std::size_t index(std::size_t n)
  {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

private:
  std::mt19937_64 engine_;
};

inline SampleSet random_sample(const ParameterBox &box, int n, std::uint64_t seed)
{
  if (n < 1)
  {
    throw InvalidArgument("random_sample: need n >= 1");
  }
  PortableRng rng(seed);
  SampleSet s;
  s.scheme = SamplingScheme::random;
  s.seed = seed;
  s.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; i++)
  {
    Point p(box.dim());
    for (std::size_t d = 0; d < box.dim(); d++)
    {
      p[d] = box.from_unit(d, rng.uniform());
    }
    s.points.push_back(std::move(p));
  }
  return s;
}

// One point per equal-width stratum in every dimension. Dimension by dimension, the strata
// are permuted (Fisher-Yates) and each point is placed uniformly inside its stratum.
inline SampleSet lhs_sample(const ParameterBox &box, int n, std::uint64_t seed)
{
  if (n < 1)
  {
    throw InvalidArgument("lhs_sample: need n >= 1");
  }
  PortableRng rng(seed);
  SampleSet s;
  s.scheme = SamplingScheme::lhs;
  s.seed = seed;
  s.points.assign(static_cast<std::size_t>(n), Point(box.dim()));
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t d = 0; d < box.dim(); d++)
  {
    std::vector<std::size_t> perm(un);
    for (std::size_t i = 0; i < un; i++)
    {
      perm[i] = i;
    }
    for (std::size_t i = un - 1; i > 0; i--)
    {
      std::swap(perm[i], perm[rng.index(i + 1)]);
    }
    for (std::size_t i = 0; i < un; i++)
    {
      const double t = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
      s.points[i][d] = box.from_unit(d, t);
    }
  }
  return s;
}

namespace detail
{

inline std::vector<double> equispaced(const ParameterBox &box, std::size_t d, int count)
{
  std::vector<double> x(static_cast<std::size_t>(count));
  for (int i = 0; i < count; i++)
  {
    x[static_cast<std::size_t>(i)] = box.from_unit(d, static_cast<double>(i) / (count - 1));
  }
  return x;
}

inline void tensor_product(const std::vector<std::vector<double>> &factors, std::set<Point> &out)
{
  Point p(factors.size());
  std::vector<std::size_t> idx(factors.size(), 0);
  while (true)
  {
    for (std::size_t d = 0; d < factors.size(); d++)
    {
      p[d] = factors[d][idx[d]];
    }
    out.insert(p);
    std::size_t d = factors.size();
    while (d > 0)
    {
      d--;
      if (++idx[d] < factors[d].size())
      {
        break;
      }
      idx[d] = 0;
      if (d == 0)
      {
        return;
      }
    }
    if (factors.empty())
    {
      return;
    }
  }
}

}  // namespace detail

// Cartesian product of equispaced 1D grids (endpoints included), lexicographic order.
inline SampleSet uniform_tensor_sample(const ParameterBox &box, const std::vector<int> &counts)
{
  if (counts.size() != box.dim())
  {
    throw InvalidArgument("uniform_tensor_sample: one count per dimension required");
  }
  std::vector<std::vector<double>> factors;
  for (std::size_t d = 0; d < counts.size(); d++)
  {
    if (counts[d] < 2)
    {
      throw InvalidArgument("uniform_tensor_sample: count < 2 in dimension " + std::to_string(d));
    }
    factors.push_back(detail::equispaced(box, d, counts[d]));
  }
  std::set<Point> pts;
  detail::tensor_product(factors, pts);
  SampleSet s;
  s.scheme = SamplingScheme::uniform;
  s.counts = counts;
  s.points.assign(pts.begin(), pts.end());
  return s;
}

// Tensor grid plus the center of every grid cell: counts (3,3) gives 9 + 4 = 13 points.
inline SampleSet uniform_tensor_centered_sample(const ParameterBox &box,
                                                const std::vector<int> &counts)
{
  SampleSet s = uniform_tensor_sample(box, counts);
  std::vector<std::vector<double>> centers;
  for (std::size_t d = 0; d < counts.size(); d++)
  {
    std::vector<double> c;
    for (int i = 0; i + 1 < counts[d]; i++)
    {
      c.push_back(box.from_unit(d, (i + 0.5) / (counts[d] - 1)));
    }
    centers.push_back(std::move(c));
  }
  std::set<Point> pts(s.points.begin(), s.points.end());
  detail::tensor_product(centers, pts);
  s.points.assign(pts.begin(), pts.end());
  s.cell_centers = true;
  return s;
}

// Nested Clenshaw-Curtis nodes on [-1,1]: level 0 is {0}; level l >= 1 has 2^l + 1 nodes
// cos(pi j / 2^l). Each +/- pair is symmetrized so reflected nodes are exact negatives.
inline std::vector<double> clenshaw_curtis_nodes(int level)
{
  if (level < 0)
  {
    throw InvalidArgument("clenshaw_curtis_nodes: negative level");
  }
  if (level == 0)
  {
    return {0.0};
  }
  const int m = 1 << level;
  std::vector<double> x(static_cast<std::size_t>(m + 1));
  for (int j = 0; j <= m; j++)
  {
    const double a = std::cos(std::numbers::pi * j / m);
    const double b = std::cos(std::numbers::pi * (m - j) / m);
    x[static_cast<std::size_t>(j)] = 0.5 * (a - b);
  }
  x[static_cast<std::size_t>(m / 2)] = 0.0;
  return x;
}

// Isotropic Smolyak sparse grid: union over multi-indices |l|_1 <= level of the tensor
// grids of nested Clenshaw-Curtis families, mapped to the box. Lexicographic order.
inline SampleSet smolyak_cc_sample(const ParameterBox &box, int level)
{
  if (level < 0)
  {
    throw InvalidArgument("smolyak_cc_sample: need level >= 0");
  }
  const std::size_t p = box.dim();
  std::vector<std::vector<double>> nodes;
  for (int l = 0; l <= level; l++)
  {
    nodes.push_back(clenshaw_curtis_nodes(l));
  }
  std::set<Point> pts;
  std::vector<int> multi(p, 0);
  auto visit = [&](auto &&self, std::size_t d, int remaining) -> void
  {
    if (d == p)
    {
      std::vector<std::vector<double>> factors(p);
      for (std::size_t k = 0; k < p; k++)
      {
        for (double x : nodes[static_cast<std::size_t>(multi[k])])
        {
          factors[k].push_back(box.from_unit(k, 0.5 * (x + 1.0)));
        }
      }
      detail::tensor_product(factors, pts);
      return;
    }
    for (int l = 0; l <= remaining; l++)
    {
      multi[d] = l;
      self(self, d + 1, remaining - l);
    }
  };
  visit(visit, 0, level);
  SampleSet s;
  s.scheme = SamplingScheme::smolyak;
  s.level = level;
  s.points.assign(pts.begin(), pts.end());
  return s;
}

}  // namespace prom

#endif  // PROM_SAMPLING_HPP
