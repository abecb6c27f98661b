// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_IO_HPP
#define PROM_IO_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include "json.hpp"
#include "prom/error.hpp"
#include "prom/linalg.hpp"
#include "prom/pod.hpp"
#include "prom/rom.hpp"
#include "prom/sampling.hpp"

namespace prom::io
{

using json = nlohmann::json;
namespace fs = std::filesystem;

// Shortest-safe round-trip text for a double.
inline std::string fmt_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Write to a sibling temporary and rename over the target.
inline void atomic_write(const fs::path &path, const std::string &bytes)
{
  if (path.has_parent_path())
  {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
    {
      throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
    {
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
  {
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const fs::path &path)
{
  try
  {
    return json::parse(read_file(path));
  }
  catch (const json::parse_error &e)
  {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json(const fs::path &path, const json &j)
{
  atomic_write(path, j.dump(2) + "\n");
}

// --- sample sets -------------------------------------------------------------------------

// Header dim0,dim1,...; one point per row.
inline std::string points_csv(const std::vector<Point> &points, std::size_t dim)
{
  std::string s;
  for (std::size_t d = 0; d < dim; d++)
  {
    s += (d ? ",dim" : "dim") + std::to_string(d);
  }
  s += "\n";
  for (const auto &p : points)
  {
    for (std::size_t d = 0; d < p.size(); d++)
    {
      s += (d ? "," : "") + fmt_double(p[d]);
    }
    s += "\n";
  }
  return s;
}

inline std::vector<Point> read_points_csv(const fs::path &path)
{
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim0", 0) != 0)
  {
    throw IoError("missing dim0,... header in " + path.string());
  }
  const auto dim = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',') + 1);
  std::vector<Point> pts;
  int row = 1;
  while (std::getline(in, line))
  {
    row++;
    if (line.empty() || line == "\r")
    {
      continue;
    }
    Point p;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
    {
      try
      {
        std::size_t used = 0;
        p.push_back(std::stod(cell, &used));
      }
      catch (const std::exception &)
      {
        throw IoError("bad number '" + cell + "' at " + path.string() + ":" + std::to_string(row));
      }
    }
    if (p.size() != dim)
    {
      throw IoError("row " + std::to_string(row) + " of " + path.string() + " has " +
                    std::to_string(p.size()) + " values, header declares " + std::to_string(dim));
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

inline json sample_metadata(const SampleSet &s)
{
  json j;
  j["scheme"] = to_string(s.scheme);
  j["count"] = s.size();
  j["dim"] = s.dim();
  if (s.scheme == SamplingScheme::random || s.scheme == SamplingScheme::lhs)
  {
    j["seed"] = s.seed;
  }
  if (s.scheme == SamplingScheme::uniform)
  {
    j["counts"] = s.counts;
    j["cell_centers"] = s.cell_centers;
  }
  if (s.scheme == SamplingScheme::smolyak)
  {
    j["level"] = s.level;
  }
  return j;
}

// <stem>.csv plus <stem>.meta.json.
inline void write_sample_set(const SampleSet &s, const fs::path &csv_path)
{
  atomic_write(csv_path, points_csv(s.points, s.dim()));
  fs::path meta = csv_path;
  meta.replace_extension(".meta.json");
  write_json(meta, sample_metadata(s));
}

inline SampleSet read_sample_set(const fs::path &csv_path)
{
  SampleSet s;
  s.points = read_points_csv(csv_path);
  fs::path meta = csv_path;
  meta.replace_extension(".meta.json");
  const json j = read_json(meta);
  try
  {
    s.scheme = parse_scheme(j.at("scheme").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    s.level = j.value("level", -1);
    s.counts = j.value("counts", std::vector<int>{});
    s.cell_centers = j.value("cell_centers", false);
  }
  catch (const json::exception &e)
  {
    throw IoError("bad sample metadata " + meta.string() + ": " + e.what());
  }
  if (j.value("count", s.size()) != s.size())
  {
    throw IoError("sample count in " + meta.string() + " disagrees with " + csv_path.string());
  }
  return s;
}

// --- POD basis ---------------------------------------------------------------------------

namespace detail
{

inline void put_le64(std::string &out, std::uint64_t v)
{
  for (int b = 0; b < 8; b++)
  {
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
  }
}

inline std::uint64_t get_le64(const std::string &in, std::size_t offset)
{
  std::uint64_t v = 0;
  for (int b = 0; b < 8; b++)
  {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
  }
  return v;
}

}  // namespace detail

// Layout: uint64 rows, uint64 cols, then rows*cols IEEE-754 doubles in column-major order,
// everything little-endian.
inline std::string matrix_to_binary(const Matrix &M)
{
  std::string out;
  out.reserve(16 + 8 * static_cast<std::size_t>(M.size()));
  detail::put_le64(out, static_cast<std::uint64_t>(M.rows()));
  detail::put_le64(out, static_cast<std::uint64_t>(M.cols()));
  for (Eigen::Index j = 0; j < M.cols(); j++)
  {
    for (Eigen::Index i = 0; i < M.rows(); i++)
    {
      detail::put_le64(out, std::bit_cast<std::uint64_t>(M(i, j)));
    }
  }
  return out;
}

inline Matrix matrix_from_binary(const std::string &bytes, const std::string &what)
{
  if (bytes.size() < 16)
  {
    throw IoError(what + ": truncated header");
  }
  const auto rows = detail::get_le64(bytes, 0), cols = detail::get_le64(bytes, 8);
  if (rows > (1ull << 32) || cols > (1ull << 32) || bytes.size() != 16 + 8 * rows * cols)
  {
    throw IoError(what + ": size does not match header (" + std::to_string(rows) + "x" +
                  std::to_string(cols) + ")");
  }
  Matrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t off = 16;
  for (Eigen::Index j = 0; j < M.cols(); j++)
  {
    for (Eigen::Index i = 0; i < M.rows(); i++, off += 8)
    {
      M(i, j) = std::bit_cast<double>(detail::get_le64(bytes, off));
    }
  }
  return M;
}

inline void write_matrix_binary(const Matrix &M, const fs::path &path)
{
  atomic_write(path, matrix_to_binary(M));
}

inline Matrix read_matrix_binary(const fs::path &path)
{
  return matrix_from_binary(read_file(path), path.string());
}

inline std::string vector_csv(const Vector &v, const std::string &header)
{
  std::string s = header + "\n";
  for (Eigen::Index i = 0; i < v.size(); i++)
  {
    s += fmt_double(v(i)) + "\n";
  }
  return s;
}

// basis.bin, basis.txt (sidecar), singular_values.csv inside dir.
inline void write_pod_basis(const PodBasis &b, const SnapshotMatrix *snap, const fs::path &dir)
{
  write_matrix_binary(b.V, dir / "basis.bin");
  atomic_write(dir / "singular_values.csv", vector_csv(b.singular_values, "sigma"));
  std::ostringstream meta;
  meta << "# POD basis sidecar; basis.bin = uint64 rows, uint64 cols, column-major float64, "
          "little-endian\n";
  meta << "method = " << b.method << "\n";
  meta << "eps_tol = " << fmt_double(b.eps_tol) << "\n";
  meta << "N = " << b.N << "\n";
  meta << "rank = " << b.rank << "\n";
  meta << "rows = " << b.V.rows() << "\n";
  meta << "retained_energy = " << fmt_double(b.retained_energy) << "\n";
  if (snap)
  {
    meta << "n_e = " << snap->n_e << "\n";
    meta << "n_s = " << snap->n_s << "\n";
    meta << "n_k = " << snap->S.cols() << "\n";
    meta << "snapshot_scaling = " << snap->scaling << "\n";
    meta << "columns = ";
    for (std::size_t c = 0; c < snap->provenance.size(); c++)
    {
      meta << (c ? " " : "") << snap->provenance[c].sample << ":" << snap->provenance[c].eigenindex;
    }
    meta << "\n";
  }
  atomic_write(dir / "basis.txt", meta.str());
}

// --- ROM result tables -------------------------------------------------------------------

struct TableContext
{
  std::string scheme;
  std::string seed;  // empty for deterministic schemes
  int N = 0;
};

// One row per (test point, eigenvalue index). lambda_fem and rel_error are empty when no
// reference was computed.
inline std::string results_csv(const std::vector<RomResult> &results, const TableContext &ctx,
                               std::size_t parameter_dim)
{
  std::string s = "scheme,seed,N";
  for (std::size_t d = 0; d < parameter_dim; d++)
  {
    s += ",mu" + std::to_string(d);
  }
  s += ",eigen_index,lambda_fem,lambda_rom,rel_error\n";
  for (const auto &r : results)
  {
    for (Eigen::Index i = 0; i < r.lambda_rom.size(); i++)
    {
      s += ctx.scheme + "," + ctx.seed + "," + std::to_string(ctx.N);
      for (double m : r.parameter)
      {
        s += "," + fmt_double(m);
      }
      s += "," + std::to_string(i + 1) + ",";
      if (r.lambda_fem)
      {
        s += fmt_double((*r.lambda_fem)(i));
      }
      s += "," + fmt_double(r.lambda_rom(i)) + ",";
      if (r.rel_error.size() > i)
      {
        s += fmt_double(r.rel_error(i));
      }
      s += "\n";
    }
  }
  return s;
}

}  // namespace prom::io

#endif  // PROM_IO_HPP
