// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PROM_EXPERIMENT_HPP
#define PROM_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>
#include "json.hpp"
#include "prom/eigensolve.hpp"
#include "prom/error.hpp"
#include "prom/fem.hpp"
#include "prom/io.hpp"
#include "prom/mesh.hpp"
#include "prom/pod.hpp"
#include "prom/rom.hpp"
#include "prom/sampling.hpp"

namespace prom::experiment
{

using json = nlohmann::json;
namespace fs = std::filesystem;

enum class ProblemId
{
  two_param,
  three_param
};

inline std::string to_string(ProblemId p)
{
  return p == ProblemId::two_param ? "two_param" : "three_param";
}

inline ProblemId parse_problem(const std::string &s)
{
  if (s == "two_param")
  {
    return ProblemId::two_param;
  }
  if (s == "three_param")
  {
    return ProblemId::three_param;
  }
  throw InvalidArgument("unknown problem '" + s + "' (expected two_param or three_param)");
}

inline AffineOperator assemble_problem(ProblemId p, const FemSpace &space)
{
  return p == ProblemId::two_param ? assemble_problem_two_param(space)
                                   : assemble_problem_three_param(space);
}

inline AffineCoefficients problem_coefficients(ProblemId p)
{
  return p == ProblemId::two_param ? two_param_coefficients() : three_param_coefficients();
}

inline ParameterBox default_box(ProblemId p)
{
  if (p == ProblemId::two_param)
  {
    return {{0.1, 0.1}, {1.4, 1.4}};
  }
  return {{0.1, 0.1, 1.0}, {1.4, 1.4, 8.0}};
}

inline std::vector<Point> default_test_points(ProblemId p)
{
  if (p == ProblemId::two_param)
  {
    return {{0.3, 0.4}, {0.3, 1.1}, {0.7, 0.4}, {0.7, 1.1}, {1.2, 0.3}, {1.2, 1.1}};
  }
  return {{0.4, 0.4, 2}, {0.4, 1.1, 2}, {1.1, 0.4, 2}, {1.1, 1.1, 2},
          {0.4, 0.4, 6}, {0.4, 1.1, 6}, {1.1, 0.4, 6}, {1.1, 1.1, 6}};
}

struct SamplingConfig
{
  SamplingScheme scheme = SamplingScheme::lhs;
  int count = 0;            // random, lhs; for uniform a budget resolved to a grid
  std::vector<int> counts;  // uniform, explicit per-dimension counts
  bool cell_centers = false;
  int level = -1;  // smolyak
  std::uint64_t seed = 0;
};

struct ExperimentConfig
{
  std::string name = "experiment";
  ProblemId problem = ProblemId::two_param;
  int mesh_n = 100;
  ParameterBox box = default_box(ProblemId::two_param);
  SamplingConfig sampling;
  int n_e = 1;
  int k = 1;
  double eps_tol = 1.0e-8;
  std::vector<Point> test_points = default_test_points(ProblemId::two_param);
  std::string output_dir;
  int workers = 1;
  bool allow_k_above_ne = false;
  bool export_matrices = false;
  double solver_tol = 1.0e-10;
  // Interpretation notes produced while resolving the config (not read from file).
  std::vector<std::string> notes;

  void validate() const
  {
    if (mesh_n < 2)
    {
      throw InvalidArgument("config: mesh.n must be >= 2");
    }
    if (box.dim() != static_cast<std::size_t>(problem_coefficients(problem).parameter_dim))
    {
      throw InvalidArgument("config: parameter box dimension does not match problem " +
                            to_string(problem));
    }
    if (n_e < 1)
    {
      throw InvalidArgument("config: snapshots.n_e must be >= 1");
    }
    if (k < 0)
    {
      throw InvalidArgument("config: k must be >= 0");
    }
    if (k > n_e && !allow_k_above_ne)
    {
      throw InvalidArgument("config: k=" + std::to_string(k) + " exceeds n_e=" +
                            std::to_string(n_e) + "; set allow_k_above_ne to override");
    }
    if (!(eps_tol > 0.0 && eps_tol < 1.0))
    {
      throw InvalidArgument("config: eps_tol must lie in (0, 1)");
    }
    if (workers < 1)
    {
      throw InvalidArgument("config: workers must be >= 1");
    }
    const auto coeffs = problem_coefficients(problem);
    for (const auto &p : test_points)
    {
      if (!box.contains(p))
      {
        throw InvalidArgument("config: test point " + prom::detail::fmt_param(p) +
                              " lies outside the parameter box");
      }
      coeffs.check(p);
    }
    switch (sampling.scheme)
    {
      case SamplingScheme::random:
      case SamplingScheme::lhs:
        if (sampling.count < 1)
        {
          throw InvalidArgument("config: sampling.count must be >= 1");
        }
        break;
      case SamplingScheme::uniform:
        if (sampling.counts.empty() && sampling.count < 1)
        {
          throw InvalidArgument("config: uniform sampling needs counts or count");
        }
        if (!sampling.counts.empty() && sampling.counts.size() != box.dim())
        {
          throw InvalidArgument("config: sampling.counts needs one entry per dimension");
        }
        break;
      case SamplingScheme::smolyak:
        if (sampling.level < 0)
        {
          throw InvalidArgument("config: smolyak sampling needs level >= 0");
        }
        break;
    }
  }

  json to_json() const
  {
    json s;
    s["scheme"] = prom::to_string(sampling.scheme);
    if (sampling.count > 0)
    {
      s["count"] = sampling.count;
    }
    if (!sampling.counts.empty())
    {
      s["counts"] = sampling.counts;
      s["cell_centers"] = sampling.cell_centers;
    }
    if (sampling.level >= 0)
    {
      s["level"] = sampling.level;
    }
    s["seed"] = sampling.seed;
    json j;
    j["name"] = name;
    j["problem"] = to_string(problem);
    j["mesh"] = {{"n", mesh_n}};
    j["parameter_box"] = {{"lo", box.lo}, {"hi", box.hi}};
    j["sampling"] = s;
    j["snapshots"] = {{"n_e", n_e}};
    j["k"] = k;
    j["eps_tol"] = eps_tol;
    j["test_points"] = test_points;
    j["output_dir"] = output_dir;
    j["workers"] = workers;
    j["allow_k_above_ne"] = allow_k_above_ne;
    j["export_matrices"] = export_matrices;
    j["solver"] = {{"tol", solver_tol}};
    return j;
  }

  // Missing keys take their defaults; unknown keys are rejected.
  static ExperimentConfig from_json(const json &j)
  {
    static const std::set<std::string> known = {
      "name",     "problem",    "mesh",       "parameter_box", "sampling",         "snapshots",
      "k",        "eps_tol",    "test_points", "output_dir",   "workers",          "allow_k_above_ne",
      "export_matrices", "solver"};
    if (!j.is_object())
    {
      throw InvalidArgument("config: top level must be an object");
    }
    for (const auto &[key, _] : j.items())
    {
      if (!known.count(key))
      {
        throw InvalidArgument("config: unknown key '" + key + "'");
      }
    }
    ExperimentConfig c;
    try
    {
      c.problem = parse_problem(j.value("problem", std::string("two_param")));
      c.box = default_box(c.problem);
      c.test_points = default_test_points(c.problem);
      c.name = j.value("name", c.name);
      if (j.contains("mesh"))
      {
        c.mesh_n = j.at("mesh").value("n", c.mesh_n);
      }
      if (j.contains("parameter_box"))
      {
        c.box = ParameterBox(j.at("parameter_box").at("lo").get<std::vector<double>>(),
                             j.at("parameter_box").at("hi").get<std::vector<double>>());
      }
      if (j.contains("sampling"))
      {
        const json &s = j.at("sampling");
        c.sampling.scheme = parse_scheme(s.at("scheme").get<std::string>());
        c.sampling.count = s.value("count", 0);
        c.sampling.counts = s.value("counts", std::vector<int>{});
        c.sampling.cell_centers = s.value("cell_centers", false);
        c.sampling.level = s.value("level", -1);
        c.sampling.seed = s.value("seed", std::uint64_t{0});
      }
      if (j.contains("snapshots"))
      {
        c.n_e = j.at("snapshots").value("n_e", c.n_e);
      }
      c.k = j.value("k", c.n_e);
      c.eps_tol = j.value("eps_tol", c.eps_tol);
      if (j.contains("test_points"))
      {
        c.test_points = j.at("test_points").get<std::vector<Point>>();
      }
      c.output_dir = j.value("output_dir", c.output_dir);
      c.workers = j.value("workers", c.workers);
      c.allow_k_above_ne = j.value("allow_k_above_ne", c.allow_k_above_ne);
      c.export_matrices = j.value("export_matrices", c.export_matrices);
      if (j.contains("solver"))
      {
        c.solver_tol = j.at("solver").value("tol", c.solver_tol);
      }
    }
    catch (const json::exception &e)
    {
      throw InvalidArgument(std::string("config: ") + e.what());
    }
    try
    {
      c.validate();
    }
    catch (const DomainError &e)
    {
      throw InvalidArgument(std::string("config: ") + e.what());
    }
    if (c.k > c.n_e)
    {
      warn("k=" + std::to_string(c.k) + " exceeds n_e=" + std::to_string(c.n_e) +
           "; eigenvalues beyond n_e are not represented in the snapshots");
    }
    return c;
  }
};

inline ExperimentConfig load_config(const fs::path &path)
{
  return ExperimentConfig::from_json(io::read_json(path));
}

// Apply the CI-scale mesh profile.
inline void apply_fast_profile(ExperimentConfig &c) { c.mesh_n = 50; }

// Relative output directories resolve against $PROM_OUTPUT_ROOT when it is set.
inline fs::path resolve_output(const std::string &dir)
{
  fs::path p(dir);
  if (p.is_relative())
  {
    if (const char *root = std::getenv("PROM_OUTPUT_ROOT"); root && *root)
    {
      return fs::path(root) / p;
    }
  }
  return p;
}

// Grid counts for a uniform budget. A perfect p-th power becomes a tensor grid; in 2D a
// budget c^2 + (c-1)^2 becomes a c x c grid plus its cell centers; anything else is rounded
// to the nearest tensor grid.
inline SampleSet make_samples(const ExperimentConfig &c, std::vector<std::string> *notes = nullptr)
{
  const auto &s = c.sampling;
  switch (s.scheme)
  {
    case SamplingScheme::random:
      return random_sample(c.box, s.count, s.seed);
    case SamplingScheme::lhs:
      return lhs_sample(c.box, s.count, s.seed);
    case SamplingScheme::smolyak:
      return smolyak_cc_sample(c.box, s.level);
    case SamplingScheme::uniform:
      break;
  }
  if (!s.counts.empty())
  {
    return s.cell_centers ? uniform_tensor_centered_sample(c.box, s.counts)
                          : uniform_tensor_sample(c.box, s.counts);
  }
  const int p = static_cast<int>(c.box.dim());
  const int root = std::max(2, static_cast<int>(std::lround(std::pow(s.count, 1.0 / p))));
  int power = 1;
  for (int d = 0; d < p; d++)
  {
    power *= root;
  }
  std::string note;
  SampleSet out;
  if (power == s.count)
  {
    out = uniform_tensor_sample(c.box, std::vector<int>(static_cast<std::size_t>(p), root));
  }
  else
  {
    int centered = -1;
    for (int q = 2; p == 2 && q * q <= s.count; q++)
    {
      if (q * q + (q - 1) * (q - 1) == s.count)
      {
        centered = q;
      }
    }
    if (centered > 0)
    {
      out = uniform_tensor_centered_sample(c.box, {centered, centered});
      note = "uniform budget " + std::to_string(s.count) + " realized as a " +
             std::to_string(centered) + "x" + std::to_string(centered) + " tensor grid plus " +
             std::to_string((centered - 1) * (centered - 1)) + " cell centers";
    }
    else
    {
      out = uniform_tensor_sample(c.box, std::vector<int>(static_cast<std::size_t>(p), root));
      note = "uniform budget " + std::to_string(s.count) + " is not a tensor count; using " +
             std::to_string(root) + "^" + std::to_string(p) + " = " + std::to_string(out.size()) +
             " points";
    }
  }
  if (!note.empty() && notes)
  {
    notes->push_back(note);
  }
  return out;
}

inline int requested_budget(const ExperimentConfig &c, const SampleSet &achieved)
{
  if (c.sampling.count > 0)
  {
    return c.sampling.count;
  }
  return static_cast<int>(achieved.size());
}

// Mesh, dof space and affine operator for one (problem, mesh) pair.
struct ProblemSetup
{
  ProblemId problem = ProblemId::two_param;
  int mesh_n = 0;
  std::shared_ptr<const FemSpace> space;
  AffineOperator op;
};

inline std::shared_ptr<const ProblemSetup> make_setup(ProblemId problem, int mesh_n)
{
  auto s = std::make_shared<ProblemSetup>();
  s->problem = problem;
  s->mesh_n = mesh_n;
  s->space = std::make_shared<const FemSpace>(build_structured_mesh(mesh_n));
  s->op = assemble_problem(problem, *s->space);
  return s;
}

// FEM eigensolves at every point on a bounded pool of worker threads. Results are indexed
// by point, so the output does not depend on scheduling.
inline std::vector<EigenSolution> solve_at_points(const AffineOperator &op,
                                                  const std::vector<Point> &points, int n_eig,
                                                  int workers, const EigenSolverOptions &opts)
{
  std::vector<EigenSolution> out(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]
  {
    for (std::size_t i = next++; i < points.size(); i = next++)
    {
      try
      {
        out[i] = prom::detail::annotate("stage fem_solve, parameter " +
                                          prom::detail::fmt_param(points[i]),
                                        [&]
                                        {
                                          auto [A, B] = evaluate_operator(op, points[i]);
                                          EigenSolution s = smallest_eigenpairs(A, B, n_eig, opts);
                                          s.parameter = points[i];
                                          return s;
                                        });
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; t++)
  {
    pool.emplace_back(work);
  }
  work();
  for (auto &t : pool)
  {
    t.join();
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  return out;
}

struct RunManifest
{
  json config;
  std::string output_dir;
  int requested_samples = 0;
  int achieved_samples = 0;
  int n_k = 0;
  int rank = 0;
  int N = 0;
  int N_h = 0;
  double max_residual = 0.0;
  int max_iterations = 0;
  long total_iterations = 0;
  std::map<std::string, std::string> artifacts;
  std::map<std::string, double> timings;
  std::vector<std::string> notes;

  json to_json() const
  {
    json j;
    j["config"] = config;
    j["output_dir"] = output_dir;
    j["samples"] = {{"requested", requested_samples}, {"achieved", achieved_samples}};
    j["snapshots"] = {{"n_k", n_k}};
    j["pod"] = {{"rank", rank}, {"N", N}};
    j["N_h"] = N_h;
    j["solver"] = {{"max_residual", max_residual},
                   {"max_iterations", max_iterations},
                   {"total_iterations", total_iterations}};
    j["artifacts"] = artifacts;
    j["timings_seconds"] = timings;
    j["notes"] = notes;
    return j;
  }
};

struct OfflineResult
{
  ExperimentConfig config;
  std::shared_ptr<const ProblemSetup> setup;
  SampleSet samples;
  std::vector<EigenSolution> solutions;
  SnapshotMatrix snapshots;
  PodBasis basis;
  ReducedModel model;
  RunManifest manifest;
};

namespace detail
{

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline json matrix_json(const Matrix &M)
{
  std::vector<double> flat(M.data(), M.data() + M.size());
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"column_major", flat}};
}

inline Matrix matrix_from_json(const json &j)
{
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const auto flat = j.at("column_major").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != flat.size())
  {
    throw InvalidArgument("matrix size mismatch");
  }
  return Eigen::Map<const Matrix>(flat.data(), rows, cols);
}

inline std::string seed_text(const SampleSet &s)
{
  return (s.scheme == SamplingScheme::random || s.scheme == SamplingScheme::lhs)
           ? std::to_string(s.seed)
           : std::string();
}

}  // namespace detail

inline void persist_offline(OfflineResult &r)
{
  const auto t0 = detail::Clock::now();
  const fs::path dir = resolve_output(r.config.output_dir);
  auto &art = r.manifest.artifacts;
  io::write_json(dir / "config.json", r.config.to_json());
  art["config"] = (dir / "config.json").string();
  io::write_sample_set(r.samples, dir / "samples.csv");
  art["samples"] = (dir / "samples.csv").string();
  art["samples_meta"] = (dir / "samples.meta.json").string();
  io::write_pod_basis(r.basis, &r.snapshots, dir);
  art["basis"] = (dir / "basis.bin").string();
  art["basis_meta"] = (dir / "basis.txt").string();
  art["singular_values"] = (dir / "singular_values.csv").string();

  json m;
  m["format"] = "prom-reduced-model";
  m["version"] = 1;
  m["name"] = r.config.name;
  m["problem"] = to_string(r.config.problem);
  m["mesh_n"] = r.config.mesh_n;
  m["parameter_dim"] = r.model.coefficients.parameter_dim;
  m["N"] = r.model.N();
  m["N_h"] = r.setup->space->size();
  m["scheme"] = prom::to_string(r.samples.scheme);
  m["seed"] = detail::seed_text(r.samples);
  m["n_e"] = r.config.n_e;
  m["k"] = r.config.k;
  m["eps_tol"] = r.config.eps_tol;
  m["basis_file"] = "basis.bin";
  m["a_reduced"] = json::array();
  for (const auto &A : r.model.a_reduced)
  {
    m["a_reduced"].push_back(detail::matrix_json(A));
  }
  m["b_reduced"] = json::array();
  for (const auto &B : r.model.b_reduced)
  {
    m["b_reduced"].push_back(detail::matrix_json(B));
  }
  io::write_json(dir / "model.json", m);
  art["model"] = (dir / "model.json").string();

  if (r.config.export_matrices)
  {
    for (std::size_t l = 0; l < r.setup->op.a_components.size(); l++)
    {
      const fs::path p = dir / "matrices" / ("A" + std::to_string(l) + ".mtx");
      fs::create_directories(p.parent_path());
      write_matrix_market(r.setup->op.a_components[l], p.string());
      art["matrix_A" + std::to_string(l)] = p.string();
    }
    for (std::size_t m2 = 0; m2 < r.setup->op.b_components.size(); m2++)
    {
      const fs::path p = dir / "matrices" / ("B" + std::to_string(m2) + ".mtx");
      fs::create_directories(p.parent_path());
      write_matrix_market(r.setup->op.b_components[m2], p.string());
      art["matrix_B" + std::to_string(m2)] = p.string();
    }
  }
  r.manifest.output_dir = dir.string();
  art["manifest"] = (dir / "manifest.json").string();
  r.manifest.timings["persist"] = detail::seconds_since(t0);
  io::write_json(dir / "manifest.json", r.manifest.to_json());
}

// Offline stage: mesh, samples, FEM solves, snapshots, POD, projection. Artifacts are
// written when config.output_dir is set. A setup for the same problem and mesh may be
// shared across runs.
inline OfflineResult run_offline_full(const ExperimentConfig &config,
                                      std::shared_ptr<const ProblemSetup> setup = nullptr)
{
  config.validate();
  OfflineResult r;
  r.config = config;
  r.manifest.notes = config.notes;

  auto t0 = detail::Clock::now();
  if (!setup || setup->problem != config.problem || setup->mesh_n != config.mesh_n)
  {
    setup = make_setup(config.problem, config.mesh_n);
  }
  r.setup = setup;
  r.manifest.timings["assembly"] = detail::seconds_since(t0);
  r.manifest.N_h = setup->space->size();

  t0 = detail::Clock::now();
  r.samples = make_samples(config, &r.manifest.notes);
  for (const auto &p : r.samples.points)
  {
    prom::detail::annotate("stage sampling, parameter " + prom::detail::fmt_param(p),
                           [&] { setup->op.coefficients.check(p); });
  }
  r.manifest.requested_samples = requested_budget(config, r.samples);
  r.manifest.achieved_samples = static_cast<int>(r.samples.size());
  r.manifest.timings["sampling"] = detail::seconds_since(t0);

  t0 = detail::Clock::now();
  EigenSolverOptions opts;
  opts.tol = config.solver_tol;
  r.solutions = solve_at_points(setup->op, r.samples.points, config.n_e, config.workers, opts);
  r.manifest.timings["fem_solves"] = detail::seconds_since(t0);
  r.manifest.timings["fem_solve_mean"] =
    r.manifest.timings["fem_solves"] / static_cast<double>(r.samples.size()) *
    std::min<double>(config.workers, static_cast<double>(r.samples.size()));
  for (const auto &s : r.solutions)
  {
    for (double res : s.diagnostics.residuals)
    {
      r.manifest.max_residual = std::max(r.manifest.max_residual, res);
    }
    r.manifest.max_iterations = std::max(r.manifest.max_iterations, s.diagnostics.iterations);
    r.manifest.total_iterations += s.diagnostics.iterations;
  }

  t0 = detail::Clock::now();
  r.snapshots = prom::detail::annotate("stage snapshots",
                                       [&] { return build_snapshot_matrix(r.solutions, config.n_e); });
  r.basis = prom::detail::annotate("stage pod", [&] { return pod_basis(r.snapshots, config.eps_tol); });
  r.manifest.n_k = static_cast<int>(r.snapshots.S.cols());
  r.manifest.rank = r.basis.rank;
  r.manifest.N = r.basis.N;
  r.manifest.timings["pod"] = detail::seconds_since(t0);

  t0 = detail::Clock::now();
  r.model = project_operators(setup->op, r.basis);
  r.manifest.timings["projection"] = detail::seconds_since(t0);

  // Online cost at a training parameter, averaged over repeats.
  if (config.k > 0 && config.k <= r.model.N())
  {
    const int reps = 20;
    t0 = detail::Clock::now();
    for (int i = 0; i < reps; i++)
    {
      (void)online_solve(r.model, r.samples.points.front(), config.k);
    }
    r.manifest.timings["online_solve_mean"] = detail::seconds_since(t0) / reps;
  }

  r.manifest.config = config.to_json();
  if (!config.output_dir.empty())
  {
    persist_offline(r);
  }
  return r;
}

inline RunManifest run_offline(const ExperimentConfig &config)
{
  return run_offline_full(config).manifest;
}

struct LoadedModel
{
  ReducedModel model;
  ProblemId problem = ProblemId::two_param;
  int mesh_n = 0;
  int n_e = 0;
  io::TableContext table;
  fs::path directory;
};

// Accepts the model directory, its model.json or its manifest.json.
inline LoadedModel load_model(const fs::path &path)
{
  fs::path dir = fs::is_directory(path) ? path : path.parent_path();
  if (dir.empty())
  {
    dir = ".";
  }
  const fs::path model_file = dir / "model.json";
  if (!fs::exists(model_file))
  {
    throw IoError("no reduced model at " + model_file.string());
  }
  const json m = io::read_json(model_file);
  LoadedModel lm;
  lm.directory = dir;
  try
  {
    if (m.at("format").get<std::string>() != "prom-reduced-model")
    {
      throw IoError("unexpected format tag");
    }
    lm.problem = parse_problem(m.at("problem").get<std::string>());
    lm.mesh_n = m.at("mesh_n").get<int>();
    lm.n_e = m.at("n_e").get<int>();
    lm.table.scheme = m.at("scheme").get<std::string>();
    lm.table.seed = m.at("seed").get<std::string>();
    lm.table.N = m.at("N").get<int>();
    lm.model.coefficients = problem_coefficients(lm.problem);
    for (const auto &a : m.at("a_reduced"))
    {
      lm.model.a_reduced.push_back(detail::matrix_from_json(a));
    }
    for (const auto &b : m.at("b_reduced"))
    {
      lm.model.b_reduced.push_back(detail::matrix_from_json(b));
    }
    lm.model.basis = std::make_shared<const Matrix>(
      io::read_matrix_binary(dir / m.value("basis_file", std::string("basis.bin"))));
  }
  catch (const IoError &e)
  {
    throw IoError("corrupt model " + model_file.string() + ": " + e.what());
  }
  catch (const std::exception &e)
  {
    throw IoError("corrupt model " + model_file.string() + ": " + e.what());
  }
  const auto N = lm.table.N;
  auto square_n = [N](const Matrix &X) { return X.rows() == N && X.cols() == N; };
  if (lm.model.a_reduced.size() != lm.model.coefficients.theta_a.size() ||
      lm.model.b_reduced.size() != lm.model.coefficients.theta_b.size() ||
      !std::all_of(lm.model.a_reduced.begin(), lm.model.a_reduced.end(), square_n) ||
      !std::all_of(lm.model.b_reduced.begin(), lm.model.b_reduced.end(), square_n) ||
      lm.model.basis->cols() != N)
  {
    throw IoError("corrupt model " + model_file.string() + ": inconsistent dimensions");
  }
  return lm;
}

struct OnlineOutput
{
  std::vector<RomResult> results;
  std::string csv;
};

// Online stage from a persisted model. With reference, FEM solves at the points supply the
// lambda_fem and rel_error columns; without it, no FEM assembly happens.
inline OnlineOutput run_online(const fs::path &model_path, const std::vector<Point> &points, int k,
                               bool reference = true)
{
  const LoadedModel lm = load_model(model_path);
  for (const auto &p : points)
  {
    prom::detail::annotate("test point " + prom::detail::fmt_param(p),
                           [&] { lm.model.coefficients.check(p); });
  }
  if (k > lm.n_e)
  {
    warn("k=" + std::to_string(k) + " exceeds the n_e=" + std::to_string(lm.n_e) +
         " used to train this model");
  }
  std::shared_ptr<const ProblemSetup> setup;
  FemReference ref;
  if (reference && k > 0 && !points.empty())
  {
    setup = make_setup(lm.problem, lm.mesh_n);
    ref = make_fem_reference(setup->op);
  }
  OnlineOutput out;
  out.results = evaluate_test_suite(lm.model, ref, points, k);
  out.csv = io::results_csv(out.results, lm.table,
                            static_cast<std::size_t>(lm.model.coefficients.parameter_dim));
  return out;
}

struct FigureData
{
  fs::path training_csv;
  fs::path test_csv;
  std::size_t training_count = 0;
  std::vector<std::string> notes;
};

// Training and test points as CSV for plotting, under <output_dir>/figure/.
inline FigureData emit_sample_figure_data(const ExperimentConfig &config)
{
  config.validate();
  FigureData f;
  const SampleSet s = make_samples(config, &f.notes);
  for (const auto &n : f.notes)
  {
    warn(n);
  }
  const fs::path dir = resolve_output(config.output_dir.empty() ? "." : config.output_dir) / "figure";
  f.training_csv = dir / "training.csv";
  f.test_csv = dir / "test.csv";
  io::write_sample_set(s, f.training_csv);
  io::atomic_write(f.test_csv, io::points_csv(config.test_points, config.box.dim()));
  f.training_count = s.size();
  return f;
}

struct SchemeSummary
{
  std::string name;
  std::string scheme;
  std::string seed;
  int requested = 0;
  int achieved = 0;
  int N = 0;
  double worst_rel_error = 0.0;
  double geomean_rel_error = 0.0;
  std::vector<RomResult> results;
  PodBasis basis;
  bool minmax_ok = true;
};

// Relative errors below this floor enter the geometric mean as the floor.
constexpr double geomean_floor = 1.0e-16;

inline double geometric_mean(const std::vector<double> &v)
{
  if (v.empty())
  {
    return 0.0;
  }
  double s = 0.0;
  for (double x : v)
  {
    s += std::log(std::max(x, geomean_floor));
  }
  return std::exp(s / static_cast<double>(v.size()));
}

inline std::string summary_csv(const std::vector<SchemeSummary> &rows)
{
  std::string s = "name,scheme,seed,requested,achieved,N,worst_rel_error,geomean_rel_error\n";
  for (const auto &r : rows)
  {
    s += r.name + "," + r.scheme + "," + r.seed + "," + std::to_string(r.requested) + "," +
         std::to_string(r.achieved) + "," + std::to_string(r.N) + "," +
         io::fmt_double(r.worst_rel_error) + "," + io::fmt_double(r.geomean_rel_error) + "\n";
  }
  return s;
}

// Runs every config (offline + test suite against FEM) and summarizes the relative errors.
// All configs must share problem, mesh, test points and k.
inline std::vector<SchemeSummary> compare_schemes(const std::vector<ExperimentConfig> &configs)
{
  if (configs.empty())
  {
    throw InvalidArgument("compare_schemes: no configs");
  }
  const auto &c0 = configs.front();
  for (const auto &c : configs)
  {
    if (c.problem != c0.problem || c.mesh_n != c0.mesh_n)
    {
      throw InvalidArgument("compare_schemes: config '" + c.name +
                            "' differs from '" + c0.name + "' in problem or mesh");
    }
    if (c.test_points != c0.test_points || c.k != c0.k)
    {
      throw InvalidArgument("compare_schemes: config '" + c.name +
                            "' differs from '" + c0.name + "' in test points or k");
    }
  }
  auto setup = make_setup(c0.problem, c0.mesh_n);
  EigenSolverOptions opts;
  opts.tol = c0.solver_tol;
  // FEM reference values are shared by all schemes.
  const auto fem = c0.k > 0 ? solve_at_points(setup->op, c0.test_points, c0.k, c0.workers, opts)
                            : std::vector<EigenSolution>(c0.test_points.size());
  FemReference cached = [&](ParameterView mu, int)
  {
    for (std::size_t i = 0; i < c0.test_points.size(); i++)
    {
      if (std::equal(mu.begin(), mu.end(), c0.test_points[i].begin(), c0.test_points[i].end()))
      {
        return fem[i];
      }
    }
    throw InvalidArgument("compare_schemes: unexpected test point");
  };

  std::vector<SchemeSummary> rows;
  for (const auto &c : configs)
  {
    OfflineResult off = run_offline_full(c, setup);
    SchemeSummary row;
    row.name = c.name;
    row.scheme = prom::to_string(off.samples.scheme);
    row.seed = detail::seed_text(off.samples);
    row.requested = off.manifest.requested_samples;
    row.achieved = off.manifest.achieved_samples;
    row.N = off.basis.N;
    row.basis = off.basis;
    row.results = evaluate_test_suite(off.model, cached, c.test_points, c.k);
    std::vector<double> errs;
    for (const auto &res : row.results)
    {
      for (Eigen::Index i = 0; i < res.rel_error.size(); i++)
      {
        errs.push_back(res.rel_error(i));
        row.worst_rel_error = std::max(row.worst_rel_error, res.rel_error(i));
        const double lf = (*res.lambda_fem)(i);
        row.minmax_ok = row.minmax_ok && res.lambda_rom(i) >= lf - 1.0e-8 * lf;
      }
    }
    row.geomean_rel_error = geometric_mean(errs);
    if (!c.output_dir.empty())
    {
      const fs::path dir = resolve_output(c.output_dir);
      io::atomic_write(dir / "table.csv",
                       io::results_csv(row.results, {row.scheme, row.seed, row.N}, c.box.dim()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace prom::experiment

#endif  // PROM_EXPERIMENT_HPP
