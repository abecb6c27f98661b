// Copyright 2026 The prom Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Command-line driver for the offline/online reduced-order study.
//
//   prom offline <config> [--fast]
//   prom online <model> --points <csv> -k <int> [--no-reference] [--out <csv>]
//   prom figure <config> [--fast]
//   prom compare <config>... [--fast] [--out <csv>]
//
// Relative output paths resolve against $PROM_OUTPUT_ROOT. Exit codes: 0 success,
// 1 domain/argument/solver error, 2 I/O error.

#include <iostream>
#include <string>
#include <vector>
#include "CLI11.hpp"
#include "prom/prom.hpp"

namespace
{

using namespace prom;
using namespace prom::experiment;

ExperimentConfig load(const std::string &path, bool fast)
{
  ExperimentConfig c = load_config(path);
  if (fast)
  {
    apply_fast_profile(c);
  }
  return c;
}

void emit(const std::string &text, const std::string &out)
{
  if (out.empty())
  {
    std::cout << text;
  }
  else
  {
    io::atomic_write(resolve_output(out), text);
  }
}

int cmd_offline(const std::string &config_path, bool fast)
{
  ExperimentConfig c = load(config_path, fast);
  if (c.output_dir.empty())
  {
    c.output_dir = c.name;
  }
  const RunManifest m = run_offline(c);
  for (const auto &n : m.notes)
  {
    std::cerr << "note: " << n << '\n';
  }
  std::cout << "model written to " << m.output_dir << '\n'
            << "samples " << m.achieved_samples << " (requested " << m.requested_samples
            << "), snapshots " << m.n_k << ", rank " << m.rank << ", N " << m.N << ", N_h "
            << m.N_h << '\n'
            << "offline fem_solves " << m.timings.at("fem_solves") << " s";
  if (m.timings.count("online_solve_mean"))
  {
    std::cout << ", online solve " << m.timings.at("online_solve_mean") << " s";
  }
  std::cout << '\n';
  return 0;
}

int cmd_online(const std::string &model, const std::string &points_csv, int k, bool no_reference,
               const std::string &out)
{
  const auto points = io::read_points_csv(points_csv);
  const OnlineOutput o = run_online(model, points, k, !no_reference);
  emit(o.csv, out);
  return 0;
}

int cmd_figure(const std::string &config_path, bool fast)
{
  const FigureData f = emit_sample_figure_data(load(config_path, fast));
  std::cout << "training points (" << f.training_count << "): " << f.training_csv.string() << '\n'
            << "test points: " << f.test_csv.string() << '\n';
  return 0;
}

int cmd_compare(const std::vector<std::string> &paths, bool fast, const std::string &out)
{
  std::vector<ExperimentConfig> configs;
  for (const auto &p : paths)
  {
    configs.push_back(load(p, fast));
  }
  emit(summary_csv(compare_schemes(configs)), out);
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Reduced-order modeling of parametric eigenvalue problems"};
  app.require_subcommand(1);

  bool fast = false;
  std::string config, model, points, out;
  std::vector<std::string> configs;
  int k = 1;
  bool no_reference = false;

  auto *offline = app.add_subcommand("offline", "FEM solves at the samples, POD, projection");
  offline->add_option("config", config, "experiment config (JSON)")->required();
  offline->add_flag("--fast", fast, "CI-scale mesh (n=50)");

  auto *online = app.add_subcommand("online", "reduced solves at test points, CSV table");
  online->add_option("model", model, "model directory or its manifest.json")->required();
  online->add_option("--points", points, "CSV of parameter points (dim0,dim1,...)")->required();
  online->add_option("-k", k, "eigenvalues per point")->required()->check(CLI::NonNegativeNumber);
  online->add_flag("--no-reference", no_reference, "skip FEM reference solves");
  online->add_option("--out", out, "output CSV (default: stdout)");

  auto *figure = app.add_subcommand("figure", "training and test points as CSV");
  figure->add_option("config", config, "experiment config (JSON)")->required();
  figure->add_flag("--fast", fast, "CI-scale mesh (n=50)");

  auto *compare = app.add_subcommand("compare", "per-scheme error summary");
  compare->add_option("configs", configs, "experiment configs (JSON)")->required();
  compare->add_flag("--fast", fast, "CI-scale mesh (n=50)");
  compare->add_option("--out", out, "summary CSV (default: stdout)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try
  {
    if (*offline)
    {
      return cmd_offline(config, fast);
    }
    if (*online)
    {
      return cmd_online(model, points, k, no_reference, out);
    }
    if (*figure)
    {
      return cmd_figure(config, fast);
    }
    if (*compare)
    {
      return cmd_compare(configs, fast, out);
    }
  }
  catch (const prom::IoError &e)
  {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  }
  catch (const prom::Error &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
