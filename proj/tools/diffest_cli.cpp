// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diffest/diffest.h"

namespace
{

int report_failure(dfs_status status)
{
  nlohmann::ordered_json j;
  j["error"] = {{"code", static_cast<int>(status)},
                {"name", dfs_status_name(status)},
                {"message", dfs_last_error()}};
  std::cerr << j.dump() << "\n";
  return static_cast<int>(status) == 0 ? 1 : static_cast<int>(status);
}

int usage_failure(const std::string &message)
{
  nlohmann::ordered_json j;
  j["error"] = {{"code", static_cast<int>(DFS_ERR_CONFIG)},
                {"name", "config"},
                {"message", message}};
  std::cerr << j.dump() << "\n";
  return static_cast<int>(DFS_ERR_CONFIG);
}

struct Experiment
{
  dfs_experiment *handle = nullptr;
  ~Experiment() { dfs_experiment_destroy(handle); }
};

dfs_status open_experiment(const std::string &config, const std::string &output, Experiment &x)
{
  dfs_status s = dfs_experiment_load(config.c_str(), &x.handle);
  if (s == DFS_OK && !output.empty())
  {
    s = dfs_experiment_set_output(x.handle, output.c_str());
  }
  return s;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"A posteriori error estimation from ensembles of flow solutions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dfs_version()));

  std::string config;
  std::string output;

  auto *run = app.add_subcommand("run", "March every scheme (cached) and build error tables");
  run->add_option("config", config, "Experiment configuration file")->required();
  run->add_option("-o,--output", output, "Override the output directory");

  auto *report = app.add_subcommand("report", "Recompute tables from persisted field dumps");
  report->add_option("config", config, "Experiment configuration file")->required();
  report->add_option("-o,--output", output, "Override the output directory");

  std::string kind = "isolines";
  auto *dump = app.add_subcommand("dump", "Write plot data from an experiment output");
  dump->add_option("config", config, "Experiment configuration file")->required();
  dump->add_option("-k,--kind", kind, "isolines, error_slice or sweep")
      ->check(CLI::IsMember({"isolines", "error_slice", "sweep"}));
  dump->add_option("-o,--output", output, "Override the output directory");

  std::vector<double> errors = {1.0, -2.0, 3.0};
  double alpha_min = 1e-10;
  double alpha_max = 1.0;
  int points = 41;
  std::string solver = "closed_form";
  std::string csv = "sweep.csv";
  auto *sweep = app.add_subcommand("sweep", "Regularization sweep for one point");
  sweep->add_option("-e,--errors", errors, "True per-solution errors")->delimiter(',');
  sweep->add_option("--alpha-min", alpha_min, "Smallest regularization parameter");
  sweep->add_option("--alpha-max", alpha_max, "Largest regularization parameter");
  sweep->add_option("--points", points, "Number of log-spaced parameters")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--solver", solver, "closed_form or gradient")
      ->check(CLI::IsMember({"closed_form", "gradient"}));
  sweep->add_option("-o,--output", csv, "Sweep CSV path");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::Success &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    if (e.get_exit_code() == 0)
    {
      return app.exit(e);
    }
    return usage_failure(e.what());
  }

  if (run->parsed() || report->parsed())
  {
    Experiment x;
    dfs_status s = open_experiment(config, output, x);
    if (s == DFS_OK)
    {
      s = run->parsed() ? dfs_experiment_run(x.handle) : dfs_experiment_report(x.handle);
    }
    if (s != DFS_OK)
    {
      return report_failure(s);
    }
    std::cout << dfs_experiment_summary(x.handle) << "\n";
    return 0;
  }

  if (dump->parsed())
  {
    Experiment x;
    dfs_status s = open_experiment(config, output, x);
    if (s == DFS_OK)
    {
      s = dfs_experiment_dump(x.handle, kind.c_str());
    }
    if (s != DFS_OK)
    {
      return report_failure(s);
    }
    std::cout << nlohmann::ordered_json{{"dumped", kind}}.dump() << "\n";
    return 0;
  }

  // sweep
  if (!(alpha_min > 0.0) || alpha_max < alpha_min)
  {
    return usage_failure("need 0 < alpha-min <= alpha-max");
  }
  std::vector<double> alphas;
  for (int p = 0; p < points; ++p)
  {
    const double t = points == 1 ? 0.0 : static_cast<double>(p) / (points - 1);
    alphas.push_back(
        std::pow(10.0, std::log10(alpha_min) + t * (std::log10(alpha_max) - std::log10(alpha_min))));
  }
  alphas.front() = alpha_min;
  alphas.back() = alpha_max;
  dfs_ip_options opt;
  dfs_ip_options_default(&opt);
  opt.solver = solver == "gradient" ? DFS_SOLVER_GRADIENT : DFS_SOLVER_CLOSED_FORM;
  dfs_sweep_summary summary{};
  const dfs_status s = dfs_scalar_sweep(errors.data(), static_cast<int>(errors.size()),
                                        alphas.data(), static_cast<int>(alphas.size()), &opt,
                                        csv.c_str(), nullptr, &summary);
  if (s != DFS_OK)
  {
    return report_failure(s);
  }
  nlohmann::ordered_json j;
  j["csv"] = csv;
  j["plateau_variation"] = summary.plateau_variation;
  j["shift_at_reference"] = summary.shift_at_reference;
  j["endpoint_ratio"] = summary.endpoint_ratio;
  std::cout << j.dump(2) << "\n";
  return 0;
}
