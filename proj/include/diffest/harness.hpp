// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_HARNESS_HPP
#define DIFFEST_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffest/euler.hpp"
#include "diffest/flow_case.hpp"
#include "diffest/inverse.hpp"
#include "diffest/metrics.hpp"

namespace diffest::harness
{

struct Ensemble
{
  std::string name;
  std::vector<std::string> members;
};

// Declarative experiment description. Text format: one "key = value" per line,
// lists separated by commas, '#' starts a comment. See configs/ for examples.
struct ExperimentConfig
{
  FlowCase flow = FlowCase::edney_i();
  std::vector<std::string> schemes;
  std::vector<Ensemble> ensembles;  // kept in file order
  ip::IPConfig ip;
  ip::SolverKind solver = ip::SolverKind::ClosedForm;
  std::vector<std::string> variables = {"rho"};  // vectorized into the inverse problem
  std::string report_variable = "rho";
  euler::MarchOptions march;
  std::filesystem::path output = "diffest-out";
  std::filesystem::path cache = ".diffest-cache";
  int band_cells = 6;  // width of the shock neighbourhood used by the structure summary

  void validate() const;
  std::string canonical() const;  // normalized text, the input to config_hash
  const Ensemble &ensemble(const std::string &name) const;
};

ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::uint64_t fnv1a(const std::string &text);
std::string hex64(std::uint64_t v);
std::string config_hash(const ExperimentConfig &cfg);

// Cache directory: DIFFEST_CACHE_DIR when set, otherwise the configured path.
std::filesystem::path resolve_cache_dir(const ExperimentConfig &cfg);

// Address of one solver run: case, grid, scheme, cfl, tolerance and step cap.
std::string run_key(const FlowCase &c, const std::string &scheme,
                    const euler::MarchOptions &opt);

struct RunRecord
{
  std::string scheme;
  std::string key_hash;
  std::string status;  // "ok" or "failed"
  std::string error;
  long steps = 0;
  bool converged = false;
  double final_residual = 0.0;
  double wall_seconds = 0.0;
  bool from_cache = false;
};

struct Artifact
{
  std::string path;  // relative to the output directory
  std::string kind;
};

struct RunManifest
{
  std::string config_hash;
  std::string flow_case;
  std::vector<RunRecord> runs;
  std::vector<std::string> excluded;
  std::vector<Artifact> artifacts;

  std::string to_json() const;
};

// Sign and localization statistics of an estimated error field near discontinuities.
struct StructureSummary
{
  double band_energy_fraction = 0.0;  // share of squared estimate within the band
  double alternating_row_fraction = 0.0;  // crossing rows with both signs present
  int crossing_rows = 0;
};

StructureSummary analyze_structure(std::span<const double> estimate, const Grid2D &grid,
                                   const analytic::RegionMap &map, int band_cells);

struct SchemeSummary
{
  metrics::ErrorRecord record;
  double correlation = 0.0;  // Pearson of |estimate| and |truth|, NaN when degenerate
  StructureSummary structure;
};

struct EnsembleReport
{
  std::string name;
  std::vector<std::string> members;
  metrics::ErrorReport report;
  std::vector<SchemeSummary> schemes;
  double averaged_effectivity = 0.0;
  std::size_t nonconverged_points = 0;

  const SchemeSummary &scheme(const std::string &label) const;
};

struct ExperimentResult
{
  RunManifest manifest;
  std::vector<EnsembleReport> reports;
};

// Marches (or loads cached) runs, solves the inverse problem for every ensemble and
// writes tables, reports, field dumps and the manifest into cfg.output.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

// Recomputes tables and reports from the field dumps already in cfg.output.
ExperimentResult report_experiment(const ExperimentConfig &cfg);

enum class PlotKind
{
  Isolines,
  ErrorSlice,
  Sweep
};

PlotKind plot_kind_from_string(const std::string &name);

// Plot data from an experiment output directory: density isolines for every dumped
// solution, or per-point estimate/truth slices of the report variable for every
// ensemble member.
std::vector<Artifact> emit_plot_data(const ExperimentConfig &cfg, PlotKind kind);

// Per-point error rows in flat-index order: index, estimate, truth.
void write_error_slice(const std::filesystem::path &path, std::span<const double> estimate,
                       std::span<const double> truth);
// Gridded density samples: x, y, value in flat-index order.
void write_isolines(const std::filesystem::path &path, const FieldSet &fields,
                    const std::string &variable);

struct SweepSummary
{
  std::vector<ip::SweepRecord> records;
  double plateau_variation = 0.0;  // max relative 2-norm change over [1e-6, 1e-1]
  double shift_at_reference = 0.0;  // shift at the grid point closest to 1e-3
  double endpoint_ratio = 0.0;  // |du(alpha_max)| / |normal solution|
};

// Scalar regularization study on one point with known true errors.
SweepSummary run_scalar_sweep(const std::vector<double> &true_errors,
                              const std::vector<double> &alphas, const ip::IPConfig &cfg,
                              ip::SolverKind solver);
void write_sweep_csv(const std::filesystem::path &path, const SweepSummary &summary);

}  // namespace diffest::harness

#endif
