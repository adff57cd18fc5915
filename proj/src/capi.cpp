// SPDX-License-Identifier: Apache-2.0

#include "diffest/diffest.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "diffest/error.hpp"
#include "diffest/euler.hpp"
#include "diffest/field.hpp"
#include "diffest/harness.hpp"
#include "diffest/inverse.hpp"
#include "diffest/metrics.hpp"
#include "diffest/shock.hpp"

using namespace diffest;

struct dfs_ensemble
{
  SolutionEnsemble ensemble;
};

struct dfs_estimate
{
  ip::ErrorEstimate estimate;
};

struct dfs_experiment
{
  harness::ExperimentConfig config;
  std::string summary = "{}";
};

namespace
{

thread_local std::string g_last_error;

dfs_status record(dfs_status s, const std::string &msg)
{
  g_last_error = msg;
  return s;
}

template <class F>
dfs_status guarded(F &&body)
{
  try
  {
    body();
    g_last_error.clear();
    return DFS_OK;
  }
  catch (const Error &e)
  {
    return record(static_cast<dfs_status>(static_cast<int>(e.code())), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return record(DFS_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return record(DFS_ERR_INTERNAL, e.what());
  }
  catch (...)
  {
    return record(DFS_ERR_INTERNAL, "unknown failure");
  }
}

ip::IPConfig to_config(const dfs_ip_options *opt, ip::SolverKind &solver)
{
  ip::IPConfig cfg;
  solver = ip::SolverKind::ClosedForm;
  if (opt)
  {
    cfg.alpha = opt->alpha;
    if (opt->tau > 0.0)
    {
      cfg.tau = opt->tau;
    }
    if (opt->grad_tol > 0.0)
    {
      cfg.grad_tol = opt->grad_tol;
    }
    if (opt->max_iters > 0)
    {
      cfg.max_iters = opt->max_iters;
    }
    solver = opt->solver == DFS_SOLVER_GRADIENT ? ip::SolverKind::Gradient
                                                : ip::SolverKind::ClosedForm;
  }
  cfg.validate();
  return cfg;
}

std::string read_file(const std::filesystem::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void refresh_summary(dfs_experiment *x)
{
  nlohmann::ordered_json j;
  j["manifest"] = nlohmann::ordered_json::parse(read_file(x->config.output / "manifest.json"));
  j["reports"] = nlohmann::ordered_json::parse(read_file(x->config.output / "summary.json"));
  x->summary = j.dump(2);
}

}  // namespace

extern "C" {

const char *dfs_version(void) { return "0.1.0"; }

const char *dfs_last_error(void) { return g_last_error.c_str(); }

const char *dfs_status_name(dfs_status status)
{
  switch (status)
  {
    case DFS_OK:
      return "ok";
    case DFS_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    default:
      return to_string(static_cast<ErrorCode>(status));
  }
}

void dfs_ip_options_default(dfs_ip_options *opt)
{
  if (!opt)
  {
    return;
  }
  opt->alpha = 1e-3;
  opt->tau = 0.0;
  opt->grad_tol = 0.0;
  opt->max_iters = 10000;
  opt->solver = DFS_SOLVER_CLOSED_FORM;
}

}  // extern "C"

// Null-pointer checks report DFS_ERR_INVALID_ARGUMENT.
#define DFS_REQUIRE_ARG(cond, msg)                   \
  do                                                 \
  {                                                  \
    if (!(cond))                                     \
    {                                                \
      return record(DFS_ERR_INVALID_ARGUMENT, (msg)); \
    }                                                \
  } while (0)

extern "C" {

dfs_status dfs_solve_point(const double *values, int n, const dfs_ip_options *opt, double *du_out,
                           double *functional_out)
{
  DFS_REQUIRE_ARG(values && du_out, "values and du_out are required");
  return guarded([&] {
    ip::SolverKind solver;
    const auto cfg = to_config(opt, solver);
    const ip::DifferenceSystem sys(n);
    const auto rhs = ip::assemble_rhs(sys, std::span<const double>(values, n));
    std::vector<double> du;
    if (solver == ip::SolverKind::Gradient)
    {
      du = ip::solve_point_gradient(sys, rhs.f, cfg).du;
    }
    else
    {
      du = ip::solve_point_closed_form(sys, rhs.f, cfg.alpha);
    }
    std::copy(du.begin(), du.end(), du_out);
    if (functional_out)
    {
      *functional_out = ip::functional_value(sys, rhs.f, du, cfg.alpha);
    }
  });
}

dfs_status dfs_normal_solution(const double *true_errors, int n, double *du_out, double *shift_out)
{
  DFS_REQUIRE_ARG(true_errors && du_out && n > 0, "true_errors, du_out and n > 0 are required");
  return guarded([&] {
    const auto ns = ip::normal_solution_oracle(std::span<const double>(true_errors, n));
    std::copy(ns.du.begin(), ns.du.end(), du_out);
    if (shift_out)
    {
      *shift_out = ns.shift;
    }
  });
}

dfs_status dfs_ensemble_create(int nx, int ny, int nvars, dfs_ensemble **out)
{
  DFS_REQUIRE_ARG(out, "out is required");
  DFS_REQUIRE_ARG(nvars >= 1 && nvars <= 4, "nvars must be 1..4");
  *out = nullptr;
  return guarded([&] {
    static const char *names[] = {"rho", "U", "V", "P"};
    std::vector<std::string> vars(names, names + nvars);
    *out = new dfs_ensemble{SolutionEnsemble(Grid2D::unit_square(nx, ny), vars)};
  });
}

void dfs_ensemble_destroy(dfs_ensemble *e) { delete e; }

dfs_status dfs_ensemble_add(dfs_ensemble *e, const char *label, const double *values,
                            size_t length)
{
  DFS_REQUIRE_ARG(e && label && values, "ensemble, label and values are required");
  return guarded([&] { e->ensemble.add(label, std::vector<double>(values, values + length)); });
}

dfs_status dfs_ensemble_size(const dfs_ensemble *e, size_t *size_out, size_t *length_out)
{
  DFS_REQUIRE_ARG(e, "ensemble is required");
  if (size_out)
  {
    *size_out = e->ensemble.size();
  }
  if (length_out)
  {
    *length_out = e->ensemble.vector_length();
  }
  return DFS_OK;
}

dfs_status dfs_estimate_solve(const dfs_ensemble *e, const dfs_ip_options *opt, dfs_estimate **out)
{
  DFS_REQUIRE_ARG(e && out, "ensemble and out are required");
  *out = nullptr;
  return guarded([&] {
    ip::SolverKind solver;
    const auto cfg = to_config(opt, solver);
    *out = new dfs_estimate{ip::solve_field(e->ensemble, cfg, solver)};
  });
}

void dfs_estimate_destroy(dfs_estimate *est) { delete est; }

dfs_status dfs_estimate_get(const dfs_estimate *est, size_t solution, double *out, size_t length)
{
  DFS_REQUIRE_ARG(est && out, "estimate and out are required");
  DFS_REQUIRE_ARG(solution < est->estimate.solutions(), "solution index out of range");
  DFS_REQUIRE_ARG(length == est->estimate.M, "length must equal the vector length");
  const auto v = est->estimate.estimate(solution);
  std::copy(v.begin(), v.end(), out);
  return DFS_OK;
}

dfs_status dfs_effectivity_index(const double *est, const double *truth, size_t length,
                                 double cell_area, double *out)
{
  DFS_REQUIRE_ARG(est && truth && out, "est, truth and out are required");
  return guarded([&] {
    *out = metrics::effectivity_index({est, length}, {truth, length}, cell_area);
  });
}

dfs_status dfs_relative_accuracy(const double *est, const double *truth, size_t length,
                                 double cell_area, double *out)
{
  DFS_REQUIRE_ARG(est && truth && out, "est, truth and out are required");
  return guarded([&] {
    *out = metrics::relative_accuracy({est, length}, {truth, length}, cell_area);
  });
}

dfs_status dfs_pearson(const double *a, const double *b, size_t length, double *out)
{
  DFS_REQUIRE_ARG(a && b && out, "a, b and out are required");
  return guarded([&] { *out = metrics::pearson_correlation({a, length}, {b, length}); });
}

dfs_status dfs_oblique_beta(double mach, double theta, double gamma, double *beta_out)
{
  DFS_REQUIRE_ARG(beta_out, "beta_out is required");
  return guarded([&] { *beta_out = analytic::oblique_beta(mach, theta, gamma); });
}

dfs_status dfs_oblique_shock(const dfs_primitive *upstream, double theta, dfs_shock_side side,
                             double gamma, dfs_shock *out)
{
  DFS_REQUIRE_ARG(upstream && out, "upstream and out are required");
  return guarded([&] {
    const gas::Primitive up{upstream->rho, upstream->u, upstream->v, upstream->p};
    const auto s = analytic::oblique_shock(
        up, theta, side == DFS_SHOCK_LEFT ? analytic::ShockSide::Left : analytic::ShockSide::Right,
        gamma);
    out->downstream = {s.downstream.rho, s.downstream.u, s.downstream.v, s.downstream.p};
    out->beta = s.beta;
    out->line_angle = s.line_angle;
    out->mach_up = s.mach_up;
  });
}

dfs_status dfs_march(const char *flow_case, int nx, int ny, const char *scheme, double cfl,
                     double steady_tol, long max_steps, double *fields_out,
                     dfs_run_summary *summary_out)
{
  DFS_REQUIRE_ARG(flow_case && scheme, "case and scheme are required");
  return guarded([&] {
    FlowCase c;
    switch (case_from_string(flow_case))
    {
      case CaseId::EdneyI:
        c = FlowCase::edney_i(nx, ny);
        break;
      case CaseId::EdneyVI:
        c = FlowCase::edney_vi(nx, ny);
        break;
      case CaseId::FreeStream:
        c = FlowCase::free_stream(nx, ny);
        break;
    }
    euler::MarchOptions opt;
    opt.cfl = cfl;
    opt.steady_tol = steady_tol;
    opt.max_steps = max_steps;
    opt.record_history = false;
    const auto r = euler::march_to_steady(c, euler::SchemeSpec::from_label(scheme), opt);
    if (fields_out)
    {
      const auto v = vectorize(r.fields);
      std::copy(v.begin(), v.end(), fields_out);
    }
    if (summary_out)
    {
      summary_out->steps = r.steps;
      summary_out->converged = r.converged ? 1 : 0;
      summary_out->final_residual = r.final_residual;
      summary_out->wall_seconds = r.wall_seconds;
    }
  });
}

dfs_status dfs_scalar_sweep(const double *true_errors, int n, const double *alphas, int count,
                            const dfs_ip_options *opt, const char *csv_path, double *du_out,
                            dfs_sweep_summary *summary_out)
{
  DFS_REQUIRE_ARG(true_errors && alphas && n > 0 && count > 0,
                  "true_errors, alphas and positive sizes are required");
  return guarded([&] {
    ip::SolverKind solver;
    const auto cfg = to_config(opt, solver);
    const auto s = harness::run_scalar_sweep(std::vector<double>(true_errors, true_errors + n),
                                             std::vector<double>(alphas, alphas + count), cfg,
                                             solver);
    if (csv_path)
    {
      harness::write_sweep_csv(csv_path, s);
    }
    if (du_out)
    {
      for (std::size_t a = 0; a < s.records.size(); ++a)
      {
        std::copy(s.records[a].du.begin(), s.records[a].du.end(),
                  du_out + a * static_cast<std::size_t>(n));
      }
    }
    if (summary_out)
    {
      summary_out->plateau_variation = s.plateau_variation;
      summary_out->shift_at_reference = s.shift_at_reference;
      summary_out->endpoint_ratio = s.endpoint_ratio;
    }
  });
}

dfs_status dfs_experiment_load(const char *config_path, dfs_experiment **out)
{
  DFS_REQUIRE_ARG(config_path && out, "config_path and out are required");
  *out = nullptr;
  return guarded([&] { *out = new dfs_experiment{harness::load_config(config_path)}; });
}

dfs_status dfs_experiment_parse(const char *config_text, dfs_experiment **out)
{
  DFS_REQUIRE_ARG(config_text && out, "config_text and out are required");
  *out = nullptr;
  return guarded([&] { *out = new dfs_experiment{harness::parse_config(config_text)}; });
}

void dfs_experiment_destroy(dfs_experiment *x) { delete x; }

dfs_status dfs_experiment_set_output(dfs_experiment *x, const char *dir)
{
  DFS_REQUIRE_ARG(x && dir && *dir, "experiment and a non-empty directory are required");
  x->config.output = dir;
  return DFS_OK;
}

dfs_status dfs_experiment_run(dfs_experiment *x)
{
  DFS_REQUIRE_ARG(x, "experiment is required");
  return guarded([&] {
    harness::run_experiment(x->config);
    refresh_summary(x);
  });
}

dfs_status dfs_experiment_report(dfs_experiment *x)
{
  DFS_REQUIRE_ARG(x, "experiment is required");
  return guarded([&] {
    harness::report_experiment(x->config);
    refresh_summary(x);
  });
}

dfs_status dfs_experiment_dump(dfs_experiment *x, const char *kind)
{
  DFS_REQUIRE_ARG(x && kind, "experiment and kind are required");
  return guarded([&] { harness::emit_plot_data(x->config, harness::plot_kind_from_string(kind)); });
}

const char *dfs_experiment_summary(const dfs_experiment *x)
{
  return x ? x->summary.c_str() : "{}";
}

}  // extern "C"
