// SPDX-License-Identifier: Apache-2.0

#include "diffest/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "diffest/error.hpp"

namespace diffest::ip
{

namespace
{

double norm2(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v)
  {
    s += x * x;
  }
  return std::sqrt(s);
}

}  // namespace

DifferenceSystem::DifferenceSystem(int n) : n_(n)
{
  require(n >= 3, ErrorCode::Underdetermined,
          "the difference system needs at least 3 solutions, got " + std::to_string(n));
  pairs_.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int j = 0; j < n; ++j)
  {
    for (int k = j + 1; k < n; ++k)
    {
      pairs_.emplace_back(j, k);
    }
  }
}

double DifferenceSystem::entry(int row, int col) const
{
  const auto &[j, k] = pairs_.at(row);
  require(col >= 0 && col < n_, ErrorCode::Structural, "column out of range");
  return col == j ? 1.0 : (col == k ? -1.0 : 0.0);
}

std::vector<double> DifferenceSystem::apply(std::span<const double> du) const
{
  require(du.size() == static_cast<std::size_t>(n_), ErrorCode::Structural,
          "candidate length does not match the solution count");
  std::vector<double> out(pairs_.size());
  for (std::size_t r = 0; r < pairs_.size(); ++r)
  {
    out[r] = du[pairs_[r].first] - du[pairs_[r].second];
  }
  return out;
}

std::vector<double> DifferenceSystem::apply_transpose(std::span<const double> r) const
{
  require(r.size() == pairs_.size(), ErrorCode::Structural,
          "residual length does not match the pair count");
  std::vector<double> out(n_, 0.0);
  for (std::size_t row = 0; row < pairs_.size(); ++row)
  {
    out[pairs_[row].first] += r[row];
    out[pairs_[row].second] -= r[row];
  }
  return out;
}

std::vector<double> DifferenceSystem::dense() const
{
  std::vector<double> d(pairs_.size() * n_, 0.0);
  for (std::size_t row = 0; row < pairs_.size(); ++row)
  {
    d[row * n_ + pairs_[row].first] = 1.0;
    d[row * n_ + pairs_[row].second] = -1.0;
  }
  return d;
}

PointRHS assemble_rhs(const DifferenceSystem &sys, std::span<const double> point_values)
{
  require(point_values.size() == static_cast<std::size_t>(sys.solutions()),
          ErrorCode::Structural, "point values do not match the solution count");
  PointRHS rhs;
  rhs.f.resize(sys.pairs());
  for (int r = 0; r < sys.pairs(); ++r)
  {
    const auto &[j, k] = sys.pair(r);
    rhs.f[r] = point_values[j] - point_values[k];
  }
  return rhs;
}

PointRHS assemble_rhs(const DifferenceSystem &sys, const SolutionEnsemble &ensemble,
                      std::size_t m)
{
  require(ensemble.size() == static_cast<std::size_t>(sys.solutions()), ErrorCode::Structural,
          "ensemble size does not match the difference system");
  require(m < ensemble.vector_length(), ErrorCode::Structural, "flat index out of range");
  PointRHS rhs;
  rhs.m = m;
  rhs.f.resize(sys.pairs());
  for (int r = 0; r < sys.pairs(); ++r)
  {
    const auto &[j, k] = sys.pair(r);
    rhs.f[r] = ensemble.value(j, m) - ensemble.value(k, m);
  }
  return rhs;
}

void IPConfig::validate() const
{
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::Config, "alpha must be positive");
  require(!tau || (*tau > 0.0 && std::isfinite(*tau)), ErrorCode::Config,
          "tau must be positive");
  require(max_iters >= 1, ErrorCode::Config, "max_iters must be at least 1");
  require(!grad_tol || *grad_tol > 0.0, ErrorCode::Config, "grad_tol must be positive");
}

const char *to_string(SolverKind kind)
{
  return kind == SolverKind::Gradient ? "gradient" : "closed_form";
}

SolverKind solver_from_string(const std::string &name)
{
  if (name == "gradient")
  {
    return SolverKind::Gradient;
  }
  if (name == "closed_form" || name == "closed-form")
  {
    return SolverKind::ClosedForm;
  }
  fail(ErrorCode::Config, "unknown solver '" + name + "' (expected gradient or closed_form)");
}

double functional_value(const DifferenceSystem &sys, std::span<const double> f,
                        std::span<const double> du, double alpha)
{
  require(f.size() == static_cast<std::size_t>(sys.pairs()), ErrorCode::Structural,
          "rhs length does not match the pair count");
  const auto Ddu = sys.apply(du);
  double misfit = 0.0;
  for (std::size_t r = 0; r < Ddu.size(); ++r)
  {
    const double d = Ddu[r] - f[r];
    misfit += d * d;
  }
  double reg = 0.0;
  for (double x : du)
  {
    reg += x * x;
  }
  return 0.5 * misfit + 0.5 * alpha * reg;
}

std::vector<double> functional_gradient(const DifferenceSystem &sys, std::span<const double> f,
                                        std::span<const double> du, double alpha)
{
  require(f.size() == static_cast<std::size_t>(sys.pairs()), ErrorCode::Structural,
          "rhs length does not match the pair count");
  auto res = sys.apply(du);
  for (std::size_t r = 0; r < res.size(); ++r)
  {
    res[r] -= f[r];
  }
  auto g = sys.apply_transpose(res);
  for (std::size_t j = 0; j < g.size(); ++j)
  {
    g[j] += alpha * du[j];
  }
  return g;
}

PointSolution solve_point_gradient(const DifferenceSystem &sys, std::span<const double> f,
                                   const IPConfig &cfg)
{
  cfg.validate();
  const int n = sys.solutions();
  const double tau = cfg.step_length(n);
  const double tol = cfg.gradient_tolerance(norm2(f));

  PointSolution out;
  out.du.assign(n, cfg.init == InitialGuess::Constant ? cfg.init_value : 0.0);
  out.diag.converged = false;
  int it = 0;
  auto g = functional_gradient(sys, f, out.du, cfg.alpha);
  double gn = norm2(g);
  while (gn > tol && it < cfg.max_iters)
  {
    for (int j = 0; j < n; ++j)
    {
      out.du[j] -= tau * g[j];
    }
    ++it;
    g = functional_gradient(sys, f, out.du, cfg.alpha);
    gn = norm2(g);
    if (!std::isfinite(gn))
    {
      break;
    }
  }
  out.diag.iterations = it;
  out.diag.grad_norm = gn;
  out.diag.converged = gn <= tol;
  out.diag.functional = functional_value(sys, f, out.du, cfg.alpha);
  return out;
}

// D^T D = n I - 1 1^T: eigenvalue n on vectors with zero mean, 0 on constants. D^T f
// has zero mean for every f, so the solve reduces to a scaling by 1 / (n + alpha). The
// constant component of the computed D^T f is pure rounding and is removed instead of
// being divided by alpha.
struct ClosedFormSolver::Impl
{
  const DifferenceSystem *sys;
  double scale;
};

ClosedFormSolver::ClosedFormSolver(const DifferenceSystem &sys, double alpha)
    : impl_(std::make_unique<Impl>())
{
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::Config,
          "closed-form solve needs alpha > 0 (D^T D is singular)");
  impl_->sys = &sys;
  impl_->scale = 1.0 / (sys.solutions() + alpha);
}

ClosedFormSolver::~ClosedFormSolver() = default;
ClosedFormSolver::ClosedFormSolver(ClosedFormSolver &&) noexcept = default;
ClosedFormSolver &ClosedFormSolver::operator=(ClosedFormSolver &&) noexcept = default;

std::vector<double> ClosedFormSolver::solve(std::span<const double> f) const
{
  auto x = impl_->sys->apply_transpose(f);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (auto &v : x)
  {
    v = (v - mean) * impl_->scale;
  }
  return x;
}

std::vector<double> solve_point_closed_form(const DifferenceSystem &sys,
                                            std::span<const double> f, double alpha)
{
  return ClosedFormSolver(sys, alpha).solve(f);
}

FieldSet ErrorEstimate::as_fields(std::size_t j) const
{
  require(j < solutions(), ErrorCode::Structural, "solution index out of range");
  std::vector<std::string> tags;
  for (const auto &v : variables)
  {
    tags.push_back("err:" + v);
  }
  return devectorize(estimate(j), grid, tags, labels[j]);
}

ErrorEstimate solve_field(const SolutionEnsemble &ensemble, const IPConfig &cfg,
                          SolverKind solver)
{
  cfg.validate();
  ensemble.require_solvable();
  const DifferenceSystem sys(static_cast<int>(ensemble.size()));
  const std::size_t n = ensemble.size();
  const std::size_t M = ensemble.vector_length();

  ErrorEstimate est;
  est.grid = ensemble.grid();
  est.variables = ensemble.variables();
  est.labels = ensemble.labels();
  est.M = M;
  est.estimates.assign(n * M, 0.0);
  est.alpha_used = cfg.alpha;
  est.solver = solver;
  est.functional.assign(M, 0.0);
  est.iterations.assign(M, 0);

  std::optional<ClosedFormSolver> direct;
  if (solver == SolverKind::ClosedForm)
  {
    direct.emplace(sys, cfg.alpha);
  }
  for (std::size_t m = 0; m < M; ++m)
  {
    const auto rhs = assemble_rhs(sys, ensemble, m);
    std::vector<double> du;
    if (direct)
    {
      du = direct->solve(rhs.f);
      est.functional[m] = functional_value(sys, rhs.f, du, cfg.alpha);
    }
    else
    {
      auto sol = solve_point_gradient(sys, rhs.f, cfg);
      du = std::move(sol.du);
      est.functional[m] = sol.diag.functional;
      est.iterations[m] = sol.diag.iterations;
      est.nonconverged += sol.diag.converged ? 0 : 1;
    }
    for (std::size_t j = 0; j < n; ++j)
    {
      est.estimates[j * M + m] = du[j];
    }
  }
  return est;
}

NormalSolution normal_solution_oracle(std::span<const double> true_errors)
{
  require(!true_errors.empty(), ErrorCode::Structural, "empty error vector");
  const double mean = std::accumulate(true_errors.begin(), true_errors.end(), 0.0) /
                      static_cast<double>(true_errors.size());
  NormalSolution out;
  out.shift = -mean;
  out.du.reserve(true_errors.size());
  for (double e : true_errors)
  {
    out.du.push_back(e - mean);
  }
  return out;
}

std::vector<SweepRecord> alpha_sweep(const DifferenceSystem &sys, std::span<const double> f,
                                     std::span<const double> alphas, const IPConfig &cfg,
                                     SolverKind solver, std::span<const double> truth)
{
  require(truth.empty() || truth.size() == static_cast<std::size_t>(sys.solutions()),
          ErrorCode::Structural, "truth length does not match the solution count");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int n = sys.solutions();
  std::vector<SweepRecord> out;
  double prev = 0.0;
  for (double alpha : alphas)
  {
    require(alpha > 0.0, ErrorCode::Config, "sweep values of alpha must be positive");
    require(alpha >= prev, ErrorCode::Config, "sweep values of alpha must be ascending");
    prev = alpha;

    SweepRecord rec;
    rec.alpha = alpha;
    if (solver == SolverKind::ClosedForm)
    {
      rec.du = solve_point_closed_form(sys, f, alpha);
    }
    else
    {
      IPConfig c = cfg;
      c.alpha = alpha;
      auto sol = solve_point_gradient(sys, f, c);
      rec.du = std::move(sol.du);
      rec.converged = sol.diag.converged;
    }
    rec.functional = functional_value(sys, f, rec.du, alpha);
    double abs_sum = 0.0;
    for (double x : rec.du)
    {
      abs_sum += std::abs(x);
    }
    rec.mean_abs_error = abs_sum / n;
    rec.effectivity = nan;
    rec.shift = nan;
    if (!truth.empty())
    {
      rec.effectivity = norm2(rec.du) / norm2(truth);
      double s = 0.0;
      for (int j = 0; j < n; ++j)
      {
        s += rec.du[j] - truth[j];
      }
      rec.shift = s / n;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SweepRecord> alpha_sweep(const SolutionEnsemble &ensemble,
                                     std::span<const double> alphas, const IPConfig &cfg,
                                     SolverKind solver, std::span<const double> truth)
{
  const std::size_t n = ensemble.size();
  const std::size_t M = ensemble.vector_length();
  require(truth.empty() || truth.size() == n * M, ErrorCode::Structural,
          "truth must be n x M");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRecord> out;
  double prev = 0.0;
  for (double alpha : alphas)
  {
    require(alpha > 0.0 && alpha >= prev, ErrorCode::Config,
            "sweep values of alpha must be positive and ascending");
    prev = alpha;
    IPConfig c = cfg;
    c.alpha = alpha;
    const auto est = solve_field(ensemble, c, solver);
    SweepRecord rec;
    rec.alpha = alpha;
    rec.functional = std::accumulate(est.functional.begin(), est.functional.end(), 0.0);
    double abs_sum = 0.0;
    for (double x : est.estimates)
    {
      abs_sum += std::abs(x);
    }
    rec.mean_abs_error = abs_sum / static_cast<double>(n * M);
    rec.converged = est.nonconverged == 0;
    rec.effectivity = nan;
    rec.shift = nan;
    if (!truth.empty())
    {
      rec.effectivity = norm2(est.estimates) / norm2(truth);
      double s = 0.0;
      for (std::size_t q = 0; q < n * M; ++q)
      {
        s += est.estimates[q] - truth[q];
      }
      rec.shift = s / static_cast<double>(n * M);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<double> log_alpha_grid(double lo, double hi, int points)
{
  require(lo > 0.0 && hi >= lo && points >= 1, ErrorCode::Config,
          "alpha grid needs 0 < lo <= hi and at least one point");
  std::vector<double> out;
  if (points == 1)
  {
    return {lo};
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int p = 0; p < points; ++p)
  {
    out.push_back(std::pow(10.0, a + (b - a) * p / (points - 1)));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace diffest::ip
