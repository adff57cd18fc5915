// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_INVERSE_HPP
#define DIFFEST_INVERSE_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diffest/field.hpp"

namespace diffest::ip
{

// Pairwise-difference operator D (N x n, N = n(n-1)/2). Row r holds +1 in column j
// and -1 in column k for the r-th pair (j, k), j < k, pairs in lexicographic order.
// D annihilates constants, which is exactly the shift degeneracy of the problem.
class DifferenceSystem
{
public:
  explicit DifferenceSystem(int n);

  int solutions() const { return n_; }
  int pairs() const { return static_cast<int>(pairs_.size()); }
  const std::pair<int, int> &pair(int row) const { return pairs_.at(row); }
  double entry(int row, int col) const;

  std::vector<double> apply(std::span<const double> du) const;           // D du
  std::vector<double> apply_transpose(std::span<const double> r) const;   // D^T r
  std::vector<double> dense() const;                                      // row-major N x n

private:
  int n_;
  std::vector<std::pair<int, int>> pairs_;
};

inline DifferenceSystem build_difference_system(int n)
{
  return DifferenceSystem(n);
}

// Right-hand side at one vectorized position m: f_r = u_m^(j) - u_m^(k).
struct PointRHS
{
  std::vector<double> f;
  std::size_t m = 0;
};

PointRHS assemble_rhs(const DifferenceSystem &sys, const SolutionEnsemble &ensemble,
                      std::size_t m);
PointRHS assemble_rhs(const DifferenceSystem &sys, std::span<const double> point_values);

enum class InitialGuess
{
  Zero,
  Constant  // every component starts at IPConfig::init_value
};

struct IPConfig
{
  double alpha = 1e-3;
  std::optional<double> tau;       // default 1 / (n + alpha)
  int max_iters = 10000;
  std::optional<double> grad_tol;  // default 1e-10 * (1 + |f|)
  InitialGuess init = InitialGuess::Zero;
  double init_value = 0.0;

  void validate() const;
  double step_length(int n) const { return tau ? *tau : 1.0 / (n + alpha); }
  double gradient_tolerance(double rhs_norm) const
  {
    return grad_tol ? *grad_tol : 1e-10 * (1.0 + rhs_norm);
  }
};

enum class SolverKind
{
  Gradient,
  ClosedForm
};

const char *to_string(SolverKind kind);
SolverKind solver_from_string(const std::string &name);

// 1/2 |D du - f|^2 + alpha/2 |du|^2
double functional_value(const DifferenceSystem &sys, std::span<const double> f,
                        std::span<const double> du, double alpha);
// D^T (D du - f) + alpha du
std::vector<double> functional_gradient(const DifferenceSystem &sys, std::span<const double> f,
                                        std::span<const double> du, double alpha);

struct PointDiagnostics
{
  double functional = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct PointSolution
{
  std::vector<double> du;
  PointDiagnostics diag;
};

PointSolution solve_point_gradient(const DifferenceSystem &sys, std::span<const double> f,
                                   const IPConfig &cfg);

// Exact minimizer: (D^T D + alpha I) du = D^T f.
std::vector<double> solve_point_closed_form(const DifferenceSystem &sys,
                                            std::span<const double> f, double alpha);

// (D^T D + alpha I) du = D^T f for many right-hand sides sharing one system.
class ClosedFormSolver
{
public:
  ClosedFormSolver(const DifferenceSystem &sys, double alpha);
  ~ClosedFormSolver();
  ClosedFormSolver(ClosedFormSolver &&) noexcept;
  ClosedFormSolver &operator=(ClosedFormSolver &&) noexcept;

  std::vector<double> solve(std::span<const double> f) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Per-solution, per-point error estimates; entry (j, m) is stored at j * M + m.
struct ErrorEstimate
{
  Grid2D grid;
  std::vector<std::string> variables;
  std::vector<std::string> labels;
  std::size_t M = 0;
  std::vector<double> estimates;
  double alpha_used = 0.0;
  SolverKind solver = SolverKind::ClosedForm;
  std::vector<double> functional;  // per point
  std::vector<int> iterations;     // per point
  std::size_t nonconverged = 0;

  std::size_t solutions() const { return labels.size(); }
  std::span<const double> estimate(std::size_t j) const
  {
    return std::span<const double>(estimates).subspan(j * M, M);
  }
  double at(std::size_t j, std::size_t m) const { return estimates[j * M + m]; }

  // One field set per solution, variable tags "err:<var>".
  FieldSet as_fields(std::size_t j) const;
};

ErrorEstimate solve_field(const SolutionEnsemble &ensemble, const IPConfig &cfg,
                          SolverKind solver);

struct NormalSolution
{
  std::vector<double> du;  // e - mean(e)
  double shift = 0.0;      // -mean(e)
};

NormalSolution normal_solution_oracle(std::span<const double> true_errors);

struct SweepRecord
{
  double alpha = 0.0;
  std::vector<double> du;
  double functional = 0.0;
  double mean_abs_error = 0.0;  // sum |du_j| / n
  double effectivity = 0.0;     // pooled index, NaN without truth
  double shift = 0.0;           // mean(du - e), NaN without truth
  bool converged = true;
};

// Point-wise sweep; `truth` (length n) is optional.
std::vector<SweepRecord> alpha_sweep(const DifferenceSystem &sys, std::span<const double> f,
                                     std::span<const double> alphas, const IPConfig &cfg,
                                     SolverKind solver,
                                     std::span<const double> truth = {});

// Field-level sweep: statistics pooled over all points and solutions. `truth`, when
// given, is n x M in the same layout as ErrorEstimate::estimates.
std::vector<SweepRecord> alpha_sweep(const SolutionEnsemble &ensemble,
                                     std::span<const double> alphas, const IPConfig &cfg,
                                     SolverKind solver,
                                     std::span<const double> truth = {});

// Log-spaced grid of `points` values covering [lo, hi].
std::vector<double> log_alpha_grid(double lo, double hi, int points);

}  // namespace diffest::ip

#endif
