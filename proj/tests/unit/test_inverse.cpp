// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "diffest/error.hpp"
#include "diffest/inverse.hpp"

using namespace diffest;
using namespace diffest::ip;

namespace
{

double norm(const std::vector<double> &v)
{
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double dist(const std::vector<double> &a, const std::vector<double> &b)
{
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    s += (a[k] - b[k]) * (a[k] - b[k]);
  }
  return std::sqrt(s);
}

// (n / (n + alpha)) (e - mean e): exact minimizer for consistent data.
std::vector<double> scaled_normal(const std::vector<double> &e, double alpha)
{
  const double n = static_cast<double>(e.size());
  const double mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
  std::vector<double> out;
  for (const double x : e)
  {
    out.push_back(n / (n + alpha) * (x - mean));
  }
  return out;
}

std::vector<double> random_vector(std::mt19937 &rng, int n, double scale = 1.0)
{
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (auto &x : v)
  {
    x = g(rng);
  }
  return v;
}

}  // namespace

TEST_CASE("difference system rows and normal matrix")
{
  const DifferenceSystem sys(4);
  CHECK(sys.pairs() == 6);
  CHECK(sys.pair(0) == std::pair{0, 1});
  CHECK(sys.pair(2) == std::pair{0, 3});
  CHECK(sys.pair(5) == std::pair{2, 3});
  CHECK(sys.entry(3, 1) == 1.0);
  CHECK(sys.entry(3, 2) == -1.0);
  CHECK(sys.entry(3, 0) == 0.0);

  for (const int n : {3, 5, 13})
  {
    const DifferenceSystem s(n);
    const auto d = s.dense();
    const int rows = s.pairs();
    CHECK(rows == n * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
    {
      for (int b = 0; b < n; ++b)
      {
        double dtd = 0.0;
        for (int r = 0; r < rows; ++r)
        {
          dtd += d[r * n + a] * d[r * n + b];
        }
        CHECK(dtd == (a == b ? n - 1.0 : -1.0));
      }
    }
  }
}

TEST_CASE("fewer than three solutions is underdetermined")
{
  for (const int n : {0, 1, 2})
  {
    try
    {
      DifferenceSystem s(n);
      FAIL("expected an error");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::Underdetermined);
    }
  }
}

TEST_CASE("apply and apply_transpose are adjoint")
{
  std::mt19937 rng(3);
  const DifferenceSystem sys(6);
  const auto x = random_vector(rng, 6);
  const auto y = random_vector(rng, sys.pairs());
  const auto dx = sys.apply(x);
  const auto dty = sys.apply_transpose(y);
  const double lhs = std::inner_product(dx.begin(), dx.end(), y.begin(), 0.0);
  const double rhs = std::inner_product(x.begin(), x.end(), dty.begin(), 0.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("right-hand side from point values")
{
  const DifferenceSystem sys(3);
  const std::vector<double> u = {1.0, -2.0, 3.0};
  const auto rhs = assemble_rhs(sys, u);
  CHECK(rhs.f == std::vector<double>{3.0, -2.0, -5.0});
}

TEST_CASE("gradient matches central finite differences")
{
  std::mt19937 rng(11);
  for (const int n : {3, 5, 8})
  {
    const DifferenceSystem sys(n);
    const auto f = random_vector(rng, sys.pairs());
    const auto du = random_vector(rng, n);
    const double alpha = 0.3;
    const auto g = functional_gradient(sys, f, du, alpha);
    for (int j = 0; j < n; ++j)
    {
      auto p = du;
      auto m = du;
      const double h = 1e-6;
      p[j] += h;
      m[j] -= h;
      const double fd =
          (functional_value(sys, f, p, alpha) - functional_value(sys, f, m, alpha)) / (2 * h);
      CHECK(g[j] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("closed form at alpha = 3 for errors (1, -2, 3)")
{
  const DifferenceSystem sys(3);
  const std::vector<double> e = {1.0, -2.0, 3.0};
  const auto rhs = assemble_rhs(sys, e);
  const auto du = solve_point_closed_form(sys, rhs.f, 3.0);
  CHECK(du[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(du[1] == doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
  CHECK(du[2] == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("closed form equals the scaling law on random consistent systems")
{
  std::mt19937 rng(2024);
  for (const int n : {3, 5, 8, 13})
  {
    const DifferenceSystem sys(n);
    for (int trial = 0; trial < 50; ++trial)
    {
      const auto e = random_vector(rng, n, 2.0);
      const double alpha = std::pow(10.0, std::uniform_real_distribution<double>(-6, 0)(rng));
      const auto f = assemble_rhs(sys, e).f;
      const auto du = solve_point_closed_form(sys, f, alpha);
      CHECK(dist(du, scaled_normal(e, alpha)) <= 1e-10);
    }
  }
}

TEST_CASE("closed form satisfies the regularized normal equations")
{
  std::mt19937 rng(17);
  for (const int n : {3, 6, 13})
  {
    const DifferenceSystem sys(n);
    const auto d = sys.dense();
    for (const double alpha : {1e-6, 1e-3, 0.5, 20.0})
    {
      const auto f = random_vector(rng, sys.pairs());
      const auto du = solve_point_closed_form(sys, f, alpha);
      const auto rhs = sys.apply_transpose(f);
      // Dense (D^T D + alpha I) du, assembled entry by entry.
      for (int a = 0; a < n; ++a)
      {
        double lhs = alpha * du[a];
        for (int b = 0; b < n; ++b)
        {
          double dtd = 0.0;
          for (int r = 0; r < sys.pairs(); ++r)
          {
            dtd += d[r * n + a] * d[r * n + b];
          }
          lhs += dtd * du[b];
        }
        CHECK(lhs == doctest::Approx(rhs[a]).epsilon(1e-12).scale(norm(rhs)));
      }
    }
  }
}

TEST_CASE("gradient descent agrees with the closed form")
{
  std::mt19937 rng(5);
  IPConfig cfg;
  for (const int n : {3, 5, 8, 13})
  {
    const DifferenceSystem sys(n);
    for (int trial = 0; trial < 20; ++trial)
    {
      // Inconsistent data exercises more than one descent step.
      const auto f = random_vector(rng, sys.pairs());
      const auto sol = solve_point_gradient(sys, f, cfg);
      const auto exact = solve_point_closed_form(sys, f, cfg.alpha);
      CHECK(sol.diag.converged);
      CHECK(dist(sol.du, exact) <= 10 * cfg.gradient_tolerance(norm(f)));
      CHECK(sol.diag.functional == doctest::Approx(functional_value(sys, f, exact, cfg.alpha)));
    }
  }
}

TEST_CASE("gradient descent reports non-convergence honestly")
{
  const DifferenceSystem sys(4);
  IPConfig cfg;
  cfg.max_iters = 1;
  cfg.tau = 0.01;
  const auto sol = solve_point_gradient(sys, assemble_rhs(sys, std::vector<double>{1, 2, 3, 5}).f,
                                        cfg);
  CHECK_FALSE(sol.diag.converged);
  CHECK(sol.diag.iterations == 1);
}

TEST_CASE("estimates sum to zero and shrink with alpha")
{
  std::mt19937 rng(9);
  const DifferenceSystem sys(7);
  const auto f = random_vector(rng, sys.pairs());
  double previous = INFINITY;
  for (const double alpha : {1e-6, 1e-3, 1e-1, 1.0, 10.0})
  {
    const auto du = solve_point_closed_form(sys, f, alpha);
    const double biggest = std::abs(*std::max_element(
        du.begin(), du.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
    CHECK(std::abs(std::accumulate(du.begin(), du.end(), 0.0)) <= 1e-12 * biggest);
    CHECK(norm(du) < previous);
    previous = norm(du);
  }
}

TEST_CASE("shift invariance is exact for representable data")
{
  // Dyadic values and a power-of-two shift keep every difference exact.
  const auto g = Grid2D::unit_square(2, 2);
  SolutionEnsemble a(g, {"rho"});
  SolutionEnsemble b(g, {"rho"});
  const std::vector<std::vector<double>> sols = {
      {1.0, 0.5, 0.25, 2.0}, {1.5, 0.75, -0.5, 2.25}, {0.75, 0.125, 0.0, 1.0}, {2.0, 1.0, 1.0, 1.0}};
  const double c = 8.0;
  for (std::size_t j = 0; j < sols.size(); ++j)
  {
    a.add("s" + std::to_string(j), sols[j]);
    auto shifted = sols[j];
    for (auto &x : shifted)
    {
      x += c;
    }
    b.add("s" + std::to_string(j), shifted);
  }
  for (const auto kind : {SolverKind::ClosedForm, SolverKind::Gradient})
  {
    const auto ea = solve_field(a, IPConfig{}, kind);
    const auto eb = solve_field(b, IPConfig{}, kind);
    CHECK(ea.estimates == eb.estimates);
  }
}

TEST_CASE("relabeling solutions permutes the estimates")
{
  std::mt19937 rng(21);
  const DifferenceSystem sys(5);
  const auto u = random_vector(rng, 5);
  std::vector<int> perm = {3, 0, 4, 1, 2};
  std::vector<double> up(5);
  for (int j = 0; j < 5; ++j)
  {
    up[j] = u[perm[j]];
  }
  const auto du = solve_point_closed_form(sys, assemble_rhs(sys, u).f, 1e-3);
  const auto dup = solve_point_closed_form(sys, assemble_rhs(sys, up).f, 1e-3);
  for (int j = 0; j < 5; ++j)
  {
    CHECK(dup[j] == doctest::Approx(du[perm[j]]).epsilon(1e-12));
  }
}

TEST_CASE("field solve matches per-point solves")
{
  std::mt19937 rng(1);
  const auto g = Grid2D::unit_square(4, 3);
  SolutionEnsemble e(g, {"rho", "P"});
  for (int j = 0; j < 4; ++j)
  {
    e.add("s" + std::to_string(j), random_vector(rng, static_cast<int>(e.vector_length())));
  }
  const auto est = solve_field(e, IPConfig{}, SolverKind::ClosedForm);
  CHECK(est.M == e.vector_length());
  CHECK(est.solutions() == 4);
  CHECK(est.nonconverged == 0);
  const DifferenceSystem sys(4);
  for (const std::size_t m : {std::size_t{0}, std::size_t{7}, e.vector_length() - 1})
  {
    const auto du = solve_point_closed_form(sys, assemble_rhs(sys, e, m).f, 1e-3);
    for (std::size_t j = 0; j < 4; ++j)
    {
      CHECK(est.at(j, m) == doctest::Approx(du[j]).epsilon(1e-12));
    }
  }
  const auto fields = est.as_fields(2);
  CHECK(fields.variables() == std::vector<std::string>{"err:rho", "err:P"});
  CHECK(fields.field("err:P").at(3, 2) == est.at(2, 23));
}

TEST_CASE("normal solution oracle")
{
  const auto ns = normal_solution_oracle(std::vector<double>{1.0, -2.0, 3.0});
  CHECK(ns.du[0] == doctest::Approx(1.0 / 3.0));
  CHECK(ns.du[1] == doctest::Approx(-8.0 / 3.0));
  CHECK(ns.du[2] == doctest::Approx(7.0 / 3.0));
  CHECK(ns.shift == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("scalar sweep recovers the normal-solution statistics")
{
  const DifferenceSystem sys(3);
  const std::vector<double> e = {1.0, -2.0, 3.0};
  const auto f = assemble_rhs(sys, e).f;
  const auto alphas = log_alpha_grid(1e-8, 1.0, 9);
  CHECK(alphas.front() == 1e-8);
  CHECK(alphas.back() == 1.0);
  const auto recs = alpha_sweep(sys, f, alphas, IPConfig{}, SolverKind::ClosedForm, e);
  REQUIRE(recs.size() == 9);
  // Pooled effectivity |e - mean e| / |e| and relative accuracy of the normal solution.
  CHECK(recs[2].effectivity == doctest::Approx(0.951).epsilon(1e-3));
  CHECK(recs[2].shift == doctest::Approx(-2.0 / 3.0).epsilon(1e-6));
  const auto ns = normal_solution_oracle(e);
  CHECK(dist(ns.du, e) / norm(e) == doctest::Approx(0.309).epsilon(1e-3));
  // alpha = 1: shrink factor n / (n + 1).
  CHECK(norm(recs.back().du) / norm(ns.du) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(alpha_sweep(sys, f, std::vector<double>{1e-2, 1e-3}, IPConfig{},
                              SolverKind::ClosedForm),
                  Error);
}

TEST_CASE("configuration validation")
{
  IPConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.alpha = 1e-3;
  cfg.tau = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(solver_from_string("gradient") == SolverKind::Gradient);
  CHECK_THROWS_AS(solver_from_string("newton"), Error);
  const IPConfig d;
  CHECK(d.step_length(3) == doctest::Approx(1.0 / 3.001));
  CHECK(d.gradient_tolerance(1.0) == doctest::Approx(2e-10));
}
