// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "diffest/diffest.h"

TEST_CASE("version and status names")
{
  CHECK(std::string(dfs_version()).size() > 0);
  CHECK(std::string(dfs_status_name(DFS_OK)) == "ok");
  CHECK(std::string(dfs_status_name(DFS_ERR_UNDERDETERMINED)) == "underdetermined");
}

TEST_CASE("point solve and normal solution")
{
  dfs_ip_options opt;
  dfs_ip_options_default(&opt);
  CHECK(opt.alpha == 1e-3);
  opt.alpha = 3.0;
  const double u[3] = {1.0, -2.0, 3.0};
  double du[3];
  double functional = -1.0;
  REQUIRE(dfs_solve_point(u, 3, &opt, du, &functional) == DFS_OK);
  CHECK(du[0] == doctest::Approx(1.0 / 6.0));
  CHECK(du[1] == doctest::Approx(-4.0 / 3.0));
  CHECK(du[2] == doctest::Approx(7.0 / 6.0));
  CHECK(functional >= 0.0);

  opt.solver = DFS_SOLVER_GRADIENT;
  double dg[3];
  REQUIRE(dfs_solve_point(u, 3, &opt, dg, nullptr) == DFS_OK);
  CHECK(dg[1] == doctest::Approx(du[1]).epsilon(1e-8));

  double shift = 0.0;
  REQUIRE(dfs_normal_solution(u, 3, du, &shift) == DFS_OK);
  CHECK(shift == doctest::Approx(-2.0 / 3.0));

  CHECK(dfs_solve_point(u, 2, &opt, du, nullptr) == DFS_ERR_UNDERDETERMINED);
  CHECK(std::string(dfs_last_error()).size() > 0);
  CHECK(dfs_solve_point(nullptr, 3, &opt, du, nullptr) == DFS_ERR_INVALID_ARGUMENT);
  opt.alpha = -1.0;
  CHECK(dfs_solve_point(u, 3, &opt, du, nullptr) == DFS_ERR_CONFIG);
}

TEST_CASE("ensemble handles")
{
  dfs_ensemble *e = nullptr;
  REQUIRE(dfs_ensemble_create(2, 2, 1, &e) == DFS_OK);
  const double a[4] = {1, 2, 3, 4};
  const double b[4] = {0, 2, 2, 4};
  const double c[4] = {1, 1, 1, 1};
  CHECK(dfs_ensemble_add(e, "a", a, 4) == DFS_OK);
  CHECK(dfs_ensemble_add(e, "b", b, 4) == DFS_OK);
  CHECK(dfs_ensemble_add(e, "bad", b, 3) == DFS_ERR_STRUCTURAL);

  dfs_ip_options opt;
  dfs_ip_options_default(&opt);
  dfs_estimate *est = nullptr;
  CHECK(dfs_estimate_solve(e, &opt, &est) == DFS_ERR_UNDERDETERMINED);
  CHECK(est == nullptr);

  CHECK(dfs_ensemble_add(e, "c", c, 4) == DFS_OK);
  size_t size = 0, length = 0;
  REQUIRE(dfs_ensemble_size(e, &size, &length) == DFS_OK);
  CHECK(size == 3);
  CHECK(length == 4);
  REQUIRE(dfs_estimate_solve(e, &opt, &est) == DFS_OK);
  std::vector<double> sum(4, 0.0);
  for (size_t j = 0; j < 3; ++j)
  {
    double out[4];
    REQUIRE(dfs_estimate_get(est, j, out, 4) == DFS_OK);
    for (int m = 0; m < 4; ++m)
    {
      sum[m] += out[m];
    }
  }
  for (const double s : sum)
  {
    CHECK(std::abs(s) < 1e-12);
  }
  double out[4];
  CHECK(dfs_estimate_get(est, 3, out, 4) != DFS_OK);
  dfs_estimate_destroy(est);
  dfs_ensemble_destroy(e);
  dfs_ensemble_destroy(nullptr);
}

TEST_CASE("metrics")
{
  const double t[2] = {3.0, 4.0};
  const double e[2] = {0.0, 5.0};
  double v = 0.0;
  REQUIRE(dfs_effectivity_index(e, t, 2, 1.0, &v) == DFS_OK);
  CHECK(v == doctest::Approx(1.0));
  REQUIRE(dfs_relative_accuracy(e, t, 2, 1.0, &v) == DFS_OK);
  CHECK(v == doctest::Approx(std::sqrt(10.0) / 5.0));
  const double z[2] = {0.0, 0.0};
  CHECK(dfs_effectivity_index(e, z, 2, 1.0, &v) == DFS_ERR_DEGENERATE);
  REQUIRE(dfs_pearson(t, e, 2, &v) == DFS_OK);
  CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("shock relations")
{
  const double pi = 3.14159265358979323846;
  double beta = 0.0;
  REQUIRE(dfs_oblique_beta(4.0, 20.0 * pi / 180.0, 1.4, &beta) == DFS_OK);
  CHECK(beta * 180.0 / pi == doctest::Approx(32.46).epsilon(1e-3));
  CHECK(dfs_oblique_beta(4.0, 45.0 * pi / 180.0, 1.4, &beta) == DFS_ERR_DETACHED);

  const dfs_primitive up = {1.0, 1.0, 0.0, 1.0 / (1.4 * 16.0)};
  dfs_shock s;
  REQUIRE(dfs_oblique_shock(&up, 10.0 * pi / 180.0, DFS_SHOCK_RIGHT, 1.4, &s) == DFS_OK);
  CHECK(std::atan2(s.downstream.v, s.downstream.u) == doctest::Approx(-10.0 * pi / 180.0));
  CHECK(s.mach_up == doctest::Approx(4.0));
}

TEST_CASE("march and sweep")
{
  std::vector<double> fields(4 * 12 * 12);
  dfs_run_summary r;
  REQUIRE(dfs_march("FreeStream", 12, 12, "W3", 0.4, 1e-8, 0, fields.data(), &r) == DFS_OK);
  CHECK(r.converged == 1);
  CHECK(fields[0] == doctest::Approx(1.0));
  CHECK(dfs_march("EdneyIV", 12, 12, "W3", 0.4, 1e-8, 0, nullptr, &r) == DFS_ERR_CONFIG);
  CHECK(dfs_march("EdneyI", 12, 12, "W9", 0.4, 1e-8, 0, nullptr, &r) == DFS_ERR_CONFIG);

  const double e[3] = {1.0, -2.0, 3.0};
  const double alphas[3] = {1e-6, 1e-3, 1.0};
  double du[9];
  dfs_sweep_summary s;
  REQUIRE(dfs_scalar_sweep(e, 3, alphas, 3, nullptr, nullptr, du, &s) == DFS_OK);
  CHECK(s.shift_at_reference == doctest::Approx(-2.0 / 3.0).epsilon(1e-3));
  CHECK(s.endpoint_ratio == doctest::Approx(0.75));
  CHECK(du[6] == doctest::Approx(0.75 / 3.0));
}

TEST_CASE("experiment handles")
{
  dfs_experiment *x = nullptr;
  CHECK(dfs_experiment_load("no-such-file.cfg", &x) == DFS_ERR_IO);
  CHECK(x == nullptr);
  CHECK(dfs_experiment_parse("case = EdneyI\nschemes = CIR\n", &x) == DFS_ERR_UNDERDETERMINED);

  REQUIRE(dfs_experiment_parse("case = EdneyVI\nnx = 12\nny = 12\nschemes = CIR, MC-AV2-001, W3\n",
                               &x) == DFS_OK);
  const std::string out = "capi-experiment";
  std::filesystem::remove_all(out);
  REQUIRE(dfs_experiment_set_output(x, out.c_str()) == DFS_OK);
  REQUIRE(dfs_experiment_run(x) == DFS_OK);
  const std::string summary = dfs_experiment_summary(x);
  CHECK(summary.find("\"manifest\"") != std::string::npos);
  CHECK(summary.find("\"reports\"") != std::string::npos);
  CHECK(std::filesystem::exists(out + "/table_ieff.csv"));
  CHECK(dfs_experiment_report(x) == DFS_OK);
  CHECK(dfs_experiment_dump(x, "isolines") == DFS_OK);
  CHECK(dfs_experiment_dump(x, "contours") == DFS_ERR_CONFIG);
  dfs_experiment_destroy(x);
}
