// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "diffest/error.hpp"
#include "diffest/metrics.hpp"

using namespace diffest;
using namespace diffest::metrics;

TEST_CASE("norms and indices on small vectors")
{
  const std::vector<double> truth = {3.0, 4.0};
  const std::vector<double> est = {0.0, 5.0};
  CHECK(l2_norm(truth) == doctest::Approx(5.0));
  CHECK(l2_norm(truth, 0.25) == doctest::Approx(2.5));
  CHECK(effectivity_index(est, truth) == doctest::Approx(1.0));
  CHECK(relative_accuracy(est, truth) == doctest::Approx(std::sqrt(10.0) / 5.0));
}

TEST_CASE("cell area cancels in the ratios")
{
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> a(50), b(50);
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    a[k] = g(rng);
    b[k] = g(rng);
  }
  CHECK(effectivity_index(a, b, 1e-4) == doctest::Approx(effectivity_index(a, b)));
  CHECK(relative_accuracy(a, b, 3.0) == doctest::Approx(relative_accuracy(a, b)));
}

TEST_CASE("zero truth is degenerate")
{
  const std::vector<double> z = {0.0, 0.0};
  const std::vector<double> e = {1.0, 0.0};
  try
  {
    effectivity_index(e, z);
    FAIL("expected an error");
  }
  catch (const Error &err)
  {
    CHECK(err.code() == ErrorCode::Degenerate);
  }
  CHECK_THROWS_AS(relative_accuracy(e, z), Error);
  CHECK_THROWS_AS(effectivity_index(e, std::vector<double>{1.0}), Error);

  const auto rep = build_report({"a", "b"}, std::vector<double>{1, 1, 1, 1},
                                std::vector<double>{1, 2, 0, 0}, 1.0, "rho", 2, 1);
  CHECK_FALSE(rep.record("a").degenerate);
  CHECK(rep.record("b").degenerate);
  CHECK(std::isnan(rep.record("b").effectivity));
  CHECK_THROWS_AS(rep.record("c"), Error);
}

TEST_CASE("normal-solution estimates respect the triangle-inequality bounds")
{
  std::mt19937 rng(8);
  std::normal_distribution<double> g;
  const std::size_t n = 5, M = 40;
  std::vector<double> e(n * M), mean(M, 0.0), est(n * M);
  for (auto &x : e)
  {
    x = g(rng) + 0.3;
  }
  for (std::size_t m = 0; m < M; ++m)
  {
    for (std::size_t j = 0; j < n; ++j)
    {
      mean[m] += e[j * M + m] / n;
    }
  }
  for (std::size_t j = 0; j < n; ++j)
  {
    for (std::size_t m = 0; m < M; ++m)
    {
      est[j * M + m] = e[j * M + m] - mean[m];
    }
  }
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < n; ++j)
  {
    labels.push_back("s" + std::to_string(j));
  }
  const auto rep = build_report(labels, est, e, 0.5, "rho", 8, 5);
  for (std::size_t j = 0; j < n; ++j)
  {
    const auto &r = rep.records[j];
    const auto [lo, hi] = effectivity_bounds(r.true_norm, l2_norm(mean, 0.5));
    CHECK(r.effectivity >= lo - 1e-12);
    CHECK(r.effectivity <= hi + 1e-12);
    CHECK(r.relative_accuracy == doctest::Approx(l2_norm(mean, 0.5) / r.true_norm));
  }
}

TEST_CASE("pooled effectivity of the three-solution example")
{
  const std::vector<double> e = {1.0, -2.0, 3.0};
  const std::vector<double> du = {1.0 / 3.0, -8.0 / 3.0, 7.0 / 3.0};
  CHECK(averaged_effectivity(du, e) == doctest::Approx(0.951).epsilon(1e-3));
  CHECK(relative_accuracy(du, e) == doctest::Approx(0.309).epsilon(1e-3));
}

TEST_CASE("pearson correlation")
{
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {2, 4, 6, 8};
  const std::vector<double> c = {4, 3, 2, 1};
  CHECK(pearson_correlation(a, b) == doctest::Approx(1.0));
  CHECK(pearson_correlation(a, c) == doctest::Approx(-1.0));
  CHECK(pearson_correlation(a, std::vector<double>{1, -1, -1, 1}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(pearson_correlation(a, std::vector<double>{1, 1, 1, 1}), Error);
}
