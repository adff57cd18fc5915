// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "diffest/error.hpp"
#include "diffest/shock.hpp"

using namespace diffest;
using namespace diffest::analytic;
using gas::deg;

namespace
{

// Independent weak-branch root: plain bisection on the explicit theta-beta relation
// between the Mach angle and a fixed 65 degrees (below the detachment angle at M = 4).
double reference_beta(double mach, double theta)
{
  const double g = gas::kGamma;
  auto f = [&](double b)
  {
    const double m2s = mach * mach * std::sin(b) * std::sin(b);
    return 2.0 / std::tan(b) * (m2s - 1.0) / (mach * mach * (g + std::cos(2 * b)) + 2.0) -
           std::tan(theta);
  };
  double lo = std::asin(1.0 / mach) + 1e-12;
  double hi = deg(65.0);
  for (int i = 0; i < 200; ++i)
  {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("weak shock angles at Mach 4")
{
  CHECK(gas::to_deg(oblique_beta(4.0, deg(20.0))) == doctest::Approx(32.46).epsilon(1e-3));
  CHECK(gas::to_deg(oblique_beta(4.0, deg(10.0))) == doctest::Approx(22.23).epsilon(1e-3));
  for (const double m : {1.5, 2.0, 3.0, 4.0, 6.0})
  {
    for (const double t : {2.0, 5.0, 10.0, 15.0})
    {
      if (t >= gas::to_deg(detachment_limit(m).theta))
      {
        continue;
      }
      CHECK(oblique_beta(m, deg(t)) == doctest::Approx(reference_beta(m, deg(t))).epsilon(1e-9));
      CHECK(std::abs(theta_beta_residual(m, deg(t), oblique_beta(m, deg(t)))) < 1e-10);
    }
  }
}

TEST_CASE("zero deflection gives the Mach angle")
{
  CHECK(oblique_beta(2.0, 0.0) == doctest::Approx(std::asin(0.5)));
}

TEST_CASE("deflection beyond the detachment limit throws Detached")
{
  const auto lim = detachment_limit(4.0);
  CHECK(gas::to_deg(lim.theta) == doctest::Approx(38.77).epsilon(1e-3));
  CHECK(deflection_from_beta(4.0, lim.beta) == doctest::Approx(lim.theta));
  try
  {
    oblique_beta(4.0, deg(45.0));
    FAIL("expected an error");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::Detached);
  }
  CHECK_THROWS_AS(oblique_beta(0.8, deg(5.0)), Error);
}

TEST_CASE("normal shock density ratio")
{
  CHECK(normal_shock_density_ratio(4.0) == doctest::Approx(38.4 / 8.4));
  CHECK(normal_shock_density_ratio(1.0) == doctest::Approx(1.0));
  CHECK(normal_shock_density_ratio(1e4) == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("oblique shock states satisfy the jump conditions")
{
  const auto up = gas::free_stream(4.0);
  for (const auto side : {ShockSide::Left, ShockSide::Right})
  {
    for (const double t : {5.0, 15.0, 20.0, 30.0})
    {
      const auto s = oblique_shock(up, deg(t), side);
      CHECK(rh_residuals(s).max() < 1e-12);
      const double turn = gas::flow_angle(s.downstream) - gas::flow_angle(up);
      CHECK(turn == doctest::Approx(side == ShockSide::Left ? deg(t) : -deg(t)).epsilon(1e-10));
      CHECK(s.downstream.p > up.p);
      CHECK(gas::mach(s.downstream) < gas::mach(up));
      const double mn = s.mach_up * std::sin(s.beta);
      CHECK(s.downstream.rho / up.rho == doctest::Approx(normal_shock_density_ratio(mn)));
    }
  }
  CHECK_THROWS_AS(shock_jump(up, deg(5.0), ShockSide::Left), Error);
}

TEST_CASE("Prandtl-Meyer function and its inverse")
{
  CHECK(prandtl_meyer(1.0) == doctest::Approx(0.0));
  CHECK(gas::to_deg(prandtl_meyer(2.0)) == doctest::Approx(26.38).epsilon(1e-3));
  for (const double m : {1.01, 1.5, 2.0, 3.7, 8.0})
  {
    CHECK(inverse_prandtl_meyer(prandtl_meyer(m)) == doctest::Approx(m).epsilon(1e-10));
  }
  CHECK_THROWS_AS(prandtl_meyer(0.5), Error);
}

TEST_CASE("isentropic expansion conserves entropy and enthalpy")
{
  const auto up = gas::free_stream(3.0);
  const auto down = isentropic_expansion(up, -deg(10.0));
  CHECK(gas::mach(down) > 3.0);
  CHECK(gas::flow_angle(down) == doctest::Approx(-deg(10.0)));
  CHECK(down.p / std::pow(down.rho, gas::kGamma) ==
        doctest::Approx(up.p / std::pow(up.rho, gas::kGamma)).epsilon(1e-12));
  CHECK(gas::total_enthalpy(down) == doctest::Approx(gas::total_enthalpy(up)).epsilon(1e-12));
  CHECK(prandtl_meyer(gas::mach(down)) - prandtl_meyer(3.0) ==
        doctest::Approx(deg(10.0)).epsilon(1e-10));
}
