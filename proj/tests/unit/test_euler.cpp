// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diffest/error.hpp"
#include "diffest/euler.hpp"
#include "diffest/region_map.hpp"

using namespace diffest;
using namespace diffest::euler;

namespace
{

constexpr double kPi = std::numbers::pi;

std::vector<SchemeSpec> all_schemes()
{
  std::vector<SchemeSpec> out;
  for (const auto &l : SchemeSpec::labels())
  {
    out.push_back(SchemeSpec::from_label(l));
  }
  return out;
}

gas::Primitive smooth_wave(double x, double y, double t)
{
  return {1.0 + 0.2 * std::sin(2 * kPi * (x + y - 2 * t)), 1.0, 1.0, 1.0};
}

// Mean absolute density error after advecting the periodic wave to t = 0.1.
double wave_error(const SchemeSpec &s, int n)
{
  const auto g = Grid2D::unit_square(n, n);
  BoundaryConditions bc(BoundarySpec::periodic(), g, s.ghost_layers());
  ConservativeField f(g, s.ghost_layers());
  f.fill_interior([](double x, double y) { return smooth_wave(x, y, 0.0); });
  Stepper st(s, bc, g);
  const double T = 0.1;
  const double h = 1.0 / n;
  // Fifth-order runs shrink dt so the third-order time error stays below the spatial one.
  double dt = s.scheme == Scheme::WENO5 ? 0.4 * std::pow(h, 5.0 / 3.0) / std::pow(0.02, 2.0 / 3.0)
                                        : 0.4 * h / (1.0 + std::sqrt(1.4 / 0.8));
  const int steps = static_cast<int>(std::ceil(T / dt - 1e-12));
  dt = T / steps;
  for (int k = 0; k < steps; ++k)
  {
    st.step(f, dt);
  }
  double e = 0.0;
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      e += std::abs(f(i, j)[0] - smooth_wave(g.xc(i), g.yc(j), T).rho);
    }
  }
  return e / (n * n);
}

}  // namespace

TEST_CASE("physical fluxes")
{
  const auto q = gas::to_conservative({1.0, 2.0, 0.0, 1.0});
  const auto fx = flux_x(q);
  CHECK(fx[0] == doctest::Approx(2.0));
  CHECK(fx[1] == doctest::Approx(5.0));
  CHECK(fx[2] == doctest::Approx(0.0));
  CHECK(fx[3] == doctest::Approx(11.0));
  const auto fy = flux_y(gas::to_conservative({1.0, 0.0, 2.0, 1.0}));
  CHECK(fy[0] == doctest::Approx(2.0));
  CHECK(fy[1] == doctest::Approx(0.0));
  CHECK(fy[2] == doctest::Approx(5.0));
  CHECK(fy[3] == doctest::Approx(11.0));
  CHECK(flux(q, 0) == fx);
  CHECK_THROWS_AS(flux(gas::Conservative{-1.0, 0.0, 0.0, 1.0}, 0), Error);
}

TEST_CASE("upwind flux is consistent and reduces to one-sided flux for supersonic states")
{
  const auto ql = gas::to_conservative({1.0, 3.0, 0.4, 0.5});
  const auto qr = gas::to_conservative({1.3, 2.7, 0.1, 0.8});
  const auto fl = flux_x(ql);
  const auto same = upwind_flux_x(ql, ql);
  const auto right = upwind_flux_x(ql, qr);
  const auto left = upwind_flux_x(gas::to_conservative({1.0, -3.0, 0.4, 0.5}),
                                  gas::to_conservative({1.3, -2.7, 0.1, 0.8}));
  const auto fr_neg = flux_x(gas::to_conservative({1.3, -2.7, 0.1, 0.8}));
  for (int k = 0; k < 4; ++k)
  {
    CHECK(same[k] == doctest::Approx(fl[k]).epsilon(1e-13));
    CHECK(right[k] == doctest::Approx(fl[k]).epsilon(1e-12));
    CHECK(left[k] == doctest::Approx(fr_neg[k]).epsilon(1e-12));
  }
}

TEST_CASE("upwind flux is central plus a symmetric dissipation")
{
  // Subsonic state, so every wave family contributes.
  const gas::Primitive w{1.0, 0.3, -0.2, 0.9};
  const auto q = gas::to_conservative(w);
  for (int c = 0; c < 4; ++c)
  {
    const double h = 1e-6;
    auto qp = q;
    auto qm = q;
    qp[c] += h;
    qm[c] -= h;
    const auto fp = flux_x(qp);
    const auto fm = flux_x(qm);
    const auto a = upwind_flux_x(qm, qp);
    const auto b = upwind_flux_x(qp, qm);
    for (int k = 0; k < 4; ++k)
    {
      // The Roe average is symmetric, so the two orderings average to the central flux.
      CHECK(0.5 * (a[k] + b[k]) == doctest::Approx(0.5 * (fp[k] + fm[k])).epsilon(1e-10));
      CHECK(std::abs(a[k] - b[k]) < 10 * h);
    }
  }
}

TEST_CASE("scheme labels")
{
  CHECK(SchemeSpec::labels().size() == 8);
  const auto mc = SchemeSpec::from_label("MC-AV2-0002");
  CHECK(mc.scheme == Scheme::MacCormack);
  CHECK(mc.viscosity == Viscosity::Order2);
  CHECK(mc.mu == doctest::Approx(0.002));
  CHECK(SchemeSpec::from_label("MC-AV4-001").viscosity == Viscosity::Order4);
  CHECK(SchemeSpec::from_label("W5").order == 5);
  CHECK_THROWS_AS(SchemeSpec::from_label("W7"), Error);
  CHECK_THROWS_AS(SchemeSpec::make(Scheme::WENO3, Viscosity::Order2, 0.01).validate(), Error);
  CHECK_THROWS_AS(SchemeSpec::make(Scheme::MacCormack, Viscosity::Order2, -1.0).validate(), Error);
}

TEST_CASE("boundary conditions fill ghost layers")
{
  const auto g = Grid2D::unit_square(4, 3);
  BoundarySpec spec;
  spec.prescribed = [](double x, double y) { return gas::Primitive{1.0 + x, y, 0.0, 1.0}; };
  BoundaryConditions bc(spec, g, 2);
  ConservativeField f(g, 2);
  f.fill_interior([](double x, double y) { return gas::Primitive{2.0 + x + y, 0.5, 0.0, 1.0}; });
  bc.apply(f);
  // Dirichlet left: state at the ghost center.
  CHECK(f(-1, 1)[0] == doctest::Approx(1.0 + g.xc(-1)));
  CHECK(f(-2, 0)[0] == doctest::Approx(1.0 + g.xc(-2)));
  CHECK(f(2, -1)[1] == doctest::Approx(1.0 * g.yc(-1) * (1.0 + g.xc(2))));
  CHECK(f(1, 4)[0] == doctest::Approx(1.0 + g.xc(1)));
  // Extrapolate right: copy of the last interior column.
  CHECK(f(4, 1) == f(3, 1));
  CHECK(f(5, 2) == f(3, 2));

  BoundaryConditions per(BoundarySpec::periodic(), g, 2);
  per.apply(f);
  CHECK(f(-1, 1) == f(3, 1));
  CHECK(f(4, 0) == f(0, 0));
  CHECK(f(1, -2) == f(1, 1));
  CHECK(f(-1, -1) == f(3, 2));

  BoundarySpec odd = BoundarySpec::periodic();
  odd.right = BoundaryKind::Extrapolate;
  CHECK_THROWS_AS(BoundaryConditions(odd, g, 2), Error);
}

TEST_CASE("every scheme preserves a uniform stream")
{
  const auto g = Grid2D::unit_square(12, 10);
  const gas::Primitive w = gas::free_stream(4.0);
  for (const auto &s : all_schemes())
  {
    CAPTURE(s.id);
    BoundaryConditions bc(BoundarySpec::periodic(), g, s.ghost_layers());
    ConservativeField f(g, s.ghost_layers(), gas::to_conservative(w));
    Stepper st(s, bc, g);
    const double dt = st.stable_dt(f, 0.4);
    for (int k = 0; k < 5; ++k)
    {
      st.step(f, dt);
    }
    CHECK(st.steps_taken() == 5);
    double worst = 0.0;
    const auto ref = gas::to_conservative(w);
    for (int i = 0; i < g.nx; ++i)
    {
      for (int j = 0; j < g.ny; ++j)
      {
        for (int c = 0; c < 4; ++c)
        {
          worst = std::max(worst, std::abs(f(i, j)[c] - ref[c]));
        }
      }
    }
    CHECK(worst <= 1e-13);
  }
}

TEST_CASE("every scheme conserves mass on a periodic domain")
{
  const auto g = Grid2D::unit_square(16, 16);
  for (const auto &s : all_schemes())
  {
    CAPTURE(s.id);
    BoundaryConditions bc(BoundarySpec::periodic(), g, s.ghost_layers());
    ConservativeField f(g, s.ghost_layers());
    f.fill_interior([](double x, double y) {
      return gas::Primitive{1.0 + 0.3 * std::exp(-40 * ((x - 0.5) * (x - 0.5) + (y - 0.4) * (y - 0.4))),
                            0.7, -0.4, 1.0 + 0.2 * std::sin(2 * kPi * x)};
    });
    const double m0 = f.total(0);
    const double e0 = f.total(3);
    Stepper st(s, bc, g);
    for (int k = 0; k < 20; ++k)
    {
      st.step(f, st.stable_dt(f, 0.4));
    }
    CHECK(std::abs(f.total(0) - m0) <= 1e-12 * m0);
    CHECK(std::abs(f.total(3) - e0) <= 1e-12 * e0);
  }
}

TEST_CASE("free functions advance one step")
{
  const auto g = Grid2D::unit_square(8, 8);
  BoundaryConditions bc(BoundarySpec::periodic(), g, 3);
  ConservativeField a(g, 3);
  a.fill_interior([](double x, double y) { return smooth_wave(x, y, 0.0); });
  auto b = a;
  step_cir(a, 1e-3, bc);
  Stepper st(SchemeSpec::make(Scheme::CIR), bc, g);
  st.step(b, 1e-3);
  CHECK(a.raw() == b.raw());
  CHECK_NOTHROW(step_maccormack(a, 1e-3, bc, Viscosity::Order2, 0.01));
  CHECK_NOTHROW(step_lax_wendroff(a, 1e-3, bc));
  CHECK_NOTHROW(step_weno(a, 1e-3, bc, 5));
  CHECK_THROWS_AS(step_weno(a, 1e-3, bc, 4), Error);
}

TEST_CASE("negative pressure is reported as a positivity failure")
{
  const auto g = Grid2D::unit_square(8, 8);
  BoundaryConditions bc(BoundarySpec::periodic(), g, 3);
  ConservativeField f(g, 3);
  f.fill_interior([](double x, double) {
    return gas::Primitive{1.0, x < 0.5 ? 30.0 : -30.0, 0.0, 1e-3};
  });
  Stepper st(SchemeSpec::from_label("MC"), bc, g);
  try
  {
    for (int k = 0; k < 50; ++k)
    {
      st.step(f, 0.5 * st.stable_dt(f, 0.9));
    }
    FAIL("expected a positivity failure");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::Positivity);
    CHECK(std::string(e.what()).find("MC") != std::string::npos);
  }
}

TEST_CASE("convergence order on a smooth periodic wave")
{
  const double cir = std::log2(wave_error(SchemeSpec::make(Scheme::CIR), 25) /
                               wave_error(SchemeSpec::make(Scheme::CIR), 50));
  const double mc = std::log2(wave_error(SchemeSpec::make(Scheme::MacCormack), 25) /
                              wave_error(SchemeSpec::make(Scheme::MacCormack), 50));
  const double lw = std::log2(wave_error(SchemeSpec::make(Scheme::LaxWendroff), 25) /
                              wave_error(SchemeSpec::make(Scheme::LaxWendroff), 50));
  const double w5 = std::log2(wave_error(SchemeSpec::make(Scheme::WENO5), 25) /
                              wave_error(SchemeSpec::make(Scheme::WENO5), 50));
  MESSAGE("orders CIR " << cir << " MC " << mc << " LW " << lw << " W5 " << w5);
  CHECK(cir > 0.85);
  CHECK(mc > 1.8);
  CHECK(lw > 1.8);
  CHECK(w5 > 4.5);
}

TEST_CASE("free-stream case is steady from the first step")
{
  const auto c = FlowCase::free_stream(10, 10);
  const auto r = march_to_steady(c, SchemeSpec::from_label("CIR"), MarchOptions{});
  CHECK(r.converged);
  CHECK(r.steps == 1);
  CHECK(r.final_residual <= 1e-14);
}

TEST_CASE("upwind march on crossing shocks converges toward the analytic map")
{
  double previous = INFINITY;
  for (const int n : {24, 48})
  {
    const auto c = FlowCase::edney_i(n, n);
    const auto r = march_to_steady(c, SchemeSpec::from_label("CIR"), MarchOptions{});
    CHECK(r.converged);
    CHECK(r.residuals.size() == static_cast<std::size_t>(r.steps));
    CHECK(r.residuals.back() <= 1e-8 * r.residuals.front());
    const auto exact = analytic::project_analytic(analytic::build_region_map(c), c.domain);
    const auto &num = r.fields.field("rho").data;
    const auto &ref = exact.field("rho").data;
    double e = 0.0, s = 0.0;
    for (std::size_t k = 0; k < num.size(); ++k)
    {
      e += std::abs(num[k] - ref[k]);
      s += std::abs(ref[k]);
    }
    MESSAGE("n = " << n << " relative L1 density error " << e / s);
    CHECK(e / s < previous);
    previous = e / s;
  }
}
