// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "diffest/error.hpp"
#include "diffest/euler.hpp"

namespace diffest::euler
{

using gas::Conservative;

namespace
{

double pressure_of(const Conservative &q, double gamma)
{
  return (gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0]);
}

bool physical(const Conservative &q, double gamma)
{
  return q[0] > 0.0 && std::isfinite(q[0]) && pressure_of(q, gamma) > 0.0 &&
         std::isfinite(q[1]) && std::isfinite(q[2]) && std::isfinite(q[3]);
}

Conservative swap_xy(const Conservative &q) { return {q[0], q[2], q[1], q[3]}; }

double harten(double lambda, double delta)
{
  const double a = std::abs(lambda);
  return a >= delta ? a : 0.5 * (lambda * lambda + delta * delta) / delta;
}

// WENO reconstruction of the left-biased value at face i+1/2 from v[i-2..i+2].
double weno5_plus(double vm2, double vm1, double v0, double vp1, double vp2)
{
  constexpr double eps = 1e-6;
  const double b0 = 13.0 / 12.0 * (vm2 - 2 * vm1 + v0) * (vm2 - 2 * vm1 + v0) +
                    0.25 * (vm2 - 4 * vm1 + 3 * v0) * (vm2 - 4 * vm1 + 3 * v0);
  const double b1 = 13.0 / 12.0 * (vm1 - 2 * v0 + vp1) * (vm1 - 2 * v0 + vp1) +
                    0.25 * (vm1 - vp1) * (vm1 - vp1);
  const double b2 = 13.0 / 12.0 * (v0 - 2 * vp1 + vp2) * (v0 - 2 * vp1 + vp2) +
                    0.25 * (3 * v0 - 4 * vp1 + vp2) * (3 * v0 - 4 * vp1 + vp2);
  const double a0 = 0.1 / ((eps + b0) * (eps + b0));
  const double a1 = 0.6 / ((eps + b1) * (eps + b1));
  const double a2 = 0.3 / ((eps + b2) * (eps + b2));
  const double p0 = (2 * vm2 - 7 * vm1 + 11 * v0) / 6.0;
  const double p1 = (-vm1 + 5 * v0 + 2 * vp1) / 6.0;
  const double p2 = (2 * v0 + 5 * vp1 - vp2) / 6.0;
  return (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2);
}

// Third-order variant from v[i-1..i+1].
double weno3_plus(double vm1, double v0, double vp1)
{
  constexpr double eps = 1e-6;
  const double b0 = (v0 - vm1) * (v0 - vm1);
  const double b1 = (vp1 - v0) * (vp1 - v0);
  const double a0 = (1.0 / 3.0) / ((eps + b0) * (eps + b0));
  const double a1 = (2.0 / 3.0) / ((eps + b1) * (eps + b1));
  const double p0 = -0.5 * vm1 + 1.5 * v0;
  const double p1 = 0.5 * v0 + 0.5 * vp1;
  return (a0 * p0 + a1 * p1) / (a0 + a1);
}

}  // namespace

Conservative flux_x(const Conservative &q, double gamma)
{
  const double u = q[1] / q[0];
  const double p = pressure_of(q, gamma);
  return {q[1], q[1] * u + p, q[2] * u, (q[3] + p) * u};
}

Conservative flux_y(const Conservative &q, double gamma)
{
  const double v = q[2] / q[0];
  const double p = pressure_of(q, gamma);
  return {q[2], q[1] * v, q[2] * v + p, (q[3] + p) * v};
}

Conservative flux(const Conservative &q, int axis, double gamma)
{
  if (!physical(q, gamma))
  {
    fail(ErrorCode::Positivity, "non-physical state in flux evaluation");
  }
  return axis == 0 ? flux_x(q, gamma) : flux_y(q, gamma);
}

Conservative upwind_flux_x(const Conservative &ql, const Conservative &qr, double gamma)
{
  const double pl = pressure_of(ql, gamma);
  const double pr = pressure_of(qr, gamma);
  const double sl = std::sqrt(ql[0]);
  const double sr = std::sqrt(qr[0]);
  const double w = 1.0 / (sl + sr);
  const double u = (ql[1] / sl + qr[1] / sr) * w;
  const double v = (ql[2] / sl + qr[2] / sr) * w;
  const double h = ((ql[3] + pl) / sl + (qr[3] + pr) / sr) * w;
  const double ke = 0.5 * (u * u + v * v);
  const double a2 = (gamma - 1.0) * (h - ke);
  if (!(a2 > 0.0) || !(ql[0] > 0.0) || !(qr[0] > 0.0))
  {
    fail(ErrorCode::Positivity, "non-physical Roe average");
  }
  const double a = std::sqrt(a2);

  const double d0 = qr[0] - ql[0];
  const double d1 = qr[1] - ql[1];
  const double d2 = qr[2] - ql[2];
  const double d3 = qr[3] - ql[3];
  const double shear = d2 - v * d0;
  const double d3r = d3 - shear * v;
  const double s2 = (gamma - 1.0) / a2 * (d0 * (h - u * u) + u * d1 - d3r);
  const double s1 = 0.5 / a * (d0 * (u + a) - d1 - a * s2);
  const double s4 = d0 - (s1 + s2);

  const double delta = 0.1 * a;
  const double l1 = harten(u - a, delta) * s1;
  const double l2 = std::abs(u) * s2;
  const double l3 = std::abs(u) * shear;
  const double l4 = harten(u + a, delta) * s4;

  const Conservative fl = flux_x(ql, gamma);
  const Conservative fr = flux_x(qr, gamma);
  Conservative out;
  const double diss[4] = {l1 + l2 + l4, l1 * (u - a) + l2 * u + l4 * (u + a),
                          (l1 + l2 + l4) * v + l3,
                          l1 * (h - u * a) + l2 * ke + l3 * v + l4 * (h + u * a)};
  for (int k = 0; k < 4; ++k)
  {
    out[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * diss[k];
  }
  return out;
}

struct Stepper::Impl
{
  SchemeSpec scheme;
  const BoundaryConditions *bc;
  Grid2D grid;
  double gamma;
  long steps = 0;

  std::vector<Conservative> fa, fb;  // face or cell flux scratch
  std::vector<Conservative> q0, rhs;
  std::vector<double> alpha;  // per padded cell spectral radius along the current axis
  std::vector<Conservative> line_p, line_m, line_hat;
  ConservativeField stage;

  int nx() const { return grid.nx; }
  int ny() const { return grid.ny; }

  void check_positivity(const ConservativeField &f) const
  {
    for (int i = 0; i < nx(); ++i)
    {
      for (int j = 0; j < ny(); ++j)
      {
        if (!physical(f(i, j), gamma))
        {
          fail(ErrorCode::Positivity,
               scheme.id + ": non-physical state at cell (" + std::to_string(i) + ", " +
                   std::to_string(j) + ") after step " + std::to_string(steps + 1));
        }
      }
    }
  }

  // Cell-centered physical fluxes over the full padded array.
  void cell_fluxes(const ConservativeField &f, std::vector<Conservative> &fx,
                   std::vector<Conservative> &gy) const
  {
    const auto &q = f.raw();
    fx.resize(q.size());
    gy.resize(q.size());
    for (std::size_t k = 0; k < q.size(); ++k)
    {
      fx[k] = flux_x(q[k], gamma);
      gy[k] = flux_y(q[k], gamma);
    }
  }

  void step_cir(ConservativeField &f, double dt)
  {
    bc->apply(f);
    const int n = nx();
    const int m = ny();
    const double lx = dt / grid.dx;
    const double ly = dt / grid.dy;
    fa.resize(static_cast<std::size_t>(n + 1) * m);
    fb.resize(static_cast<std::size_t>(n) * (m + 1));
    for (int i = -1; i < n; ++i)
    {
      for (int j = 0; j < m; ++j)
      {
        fa[static_cast<std::size_t>(i + 1) * m + j] = upwind_flux_x(f(i, j), f(i + 1, j), gamma);
      }
    }
    for (int i = 0; i < n; ++i)
    {
      for (int j = -1; j < m; ++j)
      {
        fb[static_cast<std::size_t>(i) * (m + 1) + j + 1] =
            swap_xy(upwind_flux_x(swap_xy(f(i, j)), swap_xy(f(i, j + 1)), gamma));
      }
    }
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < m; ++j)
      {
        const auto &fw = fa[static_cast<std::size_t>(i) * m + j];
        const auto &fe = fa[static_cast<std::size_t>(i + 1) * m + j];
        const auto &gs = fb[static_cast<std::size_t>(i) * (m + 1) + j];
        const auto &gn = fb[static_cast<std::size_t>(i) * (m + 1) + j + 1];
        auto &q = f(i, j);
        for (int k = 0; k < 4; ++k)
        {
          q[k] -= lx * (fe[k] - fw[k]) + ly * (gn[k] - gs[k]);
        }
      }
    }
  }

  void apply_viscosity(ConservativeField &f, Viscosity av, double mu)
  {
    if (av == Viscosity::None || mu == 0.0)
    {
      return;
    }
    bc->apply(f);
    q0 = f.raw();
    const int st = f.stride();
    auto at = [&](int i, int j) -> const Conservative & { return q0[f.index(i, j)]; };
    (void)st;
    for (int i = 0; i < nx(); ++i)
    {
      for (int j = 0; j < ny(); ++j)
      {
        auto &q = f(i, j);
        const auto &c = at(i, j);
        const auto &e = at(i + 1, j);
        const auto &w = at(i - 1, j);
        const auto &nn = at(i, j + 1);
        const auto &s = at(i, j - 1);
        if (av == Viscosity::Order2)
        {
          for (int k = 0; k < 4; ++k)
          {
            q[k] += mu * (e[k] + w[k] + nn[k] + s[k] - 4.0 * c[k]);
          }
        }
        else
        {
          const auto &ee = at(i + 2, j);
          const auto &ww = at(i - 2, j);
          const auto &nnn = at(i, j + 2);
          const auto &ss = at(i, j - 2);
          for (int k = 0; k < 4; ++k)
          {
            const double d4x = ww[k] - 4.0 * w[k] + 6.0 * c[k] - 4.0 * e[k] + ee[k];
            const double d4y = ss[k] - 4.0 * s[k] + 6.0 * c[k] - 4.0 * nn[k] + nnn[k];
            q[k] -= mu * (d4x + d4y);
          }
        }
      }
    }
  }

  void step_maccormack(ConservativeField &f, double dt)
  {
    const double lx = dt / grid.dx;
    const double ly = dt / grid.dy;
    bc->apply(f);
    cell_fluxes(f, fa, fb);
    if (stage.raw().size() != f.raw().size())
    {
      stage = ConservativeField(grid, f.ghost());
    }
    stage.raw() = f.raw();
    const int sp = 1;  // forward predictor
    const int sm = 0;
    for (int i = 0; i < nx(); ++i)
    {
      for (int j = 0; j < ny(); ++j)
      {
        const auto &fp = fa[f.index(i + sp, j)];
        const auto &fm = fa[f.index(i + sm, j)];
        const auto &gp = fb[f.index(i, j + sp)];
        const auto &gm = fb[f.index(i, j + sm)];
        auto &s = stage(i, j);
        for (int k = 0; k < 4; ++k)
        {
          s[k] -= lx * (fp[k] - fm[k]) + ly * (gp[k] - gm[k]);
        }
      }
    }
    bc->apply(stage);
    cell_fluxes(stage, fa, fb);
    const int cp = 0;  // backward corrector
    const int cm = -1;
    for (int i = 0; i < nx(); ++i)
    {
      for (int j = 0; j < ny(); ++j)
      {
        const auto &fp = fa[f.index(i + cp, j)];
        const auto &fm = fa[f.index(i + cm, j)];
        const auto &gp = fb[f.index(i, j + cp)];
        const auto &gm = fb[f.index(i, j + cm)];
        const auto &s = stage(i, j);
        auto &q = f(i, j);
        for (int k = 0; k < 4; ++k)
        {
          q[k] = 0.5 * (q[k] + s[k] - lx * (fp[k] - fm[k]) - ly * (gp[k] - gm[k]));
        }
      }
    }
    apply_viscosity(f, scheme.viscosity, scheme.mu);
  }

  void step_lax_wendroff(ConservativeField &f, double dt)
  {
    const double lx = dt / grid.dx;
    const double ly = dt / grid.dy;
    const int n = nx();
    const int m = ny();
    bc->apply(f);
    cell_fluxes(f, fa, fb);
    std::vector<Conservative> &xf = line_p;
    std::vector<Conservative> &yf = line_m;
    xf.resize(static_cast<std::size_t>(n + 1) * m);
    yf.resize(static_cast<std::size_t>(n) * (m + 1));
    auto F = [&](int i, int j) -> const Conservative & { return fa[f.index(i, j)]; };
    auto G = [&](int i, int j) -> const Conservative & { return fb[f.index(i, j)]; };
    for (int i = -1; i < n; ++i)
    {
      for (int j = 0; j < m; ++j)
      {
        Conservative h;
        const auto &a = f(i, j);
        const auto &b = f(i + 1, j);
        for (int k = 0; k < 4; ++k)
        {
          h[k] = 0.5 * (a[k] + b[k]) - 0.5 * lx * (F(i + 1, j)[k] - F(i, j)[k]) -
                 0.125 * ly *
                     (G(i, j + 1)[k] + G(i + 1, j + 1)[k] - G(i, j - 1)[k] - G(i + 1, j - 1)[k]);
        }
        xf[static_cast<std::size_t>(i + 1) * m + j] = flux_x(h, gamma);
      }
    }
    for (int i = 0; i < n; ++i)
    {
      for (int j = -1; j < m; ++j)
      {
        Conservative h;
        const auto &a = f(i, j);
        const auto &b = f(i, j + 1);
        for (int k = 0; k < 4; ++k)
        {
          h[k] = 0.5 * (a[k] + b[k]) - 0.5 * ly * (G(i, j + 1)[k] - G(i, j)[k]) -
                 0.125 * lx *
                     (F(i + 1, j)[k] + F(i + 1, j + 1)[k] - F(i - 1, j)[k] - F(i - 1, j + 1)[k]);
        }
        yf[static_cast<std::size_t>(i) * (m + 1) + j + 1] = flux_y(h, gamma);
      }
    }
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < m; ++j)
      {
        const auto &fw = xf[static_cast<std::size_t>(i) * m + j];
        const auto &fe = xf[static_cast<std::size_t>(i + 1) * m + j];
        const auto &gs = yf[static_cast<std::size_t>(i) * (m + 1) + j];
        const auto &gn = yf[static_cast<std::size_t>(i) * (m + 1) + j + 1];
        auto &q = f(i, j);
        for (int k = 0; k < 4; ++k)
        {
          q[k] -= lx * (fe[k] - fw[k]) + ly * (gn[k] - gs[k]);
        }
      }
    }
    apply_viscosity(f, scheme.viscosity, scheme.mu);
  }

  // Lax-Friedrichs split WENO flux difference along one grid line.
  // Input: padded line of states and physical fluxes; output: hat fluxes at faces -1/2..n-1/2.
  void weno_line(const Conservative *qs, const Conservative *fs, int len, int g, double a,
                 Conservative *hat, int faces, int order) const
  {
    // qs[0] corresponds to index -g.
    for (int f = 0; f < faces; ++f)
    {
      const int c = f - 1 + g;  // left cell of face f - 1/2 + ... (face between c and c+1)
      for (int k = 0; k < 4; ++k)
      {
        auto p = [&](int o) { return 0.5 * (fs[c + o][k] + a * qs[c + o][k]); };
        auto mm = [&](int o) { return 0.5 * (fs[c + o][k] - a * qs[c + o][k]); };
        double plus;
        double minus;
        if (order == 5)
        {
          plus = weno5_plus(p(-2), p(-1), p(0), p(1), p(2));
          minus = weno5_plus(mm(3), mm(2), mm(1), mm(0), mm(-1));
        }
        else
        {
          plus = weno3_plus(p(-1), p(0), p(1));
          minus = weno3_plus(mm(2), mm(1), mm(0));
        }
        hat[f][k] = plus + minus;
      }
    }
    (void)len;
  }

  void weno_rhs(ConservativeField &f, int order)
  {
    bc->apply(f);
    const int n = nx();
    const int m = ny();
    const int g = f.ghost();
    rhs.assign(static_cast<std::size_t>(n) * m, Conservative{0, 0, 0, 0});

    // Global Lax-Friedrichs speeds per axis.
    double ax = 0.0;
    double ay = 0.0;
    for (int i = -g; i < n + g; ++i)
    {
      for (int j = -g; j < m + g; ++j)
      {
        const auto &q = f(i, j);
        if (!physical(q, gamma))
        {
          if (i < 0 || i >= n || j < 0 || j >= m)
          {
            continue;
          }
          fail(ErrorCode::Positivity, scheme.id + ": non-physical state inside a Runge-Kutta stage");
        }
        const double c = std::sqrt(gamma * pressure_of(q, gamma) / q[0]);
        ax = std::max(ax, std::abs(q[1] / q[0]) + c);
        ay = std::max(ay, std::abs(q[2] / q[0]) + c);
      }
    }

    const int lx = n + 2 * g;
    line_p.resize(static_cast<std::size_t>(std::max(n, m) + 2 * g));
    line_m.resize(line_p.size());
    line_hat.resize(static_cast<std::size_t>(std::max(n, m) + 1));
    for (int j = 0; j < m; ++j)
    {
      for (int i = -g; i < n + g; ++i)
      {
        line_p[i + g] = f(i, j);
        line_m[i + g] = flux_x(f(i, j), gamma);
      }
      weno_line(line_p.data(), line_m.data(), lx, g, ax, line_hat.data(), n + 1, order);
      for (int i = 0; i < n; ++i)
      {
        auto &r = rhs[static_cast<std::size_t>(i) * m + j];
        for (int k = 0; k < 4; ++k)
        {
          r[k] -= (line_hat[i + 1][k] - line_hat[i][k]) / grid.dx;
        }
      }
    }
    const int ly = m + 2 * g;
    for (int i = 0; i < n; ++i)
    {
      for (int j = -g; j < m + g; ++j)
      {
        line_p[j + g] = f(i, j);
        line_m[j + g] = flux_y(f(i, j), gamma);
      }
      weno_line(line_p.data(), line_m.data(), ly, g, ay, line_hat.data(), m + 1, order);
      for (int j = 0; j < m; ++j)
      {
        auto &r = rhs[static_cast<std::size_t>(i) * m + j];
        for (int k = 0; k < 4; ++k)
        {
          r[k] -= (line_hat[j + 1][k] - line_hat[j][k]) / grid.dy;
        }
      }
    }
  }

  void step_weno(ConservativeField &f, double dt, int order)
  {
    const int n = nx();
    const int m = ny();
    std::vector<Conservative> base(static_cast<std::size_t>(n) * m);
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < m; ++j)
      {
        base[static_cast<std::size_t>(i) * m + j] = f(i, j);
      }
    }
    const double w_old[3] = {0.0, 0.75, 1.0 / 3.0};
    for (int s = 0; s < 3; ++s)
    {
      weno_rhs(f, order);
      const double wo = w_old[s];
      for (int i = 0; i < n; ++i)
      {
        for (int j = 0; j < m; ++j)
        {
          const std::size_t c = static_cast<std::size_t>(i) * m + j;
          auto &q = f(i, j);
          for (int k = 0; k < 4; ++k)
          {
            const double euler = q[k] + dt * rhs[c][k];
            q[k] = wo * base[c][k] + (1.0 - wo) * euler;
          }
        }
      }
    }
  }
};

Stepper::Stepper(const SchemeSpec &scheme, const BoundaryConditions &bc, const Grid2D &grid,
                 double gamma)
    : impl_(std::make_unique<Impl>())
{
  scheme.validate();
  grid.validate(3);
  impl_->scheme = scheme;
  impl_->bc = &bc;
  impl_->grid = grid;
  impl_->gamma = gamma;
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper &&) noexcept = default;

double Stepper::stable_dt(const ConservativeField &f, double cfl) const
{
  require(cfl > 0.0 && cfl <= 1.0, ErrorCode::Config, "cfl must lie in (0, 1]");
  const double gamma = impl_->gamma;
  double smax = 0.0;
  for (int i = 0; i < impl_->grid.nx; ++i)
  {
    for (int j = 0; j < impl_->grid.ny; ++j)
    {
      const auto &q = f(i, j);
      if (!physical(q, gamma))
      {
        fail(ErrorCode::Positivity, "non-physical state when computing the time step");
      }
      const double c = std::sqrt(gamma * pressure_of(q, gamma) / q[0]);
      smax = std::max({smax, std::abs(q[1] / q[0]) + c, std::abs(q[2] / q[0]) + c});
    }
  }
  return cfl * std::min(impl_->grid.dx, impl_->grid.dy) / smax;
}

void Stepper::step(ConservativeField &f, double dt)
{
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::Config, "time step must be positive");
  require(f.grid() == impl_->grid && f.ghost() >= impl_->scheme.ghost_layers(),
          ErrorCode::Structural, "field layout does not match the stepper");
  switch (impl_->scheme.scheme)
  {
    case Scheme::CIR:
      impl_->step_cir(f, dt);
      break;
    case Scheme::MacCormack:
      impl_->step_maccormack(f, dt);
      break;
    case Scheme::LaxWendroff:
      impl_->step_lax_wendroff(f, dt);
      break;
    case Scheme::WENO3:
      impl_->step_weno(f, dt, 3);
      break;
    case Scheme::WENO5:
      impl_->step_weno(f, dt, 5);
      break;
  }
  impl_->check_positivity(f);
  ++impl_->steps;
}

long Stepper::steps_taken() const { return impl_->steps; }

namespace
{

void run_once(ConservativeField &f, double dt, const BoundaryConditions &bc, const SchemeSpec &s)
{
  Stepper st(s, bc, f.grid());
  st.step(f, dt);
}

}  // namespace

void step_cir(ConservativeField &f, double dt, const BoundaryConditions &bc)
{
  run_once(f, dt, bc, SchemeSpec::make(Scheme::CIR));
}

void step_maccormack(ConservativeField &f, double dt, const BoundaryConditions &bc, Viscosity av,
                     double mu)
{
  run_once(f, dt, bc, SchemeSpec::make(Scheme::MacCormack, av, mu));
}

void step_lax_wendroff(ConservativeField &f, double dt, const BoundaryConditions &bc, Viscosity av,
                       double mu)
{
  run_once(f, dt, bc, SchemeSpec::make(Scheme::LaxWendroff, av, mu));
}

void step_weno(ConservativeField &f, double dt, const BoundaryConditions &bc, int order)
{
  require(order == 3 || order == 5, ErrorCode::Config, "WENO order must be 3 or 5");
  run_once(f, dt, bc, SchemeSpec::make(order == 3 ? Scheme::WENO3 : Scheme::WENO5));
}

RunResult march_to_steady(const FlowCase &c, const SchemeSpec &scheme, const MarchOptions &opt)
{
  const auto t0 = std::chrono::steady_clock::now();
  c.validate();
  scheme.validate();
  require(opt.steady_tol > 0.0, ErrorCode::Config, "steady tolerance must be positive");
  const auto map = analytic::build_region_map(c);
  const Grid2D &grid = c.domain;
  const int g = scheme.ghost_layers();
  BoundaryConditions bc(BoundarySpec::for_case(c, map), grid, g, c.gamma);
  ConservativeField f(grid, g, gas::to_conservative(c.inflow(), c.gamma));
  Stepper stepper(scheme, bc, grid, c.gamma);

  const long max_steps =
      opt.max_steps > 0 ? opt.max_steps : 200L * std::max(grid.nx, grid.ny);
  RunResult out;
  double first = -1.0;
  std::vector<Conservative> prev;
  for (long s = 1; s <= max_steps; ++s)
  {
    const double dt = stepper.stable_dt(f, opt.cfl);
    prev = f.raw();
    stepper.step(f, dt);
    double sum = 0.0;
    for (int i = 0; i < grid.nx; ++i)
    {
      for (int j = 0; j < grid.ny; ++j)
      {
        const auto &a = f(i, j);
        const auto &b = prev[f.index(i, j)];
        for (int k = 0; k < 4; ++k)
        {
          sum += (a[k] - b[k]) * (a[k] - b[k]);
        }
      }
    }
    const double res = std::sqrt(sum * grid.cell_area());
    if (first < 0.0)
    {
      first = res;
    }
    if (opt.record_history)
    {
      out.residuals.push_back(res);
    }
    out.steps = s;
    out.final_residual = res;
    if (res <= opt.steady_tol * first)
    {
      out.converged = true;
      break;
    }
  }
  out.fields = f.primitive_fields(scheme.id, c.gamma);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace diffest::euler
