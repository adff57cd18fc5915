// SPDX-License-Identifier: Apache-2.0

#include "diffest/shock.hpp"

#include <algorithm>
#include <cmath>

#include "diffest/error.hpp"

namespace diffest::analytic
{

namespace
{

constexpr double kPi = 3.14159265358979323846;

// Bisection down to floating-point exhaustion; f(lo) and f(hi) must differ in sign.
template <typename F>
double bisect(F &&f, double lo, double hi)
{
  double flo = f(lo);
  for (int it = 0; it < 400; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
    {
      break;
    }
    const double fm = f(mid);
    if (fm == 0.0)
    {
      return mid;
    }
    if ((fm < 0.0) == (flo < 0.0))
    {
      lo = mid;
      flo = fm;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double rel(double a, double b)
{
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

double deflection_from_beta(double mach, double beta, double gamma)
{
  const double m2 = mach * mach;
  const double s = std::sin(beta);
  const double num = 2.0 / std::tan(beta) * (m2 * s * s - 1.0);
  const double den = m2 * (gamma + std::cos(2.0 * beta)) + 2.0;
  return std::atan(num / den);
}

double theta_beta_residual(double mach, double theta, double beta, double gamma)
{
  const double m2 = mach * mach;
  const double s = std::sin(beta);
  const double rhs =
      2.0 / std::tan(beta) * (m2 * s * s - 1.0) / (m2 * (gamma + std::cos(2.0 * beta)) + 2.0);
  return std::tan(theta) - rhs;
}

DetachmentLimit detachment_limit(double mach, double gamma)
{
  require(mach > 1.0, ErrorCode::Config, "oblique shocks need a supersonic upstream Mach");
  // Golden-section search for the maximum of theta(beta) on (Mach angle, pi/2).
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::asin(1.0 / mach);
  double b = 0.5 * kPi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = deflection_from_beta(mach, c, gamma);
  double fd = deflection_from_beta(mach, d, gamma);
  while (b - a > 1e-13)
  {
    if (fc > fd)
    {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = deflection_from_beta(mach, c, gamma);
    }
    else
    {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = deflection_from_beta(mach, d, gamma);
    }
  }
  DetachmentLimit lim;
  lim.beta = 0.5 * (a + b);
  lim.theta = deflection_from_beta(mach, lim.beta, gamma);
  return lim;
}

double oblique_beta(double mach, double theta, double gamma)
{
  require(mach > 1.0, ErrorCode::Config, "oblique shocks need a supersonic upstream Mach");
  require(theta >= 0.0, ErrorCode::Config, "deflection must be non-negative");
  const double mu = std::asin(1.0 / mach);
  if (theta == 0.0)
  {
    return mu;
  }
  const auto lim = detachment_limit(mach, gamma);
  require(theta < lim.theta, ErrorCode::Detached,
          "deflection " + std::to_string(gas::to_deg(theta)) + " deg exceeds the detachment angle " +
              std::to_string(gas::to_deg(lim.theta)) + " deg at M=" + std::to_string(mach));
  // On the weak branch the residual decreases monotonically from tan(theta) > 0.
  return bisect([&](double b) { return theta_beta_residual(mach, theta, b, gamma); }, mu,
                lim.beta);
}

ShockState shock_jump(const gas::Primitive &up, double beta, ShockSide side, double gamma)
{
  const double q = gas::speed(up);
  const double a = gas::sound_speed(up, gamma);
  const double mn = q * std::sin(beta) / a;
  require(mn >= 1.0 - 1e-12, ErrorCode::InvalidShock,
          "normal Mach number " + std::to_string(mn) + " is subsonic");
  const double mn2 = std::max(mn * mn, 1.0);

  ShockState s;
  s.upstream = up;
  s.beta = beta;
  s.mach_up = q / a;
  s.side = side;
  const double flow = gas::flow_angle(up);
  s.line_angle = side == ShockSide::Left ? flow + beta : flow - beta;

  const double tx = std::cos(s.line_angle), ty = std::sin(s.line_angle);
  const double nx = ty, ny = -tx;
  const double un = up.u * nx + up.v * ny;
  const double ut = up.u * tx + up.v * ty;

  const double ratio = (gamma + 1.0) * mn2 / ((gamma - 1.0) * mn2 + 2.0);
  const double pratio = 1.0 + 2.0 * gamma / (gamma + 1.0) * (mn2 - 1.0);
  const double un2 = un / ratio;

  s.downstream.rho = up.rho * ratio;
  s.downstream.p = up.p * pratio;
  s.downstream.u = un2 * nx + ut * tx;
  s.downstream.v = un2 * ny + ut * ty;
  s.theta = std::abs(gas::flow_angle(s.downstream) - flow);
  return s;
}

ShockState oblique_shock(const gas::Primitive &upstream, double theta, ShockSide side,
                         double gamma)
{
  const double beta = oblique_beta(gas::mach(upstream, gamma), theta, gamma);
  auto s = shock_jump(upstream, beta, side, gamma);
  s.theta = theta;
  return s;
}

double RHResiduals::max() const
{
  return std::max({mass, normal_momentum, tangential_velocity, total_enthalpy});
}

RHResiduals rh_residuals(const ShockState &s, double gamma)
{
  const double tx = std::cos(s.line_angle), ty = std::sin(s.line_angle);
  const double nx = ty, ny = -tx;
  const auto &a = s.upstream;
  const auto &b = s.downstream;
  const double una = a.u * nx + a.v * ny, unb = b.u * nx + b.v * ny;
  const double uta = a.u * tx + a.v * ty, utb = b.u * tx + b.v * ty;
  RHResiduals r;
  r.mass = rel(a.rho * una, b.rho * unb);
  r.normal_momentum = rel(a.rho * una * una + a.p, b.rho * unb * unb + b.p);
  // Tangential velocity is compared against the flow speed, it may pass through zero.
  r.tangential_velocity = std::abs(uta - utb) / std::max(gas::speed(a), 1e-300);
  r.total_enthalpy = rel(gas::total_enthalpy(a, gamma), gas::total_enthalpy(b, gamma));
  return r;
}

double normal_shock_density_ratio(double mach, double gamma)
{
  const double m2 = mach * mach;
  return (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
}

double prandtl_meyer(double mach, double gamma)
{
  require(mach >= 1.0, ErrorCode::Config, "Prandtl-Meyer function needs M >= 1");
  const double g = (gamma + 1.0) / (gamma - 1.0);
  const double m = std::sqrt(mach * mach - 1.0);
  return std::sqrt(g) * std::atan(m / std::sqrt(g)) - std::atan(m);
}

double inverse_prandtl_meyer(double nu, double gamma)
{
  const double g = (gamma + 1.0) / (gamma - 1.0);
  const double nu_max = 0.5 * kPi * (std::sqrt(g) - 1.0);
  require(nu >= 0.0 && nu < nu_max, ErrorCode::RootFind,
          "Prandtl-Meyer angle outside [0, nu_max)");
  if (nu == 0.0)
  {
    return 1.0;
  }
  double hi = 2.0;
  while (prandtl_meyer(hi, gamma) < nu)
  {
    hi *= 2.0;
    require(hi < 1e8, ErrorCode::RootFind, "Prandtl-Meyer inversion diverged");
  }
  return bisect([&](double m) { return prandtl_meyer(m, gamma) - nu; }, 1.0, hi);
}

gas::Primitive isentropic_expansion(const gas::Primitive &up, double turn, double gamma)
{
  const double m1 = gas::mach(up, gamma);
  const double m2 = inverse_prandtl_meyer(prandtl_meyer(m1, gamma) + std::abs(turn), gamma);
  const double k = 0.5 * (gamma - 1.0);
  const double t_ratio = (1.0 + k * m1 * m1) / (1.0 + k * m2 * m2);  // T2/T1
  gas::Primitive out;
  out.p = up.p * std::pow(t_ratio, gamma / (gamma - 1.0));
  out.rho = up.rho * std::pow(t_ratio, 1.0 / (gamma - 1.0));
  const double q = m2 * gas::sound_speed(up, gamma) * std::sqrt(t_ratio);
  const double dir = gas::flow_angle(up) + turn;
  out.u = q * std::cos(dir);
  out.v = q * std::sin(dir);
  return out;
}

}  // namespace diffest::analytic
