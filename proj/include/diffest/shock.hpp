// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_SHOCK_HPP
#define DIFFEST_SHOCK_HPP

#include "diffest/gas.hpp"

namespace diffest::analytic
{

// Deflection theta produced by a shock at angle beta to an upstream Mach M flow:
// tan(theta) = 2 cot(beta) (M^2 sin^2 beta - 1) / (M^2 (gamma + cos 2 beta) + 2).
double deflection_from_beta(double mach, double beta, double gamma = gas::kGamma);

// tan(theta) minus the right-hand side above.
double theta_beta_residual(double mach, double theta, double beta, double gamma = gas::kGamma);

struct DetachmentLimit
{
  double beta = 0.0;   // shock angle at maximum deflection
  double theta = 0.0;  // maximum attached deflection
};

DetachmentLimit detachment_limit(double mach, double gamma = gas::kGamma);

// Weak-branch shock angle. theta = 0 gives the Mach angle; theta at or above the
// detachment limit throws Detached.
double oblique_beta(double mach, double theta, double gamma = gas::kGamma);

// Which way the shock turns the flow: Left = counterclockwise (compression ramp below
// the stream), Right = clockwise.
enum class ShockSide
{
  Left,
  Right
};

struct ShockState
{
  gas::Primitive upstream;
  gas::Primitive downstream;
  double beta = 0.0;        // relative to the upstream flow direction
  double theta = 0.0;       // unsigned deflection magnitude
  double mach_up = 0.0;
  double line_angle = 0.0;  // lab-frame angle of the shock line
  ShockSide side = ShockSide::Left;
};

// Normal-shock relations on the component normal to the shock line; tangential
// velocity is untouched. Throws InvalidShock when the normal Mach number is below 1.
ShockState shock_jump(const gas::Primitive &upstream, double beta, ShockSide side,
                      double gamma = gas::kGamma);

// oblique_beta followed by shock_jump.
ShockState oblique_shock(const gas::Primitive &upstream, double theta, ShockSide side,
                         double gamma = gas::kGamma);

// Relative jumps of the four conserved quantities across the shock line.
struct RHResiduals
{
  double mass = 0.0;
  double normal_momentum = 0.0;
  double tangential_velocity = 0.0;
  double total_enthalpy = 0.0;

  double max() const;
};

RHResiduals rh_residuals(const ShockState &s, double gamma = gas::kGamma);

// rho2/rho1 = (gamma+1) M^2 / ((gamma-1) M^2 + 2)
double normal_shock_density_ratio(double mach, double gamma = gas::kGamma);

double prandtl_meyer(double mach, double gamma = gas::kGamma);
double inverse_prandtl_meyer(double nu, double gamma = gas::kGamma);

// Isentropic expansion through a centered fan: the flow direction changes by the signed
// `turn` and the Prandtl-Meyer function grows by |turn|.
gas::Primitive isentropic_expansion(const gas::Primitive &upstream, double turn,
                                    double gamma = gas::kGamma);

}  // namespace diffest::analytic

#endif
