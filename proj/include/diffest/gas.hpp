// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_GAS_HPP
#define DIFFEST_GAS_HPP

#include <array>
#include <cmath>

namespace diffest::gas
{

inline constexpr double kGamma = 1.4;

struct Primitive
{
  double rho = 1.0;
  double u = 0.0;
  double v = 0.0;
  double p = 1.0;
};

// (rho, rho U, rho V, rho E)
using Conservative = std::array<double, 4>;

inline Conservative to_conservative(const Primitive &w, double gamma = kGamma)
{
  return {w.rho, w.rho * w.u, w.rho * w.v,
          w.p / (gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v)};
}

inline Primitive to_primitive(const Conservative &q, double gamma = kGamma)
{
  const double u = q[1] / q[0];
  const double v = q[2] / q[0];
  return {q[0], u, v, (gamma - 1.0) * (q[3] - 0.5 * q[0] * (u * u + v * v))};
}

inline double sound_speed(const Primitive &w, double gamma = kGamma)
{
  return std::sqrt(gamma * w.p / w.rho);
}

inline double speed(const Primitive &w) { return std::hypot(w.u, w.v); }
inline double mach(const Primitive &w, double gamma = kGamma)
{
  return speed(w) / sound_speed(w, gamma);
}
inline double flow_angle(const Primitive &w) { return std::atan2(w.v, w.u); }

// h0 = (U^2 + V^2)/2 + gamma/(gamma-1) P/rho
inline double total_enthalpy(const Primitive &w, double gamma = kGamma)
{
  return 0.5 * (w.u * w.u + w.v * w.v) + gamma / (gamma - 1.0) * w.p / w.rho;
}

// Free stream normalized to rho = 1, |V| = 1 along +x, so a = 1/M.
inline Primitive free_stream(double mach_number, double gamma = kGamma)
{
  return {1.0, 1.0, 0.0, 1.0 / (gamma * mach_number * mach_number)};
}

inline constexpr double deg(double degrees) { return degrees * 3.14159265358979323846 / 180.0; }
inline constexpr double to_deg(double radians)
{
  return radians * 180.0 / 3.14159265358979323846;
}

}  // namespace diffest::gas

#endif
