// SPDX-License-Identifier: Apache-2.0

#include "diffest/flow_case.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "diffest/error.hpp"
#include "diffest/field_io.hpp"

namespace diffest
{

namespace
{

constexpr double kPi = 3.14159265358979323846;
constexpr double kTiny = 1e-9;

// Bisection on an increasing residual until the bracket is exhausted.
double bisect_increasing(const std::function<double(double)> &f, double lo, double hi,
                         const std::string &what)
{
  const double flo = f(lo), fhi = f(hi);
  require(flo < 0.0 && fhi > 0.0, ErrorCode::RootFind,
          what + ": bracket [" + std::to_string(gas::to_deg(lo)) + ", " +
              std::to_string(gas::to_deg(hi)) + "] deg does not straddle a root (residuals " +
              std::to_string(flo) + ", " + std::to_string(fhi) + ")");
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
    (fm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char *to_string(CaseId id)
{
  switch (id)
  {
    case CaseId::FreeStream:
      return "FreeStream";
    case CaseId::EdneyI:
      return "EdneyI";
    case CaseId::EdneyVI:
      return "EdneyVI";
  }
  return "unknown";
}

CaseId case_from_string(const std::string &name)
{
  if (name == "EdneyI" || name == "edney1")
  {
    return CaseId::EdneyI;
  }
  if (name == "EdneyVI" || name == "edney6")
  {
    return CaseId::EdneyVI;
  }
  if (name == "FreeStream" || name == "free_stream")
  {
    return CaseId::FreeStream;
  }
  fail(ErrorCode::Config, "unknown case '" + name + "' (expected EdneyI, EdneyVI, FreeStream)");
}

FlowCase FlowCase::edney_i(int nx, int ny)
{
  FlowCase c;
  c.id = CaseId::EdneyI;
  c.deflection1 = 20.0;
  c.deflection2 = 15.0;
  c.interaction_x = 0.4;
  c.interaction_y = 0.5;
  c.domain = Grid2D::unit_square(nx, ny);
  return c;
}

FlowCase FlowCase::edney_vi(int nx, int ny)
{
  FlowCase c;
  c.id = CaseId::EdneyVI;
  c.deflection1 = 10.0;
  c.deflection2 = 15.0;
  c.interaction_x = 0.45;
  c.interaction_y = 0.35;
  c.domain = Grid2D::unit_square(nx, ny);
  return c;
}

FlowCase FlowCase::free_stream(int nx, int ny)
{
  FlowCase c;
  c.id = CaseId::FreeStream;
  c.deflection1 = 0.0;
  c.deflection2 = 0.0;
  c.domain = Grid2D::unit_square(nx, ny);
  return c;
}

void FlowCase::validate() const
{
  domain.validate(3);
  require(mach > 1.0, ErrorCode::Config, "free-stream Mach must be supersonic");
  require(gamma > 1.0, ErrorCode::Config, "gamma must exceed 1");
  require(deflection1 >= 0.0 && deflection2 >= 0.0, ErrorCode::Config,
          "deflections are non-negative magnitudes");
}

std::string FlowCase::key() const
{
  std::ostringstream os;
  os << to_string(id) << ";M=" << format_double(mach) << ";a1=" << format_double(deflection1)
     << ";a2=" << format_double(deflection2) << ";g=" << format_double(gamma)
     << ";xc=" << format_double(interaction_x) << ";yc=" << format_double(interaction_y)
     << ";nx=" << domain.nx << ";ny=" << domain.ny << ";x0=" << format_double(domain.x0)
     << ";y0=" << format_double(domain.y0) << ";dx=" << format_double(domain.dx)
     << ";dy=" << format_double(domain.dy);
  return os.str();
}

namespace analytic
{

RegionMap build_edney1(const FlowCase &c)
{
  c.validate();
  require(c.id == CaseId::EdneyI, ErrorCode::Config, "build_edney1 needs an EdneyI case");
  require(c.deflection1 > 0.0 && c.deflection2 > 0.0, ErrorCode::Config,
          "Edney-I needs two positive deflections");
  const double g = c.gamma;
  const double a1 = gas::deg(c.deflection1);
  const double a2 = gas::deg(c.deflection2);
  const auto inflow = c.inflow();

  // Lower incident shock turns the stream up by a1, upper one turns it down by a2.
  const auto shock_a = oblique_shock(inflow, a1, ShockSide::Left, g);
  const auto shock_b = oblique_shock(inflow, a2, ShockSide::Right, g);
  const auto &r1 = shock_a.downstream;
  const auto &r2 = shock_b.downstream;
  const double th1 = gas::flow_angle(r1);
  const double th2 = gas::flow_angle(r2);
  const double m1 = gas::mach(r1, g);
  const double m2 = gas::mach(r2, g);

  // Common downstream direction phi: region 1 turned down by (th1 - phi) must reach the
  // pressure of region 2 turned up by (phi - th2).
  const double lim1 = detachment_limit(m1, g).theta;
  const double lim2 = detachment_limit(m2, g).theta;
  const double lo = std::max(th2, th1 - lim1 + kTiny);
  const double hi = std::min(th1, th2 + lim2 - kTiny);
  auto transmitted_b = [&](double phi) { return oblique_shock(r1, th1 - phi, ShockSide::Right, g); };
  auto transmitted_a = [&](double phi) { return oblique_shock(r2, phi - th2, ShockSide::Left, g); };
  auto mismatch = [&](double phi) {
    return transmitted_a(phi).downstream.p - transmitted_b(phi).downstream.p;
  };
  const double phi = bisect_increasing(mismatch, lo, hi, "Edney-I slip-line solve");
  const auto shock_a2 = transmitted_a(phi);
  const auto shock_b2 = transmitted_b(phi);

  const Point C{c.interaction_x, c.interaction_y};
  std::vector<Ray> rays = {
      {"incident_lower", RayKind::Shock, shock_a.line_angle - kPi, true},
      {"transmitted_lower", RayKind::Shock, shock_b2.line_angle, true},
      {"slip_line", RayKind::SlipLine, phi, true},
      {"transmitted_upper", RayKind::Shock, shock_a2.line_angle, false},
      {"incident_upper", RayKind::Shock, shock_b.line_angle + kPi, false},
  };
  std::vector<Sector> sectors = {
      {"behind_lower_shock", r1, std::nullopt},
      {"below_slip_line", shock_b2.downstream, std::nullopt},
      {"above_slip_line", shock_a2.downstream, std::nullopt},
      {"behind_upper_shock", r2, std::nullopt},
      {"free_stream", inflow, std::nullopt},
  };
  RegionMap map(C, std::move(rays), std::move(sectors));
  map.shocks = {shock_a, shock_b, shock_a2, shock_b2};
  map.slips = {{"slip_line", shock_a2.downstream, shock_b2.downstream}};
  map.slip_angle = phi;
  map.description = "Edney I crossing shocks";
  return map;
}

RegionMap build_edney6(const FlowCase &c)
{
  c.validate();
  require(c.id == CaseId::EdneyVI, ErrorCode::Config, "build_edney6 needs an EdneyVI case");
  require(c.deflection1 > 0.0, ErrorCode::Config, "Edney-VI needs a positive first deflection");
  const double g = c.gamma;
  const double a1 = gas::deg(c.deflection1);
  const double a2 = gas::deg(c.deflection2);
  const auto inflow = c.inflow();
  const Point C{c.interaction_x, c.interaction_y};

  const auto shock1 = oblique_shock(inflow, a1, ShockSide::Left, g);
  const auto &r1 = shock1.downstream;
  if (c.deflection2 == 0.0)
  {
    // Degenerate: one shock through the interaction point.
    std::vector<Ray> rays = {{"shock_1_upstream", RayKind::Shock, shock1.line_angle - kPi, true},
                             {"shock_1", RayKind::Shock, shock1.line_angle, false}};
    std::vector<Sector> sectors = {{"behind_shock_1", r1, std::nullopt},
                                   {"free_stream", inflow, std::nullopt}};
    RegionMap map(C, std::move(rays), std::move(sectors));
    map.shocks = {shock1};
    map.slip_angle = gas::flow_angle(r1);
    map.description = "Edney VI with a single deflection";
    return map;
  }

  const auto shock2 = oblique_shock(r1, a2, ShockSide::Left, g);
  const auto &r2 = shock2.downstream;
  require(shock2.line_angle > shock1.line_angle, ErrorCode::Geometry,
          "second shock does not overtake the first");
  const double th2 = gas::flow_angle(r2);
  const double m2 = gas::mach(r2, g);
  const double lim0 = detachment_limit(c.mach, g).theta;

  // Merged shock turns the free stream to phi; region 2 expands up to phi. The pressure
  // behind the merged shock grows with phi while the expanded pressure falls.
  auto merged = [&](double phi) { return oblique_shock(inflow, phi, ShockSide::Left, g); };
  auto expanded = [&](double phi) { return isentropic_expansion(r2, phi - th2, g); };
  auto mismatch = [&](double phi) { return merged(phi).downstream.p - expanded(phi).p; };
  const double phi = bisect_increasing(mismatch, th2, lim0 - kTiny, "Edney-VI merge solve");
  const auto shock_m = merged(phi);
  const auto r4 = expanded(phi);
  const double lead = th2 - std::asin(1.0 / m2);
  const double trail = phi - std::asin(1.0 / gas::mach(r4, g));

  Fan fan;
  fan.reference = r2;
  fan.theta_begin = th2;
  fan.theta_end = phi;
  fan.gamma = g;

  std::vector<Ray> rays = {
      {"shock_1", RayKind::Shock, shock1.line_angle - kPi, true},
      {"shock_2", RayKind::Shock, shock2.line_angle - kPi, true},
      {"fan_leading_edge", RayKind::FanEdge, lead, true},
      {"fan_trailing_edge", RayKind::FanEdge, trail, true},
      {"slip_line", RayKind::SlipLine, phi, true},
      {"merged_shock", RayKind::Shock, shock_m.line_angle, false},
  };
  std::vector<Sector> sectors = {
      {"behind_shock_1", r1, std::nullopt},
      {"behind_shock_2", r2, std::nullopt},
      {"expansion_fan", r2, fan},
      {"expanded", r4, std::nullopt},
      {"behind_merged_shock", shock_m.downstream, std::nullopt},
      {"free_stream", inflow, std::nullopt},
  };
  RegionMap map(C, std::move(rays), std::move(sectors));
  map.shocks = {shock1, shock2, shock_m};
  map.slips = {{"slip_line", shock_m.downstream, r4}};
  map.slip_angle = phi;
  map.description = "Edney VI merging shocks";
  return map;
}

RegionMap build_region_map(const FlowCase &c)
{
  switch (c.id)
  {
    case CaseId::EdneyI:
      return build_edney1(c);
    case CaseId::EdneyVI:
      return build_edney6(c);
    case CaseId::FreeStream:
      c.validate();
      return RegionMap::uniform(c.inflow());
  }
  fail(ErrorCode::Config, "unknown case");
}

}  // namespace analytic

}  // namespace diffest
