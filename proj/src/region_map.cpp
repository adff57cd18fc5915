// SPDX-License-Identifier: Apache-2.0

#include "diffest/region_map.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "diffest/error.hpp"

namespace diffest::analytic
{

namespace
{

constexpr double kPi = 3.14159265358979323846;

// Map to [a0, a0 + 2 pi).
double wrap_from(double angle, double a0)
{
  double d = std::fmod(angle - a0, 2.0 * kPi);
  if (d < 0.0)
  {
    d += 2.0 * kPi;
  }
  return a0 + d;
}

nlohmann::json state_json(const gas::Primitive &w)
{
  return {{"rho", w.rho}, {"U", w.u}, {"V", w.v}, {"P", w.p}};
}

}  // namespace

const char *to_string(RayKind kind)
{
  switch (kind)
  {
    case RayKind::Shock:
      return "shock";
    case RayKind::SlipLine:
      return "slip_line";
    case RayKind::FanEdge:
      return "fan_edge";
  }
  return "unknown";
}

gas::Primitive Fan::state_at_direction(double theta) const
{
  return isentropic_expansion(reference, theta - theta_begin, gamma);
}

gas::Primitive Fan::sample(double polar_angle) const
{
  // Mach line angle theta - mu(theta) grows monotonically across an expansion.
  auto line = [&](double theta) {
    const auto w = state_at_direction(theta);
    return theta - std::asin(1.0 / gas::mach(w, gamma));
  };
  double lo = std::min(theta_begin, theta_end);
  double hi = std::max(theta_begin, theta_end);
  const double flo = line(lo) - polar_angle;
  const double fhi = line(hi) - polar_angle;
  if (flo >= 0.0 && fhi >= 0.0)
  {
    return state_at_direction(std::abs(flo) < std::abs(fhi) ? lo : hi);
  }
  if (flo <= 0.0 && fhi <= 0.0)
  {
    return state_at_direction(std::abs(flo) < std::abs(fhi) ? lo : hi);
  }
  const bool rising = flo < 0.0;
  for (int it = 0; it < 200; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
    {
      break;
    }
    const double fm = line(mid) - polar_angle;
    if ((fm < 0.0) == rising)
    {
      lo = mid;
    }
    else
    {
      hi = mid;
    }
  }
  return state_at_direction(0.5 * (lo + hi));
}

RegionMap RegionMap::uniform(const gas::Primitive &state, std::string name)
{
  Sector s;
  s.name = std::move(name);
  s.state = state;
  return RegionMap(Point{}, {}, {s});
}

RegionMap::RegionMap(Point center, std::vector<Ray> rays, std::vector<Sector> sectors)
    : center_(center), rays_(std::move(rays)), sectors_(std::move(sectors))
{
  if (rays_.empty())
  {
    require(sectors_.size() == 1, ErrorCode::Geometry, "a ray-free map has exactly one region");
    return;
  }
  require(rays_.size() == sectors_.size() && rays_.size() >= 2, ErrorCode::Geometry,
          "a sector map needs as many regions as rays (at least two)");
  for (auto &r : rays_)
  {
    r.angle = wrap_from(r.angle, -kPi);
  }
  for (std::size_t k = 0; k + 1 < rays_.size(); ++k)
  {
    require(rays_[k].angle < rays_[k + 1].angle, ErrorCode::Geometry,
            "rays must be given in strictly increasing angular order (" + rays_[k].name + ", " +
                rays_[k + 1].name + ")");
  }
}

std::size_t RegionMap::sector_at(double x, double y) const
{
  if (rays_.empty())
  {
    return 0;
  }
  const double dx = x - center_.x;
  const double dy = y - center_.y;
  if (dx == 0.0 && dy == 0.0)
  {
    return 0;
  }
  const double a = std::atan2(dy, dx);
  const std::size_t R = rays_.size();
  for (std::size_t k = 0; k < R; ++k)
  {
    if (a == rays_[k].angle)
    {
      return rays_[k].owned_ccw ? k : (k + R - 1) % R;
    }
  }
  // Sector k covers (angle_k, angle_{k+1}); the last one wraps through +-pi.
  for (std::size_t k = 0; k + 1 < R; ++k)
  {
    if (a > rays_[k].angle && a < rays_[k + 1].angle)
    {
      return k;
    }
  }
  return R - 1;
}

gas::Primitive RegionMap::sample(double x, double y) const
{
  require(std::isfinite(x) && std::isfinite(y), ErrorCode::Geometry, "non-finite sample point");
  const auto &s = sectors_[sector_at(x, y)];
  if (s.fan)
  {
    return s.fan->sample(std::atan2(y - center_.y, x - center_.x));
  }
  return s.state;
}

double RegionMap::distance_to_rays(double x, double y, bool shocks_only) const
{
  double best = std::numeric_limits<double>::infinity();
  const double px = x - center_.x;
  const double py = y - center_.y;
  for (const auto &r : rays_)
  {
    if (shocks_only && r.kind != RayKind::Shock)
    {
      continue;
    }
    const double tx = std::cos(r.angle), ty = std::sin(r.angle);
    const double along = px * tx + py * ty;
    const double d = along >= 0.0 ? std::abs(px * ty - py * tx) : std::hypot(px, py);
    best = std::min(best, d);
  }
  return best;
}

std::string RegionMap::to_json() const
{
  nlohmann::json j;
  j["description"] = description;
  j["center"] = {{"x", center_.x}, {"y", center_.y}};
  j["slip_angle_deg"] = gas::to_deg(slip_angle);
  j["rays"] = nlohmann::json::array();
  for (const auto &r : rays_)
  {
    j["rays"].push_back({{"name", r.name},
                         {"kind", to_string(r.kind)},
                         {"angle_deg", gas::to_deg(r.angle)}});
  }
  j["regions"] = nlohmann::json::array();
  for (const auto &s : sectors_)
  {
    nlohmann::json e = {{"name", s.name}};
    if (s.fan)
    {
      e["fan"] = {{"entry", state_json(s.fan->reference)},
                  {"exit", state_json(s.fan->state_at_direction(s.fan->theta_end))},
                  {"theta_begin_deg", gas::to_deg(s.fan->theta_begin)},
                  {"theta_end_deg", gas::to_deg(s.fan->theta_end)}};
    }
    else
    {
      e["state"] = state_json(s.state);
    }
    j["regions"].push_back(e);
  }
  j["shocks"] = nlohmann::json::array();
  for (const auto &s : shocks)
  {
    j["shocks"].push_back({{"beta_deg", gas::to_deg(s.beta)},
                           {"theta_deg", gas::to_deg(s.theta)},
                           {"mach_up", s.mach_up},
                           {"line_angle_deg", gas::to_deg(s.line_angle)}});
  }
  return j.dump(2);
}

FieldSet project_analytic(const RegionMap &map, const Grid2D &grid)
{
  grid.validate();
  FieldSet out;
  out.grid = grid;
  out.label = "analytic";
  out.fields = {GridField(grid, "rho"), GridField(grid, "U"), GridField(grid, "V"),
                GridField(grid, "P")};
  for (int kx = 0; kx < grid.nx; ++kx)
  {
    for (int my = 0; my < grid.ny; ++my)
    {
      const auto w = map.sample(grid.xc(kx), grid.yc(my));
      out.fields[0].at(kx, my) = w.rho;
      out.fields[1].at(kx, my) = w.u;
      out.fields[2].at(kx, my) = w.v;
      out.fields[3].at(kx, my) = w.p;
    }
  }
  return out;
}

FieldSet true_error(const FieldSet &numerical, const FieldSet &analytic)
{
  require(numerical.grid == analytic.grid, ErrorCode::Structural,
          "numerical and analytic fields live on different grids");
  FieldSet out;
  out.grid = numerical.grid;
  out.label = numerical.label;
  for (const auto &f : numerical.fields)
  {
    const auto &a = analytic.field(f.var);
    require(a.data.size() == f.data.size(), ErrorCode::Structural, "field length mismatch");
    GridField e(out.grid, "err:" + f.var);
    for (std::size_t m = 0; m < f.data.size(); ++m)
    {
      e.data[m] = f.data[m] - a.data[m];
    }
    out.fields.push_back(std::move(e));
  }
  return out;
}

}  // namespace diffest::analytic
