// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_REGION_MAP_HPP
#define DIFFEST_REGION_MAP_HPP

#include <optional>
#include <string>
#include <vector>

#include "diffest/field.hpp"
#include "diffest/gas.hpp"
#include "diffest/shock.hpp"

namespace diffest::analytic
{

enum class RayKind
{
  Shock,
  SlipLine,
  FanEdge
};

const char *to_string(RayKind kind);

// Half-line leaving the interaction point at `angle` (radians, lab frame).
struct Ray
{
  std::string name;
  RayKind kind = RayKind::Shock;
  double angle = 0.0;
  // Points exactly on the ray belong to the sector on its counterclockwise side when
  // true, otherwise to the clockwise one. Set to the downstream side for shocks.
  bool owned_ccw = true;
};

// Centered simple wave of the second family: straight Mach lines at angle theta - mu
// through the center, flow direction running from theta_begin to theta_end.
struct Fan
{
  gas::Primitive reference;  // state entering the fan (direction theta_begin)
  double theta_begin = 0.0;
  double theta_end = 0.0;
  double gamma = gas::kGamma;

  gas::Primitive state_at_direction(double theta) const;
  gas::Primitive sample(double polar_angle) const;
};

struct Sector
{
  std::string name;
  gas::Primitive state;
  std::optional<Fan> fan;
};

// States across a slip line; pressure and direction must agree.
struct SlipCheck
{
  std::string name;
  gas::Primitive above;
  gas::Primitive below;
};

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

// Piecewise-constant (plus centered fan) steady flow organized as angular sectors
// around one interaction point. Sector k spans counterclockwise from ray k to ray k+1.
class RegionMap
{
public:
  static RegionMap uniform(const gas::Primitive &state, std::string name = "free_stream");
  RegionMap(Point center, std::vector<Ray> rays, std::vector<Sector> sectors);

  const Point &center() const { return center_; }
  const std::vector<Ray> &rays() const { return rays_; }
  const std::vector<Sector> &sectors() const { return sectors_; }

  std::size_t sector_at(double x, double y) const;
  gas::Primitive sample(double x, double y) const;

  // Distance to the nearest ray (or the center when behind every ray).
  double distance_to_rays(double x, double y, bool shocks_only = false) const;

  std::vector<ShockState> shocks;
  std::vector<SlipCheck> slips;
  double slip_angle = 0.0;
  std::string description;

  std::string to_json() const;

private:
  Point center_;
  std::vector<Ray> rays_;
  std::vector<Sector> sectors_;
};

// Point-samples the map at cell centers: rho, U, V, P.
FieldSet project_analytic(const RegionMap &map, const Grid2D &grid);

// numerical - analytic for every variable present in both, tags "err:<var>".
FieldSet true_error(const FieldSet &numerical, const FieldSet &analytic);

}  // namespace diffest::analytic

#endif
