// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_FLOW_CASE_HPP
#define DIFFEST_FLOW_CASE_HPP

#include <string>

#include "diffest/field.hpp"
#include "diffest/gas.hpp"
#include "diffest/region_map.hpp"

namespace diffest
{

enum class CaseId
{
  FreeStream,
  EdneyI,
  EdneyVI
};

const char *to_string(CaseId id);
CaseId case_from_string(const std::string &name);

// Steady test configuration. Deflections are in degrees. The interaction point is
// where the two incident shocks meet; its position is not fixed by the physics and
// is exposed as a geometry parameter.
struct FlowCase
{
  CaseId id = CaseId::EdneyI;
  double mach = 4.0;
  double deflection1 = 20.0;
  double deflection2 = 15.0;
  double gamma = gas::kGamma;
  double interaction_x = 0.4;
  double interaction_y = 0.5;
  Grid2D domain;

  static FlowCase edney_i(int nx = 100, int ny = 100);
  static FlowCase edney_vi(int nx = 100, int ny = 100);
  static FlowCase free_stream(int nx = 100, int ny = 100);

  void validate() const;
  gas::Primitive inflow() const { return gas::free_stream(mach, gamma); }
  std::string key() const;  // canonical text used for cache addressing
};

namespace analytic
{

// Two opposite-family shocks crossing at the interaction point; transmitted shocks and
// a slip line downstream. The slip direction is found by bisection on the pressure
// mismatch.
RegionMap build_edney1(const FlowCase &c);

// Two same-family shocks from successive deflections merging at the interaction point;
// downstream a single shock, a slip line, and a centered expansion fan toward the wall.
RegionMap build_edney6(const FlowCase &c);

RegionMap build_region_map(const FlowCase &c);

}  // namespace analytic

}  // namespace diffest

#endif
