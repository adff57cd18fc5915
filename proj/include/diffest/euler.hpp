// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_EULER_HPP
#define DIFFEST_EULER_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "diffest/field.hpp"
#include "diffest/flow_case.hpp"
#include "diffest/gas.hpp"

namespace diffest::euler
{

enum class Scheme
{
  CIR,          // first-order characteristic upwinding (Roe linearization)
  MacCormack,   // predictor-corrector, forward then backward differences
  LaxWendroff,  // two-step Richtmyer with face-centered half step
  WENO3,
  WENO5
};

enum class Viscosity
{
  None,
  Order2,  // + mu (d2x + d2y) q, undivided differences
  Order4   // - mu (d4x + d4y) q
};

struct SchemeSpec
{
  std::string id;
  Scheme scheme = Scheme::CIR;
  int order = 1;
  Viscosity viscosity = Viscosity::None;
  double mu = 0.0;

  // Stable labels: CIR, MC, MC-AV2-001, MC-AV2-0002, MC-AV4-001, LW-AV2-001, W3, W5.
  static SchemeSpec from_label(const std::string &label);
  static const std::vector<std::string> &labels();
  // The same stencil with a different (or no) dissipation, for order studies.
  static SchemeSpec make(Scheme scheme, Viscosity viscosity = Viscosity::None, double mu = 0.0);

  int ghost_layers() const;
  void validate() const;
};

// Conservative state with ghost layers; (i, j) runs over [-g, n + g).
class ConservativeField
{
public:
  ConservativeField() = default;
  ConservativeField(const Grid2D &grid, int ghost, const gas::Conservative &fill = {1, 0, 0, 1});

  const Grid2D &grid() const { return grid_; }
  int ghost() const { return ghost_; }
  int stride() const { return grid_.ny + 2 * ghost_; }
  std::size_t index(int i, int j) const
  {
    return static_cast<std::size_t>(i + ghost_) * stride() + static_cast<std::size_t>(j + ghost_);
  }
  gas::Conservative &operator()(int i, int j) { return q_[index(i, j)]; }
  const gas::Conservative &operator()(int i, int j) const { return q_[index(i, j)]; }
  std::vector<gas::Conservative> &raw() { return q_; }
  const std::vector<gas::Conservative> &raw() const { return q_; }

  void fill_interior(const std::function<gas::Primitive(double, double)> &state,
                     double gamma = gas::kGamma);
  FieldSet primitive_fields(const std::string &label = {}, double gamma = gas::kGamma) const;
  static ConservativeField from_primitive(const FieldSet &prim, int ghost,
                                          double gamma = gas::kGamma);

  double total(int component) const;  // sum over interior * cell area

private:
  Grid2D grid_;
  int ghost_ = 0;
  std::vector<gas::Conservative> q_;
};

enum class BoundaryKind
{
  Dirichlet,    // ghost cells hold the prescribed state sampled at their centers
  Extrapolate,  // zero-order copy of the nearest interior cell
  Periodic
};

struct BoundarySpec
{
  BoundaryKind left = BoundaryKind::Dirichlet;
  BoundaryKind right = BoundaryKind::Extrapolate;
  BoundaryKind bottom = BoundaryKind::Dirichlet;
  BoundaryKind top = BoundaryKind::Dirichlet;
  std::function<gas::Primitive(double, double)> prescribed;

  static BoundarySpec periodic();
  // Analytic trace on left, bottom and top; supersonic outflow on the right.
  static BoundarySpec for_case(const FlowCase &c, const analytic::RegionMap &map);
};

// Fills ghost layers; Dirichlet values are sampled once at construction.
class BoundaryConditions
{
public:
  BoundaryConditions(const BoundarySpec &spec, const Grid2D &grid, int ghost,
                     double gamma = gas::kGamma);
  void apply(ConservativeField &f) const;

private:
  BoundarySpec spec_;
  Grid2D grid_;
  int ghost_;
  std::vector<gas::Conservative> fixed_;  // full padded array, only ghost entries used
};

// Physical fluxes of the Euler equations.
gas::Conservative flux_x(const gas::Conservative &q, double gamma = gas::kGamma);
gas::Conservative flux_y(const gas::Conservative &q, double gamma = gas::kGamma);
// Axis selector form: axis 0 = X, 1 = Y. Throws Positivity for unphysical states.
gas::Conservative flux(const gas::Conservative &q, int axis, double gamma = gas::kGamma);

// Upwind interface flux |A| built from the Roe-averaged characteristic decomposition.
gas::Conservative upwind_flux_x(const gas::Conservative &ql, const gas::Conservative &qr,
                                double gamma = gas::kGamma);

// Explicit time stepper holding the scheme, boundary conditions and scratch buffers.
class Stepper
{
public:
  Stepper(const SchemeSpec &scheme, const BoundaryConditions &bc, const Grid2D &grid,
          double gamma = gas::kGamma);
  ~Stepper();
  Stepper(Stepper &&) noexcept;

  // dt = cfl * min(dx, dy) / max(|U| + a, |V| + a) over the interior.
  double stable_dt(const ConservativeField &f, double cfl) const;

  // Advances by dt; throws Positivity if density or pressure leave the physical range.
  void step(ConservativeField &f, double dt);
  long steps_taken() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void step_cir(ConservativeField &f, double dt, const BoundaryConditions &bc);
void step_maccormack(ConservativeField &f, double dt, const BoundaryConditions &bc,
                     Viscosity av = Viscosity::None, double mu = 0.0);
void step_lax_wendroff(ConservativeField &f, double dt, const BoundaryConditions &bc,
                       Viscosity av = Viscosity::None, double mu = 0.0);
void step_weno(ConservativeField &f, double dt, const BoundaryConditions &bc, int order);

struct MarchOptions
{
  double cfl = 0.4;
  double steady_tol = 1e-8;
  long max_steps = 0;  // 0: 200 * max(nx, ny)
  bool record_history = true;
};

struct RunResult
{
  FieldSet fields;  // primitive rho, U, V, P
  std::vector<double> residuals;
  long steps = 0;
  bool converged = false;
  double final_residual = 0.0;
  double wall_seconds = 0.0;
};

RunResult march_to_steady(const FlowCase &c, const SchemeSpec &scheme, const MarchOptions &opt);

}  // namespace diffest::euler

#endif
