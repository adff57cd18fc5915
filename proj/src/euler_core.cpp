// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "diffest/error.hpp"
#include "diffest/euler.hpp"

namespace diffest::euler
{

using gas::Conservative;

SchemeSpec SchemeSpec::make(Scheme scheme, Viscosity viscosity, double mu)
{
  SchemeSpec s;
  s.scheme = scheme;
  s.viscosity = viscosity;
  s.mu = mu;
  switch (scheme)
  {
    case Scheme::CIR:
      s.order = 1;
      s.id = "CIR";
      break;
    case Scheme::MacCormack:
      s.order = 2;
      s.id = "MC";
      break;
    case Scheme::LaxWendroff:
      s.order = 2;
      s.id = "LW";
      break;
    case Scheme::WENO3:
      s.order = 3;
      s.id = "W3";
      break;
    case Scheme::WENO5:
      s.order = 5;
      s.id = "W5";
      break;
  }
  if (viscosity != Viscosity::None)
  {
    s.id += viscosity == Viscosity::Order2 ? "-AV2" : "-AV4";
  }
  return s;
}

const std::vector<std::string> &SchemeSpec::labels()
{
  static const std::vector<std::string> all = {"CIR",        "MC", "MC-AV2-001", "MC-AV2-0002",
                                               "MC-AV4-001", "LW-AV2-001", "W3", "W5"};
  return all;
}

SchemeSpec SchemeSpec::from_label(const std::string &label)
{
  SchemeSpec s;
  if (label == "CIR")
  {
    s = make(Scheme::CIR);
  }
  else if (label == "MC")
  {
    s = make(Scheme::MacCormack);
  }
  else if (label == "MC-AV2-001")
  {
    s = make(Scheme::MacCormack, Viscosity::Order2, 0.01);
  }
  else if (label == "MC-AV2-0002")
  {
    s = make(Scheme::MacCormack, Viscosity::Order2, 0.002);
  }
  else if (label == "MC-AV4-001")
  {
    s = make(Scheme::MacCormack, Viscosity::Order4, 0.01);
  }
  else if (label == "LW-AV2-001")
  {
    s = make(Scheme::LaxWendroff, Viscosity::Order2, 0.01);
  }
  else if (label == "W3")
  {
    s = make(Scheme::WENO3);
  }
  else if (label == "W5")
  {
    s = make(Scheme::WENO5);
  }
  else
  {
    fail(ErrorCode::Config, "unknown scheme label '" + label + "'");
  }
  s.id = label;
  return s;
}

int SchemeSpec::ghost_layers() const
{
  return 3;
}

void SchemeSpec::validate() const
{
  require(mu >= 0.0 && std::isfinite(mu), ErrorCode::Config, "viscosity coefficient must be >= 0");
  require(viscosity == Viscosity::None || scheme == Scheme::MacCormack ||
              scheme == Scheme::LaxWendroff,
          ErrorCode::Config, "artificial viscosity applies to MacCormack and Lax-Wendroff only");
}

ConservativeField::ConservativeField(const Grid2D &grid, int ghost, const Conservative &fill)
    : grid_(grid), ghost_(ghost)
{
  grid.validate(3);
  require(ghost >= 1, ErrorCode::Structural, "at least one ghost layer is required");
  q_.assign(static_cast<std::size_t>(grid.nx + 2 * ghost) * (grid.ny + 2 * ghost), fill);
}

void ConservativeField::fill_interior(const std::function<gas::Primitive(double, double)> &state,
                                      double gamma)
{
  for (int i = 0; i < grid_.nx; ++i)
  {
    for (int j = 0; j < grid_.ny; ++j)
    {
      (*this)(i, j) = gas::to_conservative(state(grid_.xc(i), grid_.yc(j)), gamma);
    }
  }
}

FieldSet ConservativeField::primitive_fields(const std::string &label, double gamma) const
{
  FieldSet out;
  out.grid = grid_;
  out.label = label;
  out.fields = {GridField(grid_, "rho"), GridField(grid_, "U"), GridField(grid_, "V"),
                GridField(grid_, "P")};
  for (int i = 0; i < grid_.nx; ++i)
  {
    for (int j = 0; j < grid_.ny; ++j)
    {
      const auto w = gas::to_primitive((*this)(i, j), gamma);
      out.fields[0].at(i, j) = w.rho;
      out.fields[1].at(i, j) = w.u;
      out.fields[2].at(i, j) = w.v;
      out.fields[3].at(i, j) = w.p;
    }
  }
  return out;
}

ConservativeField ConservativeField::from_primitive(const FieldSet &prim, int ghost, double gamma)
{
  ConservativeField f(prim.grid, ghost);
  const auto &rho = prim.field("rho");
  const auto &u = prim.field("U");
  const auto &v = prim.field("V");
  const auto &p = prim.field("P");
  for (int i = 0; i < prim.grid.nx; ++i)
  {
    for (int j = 0; j < prim.grid.ny; ++j)
    {
      f(i, j) = gas::to_conservative({rho.at(i, j), u.at(i, j), v.at(i, j), p.at(i, j)}, gamma);
    }
  }
  return f;
}

double ConservativeField::total(int component) const
{
  double s = 0.0;
  for (int i = 0; i < grid_.nx; ++i)
  {
    for (int j = 0; j < grid_.ny; ++j)
    {
      s += (*this)(i, j)[component];
    }
  }
  return s * grid_.cell_area();
}

BoundarySpec BoundarySpec::periodic()
{
  BoundarySpec s;
  s.left = s.right = s.bottom = s.top = BoundaryKind::Periodic;
  return s;
}

BoundarySpec BoundarySpec::for_case(const FlowCase &c, const analytic::RegionMap &map)
{
  (void)c;
  BoundarySpec s;
  s.left = BoundaryKind::Dirichlet;
  s.bottom = BoundaryKind::Dirichlet;
  s.top = BoundaryKind::Dirichlet;
  s.right = BoundaryKind::Extrapolate;
  s.prescribed = [map](double x, double y) { return map.sample(x, y); };
  return s;
}

BoundaryConditions::BoundaryConditions(const BoundarySpec &spec, const Grid2D &grid, int ghost,
                                       double gamma)
    : spec_(spec), grid_(grid), ghost_(ghost)
{
  grid.validate(3);
  require((spec.left == BoundaryKind::Periodic) == (spec.right == BoundaryKind::Periodic) &&
              (spec.bottom == BoundaryKind::Periodic) == (spec.top == BoundaryKind::Periodic),
          ErrorCode::Config, "periodic boundaries must come in opposite pairs");
  const bool any_dirichlet = spec.left == BoundaryKind::Dirichlet ||
                             spec.right == BoundaryKind::Dirichlet ||
                             spec.bottom == BoundaryKind::Dirichlet ||
                             spec.top == BoundaryKind::Dirichlet;
  if (!any_dirichlet)
  {
    return;
  }
  require(static_cast<bool>(spec.prescribed), ErrorCode::Config,
          "Dirichlet boundaries need a prescribed state");
  const int g = ghost;
  const int stride = grid.ny + 2 * g;
  fixed_.assign(static_cast<std::size_t>(grid.nx + 2 * g) * stride, Conservative{});
  for (int i = -g; i < grid.nx + g; ++i)
  {
    for (int j = -g; j < grid.ny + g; ++j)
    {
      const bool ghost_cell = i < 0 || i >= grid.nx || j < 0 || j >= grid.ny;
      if (ghost_cell)
      {
        fixed_[static_cast<std::size_t>(i + g) * stride + (j + g)] =
            gas::to_conservative(spec.prescribed(grid.xc(i), grid.yc(j)), gamma);
      }
    }
  }
}

void BoundaryConditions::apply(ConservativeField &f) const
{
  const int g = ghost_;
  const int nx = grid_.nx;
  const int ny = grid_.ny;
  require(f.ghost() == g && f.grid() == grid_, ErrorCode::Structural,
          "boundary conditions built for a different field layout");
  auto fixed = [&](int i, int j) -> const Conservative & {
    return fixed_[f.index(i, j)];
  };
  // X sides over interior rows, then Y sides over the full padded width (fills corners).
  for (int j = 0; j < ny; ++j)
  {
    for (int l = 1; l <= g; ++l)
    {
      switch (spec_.left)
      {
        case BoundaryKind::Dirichlet:
          f(-l, j) = fixed(-l, j);
          break;
        case BoundaryKind::Extrapolate:
          f(-l, j) = f(0, j);
          break;
        case BoundaryKind::Periodic:
          f(-l, j) = f(nx - l, j);
          break;
      }
      switch (spec_.right)
      {
        case BoundaryKind::Dirichlet:
          f(nx - 1 + l, j) = fixed(nx - 1 + l, j);
          break;
        case BoundaryKind::Extrapolate:
          f(nx - 1 + l, j) = f(nx - 1, j);
          break;
        case BoundaryKind::Periodic:
          f(nx - 1 + l, j) = f(l - 1, j);
          break;
      }
    }
  }
  for (int i = -g; i < nx + g; ++i)
  {
    for (int l = 1; l <= g; ++l)
    {
      switch (spec_.bottom)
      {
        case BoundaryKind::Dirichlet:
          f(i, -l) = fixed(i, -l);
          break;
        case BoundaryKind::Extrapolate:
          f(i, -l) = f(i, 0);
          break;
        case BoundaryKind::Periodic:
          f(i, -l) = f(i, ny - l);
          break;
      }
      switch (spec_.top)
      {
        case BoundaryKind::Dirichlet:
          f(i, ny - 1 + l) = fixed(i, ny - 1 + l);
          break;
        case BoundaryKind::Extrapolate:
          f(i, ny - 1 + l) = f(i, ny - 1);
          break;
        case BoundaryKind::Periodic:
          f(i, ny - 1 + l) = f(i, l - 1);
          break;
      }
    }
  }
}

}  // namespace diffest::euler
