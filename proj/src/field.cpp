// SPDX-License-Identifier: Apache-2.0

#include "diffest/field.hpp"

#include <algorithm>
#include <cmath>

#include "diffest/error.hpp"

namespace diffest
{

Grid2D Grid2D::unit_square(int nx, int ny)
{
  Grid2D g;
  g.nx = nx;
  g.ny = ny;
  g.dx = 1.0 / nx;
  g.dy = 1.0 / ny;
  return g;
}

void Grid2D::validate(int min_cells) const
{
  require(nx >= min_cells && ny >= min_cells, ErrorCode::Structural,
          "grid needs at least " + std::to_string(min_cells) + " cells per direction, got " +
              std::to_string(nx) + "x" + std::to_string(ny));
  require(dx > 0.0 && dy > 0.0 && std::isfinite(dx) && std::isfinite(dy),
          ErrorCode::Structural, "grid spacing must be positive");
}

std::size_t flat_index_1based(const Grid2D &grid, int kx, int my)
{
  require(kx >= 1 && kx <= grid.nx && my >= 1 && my <= grid.ny, ErrorCode::Structural,
          "grid index out of range");
  return static_cast<std::size_t>(grid.ny) * static_cast<std::size_t>(kx - 1) +
         static_cast<std::size_t>(my);
}

std::size_t global_index(const Grid2D &grid, int var, int kx0, int my0)
{
  return static_cast<std::size_t>(var) * grid.cells() + flat_index_1based(grid, kx0 + 1, my0 + 1) - 1;
}

FlatIndex unflatten(const Grid2D &grid, std::size_t global0)
{
  const std::size_t block = grid.cells();
  require(block > 0, ErrorCode::Structural, "empty grid");
  FlatIndex idx;
  idx.v = static_cast<int>(global0 / block);
  const std::size_t local = global0 % block;
  idx.i = local + 1;
  idx.kx = static_cast<int>(local / grid.ny) + 1;
  idx.my = static_cast<int>(local % grid.ny) + 1;
  return idx;
}

GridField::GridField(const Grid2D &g, std::string tag, double fill)
    : grid(g), var(std::move(tag)), data(g.cells(), fill)
{
}

GridField::GridField(const Grid2D &g, std::string tag, std::vector<double> values)
    : grid(g), var(std::move(tag)), data(std::move(values))
{
  require(data.size() == grid.cells(), ErrorCode::Structural,
          "field '" + var + "' has " + std::to_string(data.size()) + " values, grid has " +
              std::to_string(grid.cells()) + " cells");
}

void GridField::validate() const
{
  grid.validate();
  require(data.size() == grid.cells(), ErrorCode::Structural,
          "field '" + var + "' length does not match grid");
  if (var == "rho" || var == "P")
  {
    const bool positive = std::all_of(data.begin(), data.end(), [](double v) { return v > 0.0; });
    require(positive, ErrorCode::Positivity, "field '" + var + "' has non-positive entries");
  }
}

std::vector<std::string> FieldSet::variables() const
{
  std::vector<std::string> vars;
  vars.reserve(fields.size());
  for (const auto &f : fields)
  {
    vars.push_back(f.var);
  }
  return vars;
}

const GridField &FieldSet::field(const std::string &var) const
{
  for (const auto &f : fields)
  {
    if (f.var == var)
    {
      return f;
    }
  }
  fail(ErrorCode::Structural, "no variable '" + var + "' in field set '" + label + "'");
}

GridField &FieldSet::field(const std::string &var)
{
  return const_cast<GridField &>(std::as_const(*this).field(var));
}

std::vector<double> vectorize(const GridField &field)
{
  require(field.data.size() == field.grid.cells(), ErrorCode::Structural,
          "field '" + field.var + "' length does not match grid");
  return field.data;
}

std::vector<double> vectorize(const FieldSet &state)
{
  std::vector<double> out;
  out.reserve(state.vector_length());
  for (const auto &f : state.fields)
  {
    require(f.grid == state.grid, ErrorCode::Structural,
            "field '" + f.var + "' lives on a different grid");
    require(f.data.size() == state.grid.cells(), ErrorCode::Structural,
            "field '" + f.var + "' length does not match grid");
    out.insert(out.end(), f.data.begin(), f.data.end());
  }
  return out;
}

FieldSet devectorize(std::span<const double> vec, const Grid2D &grid,
                     const std::vector<std::string> &variables, std::string label)
{
  const std::size_t block = grid.cells();
  require(vec.size() == block * variables.size(), ErrorCode::Structural,
          "vector length " + std::to_string(vec.size()) + " does not match " +
              std::to_string(variables.size()) + " variables on " + std::to_string(grid.nx) +
              "x" + std::to_string(grid.ny));
  FieldSet out;
  out.grid = grid;
  out.label = std::move(label);
  for (std::size_t v = 0; v < variables.size(); ++v)
  {
    auto first = vec.begin() + static_cast<std::ptrdiff_t>(v * block);
    out.fields.emplace_back(grid, variables[v], std::vector<double>(first, first + block));
  }
  return out;
}

SolutionEnsemble::SolutionEnsemble(const Grid2D &grid, std::vector<std::string> variables)
    : grid_(grid), variables_(std::move(variables))
{
  grid_.validate();
  require(!variables_.empty(), ErrorCode::Structural, "ensemble needs at least one variable");
}

void SolutionEnsemble::add(const std::string &label, std::vector<double> values)
{
  require(values.size() == vector_length(), ErrorCode::Structural,
          "solution '" + label + "' has length " + std::to_string(values.size()) +
              ", ensemble expects " + std::to_string(vector_length()));
  labels_.push_back(label);
  solutions_.push_back(std::move(values));
}

void SolutionEnsemble::add(const FieldSet &state)
{
  require(state.grid == grid_, ErrorCode::Structural,
          "solution '" + state.label + "' lives on a different grid");
  require(state.variables() == variables_, ErrorCode::Structural,
          "solution '" + state.label + "' has a different variable ordering");
  add(state.label, vectorize(state));
}

void SolutionEnsemble::require_solvable() const
{
  require(size() >= 3, ErrorCode::Underdetermined,
          "the difference system needs at least 3 solutions, got " + std::to_string(size()));
}

std::vector<double> SolutionEnsemble::difference(std::size_t i, std::size_t j) const
{
  require(i < size() && j < size(), ErrorCode::Structural, "solution index out of range");
  require(i != j, ErrorCode::Structural, "difference needs two distinct solutions");
  const auto &a = solutions_[i];
  const auto &b = solutions_[j];
  std::vector<double> d(a.size());
  for (std::size_t m = 0; m < a.size(); ++m)
  {
    d[m] = a[m] - b[m];
  }
  return d;
}

}  // namespace diffest
