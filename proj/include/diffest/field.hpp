// SPDX-License-Identifier: Apache-2.0

#ifndef DIFFEST_FIELD_HPP
#define DIFFEST_FIELD_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace diffest
{

// Uniform structured grid. Values live at cell centers x0 + (k + 1/2) dx, k = 0..nx-1.
struct Grid2D
{
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  static Grid2D unit_square(int nx, int ny);

  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double xc(int kx) const { return x0 + (kx + 0.5) * dx; }
  double yc(int my) const { return y0 + (my + 0.5) * dy; }
  double cell_area() const { return dx * dy; }

  // Throws Structural unless nx, ny >= min_cells and dx, dy > 0.
  void validate(int min_cells = 1) const;

  bool operator==(const Grid2D &) const = default;
};

// Flat-index convention. Within one variable block the 1-based position of cell
// (kx, my) is ny * (kx - 1) + my, so the Y index runs fastest; on square grids
// this is the familiar Nx * (kx - 1) + my. Variable blocks are contiguous.
std::size_t flat_index_1based(const Grid2D &grid, int kx, int my);
std::size_t global_index(const Grid2D &grid, int var, int kx0, int my0);

struct FlatIndex
{
  std::size_t i;  // 1-based position within the variable block
  int kx;         // 1-based
  int my;         // 1-based
  int v;          // 0-based variable ordinal
};
FlatIndex unflatten(const Grid2D &grid, std::size_t global0);

// One scalar variable sampled on a grid, stored in flat-index order.
struct GridField
{
  Grid2D grid;
  std::string var;
  std::vector<double> data;

  GridField() = default;
  GridField(const Grid2D &g, std::string tag, double fill = 0.0);
  GridField(const Grid2D &g, std::string tag, std::vector<double> values);

  double &at(int kx0, int my0) { return data[static_cast<std::size_t>(kx0) * grid.ny + my0]; }
  double at(int kx0, int my0) const { return data[static_cast<std::size_t>(kx0) * grid.ny + my0]; }

  // Length check plus positivity for "rho" and "P".
  void validate() const;
};

// A multi-variable state on one grid, e.g. the primitive set (rho, U, V, P).
struct FieldSet
{
  Grid2D grid;
  std::string label;
  std::vector<GridField> fields;

  std::vector<std::string> variables() const;
  const GridField &field(const std::string &var) const;
  GridField &field(const std::string &var);
  std::size_t vector_length() const { return grid.cells() * fields.size(); }
};

std::vector<double> vectorize(const GridField &field);
std::vector<double> vectorize(const FieldSet &state);
FieldSet devectorize(std::span<const double> vec, const Grid2D &grid,
                     const std::vector<std::string> &variables, std::string label = {});

// n solutions of identical grid and variable ordering, each vectorized to length M.
class SolutionEnsemble
{
public:
  SolutionEnsemble(const Grid2D &grid, std::vector<std::string> variables);

  void add(const std::string &label, std::vector<double> values);
  void add(const FieldSet &state);

  const Grid2D &grid() const { return grid_; }
  const std::vector<std::string> &variables() const { return variables_; }
  std::size_t size() const { return labels_.size(); }
  std::size_t vector_length() const { return grid_.cells() * variables_.size(); }
  const std::string &label(std::size_t j) const { return labels_.at(j); }
  const std::vector<std::string> &labels() const { return labels_; }
  std::span<const double> solution(std::size_t j) const { return solutions_.at(j); }
  double value(std::size_t j, std::size_t m) const { return solutions_[j][m]; }

  // Throws Underdetermined when fewer than three solutions are present.
  void require_solvable() const;

  // u^(i) - u^(j), 0-based solution indices.
  std::vector<double> difference(std::size_t i, std::size_t j) const;

private:
  Grid2D grid_;
  std::vector<std::string> variables_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> solutions_;
};

}  // namespace diffest

#endif
