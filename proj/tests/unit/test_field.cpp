// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <set>

#include "diffest/error.hpp"
#include "diffest/field.hpp"

using namespace diffest;

TEST_CASE("unit square grid geometry")
{
  const auto g = Grid2D::unit_square(4, 5);
  CHECK(g.cells() == 20);
  CHECK(g.dx == doctest::Approx(0.25));
  CHECK(g.dy == doctest::Approx(0.2));
  CHECK(g.xc(0) == doctest::Approx(0.125));
  CHECK(g.yc(4) == doctest::Approx(0.9));
  CHECK(g.cell_area() == doctest::Approx(0.05));
  CHECK_THROWS_AS(Grid2D::unit_square(0, 3).validate(), Error);
  CHECK_THROWS_AS(Grid2D::unit_square(2, 2).validate(3), Error);
}

TEST_CASE("flat index runs y fastest with 1-based positions")
{
  const auto g = Grid2D::unit_square(3, 3);
  CHECK(flat_index_1based(g, 1, 1) == 1);
  CHECK(flat_index_1based(g, 1, 3) == 3);
  CHECK(flat_index_1based(g, 2, 1) == 4);
  CHECK(flat_index_1based(g, 3, 3) == 9);
  CHECK(global_index(g, 1, 0, 0) == 9);
}

TEST_CASE("flat index is a bijection on non-square grids")
{
  for (const auto &[nx, ny] : {std::pair{3, 7}, std::pair{8, 2}, std::pair{1, 1}})
  {
    const auto g = Grid2D::unit_square(nx, ny);
    std::set<std::size_t> seen;
    for (int v = 0; v < 2; ++v)
    {
      for (int kx = 0; kx < nx; ++kx)
      {
        for (int my = 0; my < ny; ++my)
        {
          const auto m = global_index(g, v, kx, my);
          CHECK(m < 2 * g.cells());
          CHECK(seen.insert(m).second);
          const auto back = unflatten(g, m);
          CHECK(back.kx == kx + 1);
          CHECK(back.my == my + 1);
          CHECK(back.v == v);
          CHECK(back.i == flat_index_1based(g, kx + 1, my + 1));
        }
      }
    }
    CHECK(seen.size() == 2 * g.cells());
  }
}

TEST_CASE("vectorize keeps variable blocks contiguous")
{
  const auto g = Grid2D::unit_square(2, 2);
  FieldSet s;
  s.grid = g;
  s.fields = {GridField(g, "rho", std::vector<double>{1, 2, 3, 4}),
              GridField(g, "P", std::vector<double>{5, 6, 7, 8})};
  const auto v = vectorize(s);
  CHECK(v == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
  const auto back = devectorize(v, g, {"rho", "P"}, "x");
  CHECK(back.field("P").at(1, 0) == 7.0);
  CHECK(back.field("rho").at(0, 1) == 2.0);
  CHECK(back.label == "x");

  const auto one = Grid2D::unit_square(1, 1);
  CHECK(vectorize(GridField(one, "rho", 2.5)) == std::vector<double>{2.5});
}

TEST_CASE("vectorize and devectorize round trip random fields")
{
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto g = Grid2D::unit_square(5, 3);
  std::vector<double> v(3 * g.cells());
  for (auto &x : v)
  {
    x = u(rng);
  }
  const auto s = devectorize(v, g, {"rho", "U", "V"});
  CHECK(vectorize(s) == v);
  CHECK_THROWS_AS(devectorize(std::vector<double>(7), g, {"rho"}), Error);
}

TEST_CASE("grid field positivity")
{
  const auto g = Grid2D::unit_square(2, 2);
  CHECK_THROWS_AS(GridField(g, "rho", -1.0).validate(), Error);
  CHECK_THROWS_AS(GridField(g, "P", 0.0).validate(), Error);
  CHECK_NOTHROW(GridField(g, "U", -1.0).validate());
}

TEST_CASE("solution ensemble bookkeeping")
{
  const auto g = Grid2D::unit_square(2, 2);
  SolutionEnsemble e(g, {"rho"});
  e.add("a", {1, 2, 3, 4});
  e.add("b", {0, 2, 2, 4});
  CHECK_THROWS_AS(e.require_solvable(), Error);
  CHECK_THROWS_AS(e.add("c", {1, 2, 3}), Error);
  e.add("c", {1, 1, 1, 1});
  CHECK_NOTHROW(e.require_solvable());
  CHECK(e.size() == 3);
  CHECK(e.vector_length() == 4);
  CHECK(e.difference(0, 1) == std::vector<double>{1, 0, 1, 0});
  CHECK_THROWS_AS(e.difference(1, 1), Error);
  CHECK(e.label(2) == "c");
  CHECK(e.value(1, 2) == 2.0);

  try
  {
    SolutionEnsemble(g, {"rho"}).require_solvable();
    FAIL("expected an error");
  }
  catch (const Error &err)
  {
    CHECK(err.code() == ErrorCode::Underdetermined);
  }
}
