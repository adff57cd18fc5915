// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "diffest/error.hpp"
#include "diffest/field_io.hpp"

using namespace diffest;
namespace fs = std::filesystem;

namespace
{

FieldSet random_state(int nx, int ny, unsigned seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  Grid2D g = Grid2D::unit_square(nx, ny);
  g.x0 = -0.3;
  g.y0 = 0.7;
  FieldSet s;
  s.grid = g;
  s.label = "random state";
  for (const char *v : {"rho", "U", "V", "P"})
  {
    GridField f(g, v);
    for (auto &x : f.data)
    {
      x = u(rng) / 3.0;
    }
    s.fields.push_back(f);
  }
  return s;
}

fs::path scratch(const std::string &name)
{
  const auto dir = fs::temp_directory_path() / "diffest-io-test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("binary container round trips exactly")
{
  const auto s = random_state(7, 4, 1);
  const auto p = scratch("state.bin");
  write_binary(p, s);
  const auto back = read_binary(p);
  CHECK(back.grid == s.grid);
  CHECK(back.label == s.label);
  CHECK(back.variables() == s.variables());
  CHECK(vectorize(back) == vectorize(s));
}

TEST_CASE("csv container round trips exactly")
{
  const auto s = random_state(3, 5, 2);
  const auto p = scratch("state.csv");
  write_fields(p, s);
  const auto back = read_fields(p);
  CHECK(back.grid == s.grid);
  CHECK(back.variables() == s.variables());
  CHECK(vectorize(back) == vectorize(s));
}

TEST_CASE("csv rows follow the flat index")
{
  const auto g = Grid2D::unit_square(2, 2);
  FieldSet s;
  s.grid = g;
  s.fields = {GridField(g, "rho", std::vector<double>{1, 2, 3, 4})};
  const auto p = scratch("order.csv");
  write_csv(p, s);
  std::ifstream in(p);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line))
  {
    if (!line.empty() && line[0] != '#')
    {
      rows.push_back(line);
    }
  }
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "kx,my,var,value");
  CHECK(rows[1] == "1,1,rho,1");
  CHECK(rows[2] == "1,2,rho,2");
  CHECK(rows[3] == "2,1,rho,3");
  CHECK(rows[4] == "2,2,rho,4");
}

TEST_CASE("format_double is shortest round trip")
{
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_double(third)) == third);
  const double tiny = std::numeric_limits<double>::denorm_min();
  CHECK(std::strtod(format_double(tiny).c_str(), nullptr) == tiny);
}

TEST_CASE("corrupt or missing containers are rejected")
{
  CHECK_THROWS_AS(read_binary(scratch("does-not-exist.bin")), Error);
  const auto p = scratch("garbage.bin");
  {
    std::ofstream out(p, std::ios::binary);
    out << "NOTAFIELD";
  }
  try
  {
    read_binary(p);
    FAIL("expected an error");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::Io);
  }

  const auto s = random_state(3, 3, 3);
  const auto t = scratch("truncated.bin");
  write_binary(t, s);
  fs::resize_file(t, fs::file_size(t) - 8);
  CHECK_THROWS_AS(read_binary(t), Error);
}
