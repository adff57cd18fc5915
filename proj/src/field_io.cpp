// SPDX-License-Identifier: Apache-2.0

#include "diffest/field_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "diffest/error.hpp"

namespace diffest
{

namespace
{

constexpr std::array<char, 8> kMagic = {'D', 'I', 'F', 'F', 'E', 'S', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream &os, T value)
{
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  static_assert(sizeof(T) == sizeof(U));
  const U bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes;
  for (std::size_t b = 0; b < sizeof(U); ++b)
  {
    bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
  }
  os.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream &is)
{
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  std::array<unsigned char, sizeof(U)> bytes;
  is.read(reinterpret_cast<char *>(bytes.data()), bytes.size());
  require(static_cast<bool>(is), ErrorCode::Io, "truncated field container");
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b)
  {
    bits |= static_cast<U>(bytes[b]) << (8 * b);
  }
  return std::bit_cast<T>(bits);
}

void put_string(std::ostream &os, const std::string &s)
{
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream &is)
{
  const auto len = get<std::uint32_t>(is);
  require(len < (1u << 20), ErrorCode::Io, "implausible string length in field container");
  std::string s(len, '\0');
  is.read(s.data(), len);
  require(static_cast<bool>(is), ErrorCode::Io, "truncated field container");
  return s;
}

double parse_double(const std::string &text)
{
  double v = 0.0;
  const char *first = text.data();
  const char *last = text.data() + text.size();
  while (first < last && *first == ' ')
  {
    ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, v);
  require(ec == std::errc() && ptr == last, ErrorCode::Io, "bad number '" + text + "'");
  return v;
}

int parse_int(const std::string &text)
{
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorCode::Io,
          "bad integer '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string &s, char sep)
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep))
  {
    out.push_back(item);
  }
  return out;
}

}  // namespace

std::string format_double(double v)
{
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc())
  {
    return "nan";
  }
  return std::string(buf.data(), ptr);
}

void write_binary(const std::filesystem::path &path, const FieldSet &state)
{
  const auto data = vectorize(state);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(os), ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  os.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(os, kVersion);
  put<std::int32_t>(os, state.grid.nx);
  put<std::int32_t>(os, state.grid.ny);
  put<double>(os, state.grid.x0);
  put<double>(os, state.grid.y0);
  put<double>(os, state.grid.dx);
  put<double>(os, state.grid.dy);
  put_string(os, state.label);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(state.fields.size()));
  for (const auto &f : state.fields)
  {
    put_string(os, f.var);
  }
  put<std::uint64_t>(os, static_cast<std::uint64_t>(data.size()));
  for (double v : data)
  {
    put<double>(os, v);
  }
  require(static_cast<bool>(os), ErrorCode::Io, "write to '" + path.string() + "' failed");
}

FieldSet read_binary(const std::filesystem::path &path)
{
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::array<char, 8> magic;
  is.read(magic.data(), magic.size());
  require(static_cast<bool>(is) && magic == kMagic, ErrorCode::Io,
          "'" + path.string() + "' is not a field container");
  const auto version = get<std::uint32_t>(is);
  require(version == kVersion, ErrorCode::Io, "unsupported container version");
  Grid2D grid;
  grid.nx = get<std::int32_t>(is);
  grid.ny = get<std::int32_t>(is);
  grid.x0 = get<double>(is);
  grid.y0 = get<double>(is);
  grid.dx = get<double>(is);
  grid.dy = get<double>(is);
  grid.validate();
  std::string label = get_string(is);
  const auto nvars = get<std::uint32_t>(is);
  require(nvars < 1024, ErrorCode::Io, "implausible variable count");
  std::vector<std::string> vars;
  for (std::uint32_t v = 0; v < nvars; ++v)
  {
    vars.push_back(get_string(is));
  }
  const auto count = get<std::uint64_t>(is);
  require(count == grid.cells() * nvars, ErrorCode::Structural,
          "container data length does not match its header");
  std::vector<double> data(count);
  for (auto &v : data)
  {
    v = get<double>(is);
  }
  return devectorize(data, grid, vars, std::move(label));
}

void write_csv(const std::filesystem::path &path, const FieldSet &state)
{
  std::ofstream os(path, std::ios::trunc);
  require(static_cast<bool>(os), ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  const Grid2D &g = state.grid;
  os << "# diffest-field v" << kVersion << '\n';
  os << "# nx=" << g.nx << ",ny=" << g.ny << ",x0=" << format_double(g.x0)
     << ",y0=" << format_double(g.y0) << ",dx=" << format_double(g.dx)
     << ",dy=" << format_double(g.dy) << '\n';
  os << "# label=" << state.label << '\n';
  os << "# vars=";
  for (std::size_t v = 0; v < state.fields.size(); ++v)
  {
    os << (v ? ";" : "") << state.fields[v].var;
  }
  os << '\n';
  os << "kx,my,var,value\n";
  for (const auto &f : state.fields)
  {
    require(f.data.size() == g.cells(), ErrorCode::Structural, "field length mismatch");
    for (int kx = 0; kx < g.nx; ++kx)
    {
      for (int my = 0; my < g.ny; ++my)
      {
        os << kx + 1 << ',' << my + 1 << ',' << f.var << ',' << format_double(f.at(kx, my))
           << '\n';
      }
    }
  }
  require(static_cast<bool>(os), ErrorCode::Io, "write to '" + path.string() + "' failed");
}

FieldSet read_csv(const std::filesystem::path &path)
{
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::map<std::string, std::string> meta;
  std::string line;
  std::vector<std::string> rows;
  bool header_seen = false;
  while (std::getline(is, line))
  {
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    if (line.empty())
    {
      continue;
    }
    if (line[0] == '#')
    {
      for (const auto &kv : split(line.substr(1), ','))
      {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
        {
          continue;
        }
        auto key = kv.substr(0, eq);
        key.erase(0, key.find_first_not_of(' '));
        meta[key] = kv.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen)
    {
      require(line == "kx,my,var,value", ErrorCode::Io, "unexpected CSV column header");
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  for (const char *key : {"nx", "ny", "x0", "y0", "dx", "dy", "vars"})
  {
    require(meta.count(key) != 0, ErrorCode::Io, std::string("CSV header lacks '") + key + "'");
  }
  Grid2D grid;
  grid.nx = parse_int(meta["nx"]);
  grid.ny = parse_int(meta["ny"]);
  grid.x0 = parse_double(meta["x0"]);
  grid.y0 = parse_double(meta["y0"]);
  grid.dx = parse_double(meta["dx"]);
  grid.dy = parse_double(meta["dy"]);
  grid.validate();
  const auto vars = split(meta["vars"], ';');
  require(rows.size() == grid.cells() * vars.size(), ErrorCode::Structural,
          "CSV row count does not match its header");

  std::vector<double> data(rows.size());
  std::vector<char> seen(rows.size(), 0);
  for (const auto &row : rows)
  {
    const auto cols = split(row, ',');
    require(cols.size() == 4, ErrorCode::Io, "bad CSV row '" + row + "'");
    const int kx = parse_int(cols[0]);
    const int my = parse_int(cols[1]);
    int v = -1;
    for (std::size_t q = 0; q < vars.size(); ++q)
    {
      if (vars[q] == cols[2])
      {
        v = static_cast<int>(q);
      }
    }
    require(v >= 0, ErrorCode::Io, "unknown variable '" + cols[2] + "' in CSV row");
    const std::size_t m = global_index(grid, v, kx - 1, my - 1);
    require(!seen[m], ErrorCode::Structural, "duplicate CSV row '" + row + "'");
    seen[m] = 1;
    data[m] = parse_double(cols[3]);
  }
  return devectorize(data, grid, vars, meta.count("label") ? meta["label"] : std::string{});
}

void write_fields(const std::filesystem::path &path, const FieldSet &state)
{
  if (path.extension() == ".csv")
  {
    write_csv(path, state);
  }
  else
  {
    write_binary(path, state);
  }
}

FieldSet read_fields(const std::filesystem::path &path)
{
  return path.extension() == ".csv" ? read_csv(path) : read_binary(path);
}

}  // namespace diffest
