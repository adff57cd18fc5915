// SPDX-License-Identifier: Apache-2.0

#include "diffest/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "diffest/error.hpp"
#include "diffest/field_io.hpp"
#include "diffest/region_map.hpp"

namespace diffest::harness
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &value)
{
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (!item.empty())
    {
      out.push_back(item);
    }
  }
  return out;
}

double parse_double(const std::string &key, const std::string &value)
{
  try
  {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    require(used == value.size(), ErrorCode::Config, "");
    return v;
  }
  catch (const std::exception &)
  {
    fail(ErrorCode::Config, "config key '" + key + "': '" + value + "' is not a number");
  }
}

long parse_long(const std::string &key, const std::string &value)
{
  try
  {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    require(used == value.size(), ErrorCode::Config, "");
    return v;
  }
  catch (const std::exception &)
  {
    fail(ErrorCode::Config, "config key '" + key + "': '" + value + "' is not an integer");
  }
}

std::string join(const std::vector<std::string> &items, const char *sep)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i)
  {
    out += (i ? sep : "") + items[i];
  }
  return out;
}

std::string num(double v)
{
  return std::isfinite(v) ? format_double(v) : std::string("NA");
}

ordered_json json_num(double v)
{
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

void write_text(const fs::path &path, const std::string &text)
{
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path());
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + tmp.string());
    out << text;
    require(static_cast<bool>(out), ErrorCode::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects emitted files; each path may appear once.
class ArtifactLog
{
public:
  explicit ArtifactLog(fs::path root) : root_(std::move(root)) {}

  fs::path add(const std::string &relative, const std::string &kind)
  {
    require(seen_.insert(relative).second, ErrorCode::Internal,
            "artifact emitted twice: " + relative);
    items_.push_back({relative, kind});
    const fs::path full = root_ / relative;
    fs::create_directories(full.parent_path());
    return full;
  }
  std::vector<Artifact> take() { return std::move(items_); }

private:
  fs::path root_;
  std::set<std::string> seen_;
  std::vector<Artifact> items_;
};

FieldSet select_variables(const FieldSet &src, const std::vector<std::string> &vars,
                          const std::string &label)
{
  FieldSet out;
  out.grid = src.grid;
  out.label = label;
  for (const auto &v : vars)
  {
    out.fields.push_back(src.field(v));
  }
  return out;
}

std::vector<double> variable_block(std::span<const double> vec, std::size_t var_index,
                                   std::size_t cells)
{
  const auto b = vec.subspan(var_index * cells, cells);
  return {b.begin(), b.end()};
}

std::string residual_csv(const std::vector<double> &res)
{
  std::string out = "step,residual\n";
  for (std::size_t k = 0; k < res.size(); ++k)
  {
    out += std::to_string(k + 1) + "," + format_double(res[k]) + "\n";
  }
  return out;
}

struct CachedRun
{
  RunRecord record;
  std::optional<FieldSet> fields;
  fs::path residuals;  // cached residual history file
};

CachedRun obtain_run(const ExperimentConfig &cfg, const std::string &label,
                     const fs::path &cache_dir)
{
  const std::string key = run_key(cfg.flow, label, cfg.march);
  CachedRun out;
  out.record.scheme = label;
  out.record.key_hash = hex64(fnv1a(key));
  const fs::path dir = cache_dir / out.record.key_hash;
  const fs::path meta_path = dir / "meta.json";
  out.residuals = dir / "residuals.csv";

  if (!fs::exists(meta_path))
  {
    fs::create_directories(dir);
    ordered_json meta;
    meta["key"] = key;
    meta["scheme"] = label;
    try
    {
      const auto res = euler::march_to_steady(cfg.flow, euler::SchemeSpec::from_label(label),
                                              cfg.march);
      write_binary(dir / "solution.bin", res.fields);
      write_text(out.residuals, residual_csv(res.residuals));
      meta["status"] = "ok";
      meta["error"] = "";
      meta["steps"] = res.steps;
      meta["converged"] = res.converged;
      meta["final_residual"] = json_num(res.final_residual);
      meta["wall_seconds"] = res.wall_seconds;
    }
    catch (const Error &e)
    {
      if (e.code() == ErrorCode::Config)
      {
        throw;
      }
      write_text(out.residuals, "step,residual\n");
      meta["status"] = "failed";
      meta["error"] = e.what();
      meta["steps"] = 0;
      meta["converged"] = false;
      meta["final_residual"] = nullptr;
      meta["wall_seconds"] = 0.0;
    }
    write_text(meta_path, meta.dump(2) + "\n");
  }
  else
  {
    out.record.from_cache = true;
  }

  const auto meta = ordered_json::parse(read_text(meta_path));
  require(meta.value("key", std::string()) == key, ErrorCode::Io,
          "cache entry " + dir.string() + " belongs to a different run");
  out.record.status = meta.at("status").get<std::string>();
  out.record.error = meta.at("error").get<std::string>();
  out.record.steps = meta.at("steps").get<long>();
  out.record.converged = meta.at("converged").get<bool>();
  out.record.final_residual =
      meta.at("final_residual").is_null() ? kNaN : meta.at("final_residual").get<double>();
  out.record.wall_seconds = meta.at("wall_seconds").get<double>();
  if (out.record.status == "ok")
  {
    out.fields = read_binary(dir / "solution.bin");
  }
  return out;
}

std::string fields_path(const std::string &label) { return "fields/" + label + ".bin"; }
std::string estimate_path(const std::string &ensemble, const std::string &label)
{
  return "ensembles/" + ensemble + "/estimate_" + label + ".bin";
}

// Shared by run and report: everything downstream of the persisted field dumps.
std::vector<EnsembleReport> build_reports(const ExperimentConfig &cfg,
                                          const std::map<std::string, FieldSet> &solutions,
                                          const FieldSet &analytic_fields,
                                          const analytic::RegionMap &map, ArtifactLog &log)
{
  const Grid2D &grid = cfg.flow.domain;
  const std::size_t cells = grid.cells();
  const auto var_it =
      std::find(cfg.variables.begin(), cfg.variables.end(), cfg.report_variable);
  const std::size_t var_index = static_cast<std::size_t>(var_it - cfg.variables.begin());

  std::map<std::string, std::vector<double>> truth;
  for (const auto &[label, fields] : solutions)
  {
    const auto err = analytic::true_error(fields, analytic_fields);
    truth[label] = vectorize(err.field("err:" + cfg.report_variable));
  }

  std::vector<EnsembleReport> reports;
  for (const auto &ens : cfg.ensembles)
  {
    EnsembleReport rep;
    rep.name = ens.name;
    for (const auto &m : ens.members)
    {
      if (solutions.count(m))
      {
        rep.members.push_back(m);
      }
    }
    require(rep.members.size() >= 3, ErrorCode::Underdetermined,
            "ensemble '" + ens.name + "' has " + std::to_string(rep.members.size()) +
                " usable solutions after exclusions; at least 3 are required");

    SolutionEnsemble ensemble(grid, cfg.variables);
    for (const auto &m : rep.members)
    {
      ensemble.add(select_variables(solutions.at(m), cfg.variables, m));
    }
    const auto est = ip::solve_field(ensemble, cfg.ip, cfg.solver);
    rep.nonconverged_points = est.nonconverged;

    std::vector<double> est_block;
    std::vector<double> truth_block;
    for (std::size_t j = 0; j < rep.members.size(); ++j)
    {
      const auto e = variable_block(est.estimate(j), var_index, cells);
      const auto &t = truth.at(rep.members[j]);
      est_block.insert(est_block.end(), e.begin(), e.end());
      truth_block.insert(truth_block.end(), t.begin(), t.end());
      write_binary(log.add(estimate_path(ens.name, rep.members[j]), "estimate"),
                   est.as_fields(j));
    }
    rep.report = metrics::build_report(rep.members, est_block, truth_block, grid.cell_area(),
                                       cfg.report_variable, grid.nx, grid.ny);
    try
    {
      rep.averaged_effectivity = metrics::averaged_effectivity(est_block, truth_block);
    }
    catch (const Error &)
    {
      rep.averaged_effectivity = kNaN;
    }

    std::string csv =
        "scheme,effectivity,relative_accuracy,estimate_norm,true_norm,correlation,"
        "band_energy_fraction,alternating_row_fraction\n";
    for (std::size_t j = 0; j < rep.members.size(); ++j)
    {
      SchemeSummary s;
      s.record = rep.report.records[j];
      const std::span<const double> e(est_block.data() + j * cells, cells);
      const std::span<const double> t(truth_block.data() + j * cells, cells);
      if (s.record.degenerate)
      {
        s.correlation = kNaN;
      }
      else
      {
        std::vector<double> ae(cells);
        std::vector<double> at(cells);
        std::transform(e.begin(), e.end(), ae.begin(), [](double v) { return std::abs(v); });
        std::transform(t.begin(), t.end(), at.begin(), [](double v) { return std::abs(v); });
        s.correlation = metrics::pearson_correlation(ae, at);
      }
      s.structure = analyze_structure(e, grid, map, cfg.band_cells);
      csv += s.record.label + "," + num(s.record.effectivity) + "," +
             num(s.record.relative_accuracy) + "," + num(s.record.est_norm) + "," +
             num(s.record.true_norm) + "," + num(s.correlation) + "," +
             num(s.structure.band_energy_fraction) + "," +
             num(s.structure.alternating_row_fraction) + "\n";
      rep.schemes.push_back(s);
    }
    write_text(log.add("ensembles/" + ens.name + "/report.csv", "report"), csv);
    reports.push_back(std::move(rep));
  }

  // Tables: one row per ensemble, one column per configured scheme.
  auto table = [&](bool effectivity) {
    std::string out = "ensemble,size";
    for (const auto &s : cfg.schemes)
    {
      out += "," + s;
    }
    out += "\n";
    for (const auto &rep : reports)
    {
      out += rep.name + "," + std::to_string(rep.members.size());
      for (const auto &s : cfg.schemes)
      {
        out += ",";
        const auto it = std::find(rep.members.begin(), rep.members.end(), s);
        if (it != rep.members.end())
        {
          const auto &r = rep.report.record(s);
          out += num(effectivity ? r.effectivity : r.relative_accuracy);
        }
      }
      out += "\n";
    }
    return out;
  };
  write_text(log.add("table_ieff.csv", "table"), table(true));
  write_text(log.add("table_irel.csv", "table"), table(false));

  ordered_json summary = ordered_json::array();
  for (const auto &rep : reports)
  {
    ordered_json e;
    e["ensemble"] = rep.name;
    e["members"] = rep.members;
    e["variable"] = cfg.report_variable;
    e["averaged_effectivity"] = json_num(rep.averaged_effectivity);
    e["nonconverged_points"] = rep.nonconverged_points;
    ordered_json rows = ordered_json::array();
    for (const auto &s : rep.schemes)
    {
      ordered_json r;
      r["scheme"] = s.record.label;
      r["effectivity"] = json_num(s.record.effectivity);
      r["relative_accuracy"] = json_num(s.record.relative_accuracy);
      r["estimate_norm"] = json_num(s.record.est_norm);
      r["true_norm"] = json_num(s.record.true_norm);
      r["degenerate"] = s.record.degenerate;
      r["correlation"] = json_num(s.correlation);
      r["band_energy_fraction"] = json_num(s.structure.band_energy_fraction);
      r["alternating_row_fraction"] = json_num(s.structure.alternating_row_fraction);
      r["crossing_rows"] = s.structure.crossing_rows;
      rows.push_back(r);
    }
    e["schemes"] = rows;
    summary.push_back(e);
  }
  write_text(log.add("summary.json", "summary"), summary.dump(2) + "\n");
  return reports;
}

void write_manifest(const ExperimentConfig &cfg, const RunManifest &m)
{
  write_text(cfg.output / "manifest.json", m.to_json());
}

}  // namespace

void ExperimentConfig::validate() const
{
  flow.validate();
  require(!schemes.empty(), ErrorCode::Config, "no schemes configured");
  std::set<std::string> seen;
  for (const auto &s : schemes)
  {
    euler::SchemeSpec::from_label(s).validate();
    require(seen.insert(s).second, ErrorCode::Config, "scheme '" + s + "' listed twice");
  }
  require(!ensembles.empty(), ErrorCode::Config, "no ensembles configured");
  std::set<std::string> names;
  for (const auto &e : ensembles)
  {
    require(!e.name.empty() && e.name.find_first_of("/\\ ,") == std::string::npos,
            ErrorCode::Config, "invalid ensemble name '" + e.name + "'");
    require(names.insert(e.name).second, ErrorCode::Config,
            "ensemble '" + e.name + "' defined twice");
    std::set<std::string> members;
    for (const auto &m : e.members)
    {
      require(seen.count(m) > 0, ErrorCode::Config,
              "ensemble '" + e.name + "' uses scheme '" + m + "' that is not configured");
      require(members.insert(m).second, ErrorCode::Config,
              "ensemble '" + e.name + "' lists '" + m + "' twice");
    }
    require(e.members.size() >= 3, ErrorCode::Underdetermined,
            "ensemble '" + e.name + "' has " + std::to_string(e.members.size()) +
                " members; at least 3 are required");
  }
  ip.validate();
  require(!variables.empty(), ErrorCode::Config, "no variables selected");
  for (const auto &v : variables)
  {
    require(v == "rho" || v == "U" || v == "V" || v == "P", ErrorCode::Config,
            "unknown variable '" + v + "'");
  }
  require(std::find(variables.begin(), variables.end(), report_variable) != variables.end(),
          ErrorCode::Config, "report_variable must be one of the selected variables");
  require(march.cfl > 0.0 && march.cfl <= 1.0, ErrorCode::Config, "cfl must lie in (0, 1]");
  require(march.steady_tol > 0.0, ErrorCode::Config, "steady_tol must be positive");
  require(march.max_steps >= 0, ErrorCode::Config, "max_steps must be >= 0");
  require(band_cells >= 0, ErrorCode::Config, "band_cells must be >= 0");
}

std::string ExperimentConfig::canonical() const
{
  std::ostringstream os;
  os << "flow=" << flow.key() << "\n";
  os << "schemes=" << join(schemes, ",") << "\n";
  for (const auto &e : ensembles)
  {
    os << "ensemble." << e.name << "=" << join(e.members, ",") << "\n";
  }
  os << "alpha=" << format_double(ip.alpha) << "\n";
  os << "solver=" << ip::to_string(solver) << "\n";
  os << "max_iters=" << ip.max_iters << "\n";
  os << "tau=" << (ip.tau ? format_double(*ip.tau) : "default") << "\n";
  os << "grad_tol=" << (ip.grad_tol ? format_double(*ip.grad_tol) : "default") << "\n";
  os << "variables=" << join(variables, ",") << "\n";
  os << "report_variable=" << report_variable << "\n";
  os << "cfl=" << format_double(march.cfl) << "\n";
  os << "steady_tol=" << format_double(march.steady_tol) << "\n";
  os << "max_steps=" << march.max_steps << "\n";
  os << "band_cells=" << band_cells << "\n";
  return os.str();
}

const Ensemble &ExperimentConfig::ensemble(const std::string &name) const
{
  for (const auto &e : ensembles)
  {
    if (e.name == name)
    {
      return e;
    }
  }
  fail(ErrorCode::Config, "no ensemble named '" + name + "'");
}

ExperimentConfig parse_config(const std::string &text)
{
  std::vector<std::pair<std::string, std::string>> entries;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  std::set<std::string> keys;
  while (std::getline(ss, line))
  {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::Config,
            "config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), ErrorCode::Config,
            "config line " + std::to_string(lineno) + ": empty key");
    require(keys.insert(key).second, ErrorCode::Config, "config key '" + key + "' repeated");
    entries.emplace_back(key, value);
  }

  auto find = [&](const std::string &key) -> const std::string * {
    for (const auto &[k, v] : entries)
    {
      if (k == key)
      {
        return &v;
      }
    }
    return nullptr;
  };

  ExperimentConfig cfg;
  CaseId id = CaseId::EdneyI;
  if (const auto *v = find("case"))
  {
    id = case_from_string(*v);
  }
  int nx = 100;
  int ny = 100;
  if (const auto *v = find("nx"))
  {
    nx = static_cast<int>(parse_long("nx", *v));
  }
  if (const auto *v = find("ny"))
  {
    ny = static_cast<int>(parse_long("ny", *v));
  }
  require(nx >= 3 && ny >= 3, ErrorCode::Config, "nx and ny must be at least 3");
  switch (id)
  {
    case CaseId::EdneyI:
      cfg.flow = FlowCase::edney_i(nx, ny);
      break;
    case CaseId::EdneyVI:
      cfg.flow = FlowCase::edney_vi(nx, ny);
      break;
    case CaseId::FreeStream:
      cfg.flow = FlowCase::free_stream(nx, ny);
      break;
  }
  cfg.schemes.clear();
  for (const auto &[key, value] : entries)
  {
    if (key == "case" || key == "nx" || key == "ny")
    {
      continue;
    }
    if (key == "mach")
    {
      cfg.flow.mach = parse_double(key, value);
    }
    else if (key == "deflection1")
    {
      cfg.flow.deflection1 = parse_double(key, value);
    }
    else if (key == "deflection2")
    {
      cfg.flow.deflection2 = parse_double(key, value);
    }
    else if (key == "interaction_x")
    {
      cfg.flow.interaction_x = parse_double(key, value);
    }
    else if (key == "interaction_y")
    {
      cfg.flow.interaction_y = parse_double(key, value);
    }
    else if (key == "schemes")
    {
      cfg.schemes = split_list(value);
    }
    else if (key.rfind("ensemble.", 0) == 0)
    {
      cfg.ensembles.push_back({key.substr(9), split_list(value)});
    }
    else if (key == "alpha")
    {
      cfg.ip.alpha = parse_double(key, value);
    }
    else if (key == "solver")
    {
      cfg.solver = ip::solver_from_string(value);
    }
    else if (key == "max_iters")
    {
      cfg.ip.max_iters = static_cast<int>(parse_long(key, value));
    }
    else if (key == "tau")
    {
      cfg.ip.tau = parse_double(key, value);
    }
    else if (key == "grad_tol")
    {
      cfg.ip.grad_tol = parse_double(key, value);
    }
    else if (key == "variables")
    {
      cfg.variables = split_list(value);
    }
    else if (key == "report_variable")
    {
      cfg.report_variable = value;
    }
    else if (key == "cfl")
    {
      cfg.march.cfl = parse_double(key, value);
    }
    else if (key == "steady_tol")
    {
      cfg.march.steady_tol = parse_double(key, value);
    }
    else if (key == "max_steps")
    {
      cfg.march.max_steps = parse_long(key, value);
    }
    else if (key == "band_cells")
    {
      cfg.band_cells = static_cast<int>(parse_long(key, value));
    }
    else if (key == "output")
    {
      cfg.output = value;
    }
    else if (key == "cache")
    {
      cfg.cache = value;
    }
    else
    {
      fail(ErrorCode::Config, "unknown config key '" + key + "'");
    }
  }
  if (cfg.ensembles.empty())
  {
    cfg.ensembles.push_back({"all", cfg.schemes});
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path &path)
{
  return parse_config(read_text(path));
}

std::uint64_t fnv1a(const std::string &text)
{
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : text)
  {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v)
{
  static const char *digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i)
  {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::string config_hash(const ExperimentConfig &cfg) { return hex64(fnv1a(cfg.canonical())); }

fs::path resolve_cache_dir(const ExperimentConfig &cfg)
{
  if (const char *env = std::getenv("DIFFEST_CACHE_DIR"); env && *env)
  {
    return fs::path(env);
  }
  return cfg.cache;
}

std::string run_key(const FlowCase &c, const std::string &scheme, const euler::MarchOptions &opt)
{
  return c.key() + "|scheme=" + scheme + "|cfl=" + format_double(opt.cfl) +
         "|tol=" + format_double(opt.steady_tol) + "|max_steps=" + std::to_string(opt.max_steps);
}

std::string RunManifest::to_json() const
{
  ordered_json j;
  j["config_hash"] = config_hash;
  j["case"] = flow_case;
  ordered_json runs_json = ordered_json::array();
  for (const auto &r : runs)
  {
    ordered_json e;
    e["scheme"] = r.scheme;
    e["run_hash"] = r.key_hash;
    e["status"] = r.status;
    if (!r.error.empty())
    {
      e["error"] = r.error;
    }
    e["steps"] = r.steps;
    e["converged"] = r.converged;
    e["final_residual"] = json_num(r.final_residual);
    e["wall_seconds"] = r.wall_seconds;
    runs_json.push_back(e);
  }
  j["runs"] = runs_json;
  j["excluded"] = excluded;
  ordered_json arts = ordered_json::array();
  for (const auto &a : artifacts)
  {
    arts.push_back({{"path", a.path}, {"kind", a.kind}});
  }
  j["artifacts"] = arts;
  return j.dump(2) + "\n";
}

StructureSummary analyze_structure(std::span<const double> estimate, const Grid2D &grid,
                                   const analytic::RegionMap &map, int band_cells)
{
  require(estimate.size() == grid.cells(), ErrorCode::Structural,
          "estimate length does not match the grid");
  const double h = std::max(grid.dx, grid.dy);
  const double band = band_cells * h;
  StructureSummary s;
  double total = 0.0;
  double inside = 0.0;
  std::vector<char> in_band(grid.cells());
  for (int kx = 0; kx < grid.nx; ++kx)
  {
    for (int my = 0; my < grid.ny; ++my)
    {
      const std::size_t m = global_index(grid, 0, kx, my);
      const double e2 = estimate[m] * estimate[m];
      in_band[m] = map.distance_to_rays(grid.xc(kx), grid.yc(my)) <= band;
      total += e2;
      inside += in_band[m] ? e2 : 0.0;
    }
  }
  s.band_energy_fraction = total > 0.0 ? inside / total : 0.0;

  int alternating = 0;
  for (int my = 0; my < grid.ny; ++my)
  {
    bool crosses = false;
    double peak = 0.0;
    for (int kx = 0; kx < grid.nx; ++kx)
    {
      crosses = crosses || map.distance_to_rays(grid.xc(kx), grid.yc(my), true) <= h;
      peak = std::max(peak, std::abs(estimate[global_index(grid, 0, kx, my)]));
    }
    if (!crosses || peak == 0.0)
    {
      continue;
    }
    ++s.crossing_rows;
    bool pos = false;
    bool neg = false;
    for (int kx = 0; kx < grid.nx; ++kx)
    {
      const std::size_t m = global_index(grid, 0, kx, my);
      if (!in_band[m])
      {
        continue;
      }
      pos = pos || estimate[m] > 0.1 * peak;
      neg = neg || estimate[m] < -0.1 * peak;
    }
    alternating += pos && neg;
  }
  s.alternating_row_fraction =
      s.crossing_rows > 0 ? static_cast<double>(alternating) / s.crossing_rows : 0.0;
  return s;
}

const SchemeSummary &EnsembleReport::scheme(const std::string &label) const
{
  for (const auto &s : schemes)
  {
    if (s.record.label == label)
    {
      return s;
    }
  }
  fail(ErrorCode::Config, "scheme '" + label + "' is not part of ensemble '" + name + "'");
}

ExperimentResult run_experiment(const ExperimentConfig &cfg)
{
  cfg.validate();
  const fs::path cache_dir = resolve_cache_dir(cfg);
  fs::create_directories(cache_dir);
  fs::create_directories(cfg.output);
  ArtifactLog log(cfg.output);

  ExperimentResult result;
  result.manifest.config_hash = config_hash(cfg);
  result.manifest.flow_case = cfg.flow.key();

  const auto map = analytic::build_region_map(cfg.flow);
  const auto analytic_fields = analytic::project_analytic(map, cfg.flow.domain);
  write_binary(log.add("analytic.bin", "analytic"), analytic_fields);
  write_text(log.add("region_map.json", "analytic"), map.to_json() + "\n");

  std::map<std::string, FieldSet> solutions;
  for (const auto &label : cfg.schemes)
  {
    auto run = obtain_run(cfg, label, cache_dir);
    write_text(log.add("residuals/" + label + ".csv", "residuals"), read_text(run.residuals));
    if (run.fields)
    {
      write_binary(log.add(fields_path(label), "solution"), *run.fields);
      solutions.emplace(label, std::move(*run.fields));
    }
    else
    {
      result.manifest.excluded.push_back(label);
    }
    result.manifest.runs.push_back(run.record);
  }

  result.reports = build_reports(cfg, solutions, analytic_fields, map, log);
  result.manifest.artifacts = log.take();
  write_manifest(cfg, result.manifest);
  return result;
}

ExperimentResult report_experiment(const ExperimentConfig &cfg)
{
  cfg.validate();
  const fs::path manifest_path = cfg.output / "manifest.json";
  require(fs::exists(manifest_path), ErrorCode::Io,
          "no manifest in " + cfg.output.string() + "; run the experiment first");
  const auto prior = ordered_json::parse(read_text(manifest_path));
  require(prior.at("config_hash").get<std::string>() == config_hash(cfg), ErrorCode::Config,
          "output directory was produced by a different configuration");

  ExperimentResult result;
  result.manifest.config_hash = prior.at("config_hash").get<std::string>();
  result.manifest.flow_case = prior.at("case").get<std::string>();
  result.manifest.excluded = prior.at("excluded").get<std::vector<std::string>>();
  for (const auto &r : prior.at("runs"))
  {
    RunRecord rec;
    rec.scheme = r.at("scheme").get<std::string>();
    rec.key_hash = r.at("run_hash").get<std::string>();
    rec.status = r.at("status").get<std::string>();
    rec.error = r.value("error", std::string());
    rec.steps = r.at("steps").get<long>();
    rec.converged = r.at("converged").get<bool>();
    rec.final_residual =
        r.at("final_residual").is_null() ? kNaN : r.at("final_residual").get<double>();
    rec.wall_seconds = r.at("wall_seconds").get<double>();
    rec.from_cache = true;
    result.manifest.runs.push_back(rec);
  }

  // Field dumps are inputs here; everything else is rewritten.
  ArtifactLog log(cfg.output);
  const auto map = analytic::build_region_map(cfg.flow);
  const auto analytic_fields = read_binary(log.add("analytic.bin", "analytic"));
  log.add("region_map.json", "analytic");
  std::map<std::string, FieldSet> solutions;
  for (const auto &label : cfg.schemes)
  {
    log.add("residuals/" + label + ".csv", "residuals");
    if (std::find(result.manifest.excluded.begin(), result.manifest.excluded.end(), label) ==
        result.manifest.excluded.end())
    {
      solutions.emplace(label, read_binary(log.add(fields_path(label), "solution")));
    }
  }
  result.reports = build_reports(cfg, solutions, analytic_fields, map, log);
  result.manifest.artifacts = log.take();
  write_manifest(cfg, result.manifest);
  return result;
}

PlotKind plot_kind_from_string(const std::string &name)
{
  if (name == "isolines")
  {
    return PlotKind::Isolines;
  }
  if (name == "error_slice")
  {
    return PlotKind::ErrorSlice;
  }
  if (name == "sweep")
  {
    return PlotKind::Sweep;
  }
  fail(ErrorCode::Config, "unknown plot kind '" + name + "' (isolines, error_slice, sweep)");
}

void write_error_slice(const fs::path &path, std::span<const double> estimate,
                       std::span<const double> truth)
{
  require(estimate.size() == truth.size(), ErrorCode::Structural,
          "estimate and truth lengths differ");
  std::string out = "index,estimate,truth\n";
  for (std::size_t m = 0; m < estimate.size(); ++m)
  {
    out += std::to_string(m + 1) + "," + format_double(estimate[m]) + "," +
           format_double(truth[m]) + "\n";
  }
  write_text(path, out);
}

void write_isolines(const fs::path &path, const FieldSet &fields, const std::string &variable)
{
  const auto &f = fields.field(variable);
  const Grid2D &g = fields.grid;
  std::string out = "x,y," + variable + "\n";
  for (int kx = 0; kx < g.nx; ++kx)
  {
    for (int my = 0; my < g.ny; ++my)
    {
      out += format_double(g.xc(kx)) + "," + format_double(g.yc(my)) + "," +
             format_double(f.at(kx, my)) + "\n";
    }
  }
  write_text(path, out);
}

std::vector<Artifact> emit_plot_data(const ExperimentConfig &cfg, PlotKind kind)
{
  cfg.validate();
  ArtifactLog log(cfg.output);
  auto present = [&](const std::string &label) {
    return fs::exists(cfg.output / fields_path(label));
  };
  switch (kind)
  {
    case PlotKind::Isolines:
    {
      const auto analytic_fields = read_binary(cfg.output / "analytic.bin");
      write_isolines(log.add("plots/isolines_analytic.csv", "plot"), analytic_fields, "rho");
      for (const auto &label : cfg.schemes)
      {
        if (present(label))
        {
          write_isolines(log.add("plots/isolines_" + label + ".csv", "plot"),
                         read_binary(cfg.output / fields_path(label)), "rho");
        }
      }
      break;
    }
    case PlotKind::ErrorSlice:
    {
      const auto analytic_fields = read_binary(cfg.output / "analytic.bin");
      for (const auto &ens : cfg.ensembles)
      {
        for (const auto &label : ens.members)
        {
          const fs::path est_file = cfg.output / estimate_path(ens.name, label);
          if (!present(label) || !fs::exists(est_file))
          {
            continue;
          }
          const auto truth = analytic::true_error(read_binary(cfg.output / fields_path(label)),
                                                  analytic_fields);
          const auto est = read_binary(est_file);
          const std::string tag = "err:" + cfg.report_variable;
          write_error_slice(log.add("plots/error_slice_" + ens.name + "_" + label + ".csv",
                                    "plot"),
                            est.field(tag).data, truth.field(tag).data);
        }
      }
      break;
    }
    case PlotKind::Sweep:
    {
      const auto summary = run_scalar_sweep({1.0, -2.0, 3.0}, ip::log_alpha_grid(1e-10, 1.0, 41),
                                            cfg.ip, cfg.solver);
      write_sweep_csv(log.add("plots/sweep.csv", "plot"), summary);
      break;
    }
  }
  auto emitted = log.take();

  // Register plot files in an existing manifest, once each.
  const fs::path manifest_path = cfg.output / "manifest.json";
  if (fs::exists(manifest_path))
  {
    auto manifest = ordered_json::parse(read_text(manifest_path));
    auto &arts = manifest["artifacts"];
    std::set<std::string> known;
    for (const auto &a : arts)
    {
      known.insert(a.at("path").get<std::string>());
    }
    for (const auto &a : emitted)
    {
      if (known.insert(a.path).second)
      {
        arts.push_back({{"path", a.path}, {"kind", a.kind}});
      }
    }
    write_text(manifest_path, manifest.dump(2) + "\n");
  }
  return emitted;
}

SweepSummary run_scalar_sweep(const std::vector<double> &true_errors,
                              const std::vector<double> &alphas, const ip::IPConfig &cfg,
                              ip::SolverKind solver)
{
  require(!alphas.empty(), ErrorCode::Config, "empty regularization grid");
  for (const double a : alphas)
  {
    require(a > 0.0 && std::isfinite(a), ErrorCode::Config,
            "regularization parameters must be positive and finite");
  }
  const ip::DifferenceSystem sys(static_cast<int>(true_errors.size()));
  const auto rhs = ip::assemble_rhs(sys, true_errors);
  SweepSummary out;
  out.records = ip::alpha_sweep(sys, rhs.f, alphas, cfg, solver, true_errors);

  auto norm = [](const std::vector<double> &v) {
    double s = 0.0;
    for (const double x : v)
    {
      s += x * x;
    }
    return std::sqrt(s);
  };
  double variation = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto &a : out.records)
  {
    if (a.alpha < 1e-6 * (1 - 1e-12) || a.alpha > 1e-1 * (1 + 1e-12))
    {
      continue;
    }
    smallest = std::min(smallest, norm(a.du));
    for (const auto &b : out.records)
    {
      if (b.alpha < 1e-6 * (1 - 1e-12) || b.alpha > 1e-1 * (1 + 1e-12))
      {
        continue;
      }
      std::vector<double> d(a.du.size());
      for (std::size_t k = 0; k < d.size(); ++k)
      {
        d[k] = a.du[k] - b.du[k];
      }
      variation = std::max(variation, norm(d));
    }
  }
  out.plateau_variation = std::isfinite(smallest) && smallest > 0.0 ? variation / smallest : kNaN;

  const auto nearest = std::min_element(
      out.records.begin(), out.records.end(), [](const auto &a, const auto &b) {
        return std::abs(std::log10(a.alpha) + 3.0) < std::abs(std::log10(b.alpha) + 3.0);
      });
  out.shift_at_reference = nearest->shift;
  const auto normal = ip::normal_solution_oracle(true_errors);
  const double nn = norm(normal.du);
  out.endpoint_ratio = nn > 0.0 ? norm(out.records.back().du) / nn : kNaN;
  return out;
}

void write_sweep_csv(const fs::path &path, const SweepSummary &summary)
{
  std::string out = "alpha,functional,mean_abs_error,effectivity,shift";
  const std::size_t n = summary.records.empty() ? 0 : summary.records.front().du.size();
  for (std::size_t j = 0; j < n; ++j)
  {
    out += ",du_" + std::to_string(j + 1);
  }
  out += "\n";
  for (const auto &r : summary.records)
  {
    out += format_double(r.alpha) + "," + num(r.functional) + "," + num(r.mean_abs_error) + "," +
           num(r.effectivity) + "," + num(r.shift);
    for (const double v : r.du)
    {
      out += "," + format_double(v);
    }
    out += "\n";
  }
  write_text(path, out);
}

}  // namespace diffest::harness
