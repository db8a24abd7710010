// Problem configuration files: parse, validate, serialize, and run.
//
// Format: "[section]" headers followed by "key = value" lines. Blank lines
// and lines starting with '#' or ';' are ignored. Lists are comma-separated;
// pieces are repeated "piece = <interval> : <expr>" lines.
//
//   [space]      kind = interval | finite | box; lo, hi, n, critical (list);
//                csv (finite); axes = lo:hi:n, ... and norm (box)
//   [map]        catalog = <name> + params = k=v, ... | piece = ... | table = i, j, ...
//   [map2]       same keys; required by thm4
//   [simulation] zeta = zeta1..zeta7 | linear | phi_subtract | phi_multiply |
//                eta_bound | integral_phi | custom; lambda, phi, phi_regularity,
//                eta, eta_regularity, quad_step, expression, piece
//   [alpha]      expression | piece (conditions test y) | constant | csv; required by thm2
//   [analysis]   theorem, x0, seed, samples, branch, report, csv_dir, and the
//                tolerance keys eps_mem, eps_tri, eps_fix, tau_rho, slope_cap,
//                critical_offset, root_tol, jump_tol, witness_cap
#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdlab/catalog.hpp"
#include "fdlab/report.hpp"
#include "fdlab/theorems.hpp"

namespace fdlab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct SpaceConfig {
  std::string kind = "interval";
  double lo = -50.0;
  double hi = 50.0;
  std::size_t n = 10001;
  std::vector<double> critical;
  std::string csv;
  std::vector<AxisGrid> axes;
  Norm norm = Norm::euclidean;
  bool operator==(const SpaceConfig&) const = default;
};

struct MapConfig {
  std::string catalog;
  Params params;
  std::vector<std::string> pieces;
  std::vector<std::size_t> table;
  bool operator==(const MapConfig&) const = default;
};

struct SimulationConfig {
  std::string zeta = "zeta6";
  std::optional<double> lambda;
  std::optional<std::string> phi;
  std::string phi_regularity = "none";
  std::optional<std::string> eta;
  std::string eta_regularity = "none";
  std::optional<double> quad_step;
  std::optional<std::string> expression;
  std::vector<std::string> pieces;
  bool operator==(const SimulationConfig&) const = default;
};

struct AlphaConfig {
  std::optional<std::string> expression;
  std::vector<std::string> pieces;
  std::optional<double> constant;
  std::string csv;
  bool operator==(const AlphaConfig&) const = default;
};

struct AnalysisConfig {
  std::string theorem = "thm1";
  std::vector<double> x0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string branch = "T";
  std::string report;
  std::string csv_dir;
  Tolerances tol;
  bool operator==(const AnalysisConfig&) const = default;
};

struct ProblemConfig {
  std::optional<SpaceConfig> space;
  std::optional<MapConfig> map;
  std::optional<MapConfig> map2;
  std::optional<SimulationConfig> simulation;
  std::optional<AlphaConfig> alpha;
  AnalysisConfig analysis;
  std::string base_dir;  // relative CSV paths resolve against this; not serialized
  bool operator==(const ProblemConfig& o) const {
    return space == o.space && map == o.map && map2 == o.map2 && simulation == o.simulation && alpha == o.alpha &&
           analysis == o.analysis;
  }
};

inline const std::vector<std::string>& known_theorems() {
  static const std::vector<std::string> t = {"thm1", "cor1", "cor2", "cor3", "cor4", "cor5",
                                             "thm2", "thm3", "thm4", "axioms", "fixed_set"};
  return t;
}

namespace detail {

inline std::string trim_copy(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim_copy(item));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

/// Real number, or a constant expression such as "sqrt(2)" or "-1/2".
inline double parse_real(const std::string& text) {
  const Expression e = Expression::parse(text);
  if (!e.is_constant()) throw ParseError("expected a number, got '" + text + "'", 0);
  return e.evaluate(Env{});
}

inline std::uint64_t parse_unsigned(const std::string& text) {
  std::uint64_t v = 0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    b += 2;
    base = 16;
  }
  auto [ptr, ec] = std::from_chars(b, e, v, base);
  if (ec != std::errc{} || ptr != e || b == e) throw ParseError("expected a non-negative integer, got '" + text + "'", 0);
  return v;
}

inline Params parse_params(const std::string& text) {
  Params out;
  for (const auto& item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("params entries are name=value, got '" + item + "'", 0);
    const std::string k = trim_copy(std::string_view(item).substr(0, eq));
    if (k.empty()) throw ParseError("empty parameter name", 0);
    if (out.count(k)) throw ParseError("parameter '" + k + "' given twice", 0);
    out[k] = parse_real(trim_copy(std::string_view(item).substr(eq + 1)));
  }
  return out;
}

inline std::string num(double v) { return Expression::format_number(v); }

template <class T>
std::string join(const std::vector<T>& v, auto&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

}  // namespace detail

/// Parses and validates a configuration. Errors carry the 1-based line
/// number where one applies.
inline ProblemConfig parse_config(std::string_view text, std::string base_dir = "") {
  using namespace detail;
  ProblemConfig cfg;
  cfg.base_dir = std::move(base_dir);
  std::string section;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;
  std::map<std::string, std::size_t> section_line;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const std::string line = trim_copy(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "malformed section header '" + line + "'");
      section = trim_copy(std::string_view(line).substr(1, line.size() - 2));
      static const std::set<std::string> sections = {"space", "map", "map2", "simulation", "alpha", "analysis"};
      if (!sections.count(section)) throw ConfigError(lineno, "unknown section [" + section + "]");
      if (!seen_sections.insert(section).second) throw ConfigError(lineno, "section [" + section + "] repeated");
      section_line[section] = lineno;
      if (section == "space") cfg.space.emplace();
      if (section == "map") cfg.map.emplace();
      if (section == "map2") cfg.map2.emplace();
      if (section == "simulation") cfg.simulation.emplace();
      if (section == "alpha") cfg.alpha.emplace();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value', got '" + line + "'");
    if (section.empty()) throw ConfigError(lineno, "key outside any section");
    const std::string key = trim_copy(std::string_view(line).substr(0, eq));
    const std::string value = trim_copy(std::string_view(line).substr(eq + 1));
    if (key != "piece" && !seen_keys.insert(section + "." + key).second)
      throw ConfigError(lineno, "key '" + key + "' repeated in [" + section + "]");
    auto unknown = [&] { throw ConfigError(lineno, "unknown key '" + key + "' in [" + section + "]"); };

    try {
      if (section == "space") {
        auto& s = *cfg.space;
        if (key == "kind") {
          if (value != "interval" && value != "finite" && value != "box")
            throw ParseError("space kind must be interval, finite or box", 0);
          s.kind = value;
        } else if (key == "lo") {
          s.lo = parse_real(value);
        } else if (key == "hi") {
          s.hi = parse_real(value);
        } else if (key == "n") {
          s.n = parse_unsigned(value);
        } else if (key == "critical") {
          for (const auto& c : split_list(value)) s.critical.push_back(parse_real(c));
        } else if (key == "csv") {
          s.csv = value;
        } else if (key == "norm") {
          s.norm = parse_norm(value);
        } else if (key == "axes") {
          for (const auto& a : split_list(value)) {
            const auto parts = split_list(a, ':');
            if (parts.size() != 3) throw ParseError("axis must be lo:hi:n, got '" + a + "'", 0);
            s.axes.push_back({parse_real(parts[0]), parse_real(parts[1]), parse_unsigned(parts[2])});
          }
        } else {
          unknown();
        }
      } else if (section == "map" || section == "map2") {
        auto& m = section == "map" ? *cfg.map : *cfg.map2;
        if (key == "catalog") {
          catalog_entry(value);
          m.catalog = value;
        } else if (key == "params") {
          m.params = parse_params(value);
        } else if (key == "piece") {
          PiecewiseExpression probe(Var::x);
          for (const auto& p : m.pieces) probe.add_piece(p);
          probe.add_piece(value);
          m.pieces.push_back(value);
        } else if (key == "table") {
          for (const auto& i : split_list(value)) m.table.push_back(parse_unsigned(i));
        } else {
          unknown();
        }
      } else if (section == "simulation") {
        auto& z = *cfg.simulation;
        if (key == "zeta") {
          z.zeta = value;
        } else if (key == "lambda") {
          z.lambda = parse_real(value);
        } else if (key == "phi") {
          Expression::parse(value);
          z.phi = value;
        } else if (key == "eta") {
          Expression::parse(value);
          z.eta = value;
        } else if (key == "phi_regularity") {
          parse_regularity(value);
          z.phi_regularity = value;
        } else if (key == "eta_regularity") {
          parse_regularity(value);
          z.eta_regularity = value;
        } else if (key == "quad_step") {
          z.quad_step = parse_real(value);
        } else if (key == "expression") {
          Expression::parse(value);
          z.expression = value;
        } else if (key == "piece") {
          PiecewiseExpression probe(Var::t);
          for (const auto& p : z.pieces) probe.add_piece(p);
          probe.add_piece(value);
          z.pieces.push_back(value);
        } else {
          unknown();
        }
      } else if (section == "alpha") {
        auto& a = *cfg.alpha;
        if (key == "expression") {
          Expression::parse(value);
          a.expression = value;
        } else if (key == "piece") {
          PiecewiseExpression probe(Var::y);
          for (const auto& p : a.pieces) probe.add_piece(p);
          probe.add_piece(value);
          a.pieces.push_back(value);
        } else if (key == "constant") {
          a.constant = parse_real(value);
        } else if (key == "csv") {
          a.csv = value;
        } else {
          unknown();
        }
      } else if (section == "analysis") {
        auto& a = cfg.analysis;
        auto& t = a.tol;
        if (key == "theorem") {
          if (std::find(known_theorems().begin(), known_theorems().end(), value) == known_theorems().end())
            throw ParseError("unknown theorem '" + value + "'", 0);
          a.theorem = value;
        } else if (key == "x0") {
          for (const auto& c : split_list(value)) a.x0.push_back(parse_real(c));
        } else if (key == "seed") {
          a.seed = parse_unsigned(value);
        } else if (key == "samples") {
          a.samples = parse_unsigned(value);
        } else if (key == "branch") {
          if (value != "T" && value != "S") throw ParseError("branch must be T or S", 0);
          a.branch = value;
        } else if (key == "report") {
          a.report = value;
        } else if (key == "csv_dir") {
          a.csv_dir = value;
        } else if (key == "eps_mem") {
          t.eps_mem = parse_real(value);
        } else if (key == "eps_tri") {
          t.eps_tri = parse_real(value);
        } else if (key == "eps_fix") {
          t.eps_fix = parse_real(value);
        } else if (key == "tau_rho") {
          t.tau_rho = parse_real(value);
        } else if (key == "slope_cap") {
          t.slope_cap = parse_real(value);
        } else if (key == "critical_offset") {
          t.critical_offset = parse_real(value);
        } else if (key == "root_tol") {
          t.root_tol = parse_real(value);
        } else if (key == "jump_tol") {
          t.jump_tol = parse_real(value);
        } else if (key == "witness_cap") {
          t.witness_cap = parse_unsigned(value);
        } else {
          unknown();
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(lineno, e.what());
    }
  }

  // Schema checks.
  const std::string& th = cfg.analysis.theorem;
  auto need = [&](bool present, const std::string& sec) {
    if (!present) throw ConfigError(0, "section [" + sec + "] is required for theorem " + th);
  };
  if (!seen_sections.count("analysis")) throw ConfigError(0, "section [analysis] is missing");
  if (th == "axioms") {
    need(cfg.simulation.has_value(), "simulation");
  } else {
    need(cfg.map.has_value(), "map");
    if (th == "thm1" || th == "thm2" || th == "thm3" || th == "thm4") need(cfg.simulation.has_value(), "simulation");
    if (th == "thm4") need(cfg.map2.has_value(), "map2");
    if (th == "thm2") need(cfg.alpha.has_value(), "alpha");
    if (cfg.analysis.x0.empty()) throw ConfigError(0, "analysis.x0 is required for theorem " + th);
  }
  for (const auto* m : {&cfg.map, &cfg.map2}) {
    if (!*m) continue;
    const int forms = !(*m)->catalog.empty() + !(*m)->pieces.empty() + !(*m)->table.empty();
    const std::string sec = m == &cfg.map ? "map" : "map2";
    if (forms != 1)
      throw ConfigError(section_line[sec], "[" + sec + "] needs exactly one of catalog, piece, table");
    if (!(*m)->params.empty() && (*m)->catalog.empty())
      throw ConfigError(section_line[sec], "[" + sec + "] params only apply to catalog maps");
  }
  if (cfg.alpha) {
    const int forms = cfg.alpha->expression.has_value() + !cfg.alpha->pieces.empty() +
                      cfg.alpha->constant.has_value() + !cfg.alpha->csv.empty();
    if (forms != 1)
      throw ConfigError(section_line["alpha"], "[alpha] needs exactly one of expression, piece, constant, csv");
  }
  if (!cfg.space && cfg.map && cfg.map->catalog.empty())
    throw ConfigError(0, "section [space] is required unless the map comes from the catalog");
  return cfg;
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ProblemConfig& c) {
  using detail::num;
  std::ostringstream os;
  if (c.space) {
    const auto& s = *c.space;
    os << "[space]\nkind = " << s.kind << "\n";
    if (s.kind == "interval") {
      os << "lo = " << num(s.lo) << "\nhi = " << num(s.hi) << "\nn = " << s.n << "\n";
      if (!s.critical.empty()) os << "critical = " << detail::join(s.critical, num) << "\n";
    } else if (s.kind == "finite") {
      os << "csv = " << s.csv << "\n";
    } else {
      os << "axes = "
         << detail::join(s.axes, [](const AxisGrid& a) { return num(a.lo) + ":" + num(a.hi) + ":" + std::to_string(a.count); })
         << "\nnorm = " << to_string(s.norm) << "\n";
    }
    os << "\n";
  }
  auto map_section = [&](const char* name, const MapConfig& m) {
    os << "[" << name << "]\n";
    if (!m.catalog.empty()) {
      os << "catalog = " << m.catalog << "\n";
      if (!m.params.empty()) {
        std::vector<std::string> items;
        for (const auto& [k, v] : m.params) items.push_back(k + "=" + num(v));
        os << "params = " << detail::join(items, [](const std::string& s) { return s; }) << "\n";
      }
    }
    for (const auto& p : m.pieces) os << "piece = " << p << "\n";
    if (!m.table.empty())
      os << "table = " << detail::join(m.table, [](std::size_t i) { return std::to_string(i); }) << "\n";
    os << "\n";
  };
  if (c.map) map_section("map", *c.map);
  if (c.map2) map_section("map2", *c.map2);
  if (c.simulation) {
    const auto& z = *c.simulation;
    os << "[simulation]\nzeta = " << z.zeta << "\n";
    if (z.lambda) os << "lambda = " << num(*z.lambda) << "\n";
    if (z.phi) os << "phi = " << *z.phi << "\n";
    if (z.phi_regularity != "none") os << "phi_regularity = " << z.phi_regularity << "\n";
    if (z.eta) os << "eta = " << *z.eta << "\n";
    if (z.eta_regularity != "none") os << "eta_regularity = " << z.eta_regularity << "\n";
    if (z.quad_step) os << "quad_step = " << num(*z.quad_step) << "\n";
    if (z.expression) os << "expression = " << *z.expression << "\n";
    for (const auto& p : z.pieces) os << "piece = " << p << "\n";
    os << "\n";
  }
  if (c.alpha) {
    const auto& a = *c.alpha;
    os << "[alpha]\n";
    if (a.expression) os << "expression = " << *a.expression << "\n";
    for (const auto& p : a.pieces) os << "piece = " << p << "\n";
    if (a.constant) os << "constant = " << num(*a.constant) << "\n";
    if (!a.csv.empty()) os << "csv = " << a.csv << "\n";
    os << "\n";
  }
  const auto& a = c.analysis;
  const Tolerances def;
  os << "[analysis]\ntheorem = " << a.theorem << "\n";
  if (!a.x0.empty()) os << "x0 = " << detail::join(a.x0, num) << "\n";
  if (a.seed) os << "seed = " << *a.seed << "\n";
  if (a.samples) os << "samples = " << *a.samples << "\n";
  if (a.branch != "T") os << "branch = " << a.branch << "\n";
  if (!a.report.empty()) os << "report = " << a.report << "\n";
  if (!a.csv_dir.empty()) os << "csv_dir = " << a.csv_dir << "\n";
  auto tol = [&](const char* k, double v, double d) {
    if (v != d) os << k << " = " << num(v) << "\n";
  };
  tol("eps_mem", a.tol.eps_mem, def.eps_mem);
  tol("eps_tri", a.tol.eps_tri, def.eps_tri);
  tol("eps_fix", a.tol.eps_fix, def.eps_fix);
  tol("tau_rho", a.tol.tau_rho, def.tau_rho);
  tol("slope_cap", a.tol.slope_cap, def.slope_cap);
  tol("critical_offset", a.tol.critical_offset, def.critical_offset);
  tol("root_tol", a.tol.root_tol, def.root_tol);
  tol("jump_tol", a.tol.jump_tol, def.jump_tol);
  if (a.tol.witness_cap != def.witness_cap) os << "witness_cap = " << a.tol.witness_cap << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Building and running

/// Instantiated objects for a configuration.
struct Problem {
  std::string theorem;
  MetricSpace space;
  std::optional<SelfMap> map;
  std::optional<SelfMap> map2;
  std::optional<SimulationFunction> zeta;
  CorollaryParams corollary;
  std::optional<AlphaFunction> alpha;
  std::optional<Point> x0;
  SampleSet samples;
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  Branch branch = Branch::T;
};

namespace detail {

inline std::string resolve_path(const ProblemConfig& c, const std::string& p) {
  if (p.empty() || c.base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(c.base_dir) / p).string();
}

inline MetricSpace build_space(const ProblemConfig& c) {
  if (!c.space) {
    if (!c.map) return MetricSpace::interval(-50.0, 50.0, 10001);
    const auto& e = catalog_entry(c.map->catalog);
    return MetricSpace::interval(e.lo, e.hi, e.count);
  }
  const auto& s = *c.space;
  if (s.kind == "finite") {
    if (s.csv.empty()) throw ConfigError(0, "finite space needs space.csv");
    return MetricSpace::finite_table(load_table_csv(resolve_path(c, s.csv)));
  }
  if (s.kind == "box") {
    if (s.axes.empty()) throw ConfigError(0, "box space needs space.axes");
    return MetricSpace::box(s.axes, s.norm);
  }
  return MetricSpace::interval(s.lo, s.hi, s.n, s.critical);
}

inline SelfMap build_map(const MapConfig& m, const MetricSpace& space, const std::string& name,
                         std::optional<double> x0) {
  if (!m.catalog.empty()) {
    if (m.catalog == "identity") return SelfMap::identity();
    if (space.kind() != SpaceKind::interval)
      throw ConfigError(0, "catalog map '" + m.catalog + "' needs an interval space");
    return lookup(m.catalog, m.params).map;
  }
  if (!m.table.empty()) {
    if (space.kind() != SpaceKind::finite_table) throw ConfigError(0, "table maps need a finite space");
    if (m.table.size() != space.cardinality())
      throw ConfigError(0, "map table has " + std::to_string(m.table.size()) + " entries for a space of " +
                               std::to_string(space.cardinality()) + " points");
    return SelfMap::table(m.table, name);
  }
  if (space.kind() != SpaceKind::interval) throw ConfigError(0, "piecewise maps need an interval space");
  PiecewiseExpression pw(Var::x);
  for (const auto& p : m.pieces) pw.add_piece(p);
  return SelfMap::piecewise(name, std::move(pw), x0);
}

inline AuxFunction build_aux(const std::string& text, const std::string& reg) {
  return AuxFunction::parse(text, parse_regularity(reg));
}

inline SimulationFunction build_zeta(const SimulationConfig& z) {
  const std::string& n = z.zeta;
  if (n.size() == 5 && n.rfind("zeta", 0) == 0) {
    if (z.lambda || z.phi || z.eta || z.expression || !z.pieces.empty())
      throw ConfigError(0, "registry simulation function '" + n + "' takes no parameters; use a family name");
    return registry_zeta(n);
  }
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw ConfigError(0, "simulation '" + n + "' needs " + what);
  };
  const double step = z.quad_step.value_or(SimulationFunction::kDefaultQuadStep);
  if (n == "linear") {
    require(z.lambda.has_value(), "lambda");
    return SimulationFunction::linear(*z.lambda, "linear");
  }
  if (n == "phi_subtract") {
    require(z.phi.has_value(), "phi");
    return SimulationFunction::phi_subtract(build_aux(*z.phi, z.phi_regularity), "phi_subtract");
  }
  if (n == "phi_multiply") {
    require(z.phi.has_value(), "phi");
    return SimulationFunction::phi_multiply(build_aux(*z.phi, z.phi_regularity), "phi_multiply");
  }
  if (n == "eta_bound") {
    require(z.eta.has_value(), "eta");
    return SimulationFunction::eta_bound(build_aux(*z.eta, z.eta_regularity), "eta_bound");
  }
  if (n == "integral_phi") {
    require(z.phi.has_value(), "phi");
    return SimulationFunction::integral_phi(build_aux(*z.phi, z.phi_regularity), step, "integral_phi");
  }
  if (n == "custom") {
    require(z.expression.has_value() != !z.pieces.empty(), "exactly one of expression or piece");
    if (z.expression) return SimulationFunction::custom(*z.expression);
    PiecewiseExpression pw(Var::t);
    for (const auto& p : z.pieces) pw.add_piece(p);
    return SimulationFunction::custom(std::move(pw));
  }
  throw ConfigError(0, "unknown simulation function '" + n + "'");
}

inline CorollaryParams build_corollary(const std::optional<SimulationConfig>& z) {
  CorollaryParams p;
  if (!z) return p;
  if (z->lambda) p.lambda = *z->lambda;
  if (z->phi) p.phi = build_aux(*z->phi, z->phi_regularity);
  if (z->eta) p.eta = build_aux(*z->eta, z->eta_regularity);
  if (z->quad_step) p.quad_step = *z->quad_step;
  return p;
}

inline Point build_point(const MetricSpace& space, const std::vector<double>& v) {
  if (space.kind() == SpaceKind::finite_table) {
    if (v.size() != 1 || v[0] < 0 || v[0] != std::floor(v[0])) throw ConfigError(0, "x0 must be a point index");
    return Point::index(static_cast<std::size_t>(v[0]));
  }
  return Point::coords(v);
}

}  // namespace detail

/// Instantiates spaces, maps, and functions; probes every sample so that
/// evaluation errors surface at load with the offending point.
inline Problem build_problem(const ProblemConfig& c) {
  Problem p{c.analysis.theorem, detail::build_space(c), {}, {}, {}, {}, {}, {}, {}, c.analysis.tol,
            c.analysis.seed.value_or(kDefaultSeed), c.analysis.branch == "S" ? Branch::S : Branch::T};
  if (c.analysis.samples) p.space = p.space.with_sample_count(*c.analysis.samples);
  if (!c.analysis.x0.empty()) {
    p.x0 = detail::build_point(p.space, c.analysis.x0);
    p.space.require_member(*p.x0);
  }
  std::optional<double> x0_scalar;
  if (p.x0 && !p.x0->is_index() && p.x0->dimension() == 1) x0_scalar = p.x0->x();
  if (c.map) p.map = detail::build_map(*c.map, p.space, "T", x0_scalar);
  if (c.map2) p.map2 = detail::build_map(*c.map2, p.space, "S", x0_scalar);
  if (p.theorem.rfind("cor", 0) == 0) {
    p.corollary = detail::build_corollary(c.simulation);
  } else if (c.simulation) {
    p.zeta = detail::build_zeta(*c.simulation);
  }
  if (c.alpha) {
    const auto& a = *c.alpha;
    if (a.constant) {
      p.alpha = AlphaFunction::constant(*a.constant);
    } else if (a.expression) {
      p.alpha = AlphaFunction::expression(*a.expression);
    } else if (!a.pieces.empty()) {
      PiecewiseExpression pw(Var::y);
      for (const auto& piece : a.pieces) pw.add_piece(piece);
      p.alpha = AlphaFunction::expression(std::move(pw));
    } else {
      p.alpha = AlphaFunction::table(load_table_csv(detail::resolve_path(c, a.csv)));
    }
  }

  std::vector<double> bps;
  for (const auto* m : {&p.map, &p.map2})
    if (*m) bps.insert(bps.end(), (*m)->breakpoints().begin(), (*m)->breakpoints().end());
  std::vector<Disc> discs;
  if (p.x0) discs.emplace_back(*p.x0, 0.0);
  if (p.theorem != "axioms") p.samples = enumerate_samples(p.space, discs, bps, p.tol);
  for (const auto* m : {&p.map, &p.map2})
    if (*m) (*m)->check_total(p.space, p.samples);
  return p;
}

inline VerificationReport run_analysis(const Problem& p) {
  VerificationReport rep;
  const std::string& th = p.theorem;
  if (th == "axioms") {
    rep = verify_axioms(*p.zeta, p.seed);
  } else if (th == "thm1") {
    rep = verify_theorem1(p.space, *p.map, *p.x0, *p.zeta, p.samples, p.tol);
  } else if (th.rfind("cor", 0) == 0) {
    rep = verify_corollary(p.space, *p.map, *p.x0, th[3] - '0', p.corollary, p.samples, p.tol);
  } else if (th == "thm2") {
    rep = verify_theorem2(p.space, *p.map, *p.x0, *p.alpha, *p.zeta, p.samples, p.tol);
  } else if (th == "thm3") {
    rep = verify_theorem3(p.space, *p.map, *p.x0, *p.zeta, p.samples, p.tol);
  } else if (th == "thm4") {
    rep = verify_theorem4(p.space, *p.map, *p.map2, *p.x0, *p.zeta, p.samples, p.tol, p.branch);
  } else {
    rep = analyze_fixed_set(p.space, *p.map, *p.x0, p.samples, p.tol);
  }
  rep.samples.seed = p.seed;
  return rep;
}

/// 0 for consistent or hypothesis_failed, 2 for REFUTATION_CANDIDATE.
inline int exit_code(Verdict v) { return v == Verdict::refutation_candidate ? 2 : 0; }

namespace detail {

inline std::string csv_point(const Point& p) {
  if (p.is_index()) return std::to_string(p.index());
  if (p.dimension() == 1) return num(p.x());
  return "\"" + p.to_string() + "\"";
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

}  // namespace detail

/// fixed_set.csv (x, Tx, d(x,Tx)) lists the fixed set; disc.csv
/// (x, in_disc, fixed) lists every sample against the report's disc.
inline void write_csvs(const Problem& p, const VerificationReport& rep, const std::string& dir) {
  using detail::csv_point;
  using detail::num;
  if (!p.map) return;
  std::filesystem::create_directories(dir);
  const SelfMap& T = *p.map;
  const SampleSet samples = p.x0 && rep.numbers.disc_radius
                                ? with_disc(p.space, p.samples, Disc(*p.x0, *rep.numbers.disc_radius))
                                : p.samples;
  std::ostringstream fs;
  fs << "x,Tx,d(x,Tx)\n";
  for (const auto& s : fixed_set(p.space, T, samples, p.tol)) {
    const Point Tx = T(s.point);
    fs << csv_point(s.point) << "," << csv_point(Tx) << "," << num(p.space.distance(s.point, Tx)) << "\n";
  }
  detail::write_file(std::filesystem::path(dir) / "fixed_set.csv", fs.str());

  std::ostringstream dc;
  dc << "x,in_disc,fixed\n";
  std::optional<Disc> disc;
  if (p.x0 && rep.numbers.disc_radius) disc.emplace(*p.x0, *rep.numbers.disc_radius);
  for (const auto& s : samples) {
    const bool in = disc && disc->contains(p.space, s.point, p.tol.eps_mem);
    const bool fixed = p.space.distance(s.point, T(s.point)) <= p.tol.eps_fix;
    dc << csv_point(s.point) << "," << (in ? 1 : 0) << "," << (fixed ? 1 : 0) << "\n";
  }
  detail::write_file(std::filesystem::path(dir) / "disc.csv", dc.str());
}

struct RunResult {
  VerificationReport report;
  int exit_code = 0;
};

/// Builds, verifies, and writes the configured artifacts (report JSON and
/// CSVs) when paths are set. Paths in the config resolve against base_dir.
inline RunResult run(const ProblemConfig& c) {
  const Problem p = build_problem(c);
  RunResult r{run_analysis(p), 0};
  r.exit_code = exit_code(r.report.verdict);
  if (!c.analysis.report.empty())
    detail::write_file(detail::resolve_path(c, c.analysis.report), to_json_string(r.report));
  if (!c.analysis.csv_dir.empty()) write_csvs(p, r.report, detail::resolve_path(c, c.analysis.csv_dir));
  return r;
}

}  // namespace fdlab
