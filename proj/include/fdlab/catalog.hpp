// Built-in maps from the worked examples, each with the analysis outcome it
// is expected to reproduce.
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fdlab/contractions.hpp"
#include "fdlab/metric.hpp"
#include "fdlab/self_map.hpp"
#include "fdlab/simulation.hpp"
#include "fdlab/theorems.hpp"

namespace fdlab {

/// Where an expected value comes from: stated in a worked example, or
/// derived here from the map's definition (with an independent oracle in
/// the tests).
enum class Origin { worked_example, derived };

inline std::string to_string(Origin o) { return o == Origin::worked_example ? "worked_example" : "derived"; }

enum class ExpectKind {
  rho,                   // value = rho
  fixed_disc,            // D(x0, value) is fixed
  fixed_set,             // runs of the fixed set
  theorem1_verdict,      // verify_theorem1(zeta, x0) verdict
  zc_contraction,        // is_zc_contraction(zeta, x0) holds == should_hold; zeta "*" = whole registry
  necessary_inequality,  // check_necessary_inequality(x0) holds == should_hold
  maximal_radius,        // maximal_fixed_radius(x0) = value
  common_fixed_disc,     // verify_theorem4(partner, this, zeta, x0): mu = value, conclusion passes
  coincidence_set,       // coincidence set with partner: runs
};

inline std::string to_string(ExpectKind k) {
  switch (k) {
    case ExpectKind::rho:
      return "rho";
    case ExpectKind::fixed_disc:
      return "fixed_disc";
    case ExpectKind::fixed_set:
      return "fixed_set";
    case ExpectKind::theorem1_verdict:
      return "theorem1_verdict";
    case ExpectKind::zc_contraction:
      return "zc_contraction";
    case ExpectKind::necessary_inequality:
      return "necessary_inequality";
    case ExpectKind::maximal_radius:
      return "maximal_radius";
    case ExpectKind::common_fixed_disc:
      return "common_fixed_disc";
    case ExpectKind::coincidence_set:
      return "coincidence_set";
  }
  return "?";
}

struct Expectation {
  ExpectKind kind = ExpectKind::rho;
  Origin origin = Origin::derived;
  double x0 = 0.0;
  double value = 0.0;
  double tol = 1e-3;
  std::vector<std::pair<double, double>> runs;
  std::string zeta;
  std::string partner;
  bool should_hold = true;
  Verdict verdict = Verdict::consistent;

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (!zeta.empty()) os << " zeta=" << zeta;
    if (!partner.empty()) os << " partner=" << partner;
    os << " x0=" << Expression::format_number(x0);
    switch (kind) {
      case ExpectKind::rho:
      case ExpectKind::fixed_disc:
      case ExpectKind::maximal_radius:
      case ExpectKind::common_fixed_disc:
        os << " value=" << Expression::format_number(value);
        break;
      case ExpectKind::fixed_set:
      case ExpectKind::coincidence_set:
        for (const auto& [lo, hi] : runs)
          os << " [" << Expression::format_number(lo) << ", " << Expression::format_number(hi) << "]";
        break;
      case ExpectKind::theorem1_verdict:
        os << " verdict=" << to_string(verdict);
        break;
      case ExpectKind::zc_contraction:
      case ExpectKind::necessary_inequality:
        os << (should_hold ? " holds" : " fails");
        break;
    }
    os << " (" << to_string(origin) << ")";
    return os.str();
  }
};

struct ParamSpec {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

using Params = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  double lo = -50.0;
  double hi = 50.0;
  std::size_t count = 10001;
};

struct CatalogInstance {
  std::string entry;
  Params params;
  MetricSpace space;
  SelfMap map;
  std::vector<Expectation> expected;

  /// Grid plus the map's breakpoints (and their offsets).
  SampleSet samples(const Tolerances& tol = {}) const { return enumerate_samples(space, {}, map.breakpoints(), tol); }
};

inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"T1", "x on [-1,1], 2x otherwise", {}, -50.0, 50.0, 10001},
      {"T2",
       "x if |x - x0| <= mu, 2 x0 otherwise",
       {{"x0", 1.0, "disc center, > 0"}, {"mu", 2.0, "disc radius, >= 2 x0"}},
       -50.0,
       50.0,
       10001},
      {"T3", "x on [-3,3], x+1 otherwise", {}, -50.0, 50.0, 10001},
      {"T4", "x on [-3,3], 3x otherwise", {}, -50.0, 50.0, 10001},
      {"intro_quadratic", "x^2 - 2", {}, -50.0, 50.0, 10001},
      {"intro_S", "x on [0,2], x + sqrt(2) otherwise", {}, -50.0, 50.0, 10001},
      {"ELU", "x for x >= 0, alpha (exp(x) - 1) for x < 0", {{"alpha", 1.0, "> 0"}}, -10.0, 10.0, 10001},
      {"SReLU",
       "t_r + a_r (x - t_r) for x >= t_r, x strictly between, t_l + a_l (x - t_l) for x <= t_l",
       {{"t_l", -1.0, "left threshold, <= t_r"},
        {"t_r", 1.0, "right threshold"},
        {"a_l", 0.5, "left slope"},
        {"a_r", 0.5, "right slope"}},
       -10.0,
       10.0,
       10001},
      {"identity", "x", {}, -50.0, 50.0, 10001},
  };
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return e;
  throw DomainError("unknown catalog entry '" + name + "'");
}

/// Registry simulation function by name ("zeta1".."zeta7").
inline SimulationFunction registry_zeta(const std::string& name) {
  for (auto& z : default_registry())
    if (z.name() == name) return z;
  throw DomainError("unknown simulation function '" + name + "'");
}

namespace detail {

inline Params resolve_params(const CatalogEntry& e, const Params& given) {
  Params out;
  for (const auto& p : e.params) out[p.name] = p.default_value;
  for (const auto& [k, v] : given) {
    if (!out.count(k)) throw DomainError("catalog entry '" + e.name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw DomainError("parameter '" + k + "' must be finite");
    out[k] = v;
  }
  return out;
}

inline Expectation expect(ExpectKind k, Origin o) {
  Expectation e;
  e.kind = k;
  e.origin = o;
  return e;
}

}  // namespace detail

/// Instantiates a catalog entry. Throws DomainError for an unknown name or a
/// parameter outside the entry's schema.
inline CatalogInstance lookup(const std::string& name, const Params& given = {}) {
  using detail::expect;
  const CatalogEntry& entry = catalog_entry(name);
  const Params p = detail::resolve_params(entry, given);
  std::vector<Expectation> ex;
  auto add = [&](Expectation e) { ex.push_back(std::move(e)); };
  std::optional<SelfMap> map;

  if (name == "T1") {
    map = SelfMap::scalar("T1", [](double x) { return (x >= -1.0 && x <= 1.0) ? x : 2.0 * x; }, {-1.0, 1.0});
    auto e = expect(ExpectKind::rho, Origin::worked_example);
    e.value = 1.0;
    add(e);
    e = expect(ExpectKind::fixed_disc, Origin::worked_example);
    e.value = 1.0;
    add(e);
    e = expect(ExpectKind::theorem1_verdict, Origin::worked_example);
    e.zeta = "zeta6";
    add(e);
    e = expect(ExpectKind::zc_contraction, Origin::worked_example);
    e.zeta = "zeta6";
    add(e);
    e = expect(ExpectKind::fixed_set, Origin::derived);
    e.runs = {{-1.0, 1.0}};
    e.tol = 0.0;
    add(e);
  } else if (name == "T2") {
    const double x0 = p.at("x0"), m = p.at("mu");
    if (!(x0 > 0.0)) throw DomainError("T2 requires x0 > 0");
    if (!(m >= 2.0 * x0)) throw DomainError("T2 requires mu >= 2 x0");
    map = SelfMap::scalar(
        "T2", [x0, m](double x) { return std::fabs(x - x0) <= m ? x : 2.0 * x0; }, {x0 - m, x0 + m});
    auto e = expect(ExpectKind::fixed_disc, Origin::worked_example);
    e.x0 = x0;
    e.value = m;
    add(e);
    e = expect(ExpectKind::necessary_inequality, Origin::worked_example);
    e.x0 = x0;
    e.should_hold = false;
    add(e);
    e = expect(ExpectKind::zc_contraction, Origin::worked_example);
    e.x0 = x0;
    e.zeta = "*";
    e.should_hold = false;
    add(e);
    e = expect(ExpectKind::theorem1_verdict, Origin::worked_example);
    e.x0 = x0;
    e.zeta = "zeta6";
    e.verdict = Verdict::hypothesis_failed;
    add(e);
  } else if (name == "T3") {
    map = SelfMap::scalar("T3", [](double x) { return (x >= -3.0 && x <= 3.0) ? x : x + 1.0; }, {-3.0, 3.0});
    auto e = expect(ExpectKind::rho, Origin::worked_example);
    e.value = 1.0;
    add(e);
    for (double c : {0.0, 1.0}) {
      e = expect(ExpectKind::theorem1_verdict, Origin::worked_example);
      e.x0 = c;
      e.zeta = "zeta7";
      add(e);
    }
    e = expect(ExpectKind::fixed_disc, Origin::worked_example);
    e.value = 2.0;
    add(e);
    e = expect(ExpectKind::fixed_disc, Origin::worked_example);
    e.x0 = 1.0;
    e.value = 1.0;
    add(e);
    e = expect(ExpectKind::maximal_radius, Origin::derived);
    e.value = 3.0;
    add(e);
    e = expect(ExpectKind::maximal_radius, Origin::derived);
    e.x0 = 1.0;
    e.value = 2.0;
    add(e);
  } else if (name == "T4") {
    map = SelfMap::scalar("T4", [](double x) { return (x >= -3.0 && x <= 3.0) ? x : 3.0 * x; }, {-3.0, 3.0});
    auto e = expect(ExpectKind::common_fixed_disc, Origin::worked_example);
    e.partner = "T1";
    e.zeta = "zeta6";
    e.value = 1.0;
    add(e);
    e = expect(ExpectKind::fixed_set, Origin::derived);
    e.runs = {{-3.0, 3.0}};
    e.tol = 0.0;
    add(e);
    e = expect(ExpectKind::rho, Origin::derived);
    e.value = 6.0;
    add(e);
    // 2x = x only at 0 and 2x = 3x only at 0, so the pair agrees exactly
    // where T1 is the identity.
    e = expect(ExpectKind::coincidence_set, Origin::derived);
    e.partner = "T1";
    e.runs = {{-1.0, 1.0}};
    e.tol = 0.0;
    add(e);
  } else if (name == "intro_quadratic") {
    map = SelfMap::scalar("intro_quadratic", [](double x) { return x * x - 2.0; });
    auto e = expect(ExpectKind::fixed_set, Origin::worked_example);
    e.runs = {{-1.0, -1.0}, {2.0, 2.0}};
    e.tol = 1e-6;
    add(e);
  } else if (name == "intro_S") {
    const double shift = std::sqrt(2.0);
    map = SelfMap::scalar(
        "intro_S", [shift](double x) { return (x >= 0.0 && x <= 2.0) ? x : x + shift; }, {0.0, 2.0});
    auto e = expect(ExpectKind::fixed_disc, Origin::worked_example);
    e.x0 = 1.0;
    e.value = 1.0;
    add(e);
    e = expect(ExpectKind::fixed_set, Origin::derived);
    e.runs = {{0.0, 2.0}};
    e.tol = 0.0;
    add(e);
  } else if (name == "ELU") {
    const double a = p.at("alpha");
    if (!(a > 0.0)) throw DomainError("ELU requires alpha > 0");
    map = SelfMap::scalar(
        "ELU", [a](double x) { return x >= 0.0 ? x : a * (std::exp(x) - 1.0); }, {0.0});
    // For alpha <= 1, alpha (e^x - 1) - x is convex with non-positive slope
    // at 0, so it has no negative root. Larger alpha adds one.
    if (a <= 1.0) {
      auto e = expect(ExpectKind::fixed_set, Origin::derived);
      e.runs = {{0.0, entry.hi}};
      // Near 0- the displacement is about x^2/2, below eps_fix for |x| < sqrt(2 eps_fix).
      e.tol = 1e-4;
      add(e);
      e = expect(ExpectKind::maximal_radius, Origin::derived);
      e.x0 = 2.0;
      e.value = 2.0;
      add(e);
    }
  } else if (name == "SReLU") {
    const double tl = p.at("t_l"), tr = p.at("t_r"), al = p.at("a_l"), ar = p.at("a_r");
    if (!(tl <= tr)) throw DomainError("SReLU requires t_l <= t_r");
    map = SelfMap::scalar(
        "SReLU",
        [tl, tr, al, ar](double x) {
          if (x >= tr) return tr + ar * (x - tr);
          if (x > tl) return x;
          return tl + al * (x - tl);
        },
        {tl, tr});
    // Affine pieces with slope != 1 fix only their anchor.
    if (al != 1.0 && ar != 1.0) {
      auto e = expect(ExpectKind::fixed_set, Origin::derived);
      e.runs = {{tl, tr}};
      e.tol = 0.0;
      add(e);
    }
  } else if (name == "identity") {
    map = SelfMap::scalar("identity", [](double x) { return x; });
    auto e = expect(ExpectKind::fixed_set, Origin::derived);
    e.runs = {{entry.lo, entry.hi}};
    e.tol = 0.0;
    add(e);
  }
  return CatalogInstance{name, p, MetricSpace::interval(entry.lo, entry.hi, entry.count), std::move(*map),
                         std::move(ex)};
}

// ---------------------------------------------------------------------------
// Regression

struct ExpectationOutcome {
  Expectation expected;
  bool matched = false;
  std::string observed;
};

struct EntryOutcome {
  std::string name;
  Params params;
  std::vector<ExpectationOutcome> checks;
  std::size_t mismatches() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.matched ? 0 : 1;
    return n;
  }
};

struct RegressionSummary {
  std::vector<EntryOutcome> entries;
  std::size_t mismatches() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.mismatches();
    return n;
  }
  std::string to_text() const {
    std::ostringstream os;
    for (const auto& e : entries)
      for (const auto& c : e.checks)
        os << (c.matched ? "ok       " : "MISMATCH ") << e.name << ": " << c.expected.describe() << " | observed "
           << c.observed << "\n";
    os << entries.size() << " entries, " << mismatches() << " mismatches\n";
    return os.str();
  }
};

namespace detail {

inline bool runs_match(const FixedSetSummary& got, const std::vector<std::pair<double, double>>& want, double tol,
                       std::string& observed) {
  std::ostringstream os;
  for (const auto& r : got.runs)
    os << "[" << Expression::format_number(r.lo) << ", " << Expression::format_number(r.hi) << "]";
  observed = os.str();
  if (got.runs.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i)
    if (std::fabs(got.runs[i].lo - want[i].first) > tol || std::fabs(got.runs[i].hi - want[i].second) > tol)
      return false;
  return true;
}

inline ExpectationOutcome evaluate(const CatalogInstance& inst, const Expectation& e, const Tolerances& tol) {
  ExpectationOutcome out{e, false, ""};
  const MetricSpace& space = inst.space;
  const SelfMap& T = inst.map;
  const SampleSet samples = inst.samples(tol);
  const Point x0 = Point::scalar(e.x0);
  auto num = [](double v) { return Expression::format_number(v); };
  switch (e.kind) {
    case ExpectKind::rho: {
      const double v = rho(space, T, samples, tol).value;
      out.observed = num(v);
      out.matched = std::fabs(v - e.value) <= e.tol;
      break;
    }
    case ExpectKind::fixed_disc: {
      const auto c = check_fixed_disc(space, T, Disc(x0, e.value), samples, tol);
      out.observed = std::to_string(c.violations) + " counterexamples in " + std::to_string(c.premises);
      out.matched = c.violations == 0 && c.premises > 0;
      break;
    }
    case ExpectKind::fixed_set: {
      const SampleSet f = fixed_set(space, T, samples, tol);
      out.matched = runs_match(summarize(space, f, samples), e.runs, e.tol, out.observed);
      break;
    }
    case ExpectKind::theorem1_verdict: {
      const auto rep = verify_theorem1(space, T, x0, registry_zeta(e.zeta), samples, tol);
      out.observed = to_string(rep.verdict) + ", rho " + num(rep.numbers.rho->value);
      out.matched = rep.verdict == e.verdict;
      break;
    }
    case ExpectKind::zc_contraction: {
      std::vector<SimulationFunction> zetas;
      if (e.zeta == "*")
        zetas = default_registry();
      else
        zetas.push_back(registry_zeta(e.zeta));
      out.matched = true;
      for (const auto& z : zetas) {
        const auto c = is_zc_contraction(space, T, x0, z, samples, tol);
        out.observed += z.name() + "=" + to_string(c.status) + " ";
        if (c.holds() != e.should_hold) out.matched = false;
      }
      break;
    }
    case ExpectKind::necessary_inequality: {
      const auto c = check_necessary_inequality(space, T, x0, samples, tol);
      out.observed = to_string(c.status) + " (" + std::to_string(c.violations) + " violations)";
      out.matched = c.holds() == e.should_hold;
      break;
    }
    case ExpectKind::maximal_radius: {
      const auto r = maximal_fixed_radius(space, T, x0, samples, tol);
      out.observed = num(r.radius);
      out.matched = r.center_fixed && std::fabs(r.radius - e.value) <= e.tol;
      break;
    }
    case ExpectKind::common_fixed_disc: {
      const CatalogInstance partner = lookup(e.partner);
      const SampleSet both = samples.merged(partner.samples(tol).samples());
      const auto rep = verify_theorem4(space, partner.map, T, x0, registry_zeta(e.zeta), both, tol);
      out.observed = to_string(rep.verdict) + ", mu " + num(rep.numbers.mu->value) + ", conclusion " +
                     to_string(rep.conclusion.status);
      out.matched = rep.verdict == Verdict::consistent && std::fabs(rep.numbers.mu->value - e.value) <= e.tol;
      break;
    }
    case ExpectKind::coincidence_set: {
      const CatalogInstance partner = lookup(e.partner);
      const SampleSet both = samples.merged(partner.samples(tol).samples());
      const SampleSet c = coincidence_set(space, partner.map, T, both, tol);
      out.matched = runs_match(summarize(space, c, both), e.runs, e.tol, out.observed);
      break;
    }
  }
  return out;
}

}  // namespace detail

/// Runs every expectation of one entry and records mismatches.
inline EntryOutcome run_regression_entry(const std::string& name, const Params& params = {},
                                         const Tolerances& tol = {}) {
  const CatalogInstance inst = lookup(name, params);
  EntryOutcome out{name, inst.params, {}};
  for (const auto& e : inst.expected) out.checks.push_back(detail::evaluate(inst, e, tol));
  return out;
}

/// All entries (name empty or "all") or a single one.
inline RegressionSummary run_regression(const std::string& name = "all", const Params& params = {},
                                        const Tolerances& tol = {}) {
  RegressionSummary s;
  if (name.empty() || name == "all") {
    for (const auto& e : catalog_entries()) s.entries.push_back(run_regression_entry(e.name, {}, tol));
  } else {
    s.entries.push_back(run_regression_entry(name, params, tol));
  }
  return s;
}

}  // namespace fdlab
