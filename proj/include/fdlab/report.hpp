// JSON and plain-text rendering of verification reports.
//
// The JSON output contains no timestamps or addresses; doubles are written
// in shortest round-trip form, so equal reports serialize byte-identically.
#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "fdlab/theorems.hpp"
#include "json.hpp"

namespace fdlab {

using Json = nlohmann::ordered_json;

inline Json to_json(const Point& p) {
  if (p.is_index()) return Json(p.index());
  if (p.dimension() == 1) return Json(p.x());
  Json a = Json::array();
  for (double c : p.coordinates()) a.push_back(c);
  return a;
}

/// Non-finite doubles become null.
inline Json number_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const Witness& w) {
  Json j;
  j["x"] = to_json(w.x);
  if (w.y) j["y"] = to_json(*w.y);
  j["lhs"] = number_json(w.lhs);
  j["rhs"] = number_json(w.rhs);
  j["note"] = w.note;
  return j;
}

inline Json to_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["status"] = to_string(c.status);
  j["checked"] = c.checked;
  j["premises"] = c.premises;
  j["violations"] = c.violations;
  Json w = Json::array();
  for (const auto& x : c.witnesses) w.push_back(to_json(x));
  j["witnesses"] = std::move(w);
  return j;
}

inline Json to_json(const RadiusEstimate& r) {
  Json j;
  j["value"] = number_json(r.value);
  j["lower"] = number_json(r.lower);
  j["unbounded"] = r.unbounded();
  j["attained"] = r.attained;
  j["argmin"] = r.argmin ? to_json(*r.argmin) : Json(nullptr);
  j["displaced"] = r.displaced;
  return j;
}

inline Json to_json(const FixedSetSummary& f) {
  Json j;
  j["count"] = f.count;
  j["refined"] = f.refined;
  Json runs = Json::array();
  for (const auto& r : f.runs) runs.push_back(Json{{"lo", r.lo}, {"hi", r.hi}, {"count", r.count}});
  j["runs"] = std::move(runs);
  return j;
}

inline Json to_json(const Tolerances& t) {
  return Json{{"eps_mem", t.eps_mem},
              {"eps_tri", t.eps_tri},
              {"eps_fix", t.eps_fix},
              {"tau_rho", t.tau_rho},
              {"slope_cap", t.slope_cap},
              {"critical_offset", t.critical_offset},
              {"root_tol", t.root_tol},
              {"jump_tol", t.jump_tol},
              {"witness_cap", t.witness_cap}};
}

inline Json to_json(const VerificationReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  Json hyps = Json::array();
  for (const auto& h : r.hypotheses) hyps.push_back(to_json(h));
  j["hypotheses"] = std::move(hyps);

  Json c;
  c["status"] = to_string(r.conclusion.status);
  c["statement"] = r.conclusion.statement;
  c["checked"] = r.conclusion.checked;
  c["violations"] = r.conclusion.violations;
  Json ce = Json::array();
  for (const auto& w : r.conclusion.counterexamples) ce.push_back(to_json(w));
  c["counterexamples"] = std::move(ce);
  j["conclusion"] = std::move(c);

  Json n = Json::object();
  if (r.numbers.rho) n["rho"] = to_json(*r.numbers.rho);
  if (r.numbers.rho_other) n["rho_other"] = to_json(*r.numbers.rho_other);
  if (r.numbers.r) n["r"] = to_json(*r.numbers.r);
  if (r.numbers.mu) n["mu"] = to_json(*r.numbers.mu);
  if (r.numbers.disc_radius) n["disc_radius"] = number_json(*r.numbers.disc_radius);
  if (r.numbers.fixed_set) n["fixed_set"] = to_json(*r.numbers.fixed_set);
  if (r.numbers.maximal_fixed_radius) {
    const auto& m = *r.numbers.maximal_fixed_radius;
    n["maximal_fixed_radius"] = Json{{"radius", number_json(m.radius)},
                                     {"center_fixed", m.center_fixed},
                                     {"covers_all_samples", m.covers_all_samples}};
  }
  if (r.numbers.coincidence_set) n["coincidence_set"] = to_json(*r.numbers.coincidence_set);
  j["numbers"] = std::move(n);

  j["samples"] = Json{{"count", r.samples.count}, {"seed", r.samples.seed}, {"tolerances", to_json(r.samples.tolerances)}};
  j["verdict"] = to_string(r.verdict);

  Json diags = Json::array();
  for (const auto& d : r.diagnostics) diags.push_back(to_json(d));
  j["diagnostics"] = std::move(diags);
  j["map"] = r.map;
  j["x0"] = r.x0 ? to_json(*r.x0) : Json(nullptr);
  j["flags"] = r.flags;
  return j;
}

inline std::string to_json_string(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

/// Human-readable summary.
inline std::string to_text(const VerificationReport& r) {
  std::ostringstream os;
  auto num = [](double v) { return std::isfinite(v) ? Expression::format_number(v) : std::string("inf"); };
  os << r.theorem;
  if (!r.map.empty()) os << " on " << r.map;
  if (r.x0) os << " about x0 = " << r.x0->to_string();
  os << "\n";
  for (const auto& h : r.hypotheses) {
    os << "  hypothesis " << h.name << ": " << to_string(h.status) << " (" << h.premises << " premises, "
       << h.violations << " violations)\n";
    for (std::size_t i = 0; i < h.witnesses.size() && i < 3; ++i)
      os << "    witness x = " << h.witnesses[i].x.to_string() << ": " << h.witnesses[i].note << "\n";
  }
  os << "  conclusion: " << to_string(r.conclusion.status);
  if (!r.conclusion.statement.empty()) os << " (" << r.conclusion.statement << ")";
  os << "\n";
  for (std::size_t i = 0; i < r.conclusion.counterexamples.size() && i < 3; ++i)
    os << "    counterexample x = " << r.conclusion.counterexamples[i].x.to_string() << "\n";
  if (r.numbers.rho) os << "  rho = " << num(r.numbers.rho->value) << " (lower " << num(r.numbers.rho->lower) << ")\n";
  if (r.numbers.r) os << "  r = " << num(r.numbers.r->value) << "\n";
  if (r.numbers.mu) os << "  mu = " << num(r.numbers.mu->value) << "\n";
  if (r.numbers.maximal_fixed_radius && r.numbers.maximal_fixed_radius->center_fixed)
    os << "  maximal fixed radius = " << num(r.numbers.maximal_fixed_radius->radius) << "\n";
  if (r.numbers.fixed_set) {
    os << "  fixed set: " << r.numbers.fixed_set->count << " samples";
    for (std::size_t i = 0; i < r.numbers.fixed_set->runs.size() && i < 8; ++i)
      os << " [" << num(r.numbers.fixed_set->runs[i].lo) << ", " << num(r.numbers.fixed_set->runs[i].hi) << "]";
    os << "\n";
  }
  for (const auto& d : r.diagnostics) os << "  diagnostic " << d.name << ": " << to_string(d.status) << "\n";
  for (const auto& f : r.flags) os << "  note: " << f << "\n";
  os << "  verdict: " << to_string(r.verdict) << "\n";
  return os.str();
}

}  // namespace fdlab
