// Simulation functions zeta : [0, inf)^2 -> R and probe-based checks of the
// three defining axioms:
//   (1) zeta(0, 0) = 0
//   (2) zeta(t, s) < s - t for all s, t > 0
//   (3) limsup zeta(t_n, s_n) < 0 whenever t_n, s_n -> L > 0
// Axioms (2) and (3) quantify over infinite sets and are only semi-decided
// here; every result is labelled probe-verified.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fdlab/expression.hpp"
#include "fdlab/metric.hpp"
#include "fdlab/status.hpp"

namespace fdlab {

enum class Regularity { none, lower_semicontinuous, upper_semicontinuous };

inline std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::none:
      return "none";
    case Regularity::lower_semicontinuous:
      return "lower_semicontinuous";
    case Regularity::upper_semicontinuous:
      return "upper_semicontinuous";
  }
  return "?";
}

inline Regularity parse_regularity(const std::string& s) {
  if (s == "none" || s.empty()) return Regularity::none;
  if (s == "lower_semicontinuous" || s == "lsc") return Regularity::lower_semicontinuous;
  if (s == "upper_semicontinuous" || s == "usc") return Regularity::upper_semicontinuous;
  throw DomainError("unknown regularity '" + s + "'");
}

/// One-argument function on [0, inf) (phi or eta). The argument is bound to
/// every variable name t, s, x and u, so "s/(s+1)" and "t/(t+1)" are the
/// same function. Regularity is a declaration only.
class AuxFunction {
 public:
  AuxFunction() = default;
  explicit AuxFunction(PiecewiseExpression fn, Regularity reg = Regularity::none)
      : fn_(std::move(fn)), regularity_(reg) {}

  static AuxFunction parse(std::string_view expr, Regularity reg = Regularity::none) {
    return AuxFunction(PiecewiseExpression::single(Expression::parse(expr), Var::t), reg);
  }
  static AuxFunction constant(double c) {
    return AuxFunction(PiecewiseExpression::single(Expression(c), Var::t), Regularity::none);
  }

  double operator()(double arg) const {
    Env env;
    env.set(Var::t, arg).set(Var::s, arg).set(Var::x, arg).set(Var::u, arg);
    return fn_.evaluate(env);
  }

  /// Value of a single-piece constant function.
  std::optional<double> constant_value() const {
    const auto& p = fn_.pieces();
    if (p.size() == 1 && p[0].condition.otherwise && p[0].body.is_constant()) return p[0].body.evaluate(Env{});
    return std::nullopt;
  }

  Regularity regularity() const { return regularity_; }
  const PiecewiseExpression& expression() const { return fn_; }
  std::vector<double> breakpoints() const { return fn_.breakpoints(); }

 private:
  PiecewiseExpression fn_ = PiecewiseExpression::single(Expression(0.0), Var::t);
  Regularity regularity_ = Regularity::none;
};

enum class ZetaFamily { linear_lambda, phi_subtract, phi_multiply, eta_bound, integral_phi, custom };

inline std::string to_string(ZetaFamily f) {
  switch (f) {
    case ZetaFamily::linear_lambda:
      return "LinearLambda";
    case ZetaFamily::phi_subtract:
      return "PhiSubtract";
    case ZetaFamily::phi_multiply:
      return "PhiMultiply";
    case ZetaFamily::eta_bound:
      return "EtaBound";
    case ZetaFamily::integral_phi:
      return "IntegralPhi";
    case ZetaFamily::custom:
      return "Custom";
  }
  return "?";
}

/// Composite midpoint rule for the integral of f over [0, upper] with step at
/// most h. Computed as upper * mean(f(midpoints)) with compensated summation,
/// so a constant integrand integrates exactly.
template <typename F>
double midpoint_integral(const F& f, double upper, double h) {
  if (upper <= 0.0) return 0.0;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(upper / h)));
  const double step = upper / static_cast<double>(n);
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double y = f((static_cast<double>(k) + 0.5) * step) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return upper * (sum / static_cast<double>(n));
}

class SimulationFunction {
 public:
  static constexpr double kDefaultQuadStep = 1e-4;

  /// lambda * s - t, lambda in [0, 1).
  static SimulationFunction linear(double lambda, std::string name = "zeta1") {
    if (!(lambda >= 0.0 && lambda < 1.0))
      throw DomainError("LinearLambda needs lambda in [0, 1), got " + Expression::format_number(lambda));
    SimulationFunction z(ZetaFamily::linear_lambda, std::move(name));
    z.lambda_ = lambda;
    return z;
  }
  /// s - phi(s) - t.
  static SimulationFunction phi_subtract(AuxFunction phi, std::string name = "zeta2") {
    SimulationFunction z(ZetaFamily::phi_subtract, std::move(name));
    z.aux_ = std::move(phi);
    return z;
  }
  /// s * phi(s) - t.
  static SimulationFunction phi_multiply(AuxFunction phi, std::string name = "zeta3") {
    SimulationFunction z(ZetaFamily::phi_multiply, std::move(name));
    z.aux_ = std::move(phi);
    return z;
  }
  /// eta(s) - t.
  static SimulationFunction eta_bound(AuxFunction eta, std::string name = "zeta4") {
    SimulationFunction z(ZetaFamily::eta_bound, std::move(name));
    z.aux_ = std::move(eta);
    return z;
  }
  /// s - integral_0^t phi(u) du, midpoint rule with step quad_step * max(1, t).
  static SimulationFunction integral_phi(AuxFunction phi, double quad_step = kDefaultQuadStep,
                                         std::string name = "zeta5") {
    if (!(quad_step > 0.0)) throw DomainError("quad_step must be positive");
    SimulationFunction z(ZetaFamily::integral_phi, std::move(name));
    z.aux_ = std::move(phi);
    z.quad_step_ = quad_step;
    return z;
  }
  /// Arbitrary expression in t and s; piece conditions test t.
  static SimulationFunction custom(PiecewiseExpression expr, std::string name = "custom") {
    SimulationFunction z(ZetaFamily::custom, std::move(name));
    z.custom_ = std::move(expr);
    return z;
  }
  static SimulationFunction custom(std::string_view expr, std::string name = "custom") {
    return custom(PiecewiseExpression::single(Expression::parse(expr), Var::t), std::move(name));
  }

  double operator()(double t, double s) const {
    switch (family_) {
      case ZetaFamily::linear_lambda:
        return lambda_ * s - t;
      case ZetaFamily::phi_subtract:
        return (s - aux_(s)) - t;
      case ZetaFamily::phi_multiply:
        return s * aux_(s) - t;
      case ZetaFamily::eta_bound:
        return aux_(s) - t;
      case ZetaFamily::integral_phi:
        return s - integral(t);
      case ZetaFamily::custom: {
        Env env;
        env.set(Var::t, t).set(Var::s, s);
        return custom_.evaluate(env);
      }
    }
    return 0.0;
  }

  /// integral_0^upper phi(u) du (IntegralPhi only).
  double integral(double upper) const {
    if (upper <= 0.0) return 0.0;
    // The midpoint rule is exact for constants; skip the sweep.
    if (auto c = aux_.constant_value()) return upper * *c;
    const double h = quad_step_ * std::max(1.0, upper);
    return midpoint_integral(aux_, upper, h);
  }
  double integral(double upper, double h) const { return midpoint_integral(aux_, upper, h); }

  ZetaFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  double lambda() const { return lambda_; }
  double quad_step() const { return quad_step_; }
  bool has_aux() const {
    return family_ != ZetaFamily::linear_lambda && family_ != ZetaFamily::custom;
  }
  const AuxFunction& aux() const { return aux_; }
  const PiecewiseExpression& custom_expression() const { return custom_; }

 private:
  SimulationFunction(ZetaFamily f, std::string name) : family_(f), name_(std::move(name)) {}

  ZetaFamily family_;
  std::string name_;
  double lambda_ = 0.0;
  double quad_step_ = kDefaultQuadStep;
  AuxFunction aux_;
  PiecewiseExpression custom_;
};

/// The seven named instances used across the examples:
/// zeta1 (lambda = 3/4), zeta2 (phi = s/(s+1)), zeta3 (phi = 1/2),
/// zeta4 (eta = t/2), zeta5 (phi = 2), zeta6 (lambda = 3/4), zeta7 (lambda = 1/2).
inline std::vector<SimulationFunction> default_registry() {
  return {SimulationFunction::linear(0.75, "zeta1"),
          SimulationFunction::phi_subtract(AuxFunction::parse("s/(s+1)", Regularity::lower_semicontinuous)),
          SimulationFunction::phi_multiply(AuxFunction::constant(0.5)),
          SimulationFunction::eta_bound(AuxFunction::parse("t/2", Regularity::upper_semicontinuous)),
          SimulationFunction::integral_phi(AuxFunction::constant(2.0)),
          SimulationFunction::linear(0.75, "zeta6"),
          SimulationFunction::linear(0.5, "zeta7")};
}

// ---------------------------------------------------------------------------
// Axiom checks

inline constexpr std::uint64_t kDefaultSeed = 0xFD15C;
inline constexpr double kZeroTol = 1e-12;

struct AxiomResult {
  std::string axiom;
  Status status = Status::pass;
  std::size_t probes = 0;
  std::optional<std::pair<double, double>> witness;  // (t, s) or (L, tail max)
  std::string note;                                   // e.g. sequence family of the witness
};

/// (1): |zeta(0, 0)| <= 1e-12.
inline AxiomResult check_axiom_1(const SimulationFunction& zeta) {
  AxiomResult r{"axiom_1", Status::pass, 1, std::nullopt, "exact"};
  const double v = zeta(0.0, 0.0);
  if (!(std::fabs(v) <= kZeroTol)) {
    r.status = Status::fail;
    r.witness = std::make_pair(0.0, 0.0);
    r.note = "zeta(0,0) = " + Expression::format_number(v);
  }
  return r;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// 100 x 100 log-spaced grid on [1e-6, 1e3]^2 (row-major in t) followed by
/// 10^4 uniform random pairs on the same square.
inline std::vector<std::pair<double, double>> default_axiom2_probes(std::uint64_t seed = kDefaultSeed) {
  std::vector<std::pair<double, double>> probes;
  const auto axis = log_grid(1e-6, 1e3, 100);
  probes.reserve(axis.size() * axis.size() + 10000);
  for (double t : axis)
    for (double s : axis) probes.emplace_back(t, s);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(1e-6, 1e3);
  for (int i = 0; i < 10000; ++i) {
    const double t = uni(rng);
    const double s = uni(rng);
    probes.emplace_back(t, s);
  }
  return probes;
}

/// (2): zeta(t, s) < s - t strictly at every probe. A probe that passes by a
/// margin of at most 1e-12 is undetermined. Witness = first failing probe in
/// probe order (else first undetermined one).
inline AxiomResult check_axiom_2(const SimulationFunction& zeta,
                                 const std::vector<std::pair<double, double>>& probes) {
  AxiomResult r{"axiom_2", Status::pass, probes.size(), std::nullopt, "probe-verified"};
  std::optional<std::pair<double, double>> first_undetermined;
  for (const auto& [t, s] : probes) {
    const double z = zeta(t, s);
    const double bound = s - t;
    if (!(z < bound)) {
      r.status = Status::fail;
      r.witness = std::make_pair(t, s);
      r.note = "probe-verified; zeta = " + Expression::format_number(z) + " >= s - t";
      return r;
    }
    if (bound - z <= kZeroTol && !first_undetermined) first_undetermined = std::make_pair(t, s);
  }
  if (first_undetermined) {
    r.status = Status::undetermined;
    r.witness = first_undetermined;
    r.note = "probe-verified; margin within 1e-12";
  }
  return r;
}

inline AxiomResult check_axiom_2(const SimulationFunction& zeta, std::uint64_t seed = kDefaultSeed) {
  return check_axiom_2(zeta, default_axiom2_probes(seed));
}

enum class SequenceKind { constant, from_above, from_below, oscillating };

inline std::string to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::constant:
      return "constant";
    case SequenceKind::from_above:
      return "from_above";
    case SequenceKind::from_below:
      return "from_below";
    case SequenceKind::oscillating:
      return "oscillating";
  }
  return "?";
}

/// Positive sequence pairs (t_n, s_n) -> (L, L), n = 1..n_max. Offsets
/// decay like 1/n^2 so that at n >= 100 they are small next to the limit
/// margin even for L = 1e3.
struct SequenceFamily {
  SequenceKind kind = SequenceKind::constant;
  double limit = 1.0;
  std::size_t n_max = 200;

  std::pair<double, double> term(std::size_t n) const {
    const double k = static_cast<double>(n) + 1.0;
    const double q = 1.0 / (k * k);
    const double L = limit;
    switch (kind) {
      case SequenceKind::constant:
        return {L, L};
      case SequenceKind::from_above:
        return {L * (1.0 + q), L * (1.0 + 2.0 * q)};
      case SequenceKind::from_below:
        return {L * (1.0 - q), L * (1.0 - q / 2.0)};
      case SequenceKind::oscillating: {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return {L * (1.0 + sign * q), L * (1.0 - sign * q)};
      }
    }
    return {L, L};
  }
};

inline std::vector<double> default_axiom3_limits() { return {1e-3, 1e-1, 1.0, 10.0, 1e3}; }
inline std::vector<SequenceKind> all_sequence_kinds() {
  return {SequenceKind::constant, SequenceKind::from_above, SequenceKind::from_below, SequenceKind::oscillating};
}

/// (3): for each (L, family) the max of zeta over the tail n in
/// [n_max/2, n_max] must be <= -1e-9 * max(1, L). A tail max in (-delta, 0] is
/// undetermined; a positive one fails. Witness = (L, tail max).
inline AxiomResult check_axiom_3(const SimulationFunction& zeta, const std::vector<double>& limits,
                                 const std::vector<SequenceKind>& kinds, std::size_t n_max = 200) {
  AxiomResult r{"axiom_3", Status::pass, 0, std::nullopt, "probe-verified"};
  Status worst = Status::pass;
  for (double L : limits) {
    for (auto kind : kinds) {
      SequenceFamily fam{kind, L, n_max};
      double tail_max = -kInfinity;
      for (std::size_t n = n_max / 2; n <= n_max; ++n) {
        const auto [t, s] = fam.term(n);
        tail_max = std::max(tail_max, zeta(t, s));
        ++r.probes;
      }
      const double delta = 1e-9 * std::max(1.0, L);
      Status st = Status::pass;
      if (tail_max > 0.0) {
        st = Status::fail;
      } else if (tail_max > -delta) {
        st = Status::undetermined;
      }
      if ((st == Status::fail && worst != Status::fail) || (st == Status::undetermined && worst == Status::pass)) {
        worst = st;
        r.witness = std::make_pair(L, tail_max);
        r.note = "probe-verified; sequence family " + to_string(kind);
      }
    }
  }
  r.status = worst;
  return r;
}

inline AxiomResult check_axiom_3(const SimulationFunction& zeta) {
  return check_axiom_3(zeta, default_axiom3_limits(), all_sequence_kinds());
}

struct AxiomSuite {
  AxiomResult axiom_1, axiom_2, axiom_3;
  bool all_pass() const {
    return axiom_1.status == Status::pass && axiom_2.status == Status::pass && axiom_3.status == Status::pass;
  }
};

inline AxiomSuite check_axioms(const SimulationFunction& zeta, std::uint64_t seed = kDefaultSeed) {
  return {check_axiom_1(zeta), check_axiom_2(zeta, seed), check_axiom_3(zeta)};
}

// ---------------------------------------------------------------------------
// Side conditions of the phi/eta families

struct SideCondition {
  std::string name;
  Status status = Status::pass;
  std::optional<double> witness;
  std::string note;
};

struct SideConditionReport {
  std::vector<SideCondition> conditions;
  /// Combined status; a declared-but-unverified semicontinuity does not
  /// count against it (a contradicted one does).
  Status overall() const {
    Status s = Status::vacuous;
    for (const auto& c : conditions) {
      if (c.name == "semicontinuity" && c.status != Status::fail) continue;
      s = combine(s, c.status);
    }
    return s;
  }
};

namespace detail {

// One-sided spot check of declared semicontinuity at the breakpoints.
inline SideCondition semicontinuity_spot_check(const AuxFunction& f) {
  SideCondition c{"semicontinuity", Status::undetermined, std::nullopt, "declared, not verified"};
  if (f.regularity() == Regularity::none) {
    c.note = "none declared";
    return c;
  }
  const auto bps = f.breakpoints();
  if (bps.empty()) {
    c.note = "declared " + to_string(f.regularity()) + ", not verified (no breakpoints to probe)";
    return c;
  }
  constexpr double kTol = 1e-6;
  for (double b : bps) {
    if (b < 0.0) continue;
    const double h = 1e-9 * std::max(1.0, std::fabs(b));
    const double at = f(b);
    const double right = f(b + h);
    const double left = b - h >= 0.0 ? f(b - h) : right;
    const bool ok = f.regularity() == Regularity::lower_semicontinuous ? at <= std::min(left, right) + kTol
                                                                       : at >= std::max(left, right) - kTol;
    if (!ok) {
      c.status = Status::fail;
      c.witness = b;
      c.note = "declared " + to_string(f.regularity()) + ", violated at breakpoint";
      return c;
    }
  }
  c.note = "declared " + to_string(f.regularity()) + ", spot-checked at breakpoints only";
  return c;
}

}  // namespace detail

/// Probes each family's side conditions on the 100-point log grid
/// [1e-6, 1e3]:
///   PhiSubtract: phi(0) = 0, phi >= 0, phi(t) > 0 for t > 0
///   PhiMultiply: phi in [0, 1), limsup_{t -> r+} phi(t) <= 1 - 1e-9
///   EtaBound:    eta >= 0, eta(t) < t
///   IntegralPhi: phi >= 0, integral_0^e phi > e
/// Semicontinuity is declared and only spot-checked.
inline SideConditionReport check_side_conditions(const SimulationFunction& zeta) {
  SideConditionReport rep;
  if (!zeta.has_aux()) return rep;
  const AuxFunction& f = zeta.aux();
  const auto grid = log_grid(1e-6, 1e3, 100);

  auto probe = [&](const std::string& name, auto&& pred) {
    SideCondition c{name, Status::pass, std::nullopt, "probe-verified"};
    for (double t : grid) {
      const Status st = pred(t);
      if (st == Status::fail) {
        c.status = Status::fail;
        c.witness = t;
        return c;
      }
      if (st == Status::undetermined && c.status == Status::pass) {
        c.status = Status::undetermined;
        c.witness = t;
      }
    }
    return c;
  };
  auto as_status = [](bool ok) { return ok ? Status::pass : Status::fail; };

  switch (zeta.family()) {
    case ZetaFamily::phi_subtract: {
      SideCondition zero{"phi_zero_at_zero", Status::pass, std::nullopt, "exact"};
      if (!(std::fabs(f(0.0)) <= kZeroTol)) {
        zero.status = Status::fail;
        zero.witness = 0.0;
      }
      rep.conditions.push_back(zero);
      rep.conditions.push_back(probe("phi_nonnegative", [&](double t) { return as_status(f(t) >= 0.0); }));
      rep.conditions.push_back(probe("phi_positive", [&](double t) { return as_status(f(t) > 0.0); }));
      break;
    }
    case ZetaFamily::phi_multiply: {
      rep.conditions.push_back(
          probe("phi_range", [&](double t) { return as_status(f(t) >= 0.0 && f(t) < 1.0); }));
      rep.conditions.push_back(probe("phi_limsup_below_one", [&](double r) {
        double m = -kInfinity;
        for (int k = 1; k <= 9; ++k) m = std::max(m, f(r * (1.0 + std::pow(10.0, -k))));
        if (m >= 1.0) return Status::fail;
        if (m > 1.0 - 1e-9) return Status::undetermined;
        return Status::pass;
      }));
      break;
    }
    case ZetaFamily::eta_bound: {
      rep.conditions.push_back(probe("eta_nonnegative", [&](double t) { return as_status(f(t) >= 0.0); }));
      rep.conditions.push_back(probe("eta_below_identity", [&](double t) { return as_status(f(t) < t); }));
      break;
    }
    case ZetaFamily::integral_phi: {
      rep.conditions.push_back(probe("phi_nonnegative", [&](double t) { return as_status(f(t) >= 0.0); }));
      rep.conditions.push_back(
          probe("integral_exceeds_bound", [&](double e) { return as_status(zeta.integral(e) > e); }));
      break;
    }
    default:
      break;
  }
  rep.conditions.push_back(detail::semicontinuity_spot_check(f));
  return rep;
}

}  // namespace fdlab
