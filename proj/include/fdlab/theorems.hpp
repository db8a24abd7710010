// Hypothesis/conclusion verifiers for the fixed-disc theorems, plus
// fixed-set and maximal-fixed-disc analysis.
//
// Every verifier follows the same pattern: compute the radius from the
// samples, check the hypotheses on the samples (augmented with the disc
// center and boundary), then check the conclusion on the conservative disc
// D(x0, lower). A report whose hypotheses all hold but whose conclusion fails
// is a REFUTATION_CANDIDATE: the theorems are proved, so that verdict points
// at a tolerance or discretization artifact.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdlab/contractions.hpp"
#include "fdlab/metric.hpp"
#include "fdlab/self_map.hpp"
#include "fdlab/simulation.hpp"
#include "fdlab/status.hpp"

namespace fdlab {

enum class Verdict { consistent, hypothesis_failed, refutation_candidate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent:
      return "consistent";
    case Verdict::hypothesis_failed:
      return "hypothesis_failed";
    case Verdict::refutation_candidate:
      return "REFUTATION_CANDIDATE";
  }
  return "?";
}

/// Contiguous run of fixed samples (1-D) or a single fixed point.
struct FixedRun {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct FixedSetSummary {
  std::size_t count = 0;
  std::size_t refined = 0;     // roots added by bisection
  std::vector<FixedRun> runs;  // 1-D only
};

struct MaximalRadius {
  double radius = 0.0;
  bool center_fixed = true;
  bool covers_all_samples = false;  // no displaced sample at all
};

struct ReportNumbers {
  std::optional<RadiusEstimate> rho;
  std::optional<RadiusEstimate> rho_other;  // second map's rho (common fixed disc)
  std::optional<RadiusEstimate> r;
  std::optional<RadiusEstimate> mu;
  std::optional<double> disc_radius;        // radius the conclusion was checked on
  std::optional<FixedSetSummary> fixed_set;
  std::optional<MaximalRadius> maximal_fixed_radius;
  std::optional<FixedSetSummary> coincidence_set;
};

struct SampleMetadata {
  std::size_t count = 0;
  std::uint64_t seed = kDefaultSeed;
  Tolerances tolerances;
};

struct Conclusion {
  Status status = Status::pass;
  std::string statement;
  std::vector<Witness> counterexamples;
  std::size_t checked = 0;
  std::size_t violations = 0;
};

struct VerificationReport {
  std::string theorem;
  std::string map;
  std::optional<Point> x0;
  std::vector<CheckResult> hypotheses;
  Conclusion conclusion;
  ReportNumbers numbers;
  SampleMetadata samples;
  std::vector<CheckResult> diagnostics;
  std::vector<std::string> flags;
  Verdict verdict = Verdict::consistent;

  const CheckResult& hypothesis(const std::string& name) const {
    for (const auto& h : hypotheses)
      if (h.name == name) return h;
    throw std::out_of_range("no hypothesis named " + name);
  }
  const CheckResult& diagnostic(const std::string& name) const {
    for (const auto& d : diagnostics)
      if (d.name == name) return d;
    throw std::out_of_range("no diagnostic named " + name);
  }
  bool has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
};

inline Verdict decide_verdict(const std::vector<CheckResult>& hypotheses, Status conclusion) {
  for (const auto& h : hypotheses)
    if (!h.holds()) return Verdict::hypothesis_failed;
  return holds(conclusion) ? Verdict::consistent : Verdict::refutation_candidate;
}

inline constexpr const char* kIdentityFlag = "map is identity on all samples";

// ---------------------------------------------------------------------------
// Fixed sets

/// Samples with d(x, Tx) <= eps_fix. On 1-D intervals, every strict sign
/// change of x - Tx between adjacent samples is bisected to root_tol and the
/// root added (provenance refined) unless the residual exceeds jump_tol (a
/// jump, not a root).
inline SampleSet fixed_set(const MetricSpace& space, const SelfMap& T, const SampleSet& samples,
                           const Tolerances& tol = {}) {
  std::vector<Sample> out;
  for (const auto& s : samples)
    if (space.distance(s.point, T(s.point)) <= tol.eps_fix) out.push_back(s);
  if (space.kind() != SpaceKind::interval) return SampleSet(std::move(out));

  auto f = [&](double x) { return x - T.at(x); };
  std::vector<Sample> roots;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    double a = samples.point(i).x();
    double b = samples.point(i + 1).x();
    double fa = f(a);
    const double fb = f(b);
    if (std::fabs(fa) <= tol.eps_fix || std::fabs(fb) <= tol.eps_fix) continue;
    if ((fa < 0.0) == (fb < 0.0)) continue;
    while (b - a > tol.root_tol) {
      const double m = a + (b - a) / 2.0;
      const double fm = f(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    const double root = a + (b - a) / 2.0;
    if (std::fabs(f(root)) <= tol.jump_tol) roots.push_back({Point::scalar(root), kRefined});
  }
  return SampleSet(std::move(out)).merged(roots);
}

/// Samples where d(Tx, Sx) <= eps_fix.
inline SampleSet coincidence_set(const MetricSpace& space, const SelfMap& T, const SelfMap& S,
                                 const SampleSet& samples, const Tolerances& tol = {}) {
  std::vector<Sample> out;
  for (const auto& s : samples)
    if (space.distance(T(s.point), S(s.point)) <= tol.eps_fix) out.push_back(s);
  return SampleSet(std::move(out));
}

/// Runs of consecutive members of `subset` within the sorted 1-D `samples`.
/// Refined points not in `samples` form their own runs.
inline FixedSetSummary summarize(const MetricSpace& space, const SampleSet& subset, const SampleSet& samples) {
  FixedSetSummary sum;
  sum.count = subset.size();
  for (const auto& s : subset)
    if (s.provenance & kRefined) ++sum.refined;
  if (space.kind() != SpaceKind::interval) return sum;
  const SampleSet all = samples.merged(subset.samples());
  std::size_t j = 0;
  bool in_run = false;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double x = all.point(i).x();
    while (j < subset.size() && subset.point(j).x() < x) ++j;
    const bool member = j < subset.size() && subset.point(j).x() == x;
    if (member) {
      if (in_run) {
        sum.runs.back().hi = x;
        ++sum.runs.back().count;
      } else {
        sum.runs.push_back({x, x, 1});
        in_run = true;
      }
    } else {
      in_run = false;
    }
  }
  return sum;
}

/// Largest r such that every sampled point of D(x0, r) is fixed: the
/// distance from x0 to the nearest displaced sample, refined in 1-D by
/// bisection (to tau_rho) between that sample and its neighbour towards x0.
/// When Tx0 != x0 the radius is 0 with center_fixed = false. With no
/// displaced sample it is the distance to the farthest sample.
inline MaximalRadius maximal_fixed_radius(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                          const SampleSet& samples_in, const Tolerances& tol = {}) {
  space.require_member(x0);
  MaximalRadius out;
  auto displaced = [&](const Point& p) { return space.distance(p, T(p)) > tol.eps_fix; };
  if (displaced(x0)) {
    out.center_fixed = false;
    return out;
  }
  const SampleSet samples = with_disc(space, samples_in, Disc(x0, 0.0));

  if (space.kind() != SpaceKind::interval) {
    double nearest = kInfinity, farthest = 0.0;
    for (const auto& s : samples) {
      const double d = space.distance(s.point, x0);
      farthest = std::max(farthest, d);
      if (displaced(s.point)) nearest = std::min(nearest, d);
    }
    out.covers_all_samples = std::isinf(nearest);
    out.radius = out.covers_all_samples ? farthest : nearest;
    return out;
  }

  const double c = x0.x();
  std::size_t center = 0;
  while (center < samples.size() && samples.point(center).x() != c) ++center;
  auto is_displaced_x = [&](double x) { return std::fabs(x - T.at(x)) > tol.eps_fix; };

  double best = kInfinity;
  // Walk outwards on each side to the first displaced sample, then bisect the
  // gap between it and the last fixed sample.
  for (int dir : {-1, +1}) {
    std::size_t i = center;
    std::optional<std::size_t> hit;
    while (true) {
      if (dir < 0 && i == 0) break;
      if (dir > 0 && i + 1 == samples.size()) break;
      i = dir < 0 ? i - 1 : i + 1;
      if (displaced(samples.point(i))) {
        hit = i;
        break;
      }
    }
    if (!hit) continue;
    double fixed_x = samples.point(dir < 0 ? *hit + 1 : *hit - 1).x();
    double moved_x = samples.point(*hit).x();
    while (std::fabs(moved_x - fixed_x) > tol.tau_rho) {
      const double m = fixed_x + (moved_x - fixed_x) / 2.0;
      if (is_displaced_x(m)) {
        moved_x = m;
      } else {
        fixed_x = m;
      }
    }
    best = std::min(best, std::fabs(fixed_x - c));
  }
  if (std::isinf(best)) {
    out.covers_all_samples = true;
    out.radius = std::max(std::fabs(samples.point(0).x() - c), std::fabs(samples.point(samples.size() - 1).x() - c));
    return out;
  }
  out.radius = best;
  return out;
}

/// Every sample in the closed disc is fixed (d(x, Tx) <= eps_fix).
inline CheckResult check_fixed_disc(const MetricSpace& space, const SelfMap& T, const Disc& disc,
                                    const SampleSet& samples_in, const Tolerances& tol = {}) {
  const SampleSet samples = with_disc(space, samples_in, disc);
  CheckAccumulator acc("fixed_disc", tol.witness_cap);
  for (const auto& s : samples) {
    acc.examine();
    if (!disc.contains(space, s.point, tol.eps_mem)) continue;
    acc.premise();
    const double d = space.distance(s.point, T(s.point));
    if (d > tol.eps_fix) acc.violate({s.point, std::nullopt, d, tol.eps_fix, "d(x,Tx) > eps_fix"});
  }
  return acc.finish();
}

/// 0 < d(Tx, x0) <= bound + eps_mem for sampled x in D(x0, radius) \ {x0}.
/// "0 <" means d(Tx, x0) > eps_fix.
inline CheckResult check_disc_condition(const MetricSpace& space, const SelfMap& T, const Point& x0, double radius,
                                        double bound, const SampleSet& samples, const Tolerances& tol = {},
                                        std::string name = "disc_condition") {
  const Disc disc(x0, radius);
  CheckAccumulator acc(std::move(name), tol.witness_cap);
  for (const auto& s : samples) {
    acc.examine();
    if (s.point == x0 || !disc.contains(space, s.point, tol.eps_mem)) continue;
    acc.premise();
    const double d = space.distance(T(s.point), x0);
    if (!(d > tol.eps_fix)) {
      acc.violate({s.point, std::nullopt, d, 0.0, "Tx = x0"});
    } else if (!(d <= bound + tol.eps_mem)) {
      acc.violate({s.point, std::nullopt, d, bound, "d(Tx,x0) exceeds radius"});
    }
  }
  return acc.finish();
}

namespace detail {

inline Conclusion to_conclusion(CheckResult c, std::string statement) {
  Conclusion out;
  out.status = c.violations > 0 ? Status::fail : Status::pass;
  out.statement = std::move(statement);
  out.counterexamples = std::move(c.witnesses);
  out.checked = c.premises;
  out.violations = c.violations;
  return out;
}

inline std::string disc_text(const Point& x0, double r) {
  return "D(" + x0.to_string() + ", " + (std::isinf(r) ? std::string("inf") : Expression::format_number(r)) + ")";
}

inline void fill_common(VerificationReport& rep, const MetricSpace& space, const SelfMap& T, const Point& x0,
                        const SampleSet& samples, const Tolerances& tol) {
  rep.map = T.name();
  rep.x0 = x0;
  rep.samples.count = samples.size();
  rep.samples.tolerances = tol;
  const SampleSet fixed = fixed_set(space, T, samples, tol);
  rep.numbers.fixed_set = summarize(space, fixed, samples);
  rep.numbers.maximal_fixed_radius = maximal_fixed_radius(space, T, x0, samples, tol);
}

inline Disc radius_disc(const Point& x0, const RadiusEstimate& est) { return Disc(x0, est.lower); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Theorem verifiers

/// Zc-contraction + disc condition on D(x0, rho)  =>  D(x0, rho) is fixed.
inline VerificationReport verify_theorem1(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                          const SimulationFunction& zeta, const SampleSet& samples_in,
                                          const Tolerances& tol = {}) {
  space.require_member(x0);
  VerificationReport rep;
  rep.theorem = "thm1";
  const RadiusEstimate r = rho(space, T, samples_in, tol);
  const Disc disc = detail::radius_disc(x0, r);
  const SampleSet samples = with_disc(space, samples_in, disc);

  rep.hypotheses.push_back(is_zc_contraction(space, T, x0, zeta, samples, tol));
  rep.hypotheses.push_back(check_disc_condition(space, T, x0, disc.radius, r.value, samples, tol));
  rep.conclusion = detail::to_conclusion(check_fixed_disc(space, T, disc, samples, tol),
                                         "T fixes " + detail::disc_text(x0, disc.radius));
  rep.numbers.rho = r;
  rep.numbers.disc_radius = disc.radius;
  detail::fill_common(rep, space, T, x0, samples, tol);
  if (r.displaced == 0) rep.flags.push_back(kIdentityFlag);
  rep.verdict = decide_verdict(rep.hypotheses, rep.conclusion.status);
  return rep;
}

/// Parameters of the five corollary conditions:
///   1: d(Tx,x) <= lambda d(Tx,x0)
///   2: d(Tx,x) <= d(Tx,x0) - phi(d(Tx,x0))
///   3: d(Tx,x) <= phi(d(Tx,x0)) d(Tx,x0)
///   4: d(Tx,x) <= eta(d(Tx,x0))
///   5: integral_0^{d(Tx,x)} phi <= d(Tx,x0)
struct CorollaryParams {
  double lambda = 0.75;
  AuxFunction phi = AuxFunction::parse("s/(s+1)");
  AuxFunction eta = AuxFunction::parse("t/2");
  double quad_step = SimulationFunction::kDefaultQuadStep;
};

/// The simulation function a corollary's condition corresponds to.
inline SimulationFunction corollary_zeta(int k, const CorollaryParams& p) {
  switch (k) {
    case 1:
      return SimulationFunction::linear(p.lambda, "zeta1");
    case 2:
      return SimulationFunction::phi_subtract(p.phi);
    case 3:
      return SimulationFunction::phi_multiply(p.phi);
    case 4:
      return SimulationFunction::eta_bound(p.eta);
    case 5:
      return SimulationFunction::integral_phi(p.phi, p.quad_step);
    default:
      throw DomainError("corollary index must be 1..5, got " + std::to_string(k));
  }
}

inline VerificationReport verify_corollary(const MetricSpace& space, const SelfMap& T, const Point& x0, int k,
                                           const CorollaryParams& params, const SampleSet& samples_in,
                                           const Tolerances& tol = {}) {
  space.require_member(x0);
  const SimulationFunction zeta = corollary_zeta(k, params);
  VerificationReport rep;
  rep.theorem = "cor" + std::to_string(k);
  const RadiusEstimate r = rho(space, T, samples_in, tol);
  const Disc disc = detail::radius_disc(x0, r);
  const SampleSet samples = with_disc(space, samples_in, disc);

  // Condition 1) is checked literally, for every sampled x.
  auto condition = [&](double d_move, double d_center) {
    switch (k) {
      case 1:
        return d_move <= params.lambda * d_center;
      case 2:
        return d_move <= d_center - params.phi(d_center);
      case 3:
        return d_move <= params.phi(d_center) * d_center;
      case 4:
        return d_move <= params.eta(d_center);
      default:
        return zeta.integral(d_move) <= d_center;
    }
  };
  CheckAccumulator cond("condition", tol.witness_cap);
  CheckAccumulator agree("zeta_agreement", tol.witness_cap);
  for (const auto& s : samples) {
    cond.examine();
    cond.premise();
    const Point Tx = T(s.point);
    const double t = space.distance(Tx, s.point);
    const double d0 = space.distance(Tx, x0);
    const bool ok = condition(t, d0);
    if (!ok) cond.violate({s.point, std::nullopt, t, d0, "corollary condition violated"});
    agree.examine();
    if (t > tol.eps_fix) {
      agree.premise();
      const bool zeta_ok = zeta(t, d0) >= 0.0;
      if (zeta_ok != ok) agree.violate({s.point, std::nullopt, t, d0, "condition and zeta disagree"});
    }
  }
  rep.hypotheses.push_back(cond.finish());

  CheckResult side{"side_conditions", Status::pass, 0, 0, 0, {}};
  if (k == 1) {
    side.premises = side.checked = 1;
  } else {
    const auto sc = check_side_conditions(zeta);
    side.status = sc.overall();
    for (const auto& c : sc.conditions) {
      ++side.checked;
      ++side.premises;
      if (c.status == Status::fail || c.status == Status::undetermined) {
        if (c.status == Status::fail) ++side.violations;
        if (c.name != "semicontinuity" || c.status == Status::fail)
          side.witnesses.push_back({Point::scalar(c.witness.value_or(0.0)), std::nullopt, 0.0, 0.0,
                                    c.name + ": " + to_string(c.status) + " (" + c.note + ")"});
      }
    }
  }
  rep.hypotheses.push_back(side);
  rep.hypotheses.push_back(check_disc_condition(space, T, x0, disc.radius, r.value, samples, tol));
  rep.conclusion = detail::to_conclusion(check_fixed_disc(space, T, disc, samples, tol),
                                         "T fixes " + detail::disc_text(x0, disc.radius));

  rep.diagnostics.push_back(is_zc_contraction(space, T, x0, zeta, samples, tol));
  rep.diagnostics.back().name = "zc_contraction_" + zeta.name();
  rep.diagnostics.push_back(agree.finish());
  rep.numbers.rho = r;
  rep.numbers.disc_radius = disc.radius;
  detail::fill_common(rep, space, T, x0, samples, tol);
  if (r.displaced == 0) rep.flags.push_back(kIdentityFlag);
  rep.verdict = decide_verdict(rep.hypotheses, rep.conclusion.status);
  return rep;
}

/// alpha-Zc-contraction + alpha-x0-admissible + alpha(x0,x) >= 1 on the disc
/// + disc condition  =>  D(x0, rho) is fixed.
inline VerificationReport verify_theorem2(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                          const AlphaFunction& alpha, const SimulationFunction& zeta,
                                          const SampleSet& samples_in, const Tolerances& tol = {}) {
  space.require_member(x0);
  VerificationReport rep;
  rep.theorem = "thm2";
  const RadiusEstimate r = rho(space, T, samples_in, tol);
  const Disc disc = detail::radius_disc(x0, r);
  const SampleSet samples = with_disc(space, samples_in, disc);

  rep.hypotheses.push_back(is_alpha_zc_contraction(space, T, x0, alpha, zeta, samples, tol));
  rep.hypotheses.push_back(is_alpha_admissible(space, T, x0, alpha, samples, tol));
  CheckAccumulator alpha_disc("alpha_on_disc", tol.witness_cap);
  for (const auto& s : samples) {
    alpha_disc.examine();
    if (!disc.contains(space, s.point, tol.eps_mem)) continue;
    alpha_disc.premise();
    const double a = alpha(x0, s.point);
    if (!(a >= 1.0)) alpha_disc.violate({s.point, std::nullopt, a, 1.0, "alpha(x0,x) < 1"});
  }
  rep.hypotheses.push_back(alpha_disc.finish());
  rep.hypotheses.push_back(check_disc_condition(space, T, x0, disc.radius, r.value, samples, tol));
  rep.conclusion = detail::to_conclusion(check_fixed_disc(space, T, disc, samples, tol),
                                         "T fixes " + detail::disc_text(x0, disc.radius));

  // Derived necessary condition: alpha(x0,Tx) d(x,Tx) < d(Tx,x0) when Tx != x0.
  CheckAccumulator necessary("alpha_necessary_inequality", tol.witness_cap);
  for (const auto& s : samples) {
    necessary.examine();
    const Point Tx = T(s.point);
    const double rhs = space.distance(Tx, x0);
    if (!(rhs > tol.eps_fix)) continue;
    necessary.premise();
    const double lhs = alpha(x0, Tx) * space.distance(s.point, Tx);
    if (!(lhs < rhs)) necessary.violate({s.point, std::nullopt, lhs, rhs, "alpha(x0,Tx)d(x,Tx) >= d(Tx,x0)"});
  }
  rep.diagnostics.push_back(necessary.finish());
  rep.numbers.rho = r;
  rep.numbers.disc_radius = disc.radius;
  detail::fill_common(rep, space, T, x0, samples, tol);
  if (r.displaced == 0) rep.flags.push_back(kIdentityFlag);
  rep.verdict = decide_verdict(rep.hypotheses, rep.conclusion.status);
  return rep;
}

/// Ciric-type Zc-contraction + disc condition  =>  D(x0, rho) is fixed.
/// Diagnostics record, for every violating or near-violating sample, which
/// term attains m*(x, x0).
inline VerificationReport verify_theorem3(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                          const SimulationFunction& zeta, const SampleSet& samples_in,
                                          const Tolerances& tol = {}) {
  space.require_member(x0);
  VerificationReport rep;
  rep.theorem = "thm3";
  const RadiusEstimate r = rho(space, T, samples_in, tol);
  const Disc disc = detail::radius_disc(x0, r);
  const SampleSet samples = with_disc(space, samples_in, disc);

  rep.hypotheses.push_back(is_ciric_zc_contraction(space, T, x0, zeta, samples, tol));
  rep.hypotheses.push_back(check_disc_condition(space, T, x0, disc.radius, r.value, samples, tol));
  rep.conclusion = detail::to_conclusion(check_fixed_disc(space, T, disc, samples, tol),
                                         "T fixes " + detail::disc_text(x0, disc.radius));

  CheckAccumulator arms("max_arm_cases", tol.witness_cap);
  const Point Tx0 = T(x0);
  for (const auto& s : samples) {
    arms.examine();
    const Point Tx = T(s.point);
    const double t = space.distance(Tx, s.point);
    if (!(t > tol.eps_fix)) continue;
    arms.premise();
    const MaxValue m = m_star_arm(space, s.point, Tx, x0, Tx0);
    const double z = zeta(t, m.value);
    if (z <= 1e-9 * std::max(1.0, m.value))
      arms.violate({s.point, std::nullopt, z, m.value, to_string(m.arm)});
  }
  CheckResult arm_diag = arms.finish();
  // Informational: the entries are near/violations, not a failure of their own.
  arm_diag.status = rep.hypotheses.front().status;
  rep.diagnostics.push_back(std::move(arm_diag));
  rep.numbers.rho = r;
  rep.numbers.disc_radius = disc.radius;
  detail::fill_common(rep, space, T, x0, samples, tol);
  if (r.displaced == 0) rep.flags.push_back(kIdentityFlag);
  rep.verdict = decide_verdict(rep.hypotheses, rep.conclusion.status);
  return rep;
}

/// Which map of the pair is required to be the Zc-contraction.
enum class Branch { T, S };

/// Pair condition with m*_{S,T} + range condition on D(x0, mu) + the
/// designated map is a Zc-contraction with its disc condition
///   =>  D(x0, mu) is a common fixed disc, mu = min{rho, r}.
inline VerificationReport verify_theorem4(const MetricSpace& space, const SelfMap& T, const SelfMap& S,
                                          const Point& x0, const SimulationFunction& zeta,
                                          const SampleSet& samples_in, const Tolerances& tol = {},
                                          Branch branch = Branch::T) {
  space.require_member(x0);
  VerificationReport rep;
  rep.theorem = "thm4";
  const SelfMap& designated = branch == Branch::T ? T : S;
  const SelfMap& other = branch == Branch::T ? S : T;
  const RadiusEstimate rho_d = rho(space, designated, samples_in, tol);
  const RadiusEstimate rho_o = rho(space, other, samples_in, tol);
  const RadiusEstimate r = r_pair(space, T, S, samples_in, tol);
  const RadiusEstimate m = mu(rho_d, r);
  const Disc disc(x0, m.lower);
  const Disc rho_disc = detail::radius_disc(x0, rho_d);
  const SampleSet samples = with_disc(space, with_disc(space, samples_in, disc), rho_disc);

  rep.hypotheses.push_back(pair_condition(space, T, S, x0, zeta, samples, tol));

  CheckAccumulator range("range_condition", tol.witness_cap);
  for (const auto& s : samples) {
    range.examine();
    if (!disc.contains(space, s.point, tol.eps_mem)) continue;
    range.premise();
    const double dt = space.distance(T(s.point), x0);
    const double ds = space.distance(S(s.point), x0);
    if (!(dt <= m.value + tol.eps_mem)) range.violate({s.point, std::nullopt, dt, m.value, "d(Tx,x0) > mu"});
    if (!(ds <= m.value + tol.eps_mem)) range.violate({s.point, std::nullopt, ds, m.value, "d(Sx,x0) > mu"});
  }
  rep.hypotheses.push_back(range.finish());

  CheckResult zc = is_zc_contraction(space, designated, x0, zeta, samples, tol);
  CheckResult dc = check_disc_condition(space, designated, x0, rho_disc.radius, rho_d.value, samples, tol);
  CheckResult designated_check{"designated_zc_contraction", combine(zc.status, dc.status),
                               zc.checked + dc.checked, zc.premises + dc.premises, zc.violations + dc.violations,
                               {}};
  for (auto& w : zc.witnesses) designated_check.witnesses.push_back(std::move(w));
  for (auto& w : dc.witnesses) {
    w.note = "disc condition: " + w.note;
    designated_check.witnesses.push_back(std::move(w));
  }
  designated_check.name += branch == Branch::T ? " (T)" : " (S)";
  rep.hypotheses.push_back(std::move(designated_check));

  CheckAccumulator common("common_fixed_disc", tol.witness_cap);
  for (const auto& s : samples) {
    common.examine();
    if (!disc.contains(space, s.point, tol.eps_mem)) continue;
    common.premise();
    const double dt = space.distance(s.point, T(s.point));
    const double ds = space.distance(s.point, S(s.point));
    if (dt > tol.eps_fix) common.violate({s.point, std::nullopt, dt, tol.eps_fix, "Tx != x"});
    if (ds > tol.eps_fix) common.violate({s.point, std::nullopt, ds, tol.eps_fix, "Sx != x"});
  }
  rep.conclusion = detail::to_conclusion(common.finish(), "T and S fix " + detail::disc_text(x0, disc.radius));

  rep.numbers.rho = rho_d;
  rep.numbers.rho_other = rho_o;
  rep.numbers.r = r;
  rep.numbers.mu = m;
  rep.numbers.disc_radius = disc.radius;
  detail::fill_common(rep, space, designated, x0, samples, tol);
  const SampleSet coincide = coincidence_set(space, T, S, samples, tol);
  rep.numbers.coincidence_set = summarize(space, coincide, samples);
  if (rho_d.displaced == 0 && rho_o.displaced == 0) rep.flags.push_back(kIdentityFlag);
  rep.verdict = decide_verdict(rep.hypotheses, rep.conclusion.status);
  return rep;
}

/// Simulation-function axioms (and family side conditions) as a report.
inline VerificationReport verify_axioms(const SimulationFunction& zeta, std::uint64_t seed = kDefaultSeed) {
  VerificationReport rep;
  rep.theorem = "axioms";
  rep.map = zeta.name();
  rep.samples.seed = seed;
  auto to_check = [](const AxiomResult& a) {
    CheckResult c{a.axiom, a.status, a.probes, a.probes, a.status == Status::fail ? 1u : 0u, {}};
    if (a.witness)
      c.witnesses.push_back(
          {Point::scalar(a.witness->first), Point::scalar(a.witness->second), 0.0, 0.0, a.note});
    else
      c.witnesses.clear();
    return c;
  };
  const AxiomSuite suite = check_axioms(zeta, seed);
  rep.hypotheses.push_back(to_check(suite.axiom_1));
  rep.hypotheses.push_back(to_check(suite.axiom_2));
  rep.hypotheses.push_back(to_check(suite.axiom_3));
  rep.samples.count = suite.axiom_2.probes + suite.axiom_3.probes + 1;
  for (const auto& c : check_side_conditions(zeta).conditions) {
    CheckResult d{c.name, c.status, 1, 1, c.status == Status::fail ? 1u : 0u, {}};
    if (c.witness) d.witnesses.push_back({Point::scalar(*c.witness), std::nullopt, 0.0, 0.0, c.note});
    if (c.name == "semicontinuity") {
      if (!c.witness) d.witnesses.push_back({Point::scalar(0.0), std::nullopt, 0.0, 0.0, c.note});
      rep.diagnostics.push_back(std::move(d));
    } else {
      rep.hypotheses.push_back(std::move(d));
    }
  }
  Status overall = Status::vacuous;
  for (const auto& h : rep.hypotheses) overall = combine(overall, h.status);
  rep.conclusion.status = overall == Status::pass ? Status::pass : Status::fail;
  rep.conclusion.statement = "zeta is a simulation function (probe-verified)";
  rep.verdict = rep.conclusion.status == Status::pass ? Verdict::consistent : Verdict::hypothesis_failed;
  return rep;
}

/// Fixed set and maximal fixed radius about x0.
inline VerificationReport analyze_fixed_set(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                            const SampleSet& samples, const Tolerances& tol = {}) {
  space.require_member(x0);
  VerificationReport rep;
  rep.theorem = "fixed_set";
  rep.conclusion.statement = "fixed set computed";
  rep.numbers.rho = rho(space, T, samples, tol);
  detail::fill_common(rep, space, T, x0, samples, tol);
  rep.conclusion.checked = samples.size();
  if (rep.numbers.rho->displaced == 0) rep.flags.push_back(kIdentityFlag);
  rep.verdict = Verdict::consistent;
  return rep;
}

}  // namespace fdlab
