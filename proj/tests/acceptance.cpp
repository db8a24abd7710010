// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are the ones the criteria state.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fdlab/fdlab.hpp"

using namespace fdlab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return Expression::format_number(v); }

SampleSet catalog_samples(const CatalogInstance& inst) { return inst.samples(); }

// 1. T1, zeta6, x0 = 0 on [-50, 50], N = 10001.
Outcome criterion_1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const CatalogInstance t1 = lookup("T1");
  const SampleSet samples = catalog_samples(t1);
  const auto rep = verify_theorem1(t1.space, t1.map, Point::scalar(0.0), registry_zeta("zeta6"), samples);
  const double elapsed = seconds_since(t0);
  o.require(rep.verdict == Verdict::consistent, "verdict " + to_string(rep.verdict));
  o.require(std::fabs(rep.numbers.rho->value - 1.0) <= 1e-3, "rho " + fmt(rep.numbers.rho->value));
  std::size_t inside = 0;
  for (const auto& s : samples) {
    const double x = s.point.x();
    if (x < -1.0 || x > 1.0) continue;
    ++inside;
    o.require(t1.space.distance(s.point, t1.map(s.point)) == 0.0, "d(x,Tx) != 0 at " + fmt(x));
  }
  o.require(inside > 0, "no samples in [-1,1]");
  o.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("rho = ") + fmt(rep.numbers.rho->value) + ", " +
              std::to_string(inside) + " samples in [-1,1], " + fmt(elapsed) + " s";
  return o;
}

// 2. T2 (x0 = 1, mu = 2): converse failure.
Outcome criterion_2() {
  Outcome o;
  const CatalogInstance t2 = lookup("T2", {{"x0", 1.0}, {"mu", 2.0}});
  const SampleSet samples = catalog_samples(t2);
  const Point x0 = Point::scalar(1.0);
  const auto nec = check_necessary_inequality(t2.space, t2.map, x0, samples);
  o.require(nec.status == Status::fail, "necessary inequality " + to_string(nec.status));
  const bool witness_right =
      std::any_of(nec.witnesses.begin(), nec.witnesses.end(), [](const Witness& w) { return w.x.x() > 3.0; });
  o.require(witness_right, "no witness in (3, inf)");

  std::vector<SimulationFunction> zetas = {SimulationFunction::linear(0.75, "zeta1")};
  for (const auto& z : default_registry())
    if (z.name() != "zeta1") zetas.push_back(z);
  for (const auto& z : zetas) {
    const auto zc = is_zc_contraction(t2.space, t2.map, x0, z, samples);
    o.require(zc.status == Status::fail, z.name() + " zc " + to_string(zc.status));
  }
  const auto disc = check_fixed_disc(t2.space, t2.map, Disc(x0, 2.0), samples);
  o.require(disc.violations == 0 && disc.premises > 0,
            "fixed disc D(1,2): " + std::to_string(disc.violations) + " counterexamples");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(nec.violations) + " necessary-inequality violations, " +
              std::to_string(zetas.size()) + " zeta checked, D(1,2) fixed on " + std::to_string(disc.premises) +
              " samples";
  return o;
}

// 3. T3 with zeta7 at x0 = 0 and x0 = 1.
Outcome criterion_3() {
  Outcome o;
  const CatalogInstance t3 = lookup("T3");
  const SampleSet samples = catalog_samples(t3);
  const auto z7 = registry_zeta("zeta7");
  double rhos[2];
  int k = 0;
  for (double c : {0.0, 1.0}) {
    const auto rep = verify_theorem1(t3.space, t3.map, Point::scalar(c), z7, samples);
    o.require(rep.verdict == Verdict::consistent, "x0=" + fmt(c) + " verdict " + to_string(rep.verdict));
    rhos[k++] = rep.numbers.rho->value;
  }
  o.require(std::fabs(rhos[0] - 1.0) <= 1e-3 && std::fabs(rhos[1] - 1.0) <= 1e-3,
            "rho " + fmt(rhos[0]) + ", " + fmt(rhos[1]));
  const double m0 = maximal_fixed_radius(t3.space, t3.map, Point::scalar(0.0), samples).radius;
  const double m1 = maximal_fixed_radius(t3.space, t3.map, Point::scalar(1.0), samples).radius;
  o.require(std::fabs(m0 - 3.0) <= 1e-3, "maximal radius at 0 = " + fmt(m0));
  o.require(std::fabs(m1 - 2.0) <= 1e-3, "maximal radius at 1 = " + fmt(m1));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("rho = ") + fmt(rhos[0]) + " / " + fmt(rhos[1]) +
              ", maximal radii " + fmt(m0) + " / " + fmt(m1);
  return o;
}

// 4. x^2 - 2 fixed set {-1, 2}; S fixed set = sampled [0, 2].
Outcome criterion_4() {
  Outcome o;
  const CatalogInstance q = lookup("intro_quadratic");
  const SampleSet qs = catalog_samples(q);
  const SampleSet fq = fixed_set(q.space, q.map, qs);
  bool near_m1 = false, near_2 = false;
  for (const auto& s : fq) {
    const double x = s.point.x();
    const bool a = std::fabs(x + 1.0) <= 1e-6, b = std::fabs(x - 2.0) <= 1e-6;
    near_m1 |= a;
    near_2 |= b;
    o.require(a || b, "spurious fixed point " + fmt(x));
  }
  o.require(near_m1 && near_2, "missing -1 or 2");

  const CatalogInstance S = lookup("intro_S");
  const SampleSet ss = catalog_samples(S);
  const SampleSet fs = fixed_set(S.space, S.map, ss);
  std::vector<Point> want;
  for (const auto& s : ss)
    if (s.point.x() >= 0.0 && s.point.x() <= 2.0) want.push_back(s.point);
  std::vector<Point> got;
  for (const auto& s : fs) got.push_back(s.point);
  o.require(got == want, "S fixed set has " + std::to_string(got.size()) + " points, sampled [0,2] has " +
                             std::to_string(want.size()));
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(fq.size()) + " fixed points of x^2-2, " +
              std::to_string(got.size()) + " fixed samples of S";
  return o;
}

// 5. Common fixed disc of (T1, T4) with zeta6 at x0 = 0.
Outcome criterion_5() {
  Outcome o;
  const CatalogInstance t1 = lookup("T1");
  const CatalogInstance t4 = lookup("T4");
  const SampleSet samples = catalog_samples(t1).merged(catalog_samples(t4).samples());
  const auto rep = verify_theorem4(t1.space, t1.map, t4.map, Point::scalar(0.0), registry_zeta("zeta6"), samples);
  o.require(std::fabs(rep.numbers.mu->value - 1.0) <= 1e-3, "mu " + fmt(rep.numbers.mu->value));
  o.require(rep.conclusion.status == Status::pass, "conclusion " + to_string(rep.conclusion.status));
  // Coincidence set as stated: the sampled [-3, 3].
  const SampleSet co = coincidence_set(t1.space, t1.map, t4.map, samples);
  std::vector<Point> want, got;
  for (const auto& s : samples)
    if (s.point.x() >= -3.0 && s.point.x() <= 3.0) want.push_back(s.point);
  for (const auto& s : co) got.push_back(s.point);
  double lo = got.empty() ? NAN : got.front().x(), hi = got.empty() ? NAN : got.back().x();
  o.require(got == want, "coincidence set spans [" + fmt(lo) + ", " + fmt(hi) + "] (" + std::to_string(got.size()) +
                             " samples), sampled [-3,3] has " + std::to_string(want.size()));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("mu = ") + fmt(rep.numbers.mu->value) + ", verdict " +
              to_string(rep.verdict);
  return o;
}

// 6. Axiom suite on the registry instances and the negative control.
Outcome criterion_6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SimulationFunction> zetas;
  for (double l : {0.0, 0.5, 0.75, 0.99}) zetas.push_back(SimulationFunction::linear(l, "zeta1(" + fmt(l) + ")"));
  zetas.push_back(SimulationFunction::phi_subtract(AuxFunction::parse("s/(s+1)", Regularity::lower_semicontinuous)));
  zetas.push_back(SimulationFunction::phi_multiply(AuxFunction::constant(0.5)));
  zetas.push_back(SimulationFunction::eta_bound(AuxFunction::parse("t/2", Regularity::upper_semicontinuous)));
  zetas.push_back(SimulationFunction::integral_phi(AuxFunction::constant(2.0)));
  zetas.push_back(registry_zeta("zeta6"));
  zetas.push_back(registry_zeta("zeta7"));
  for (const auto& z : zetas) {
    const auto suite = check_axioms(z);
    for (const auto* a : {&suite.axiom_1, &suite.axiom_2, &suite.axiom_3})
      o.require(a->status == Status::pass, z.name() + " " + a->axiom + " " + to_string(a->status));
  }
  const auto control = check_axiom_2(SimulationFunction::custom("s - t"));
  o.require(control.status == Status::fail, "s - t axiom_2 " + to_string(control.status));
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(zetas.size()) + " functions pass, s - t fails axiom_2, " +
              fmt(elapsed) + " s";
  return o;
}

// 7. Random finite spaces: library predicates against a brute-force oracle.
namespace oracle {

using Matrix = MetricSpace::Matrix;

Matrix random_metric(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> w(1, 9);
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = w(rng);
  // Shortest-path closure gives the triangle inequality exactly (integers).
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

bool zc(const Matrix& d, const std::vector<std::size_t>& T, std::size_t x0, double lambda) {
  for (std::size_t x = 0; x < d.size(); ++x) {
    const double t = d[T[x]][x];
    if (t > 0 && lambda * d[T[x]][x0] - t < 0) return false;
  }
  return true;
}

bool z_contraction(const Matrix& d, const std::vector<std::size_t>& T, double lambda) {
  for (std::size_t x = 0; x < d.size(); ++x)
    for (std::size_t y = x + 1; y < d.size(); ++y)
      if (lambda * d[x][y] - d[T[x]][T[y]] < 0) return false;
  return true;
}

bool necessary(const Matrix& d, const std::vector<std::size_t>& T, std::size_t x0) {
  for (std::size_t x = 0; x < d.size(); ++x)
    if (d[T[x]][x0] > 0 && !(d[T[x]][x] < d[T[x]][x0])) return false;
  return true;
}

double mstar(const Matrix& d, const std::vector<std::size_t>& T, std::size_t x, std::size_t y) {
  return std::max({d[x][y], d[x][T[x]], d[y][T[y]], (d[x][T[y]] + d[y][T[x]]) / 2.0});
}

bool ciric(const Matrix& d, const std::vector<std::size_t>& T, std::size_t x0, double lambda) {
  for (std::size_t x = 0; x < d.size(); ++x) {
    const double t = d[T[x]][x];
    if (t > 0 && lambda * mstar(d, T, x, x0) - t < 0) return false;
  }
  return true;
}

bool pair(const Matrix& d, const std::vector<std::size_t>& T, const std::vector<std::size_t>& S, std::size_t x0,
          double lambda) {
  for (std::size_t x = 0; x < d.size(); ++x) {
    const double t = d[T[x]][S[x]];
    if (!(t > 0)) continue;
    const double m = std::max({d[T[x]][S[x0]], d[T[x]][S[x]], d[T[x0]][S[x0]], (d[T[x]][S[x0]] + d[T[x0]][S[x]]) / 2.0});
    if (lambda * m - t < 0) return false;
  }
  return true;
}

double rho(const Matrix& d, const std::vector<std::size_t>& T) {
  double r = kInfinity;
  for (std::size_t x = 0; x < d.size(); ++x)
    if (d[x][T[x]] > 0) r = std::min(r, d[x][T[x]]);
  return r;
}

}  // namespace oracle

Outcome criterion_7() {
  Outcome o;
  std::mt19937_64 rng(kDefaultSeed);
  std::size_t refutations = 0, mismatches = 0, runs = 0;
  std::string first_mismatch;
  auto mismatch = [&](bool lib, bool ref, const std::string& what, std::size_t trial) {
    if (lib == ref) return;
    ++mismatches;
    if (first_mismatch.empty()) first_mismatch = what + " in trial " + std::to_string(trial);
  };
  for (std::size_t trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    const auto d = oracle::random_metric(rng, n);
    const MetricSpace space = MetricSpace::finite_table(d);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> T(n), S(n);
    // Half of the maps fix a random subset, so fixed discs actually occur.
    const bool mostly_fixed = trial % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      T[i] = mostly_fixed && std::bernoulli_distribution(0.6)(rng) ? i : pick(rng);
      S[i] = std::bernoulli_distribution(0.5)(rng) ? T[i] : pick(rng);
    }
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const std::size_t x0 = pick(rng);
    const SelfMap Tm = SelfMap::table(T, "T"), Sm = SelfMap::table(S, "S");
    const auto zeta = SimulationFunction::linear(lambda);
    const SampleSet samples = enumerate_samples(space);
    const Point p0 = Point::index(x0);

    mismatch(is_zc_contraction(space, Tm, p0, zeta, samples).holds(), oracle::zc(d, T, x0, lambda), "zc", trial);
    mismatch(is_z_contraction(space, Tm, zeta, samples).holds(), oracle::z_contraction(d, T, lambda), "z", trial);
    mismatch(check_necessary_inequality(space, Tm, p0, samples).holds(), oracle::necessary(d, T, x0), "necessary",
             trial);
    mismatch(is_ciric_zc_contraction(space, Tm, p0, zeta, samples).holds(), oracle::ciric(d, T, x0, lambda), "ciric",
             trial);
    mismatch(pair_condition(space, Tm, Sm, p0, zeta, samples).holds(), oracle::pair(d, T, S, x0, lambda), "pair",
             trial);
    const double r_lib = rho(space, Tm, samples).value, r_ref = oracle::rho(d, T);
    mismatch(r_lib == r_ref, true, "rho", trial);

    const auto rep = verify_theorem1(space, Tm, p0, zeta, samples);
    ++runs;
    if (rep.verdict == Verdict::refutation_candidate) ++refutations;
    // Oracle for the whole theorem: hypotheses by brute force, conclusion on D(x0, rho).
    bool h2 = true, concl = true;
    for (std::size_t x = 0; x < n; ++x) {
      if (std::isfinite(r_ref) && d[x][x0] > r_ref) continue;
      if (d[x][T[x]] > 0) concl = false;
      if (x != x0 && !(d[T[x]][x0] > 0 && d[T[x]][x0] <= r_ref)) h2 = false;
    }
    const bool hyps = oracle::zc(d, T, x0, lambda) && h2;
    const Verdict ref = !hyps ? Verdict::hypothesis_failed : concl ? Verdict::consistent : Verdict::refutation_candidate;
    mismatch(rep.verdict == ref, true, "thm1 verdict", trial);
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches, first: " + first_mismatch);
  o.require(refutations == 0, std::to_string(refutations) + " REFUTATION_CANDIDATE verdicts");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(runs) + " random spaces, 7 predicates each";
  return o;
}

// 8. ELU maximal fixed disc about 2; SReLU fixed set.
Outcome criterion_8() {
  Outcome o;
  const CatalogInstance elu = lookup("ELU", {{"alpha", 1.0}});
  const auto m = maximal_fixed_radius(elu.space, elu.map, Point::scalar(2.0), catalog_samples(elu));
  o.require(std::fabs(m.radius - 2.0) <= 1e-3, "ELU radius " + fmt(m.radius));

  const CatalogInstance sr = lookup("SReLU", {{"t_l", -1.0}, {"t_r", 1.0}, {"a_l", 0.5}, {"a_r", 0.5}});
  const SampleSet ss = catalog_samples(sr);
  std::vector<Point> want, got;
  for (const auto& s : ss)
    if (s.point.x() >= -1.0 && s.point.x() <= 1.0) want.push_back(s.point);
  for (const auto& s : fixed_set(sr.space, sr.map, ss)) got.push_back(s.point);
  o.require(got == want, "SReLU fixed set has " + std::to_string(got.size()) + " points, sampled [-1,1] has " +
                             std::to_string(want.size()));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("ELU radius ") + fmt(m.radius) + ", SReLU fixed samples " +
              std::to_string(got.size());
  return o;
}

// 9. Determinism of the machine-readable report for criterion 1.
Outcome criterion_9() {
  Outcome o;
  const char* text =
      "[map]\ncatalog = T1\n\n[simulation]\nzeta = zeta6\n\n[analysis]\ntheorem = thm1\nx0 = 0\nseed = 7\n";
  const std::string a = to_json_string(run(parse_config(text)).report);
  const std::string b = to_json_string(run(parse_config(text)).report);
  o.require(a == b, "reports differ");
  const CatalogInstance t1 = lookup("T1");
  const auto direct = [&] {
    auto rep = verify_theorem1(t1.space, t1.map, Point::scalar(0.0), registry_zeta("zeta6"), t1.samples());
    rep.samples.seed = 7;
    return to_json_string(rep);
  };
  o.require(direct() == direct(), "direct reports differ");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(a.size()) + " bytes, identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 T1 fixed disc D(0,1)", criterion_1},     {"2 T2 converse failure", criterion_2},
      {"3 T3 radius independence", criterion_3},   {"4 introductory fixed sets", criterion_4},
      {"5 T1/T4 common fixed disc", criterion_5},  {"6 simulation-function axioms", criterion_6},
      {"7 finite-space oracle", criterion_7},      {"8 ELU / SReLU", criterion_8},
      {"9 report determinism", criterion_9},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
