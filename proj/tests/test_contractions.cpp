#include <algorithm>
#include <cmath>

#include "catch_amalgamated.hpp"
#include "fdlab/contractions.hpp"

using namespace fdlab;
using Catch::Matchers::WithinAbs;

namespace {

SelfMap t1() {
  return SelfMap::scalar("T1", [](double x) { return std::fabs(x) <= 1.0 ? x : 2.0 * x; }, {-1.0, 1.0});
}
SelfMap t2() {  // x0 = 1, mu = 2
  return SelfMap::scalar("T2", [](double x) { return std::fabs(x - 1.0) <= 2.0 ? x : 2.0; }, {-1.0, 3.0});
}
SelfMap t3() {
  return SelfMap::scalar("T3", [](double x) { return std::fabs(x) <= 3.0 ? x : x + 1.0; }, {-3.0, 3.0});
}
SelfMap t4() {
  return SelfMap::scalar("T4", [](double x) { return std::fabs(x) <= 3.0 ? x : 3.0 * x; }, {-3.0, 3.0});
}

const MetricSpace& line() {
  static const MetricSpace s = MetricSpace::interval(-50.0, 50.0, 10001);
  return s;
}

SampleSet samples_for(const std::vector<double>& bps) { return enumerate_samples(line(), {}, bps); }

SampleSet points(std::initializer_list<double> xs) {
  std::vector<Sample> v;
  for (double x : xs) v.push_back({Point::scalar(x), kGrid});
  return SampleSet(std::move(v));
}

bool has_witness_at(const CheckResult& r, double x) {
  return std::any_of(r.witnesses.begin(), r.witnesses.end(), [&](const Witness& w) { return w.x.x() == x; });
}

AlphaFunction alpha_indicator() {
  PiecewiseExpression pw(Var::y);
  pw.add_piece("[-1, 1] : 2");
  pw.add_piece("otherwise : 0.5");
  return AlphaFunction::expression(pw);
}

const Point origin = Point::scalar(0.0);

}  // namespace

TEST_CASE("rho", "[contractions]") {
  SECTION("T1: infimum 1 over the open set |x| > 1") {
    const auto r = rho(line(), t1(), samples_for({-1.0, 1.0}));
    CHECK_THAT(r.value, WithinAbs(1.0, 1e-6));
    CHECK(r.lower <= r.value);
    CHECK(r.lower >= 0.0);
    CHECK_FALSE(r.attained);
    CHECK(r.displaced > 0);
  }
  SECTION("T3: d(x, Tx) = 1 on the displaced set, attained") {
    const auto r = rho(line(), t3(), samples_for({-3.0, 3.0}));
    CHECK_THAT(r.value, WithinAbs(1.0, 1e-12));
    CHECK(r.attained);
  }
  SECTION("identity: sentinel") {
    const auto r = rho(line(), SelfMap::identity(), samples_for({}));
    CHECK(std::isinf(r.value));
    CHECK(std::isinf(r.lower));
    CHECK_FALSE(r.attained);
    CHECK(r.displaced == 0);
  }
  SECTION("rho ignores any center") {
    // No x0 parameter exists; computing twice on the same inputs is identical.
    const auto a = rho(line(), t3(), samples_for({-3.0, 3.0}));
    const auto b = rho(line(), t3(), samples_for({-3.0, 3.0}));
    CHECK(a.value == b.value);
  }
}

TEST_CASE("r_pair and mu", "[contractions]") {
  const auto s = samples_for({-3.0, -1.0, 1.0, 3.0});
  CHECK_THAT(r_pair(line(), t1(), t4(), s).value, WithinAbs(1.0, 1e-6));
  CHECK(std::isinf(r_pair(line(), t1(), t1(), s).value));
  CHECK_THAT(r_pair(line(), t1(), SelfMap::identity(), s).value, WithinAbs(1.0, 1e-6));

  RadiusEstimate one, zero, five, inf, two;
  one.value = one.lower = 1.0;
  zero.value = zero.lower = 0.0;
  five.value = five.lower = 5.0;
  two.value = two.lower = 2.0;
  CHECK(mu(one, one).value == 1.0);
  CHECK(mu(zero, five).value == 0.0);
  CHECK(mu(inf, two).value == 2.0);
  CHECK(mu(inf, two).lower == 2.0);
  CHECK(std::isinf(mu(inf, inf).value));
}

TEST_CASE("m* maxima", "[contractions]") {
  const auto x2 = Point::scalar(2.0);
  const auto m = m_star_arm(line(), t1(), x2, origin);
  CHECK(m.value == 3.0);
  CHECK(m.arm == MaxArm::half_sum);
  CHECK(m_star(line(), t1(), origin, origin) == 0.0);
  const auto x5 = Point::scalar(5.0);
  CHECK(m_star(line(), t1(), x5, x5) == 5.0);  // collapses to d(x, Tx)

  CHECK(m_star_pair(line(), t1(), t4(), x2, origin) == 4.0);
  CHECK(m_star_pair(line(), t1(), t4(), origin, origin) == 0.0);
  const auto x4 = Point::scalar(4.0);
  CHECK(m_star_pair(line(), t1(), t4(), x4, x4) == 4.0);  // d(8, 12)
}

TEST_CASE("z-contraction", "[contractions]") {
  const auto z1 = SimulationFunction::linear(0.75);
  const auto s = points({-2.0, -1.0, 0.0, 1.5, 3.0});
  const auto id = is_z_contraction(line(), SelfMap::identity(), z1, s);
  CHECK(id.status == Status::fail);
  CHECK_FALSE(id.witnesses.empty());

  const auto constant = SelfMap::scalar("c", [](double) { return 7.0; });
  CHECK(is_z_contraction(line(), constant, z1, s).status == Status::pass);

  const auto single = MetricSpace::finite_table({{0.0}});
  const auto r = is_z_contraction(single, SelfMap::table({0}), z1, enumerate_samples(single));
  CHECK(r.holds());
}

TEST_CASE("Zc-contraction", "[contractions]") {
  const auto s1 = samples_for({-1.0, 1.0});
  const auto zeta6 = SimulationFunction::linear(0.75, "zeta6");
  const auto r = is_zc_contraction(line(), t1(), origin, zeta6, s1);
  CHECK(r.status == Status::pass);
  CHECK(r.violations == 0);
  CHECK(r.premises > 0);

  const auto s2 = samples_for({-1.0, 3.0});
  const auto x0 = Point::scalar(1.0);
  for (const auto& z : default_registry()) {
    INFO(z.name());
    CHECK(is_zc_contraction(line(), t2(), x0, z, s2).status == Status::fail);
  }

  const auto v = is_zc_contraction(line(), SelfMap::identity(), origin, zeta6, s1);
  CHECK(v.status == Status::vacuous);
  CHECK(v.holds());
}

TEST_CASE("necessary inequality", "[contractions]") {
  const auto x0 = Point::scalar(1.0);
  const auto one = check_necessary_inequality(line(), t2(), x0, points({4.0}));
  REQUIRE(one.status == Status::fail);
  REQUIRE(one.witnesses.size() == 1);
  CHECK(one.witnesses[0].x.x() == 4.0);
  CHECK(one.witnesses[0].lhs == 2.0);
  CHECK(one.witnesses[0].rhs == 1.0);

  CHECK(check_necessary_inequality(line(), t1(), origin, samples_for({-1.0, 1.0})).status == Status::pass);
  CHECK(holds(check_necessary_inequality(line(), SelfMap::identity(), origin, samples_for({})).status));
}

TEST_CASE("witness cap keeps both ends", "[contractions]") {
  const auto x0 = Point::scalar(1.0);
  const auto s = samples_for({-1.0, 3.0});
  const auto r = check_necessary_inequality(line(), t2(), x0, s);
  REQUIRE(r.violations > 100);
  REQUIRE(r.witnesses.size() == 100);
  CHECK(r.witnesses.front().x.x() == -50.0);
  CHECK(r.witnesses.back().x.x() == 50.0);
  // Head and tail each hold 50, in sample order.
  CHECK(r.witnesses[49].x.x() < -1.0);
  CHECK(r.witnesses[50].x.x() > 3.0);
  CHECK(std::is_sorted(r.witnesses.begin(), r.witnesses.end(),
                       [](const Witness& a, const Witness& b) { return a.x.x() < b.x.x(); }));
}

TEST_CASE("alpha admissibility", "[contractions]") {
  const auto s = samples_for({-1.0, 1.0});
  CHECK(holds(is_alpha_admissible(line(), t1(), origin, AlphaFunction::constant(1.0), s).status));
  CHECK(is_alpha_admissible(line(), t1(), origin, alpha_indicator(), s).status == Status::pass);

  const auto dbl = SelfMap::scalar("2x", [](double x) { return 2.0 * x; });
  const auto r = is_alpha_admissible(line(), dbl, origin, alpha_indicator(), s);
  CHECK(r.status == Status::fail);
  CHECK(has_witness_at(r, 1.0));

  CHECK_THROWS_AS(is_alpha_admissible(line(), t1(), origin, AlphaFunction::constant(-1.0), s), DomainError);
}

TEST_CASE("alpha-Zc-contraction", "[contractions]") {
  const auto s = samples_for({-1.0, 1.0});
  const auto zeta6 = SimulationFunction::linear(0.75, "zeta6");
  const auto a1 = is_alpha_zc_contraction(line(), t1(), origin, AlphaFunction::constant(1.0), zeta6, s);
  const auto zc = is_zc_contraction(line(), t1(), origin, zeta6, s);
  CHECK(a1.status == zc.status);
  CHECK(a1.violations == zc.violations);
  CHECK(a1.premises == zc.premises);

  CHECK(is_alpha_zc_contraction(line(), SelfMap::identity(), origin, AlphaFunction::constant(3.0), zeta6, s)
            .status == Status::vacuous);

  const auto a2 = is_alpha_zc_contraction(line(), t1(), origin, AlphaFunction::constant(2.0), zeta6, points({2.0}));
  CHECK(a2.status == Status::fail);
  CHECK(has_witness_at(a2, 2.0));
}

TEST_CASE("Ciric-type Zc-contraction", "[contractions]") {
  const auto zeta6 = SimulationFunction::linear(0.75, "zeta6");
  CHECK(is_ciric_zc_contraction(line(), t1(), origin, zeta6, samples_for({-1.0, 1.0})).status == Status::pass);
  CHECK(is_ciric_zc_contraction(line(), SelfMap::identity(), origin, zeta6, samples_for({})).status ==
        Status::vacuous);

  // Tx0 != x0: at x = x0 the max collapses to d(x0, Tx0) and strictness fails.
  const auto shift = SelfMap::scalar("shift", [](double x) { return x + 1.0; });
  const auto r = is_ciric_zc_contraction(line(), shift, origin, zeta6, points({0.0}));
  CHECK(r.status == Status::fail);
  CHECK(has_witness_at(r, 0.0));
}

TEST_CASE("pair condition", "[contractions]") {
  const auto zeta6 = SimulationFunction::linear(0.75, "zeta6");
  const auto s = samples_for({-3.0, -1.0, 1.0, 3.0});
  CHECK(pair_condition(line(), t1(), t4(), origin, zeta6, s).status == Status::pass);
  CHECK(pair_condition(line(), t1(), t4(), origin, zeta6, points({2.0})).status == Status::pass);
  CHECK(pair_condition(line(), t1(), t1(), origin, zeta6, s).status == Status::vacuous);
}

TEST_CASE("checks on finite tables", "[contractions]") {
  const auto sp = MetricSpace::finite_table({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  const auto T = SelfMap::table({0, 0, 1});
  const auto s = enumerate_samples(sp);
  const auto r = rho(sp, T, s);
  CHECK(r.value == 1.0);
  CHECK(r.attained);
  // T1 = x0, so d(T1, x0) = 0 and no zeta can be nonnegative there.
  CHECK(is_zc_contraction(sp, T, Point::index(0), SimulationFunction::linear(0.5), s).status == Status::fail);
  CHECK_THROWS_AS(is_zc_contraction(sp, T, Point::index(3), SimulationFunction::linear(0.5), s), DomainError);
}
