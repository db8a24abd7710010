// Displacement radii and the contraction predicates, decided over a sample
// set with witnesses.
#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdlab/metric.hpp"
#include "fdlab/self_map.hpp"
#include "fdlab/simulation.hpp"
#include "fdlab/status.hpp"

namespace fdlab {

struct Witness {
  Point x;
  std::optional<Point> y;
  double lhs = 0.0;  // the quantity that violated the check
  double rhs = 0.0;  // the bound it was compared against
  std::string note;
};

struct CheckResult {
  std::string name;
  Status status = Status::vacuous;
  std::size_t checked = 0;     // samples (or pairs) examined
  std::size_t premises = 0;    // of which the premise held
  std::size_t violations = 0;
  std::vector<Witness> witnesses;

  bool holds() const { return fdlab::holds(status); }
};

/// Collects violations. Past the cap it keeps the first ceil(cap/2) and the
/// last floor(cap/2) in sample order, so both ends of a long run of
/// violations are represented.
class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, std::size_t cap) : cap_(cap) { result_.name = std::move(name); }

  void examine() { ++result_.checked; }
  void premise() { ++result_.premises; }
  void violate(Witness w) {
    ++result_.violations;
    const std::size_t head_cap = (cap_ + 1) / 2;
    if (result_.witnesses.size() < head_cap) {
      result_.witnesses.push_back(std::move(w));
      return;
    }
    if (cap_ - head_cap == 0) return;
    tail_.push_back(std::move(w));
    if (tail_.size() > cap_ - head_cap) tail_.pop_front();
  }
  /// Marks the check undetermined unless something already failed.
  void undetermined() { undetermined_ = true; }

  CheckResult finish() {
    for (auto& w : tail_) result_.witnesses.push_back(std::move(w));
    tail_.clear();
    if (result_.violations > 0) {
      result_.status = Status::fail;
    } else if (undetermined_) {
      result_.status = Status::undetermined;
    } else {
      result_.status = result_.premises == 0 ? Status::vacuous : Status::pass;
    }
    return std::move(result_);
  }

 private:
  std::size_t cap_;
  CheckResult result_;
  std::deque<Witness> tail_;
  bool undetermined_ = false;
};

// ---------------------------------------------------------------------------
// Radii

/// Estimate of an infimum over the displaced sample points.
/// An empty displaced set gives value = lower = +inf (unbounded).
struct RadiusEstimate {
  double value = kInfinity;
  double lower = kInfinity;  // conservative: value - grid_step * slope_cap, >= 0
  bool attained = false;
  std::optional<Point> argmin;
  std::size_t displaced = 0;

  bool unbounded() const { return std::isinf(value); }
};

namespace detail {

// Golden-section search of g on [lo, hi]; returns (best x, best g).
template <typename G>
std::pair<double, double> golden_section(const G& g, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c), gd = g(d);
  double best_x = gc <= gd ? c : d;
  double best = std::min(gc, gd);
  while (b - a > tol) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
      if (gc < best) {
        best = gc;
        best_x = c;
      }
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
      if (gd < best) {
        best = gd;
        best_x = d;
      }
    }
  }
  return {best_x, best};
}

}  // namespace detail

/// Infimum of gap(x) over samples with gap(x) > eps_fix. On 1-D interval
/// spaces the minimizing sample is refined by golden-section search between
/// its neighbouring samples (which bracket one piece, since breakpoints are
/// sampled), treating non-displaced points as +inf. The infimum counts as not
/// attained when the refined minimizer runs into a non-displaced bracket end.
inline RadiusEstimate infimum_radius(const MetricSpace& space, const SampleSet& samples,
                                     const std::function<double(const Point&)>& gap, const Tolerances& tol) {
  RadiusEstimate est;
  std::size_t best_i = samples.size();
  std::vector<double> gaps(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    gaps[i] = gap(samples.point(i));
    if (gaps[i] > tol.eps_fix) {
      ++est.displaced;
      if (best_i == samples.size() || gaps[i] < gaps[best_i]) best_i = i;
    }
  }
  if (best_i == samples.size()) return est;

  est.value = gaps[best_i];
  est.argmin = samples.point(best_i);
  est.attained = true;

  if (space.kind() == SpaceKind::interval) {
    auto g = [&](double x) {
      const double v = gap(Point::scalar(x));
      return v > tol.eps_fix ? v : kInfinity;
    };
    const std::size_t lo_i = best_i == 0 ? best_i : best_i - 1;
    const std::size_t hi_i = best_i + 1 == samples.size() ? best_i : best_i + 1;
    const double lo = samples.point(lo_i).x();
    const double hi = samples.point(hi_i).x();
    if (hi > lo) {
      const auto [x, v] = detail::golden_section(g, lo, hi, tol.tau_rho);
      if (v < est.value) {
        est.value = v;
        est.argmin = Point::scalar(x);
      }
      const double xm = est.argmin->x();
      const bool near_lo = gaps[lo_i] <= tol.eps_fix && xm - lo <= 2.0 * tol.tau_rho;
      const bool near_hi = gaps[hi_i] <= tol.eps_fix && hi - xm <= 2.0 * tol.tau_rho;
      est.attained = !(near_lo || near_hi);
    }
  }
  est.lower = std::max(0.0, est.value - space.grid_step() * tol.slope_cap);
  return est;
}

/// inf { d(x, Tx) : Tx != x } over the samples.
inline RadiusEstimate rho(const MetricSpace& space, const SelfMap& T, const SampleSet& samples,
                          const Tolerances& tol = {}) {
  return infimum_radius(space, samples, [&](const Point& x) { return space.distance(x, T(x)); }, tol);
}

/// inf { d(Tx, Sx) : Tx != Sx } over the samples.
inline RadiusEstimate r_pair(const MetricSpace& space, const SelfMap& T, const SelfMap& S, const SampleSet& samples,
                             const Tolerances& tol = {}) {
  return infimum_radius(space, samples, [&](const Point& x) { return space.distance(T(x), S(x)); }, tol);
}

/// min{rho, r}, taken separately for the estimate and the conservative bound;
/// min(inf, v) = v.
inline RadiusEstimate mu(const RadiusEstimate& rho_est, const RadiusEstimate& r_est) {
  const RadiusEstimate& smaller = rho_est.value <= r_est.value ? rho_est : r_est;
  RadiusEstimate out = smaller;
  out.value = std::min(rho_est.value, r_est.value);
  out.lower = std::min(rho_est.lower, r_est.lower);
  out.displaced = rho_est.displaced + r_est.displaced;
  return out;
}

// ---------------------------------------------------------------------------
// The m* maxima

/// Which term of the four-term maximum attains it (first one on ties).
enum class MaxArm { distance, displacement_x, displacement_y, half_sum };

inline std::string to_string(MaxArm a) {
  switch (a) {
    case MaxArm::distance:
      return "d(x,y)";
    case MaxArm::displacement_x:
      return "d(x,Tx)";
    case MaxArm::displacement_y:
      return "d(y,Ty)";
    case MaxArm::half_sum:
      return "(d(x,Ty)+d(y,Tx))/2";
  }
  return "?";
}

struct MaxValue {
  double value = 0.0;
  MaxArm arm = MaxArm::distance;
};

inline MaxValue max_of_four(double a, double b, double c, double d) {
  MaxValue m{a, MaxArm::distance};
  if (b > m.value) m = {b, MaxArm::displacement_x};
  if (c > m.value) m = {c, MaxArm::displacement_y};
  if (d > m.value) m = {d, MaxArm::half_sum};
  return m;
}

/// max{d(x,y), d(x,Tx), d(y,Ty), (d(x,Ty) + d(y,Tx))/2} given Tx, Ty.
inline MaxValue m_star_arm(const MetricSpace& sp, const Point& x, const Point& Tx, const Point& y, const Point& Ty) {
  return max_of_four(sp.distance(x, y), sp.distance(x, Tx), sp.distance(y, Ty),
                     (sp.distance(x, Ty) + sp.distance(y, Tx)) / 2.0);
}

inline MaxValue m_star_arm(const MetricSpace& space, const SelfMap& T, const Point& x, const Point& y) {
  return m_star_arm(space, x, T(x), y, T(y));
}

inline double m_star(const MetricSpace& space, const SelfMap& T, const Point& x, const Point& y) {
  return m_star_arm(space, T, x, y).value;
}

/// max{d(Tx,Sy), d(Tx,Sx), d(Ty,Sy), (d(Tx,Sy) + d(Ty,Sx))/2} given the images.
inline double m_star_pair(const MetricSpace& sp, const Point& Tx, const Point& Sx, const Point& Ty, const Point& Sy) {
  const double txsy = sp.distance(Tx, Sy);
  return std::max({txsy, sp.distance(Tx, Sx), sp.distance(Ty, Sy), (txsy + sp.distance(Ty, Sx)) / 2.0});
}

inline double m_star_pair(const MetricSpace& space, const SelfMap& T, const SelfMap& S, const Point& x,
                          const Point& y) {
  return m_star_pair(space, T(x), S(x), T(y), S(y));
}

// ---------------------------------------------------------------------------
// Predicates

/// zeta(d(Tx,Ty), d(x,y)) >= 0 for all sampled pairs x < y (x = y reduces to
/// zeta(0,0) = 0). A single-point sample set is vacuous.
inline CheckResult is_z_contraction(const MetricSpace& space, const SelfMap& T, const SimulationFunction& zeta,
                                    const SampleSet& samples, const Tolerances& tol = {}) {
  CheckAccumulator acc("z_contraction", tol.witness_cap);
  const auto img = images(T, samples);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      acc.examine();
      acc.premise();
      const double t = space.distance(img[i], img[j]);
      const double s = space.distance(samples.point(i), samples.point(j));
      const double z = zeta(t, s);
      if (!(z >= 0.0)) acc.violate({samples.point(i), samples.point(j), z, 0.0, "zeta(d(Tx,Ty),d(x,y)) < 0"});
    }
  }
  return acc.finish();
}

/// d(Tx,x) > eps_fix  =>  zeta(d(Tx,x), d(Tx,x0)) >= 0.
inline CheckResult is_zc_contraction(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                     const SimulationFunction& zeta, const SampleSet& samples,
                                     const Tolerances& tol = {}) {
  space.require_member(x0);
  CheckAccumulator acc("zc_contraction", tol.witness_cap);
  for (const auto& smp : samples) {
    acc.examine();
    const Point Tx = T(smp.point);
    const double t = space.distance(Tx, smp.point);
    if (!(t > tol.eps_fix)) continue;
    acc.premise();
    const double z = zeta(t, space.distance(Tx, x0));
    if (!(z >= 0.0)) acc.violate({smp.point, std::nullopt, z, 0.0, "zeta(d(Tx,x),d(Tx,x0)) < 0"});
  }
  return acc.finish();
}

/// Tx != x0  =>  d(Tx,x) < d(Tx,x0). Necessary for every Z_c-contraction
/// centred at x0, whatever zeta is; a failure rules them all out.
inline CheckResult check_necessary_inequality(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                              const SampleSet& samples, const Tolerances& tol = {}) {
  space.require_member(x0);
  CheckAccumulator acc("necessary_inequality", tol.witness_cap);
  for (const auto& smp : samples) {
    acc.examine();
    const Point Tx = T(smp.point);
    const double rhs = space.distance(Tx, x0);
    if (!(rhs > tol.eps_fix)) continue;
    acc.premise();
    const double lhs = space.distance(Tx, smp.point);
    if (!(lhs < rhs)) acc.violate({smp.point, std::nullopt, lhs, rhs, "d(Tx,x) >= d(Tx,x0)"});
  }
  return acc.finish();
}

/// alpha(x0,x) >= 1  =>  alpha(x0,Tx) >= 1. Throws DomainError on a
/// nonpositive alpha value.
inline CheckResult is_alpha_admissible(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                       const AlphaFunction& alpha, const SampleSet& samples,
                                       const Tolerances& tol = {}) {
  space.require_member(x0);
  CheckAccumulator acc("alpha_admissible", tol.witness_cap);
  for (const auto& smp : samples) {
    acc.examine();
    if (!(alpha(x0, smp.point) >= 1.0)) continue;
    acc.premise();
    const double a = alpha(x0, T(smp.point));
    if (!(a >= 1.0)) acc.violate({smp.point, std::nullopt, a, 1.0, "alpha(x0,Tx) < 1"});
  }
  return acc.finish();
}

/// d(Tx,x) > eps_fix  =>  zeta(alpha(x0,Tx) d(x,Tx), d(Tx,x0)) >= 0.
inline CheckResult is_alpha_zc_contraction(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                           const AlphaFunction& alpha, const SimulationFunction& zeta,
                                           const SampleSet& samples, const Tolerances& tol = {}) {
  space.require_member(x0);
  CheckAccumulator acc("alpha_zc_contraction", tol.witness_cap);
  for (const auto& smp : samples) {
    acc.examine();
    const Point Tx = T(smp.point);
    const double d = space.distance(smp.point, Tx);
    if (!(d > tol.eps_fix)) continue;
    acc.premise();
    const double z = zeta(alpha(x0, Tx) * d, space.distance(Tx, x0));
    if (!(z >= 0.0)) acc.violate({smp.point, std::nullopt, z, 0.0, "zeta(alpha(x0,Tx)d(x,Tx),d(Tx,x0)) < 0"});
  }
  return acc.finish();
}

/// d(Tx,x) > eps_fix  =>  zeta(d(Tx,x), m*(x,x0)) >= 0. Witness notes name
/// the arm attaining m*.
inline CheckResult is_ciric_zc_contraction(const MetricSpace& space, const SelfMap& T, const Point& x0,
                                           const SimulationFunction& zeta, const SampleSet& samples,
                                           const Tolerances& tol = {}) {
  space.require_member(x0);
  CheckAccumulator acc("ciric_zc_contraction", tol.witness_cap);
  const Point Tx0 = T(x0);
  for (const auto& smp : samples) {
    acc.examine();
    const Point Tx = T(smp.point);
    const double t = space.distance(Tx, smp.point);
    if (!(t > tol.eps_fix)) continue;
    acc.premise();
    const MaxValue m = m_star_arm(space, smp.point, Tx, x0, Tx0);
    const double z = zeta(t, m.value);
    if (!(z >= 0.0)) acc.violate({smp.point, std::nullopt, z, m.value, "max arm " + to_string(m.arm)});
  }
  return acc.finish();
}

/// d(Tx,Sx) > eps_fix  =>  zeta(d(Tx,Sx), m*_{S,T}(x,x0)) >= 0.
inline CheckResult pair_condition(const MetricSpace& space, const SelfMap& T, const SelfMap& S, const Point& x0,
                                  const SimulationFunction& zeta, const SampleSet& samples,
                                  const Tolerances& tol = {}) {
  space.require_member(x0);
  CheckAccumulator acc("pair_condition", tol.witness_cap);
  const Point Tx0 = T(x0);
  const Point Sx0 = S(x0);
  for (const auto& smp : samples) {
    acc.examine();
    const Point Tx = T(smp.point);
    const Point Sx = S(smp.point);
    const double t = space.distance(Tx, Sx);
    if (!(t > tol.eps_fix)) continue;
    acc.premise();
    const double m = m_star_pair(space, Tx, Sx, Tx0, Sx0);
    const double z = zeta(t, m);
    if (!(z >= 0.0)) acc.violate({smp.point, std::nullopt, z, m, "zeta(d(Tx,Sx),m*(x,x0)) < 0"});
  }
  return acc.finish();
}

}  // namespace fdlab
