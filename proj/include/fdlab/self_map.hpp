// Self-maps T : X -> X and the auxiliary alpha : X x X -> (0, inf).
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdlab/expression.hpp"
#include "fdlab/metric.hpp"

namespace fdlab {

enum class MapKind { catalog, piecewise, table, callable };

class SelfMap {
 public:
  using ScalarFn = std::function<double(double)>;
  using PointFn = std::function<Point(const Point&)>;

  /// 1-D map given by a plain function; `breakpoints` are the points where
  /// its definition switches pieces.
  static SelfMap scalar(std::string name, ScalarFn f, std::vector<double> breakpoints = {},
                        MapKind kind = MapKind::catalog) {
    SelfMap m(std::move(name), kind);
    m.scalar_ = std::move(f);
    m.breakpoints_ = std::move(breakpoints);
    return m;
  }

  /// 1-D map from pieces over x; `x0` (if given) is bound for bodies that
  /// reference it.
  static SelfMap piecewise(std::string name, PiecewiseExpression pw, std::optional<double> x0 = std::nullopt) {
    if (pw.empty()) throw DomainError("piecewise map '" + name + "' has no pieces");
    if (pw.condition_var() != Var::x) throw DomainError("piecewise map conditions must test x");
    auto shared = std::make_shared<const PiecewiseExpression>(std::move(pw));
    const bool needs_x0 = shared->uses(Var::x0);
    if (needs_x0 && !x0) throw DomainError("piecewise map '" + name + "' uses x0 but no x0 is set");
    const double bound_x0 = x0.value_or(std::numeric_limits<double>::quiet_NaN());
    auto bps = shared->breakpoints();
    SelfMap m = scalar(
        std::move(name),
        [shared, bound_x0](double x) {
          Env env;
          env.set(Var::x, x).set(Var::x0, bound_x0);
          return shared->evaluate(env);
        },
        std::move(bps), MapKind::piecewise);
    m.pieces_ = shared;
    return m;
  }

  /// Finite map i -> image[i].
  static SelfMap table(std::vector<std::size_t> image, std::string name = "table") {
    SelfMap m(std::move(name), MapKind::table);
    m.table_ = std::move(image);
    return m;
  }

  static SelfMap callable(std::string name, PointFn f) {
    SelfMap m(std::move(name), MapKind::callable);
    m.general_ = std::move(f);
    return m;
  }

  static SelfMap identity() {
    SelfMap m("identity", MapKind::catalog);
    m.general_ = [](const Point& p) { return p; };
    return m;
  }

  Point operator()(const Point& p) const {
    if (scalar_) {
      const double y = scalar_(p.x());
      if (!std::isfinite(y)) throw EvaluationError("map '" + name_ + "' is not finite at x = " + p.to_string());
      return Point::scalar(y);
    }
    if (kind_ == MapKind::table) {
      const std::size_t i = p.index();
      if (i >= table_.size()) throw DomainError("map '" + name_ + "' undefined at index " + std::to_string(i));
      return Point::index(table_[i]);
    }
    return general_(p);
  }

  /// 1-D evaluation; only valid for scalar maps.
  double at(double x) const {
    if (!scalar_) return (*this)(Point::scalar(x)).x();
    return scalar_(x);
  }

  bool is_scalar() const { return static_cast<bool>(scalar_); }
  const std::string& name() const { return name_; }
  MapKind kind() const { return kind_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::size_t>& table_image() const { return table_; }
  const PiecewiseExpression* pieces() const { return pieces_.get(); }

  /// Evaluates the map on every sample and checks the image is a point of
  /// `space`. Throws EvaluationError naming the offending sample.
  void check_total(const MetricSpace& space, const SampleSet& samples) const {
    for (const auto& s : samples) {
      try {
        space.require_member((*this)(s.point));
      } catch (const std::exception& e) {
        throw EvaluationError("map '" + name_ + "' fails at sample " + s.point.to_string() + ": " + e.what());
      }
    }
  }

 private:
  SelfMap(std::string name, MapKind kind) : name_(std::move(name)), kind_(kind) {}

  std::string name_;
  MapKind kind_;
  ScalarFn scalar_;
  PointFn general_;
  std::vector<std::size_t> table_;
  std::vector<double> breakpoints_;
  std::shared_ptr<const PiecewiseExpression> pieces_;
};

/// Images T(x) of every sample, in sample order.
inline std::vector<Point> images(const SelfMap& map, const SampleSet& samples) {
  std::vector<Point> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(map(s.point));
  return out;
}

/// alpha(a, b) > 0. Expressions use x for the first argument and y for the
/// second (1-D spaces only); tables are indexed [a][b].
class AlphaFunction {
 public:
  static AlphaFunction constant(double c) {
    AlphaFunction a;
    a.expr_ = PiecewiseExpression::single(Expression(c), Var::y);
    a.constant_ = c;
    return a;
  }
  static AlphaFunction expression(PiecewiseExpression pw) {
    AlphaFunction a;
    a.expr_ = std::move(pw);
    return a;
  }
  static AlphaFunction expression(std::string_view text) {
    return expression(PiecewiseExpression::single(Expression::parse(text), Var::y));
  }
  static AlphaFunction table(MetricSpace::Matrix m) {
    AlphaFunction a;
    a.table_ = std::move(m);
    a.is_table_ = true;
    return a;
  }
  /// Arbitrary callable; used by tests.
  static AlphaFunction callable(std::function<double(const Point&, const Point&)> f) {
    AlphaFunction a;
    a.fn_ = std::move(f);
    return a;
  }

  /// Throws DomainError when the value is not strictly positive.
  double operator()(const Point& a, const Point& b) const {
    double v = 0.0;
    if (constant_) {
      // Also valid on finite spaces, whose points have no coordinates.
      v = *constant_;
    } else if (fn_) {
      v = fn_(a, b);
    } else if (is_table_) {
      const std::size_t i = a.index(), j = b.index();
      if (i >= table_.size() || j >= table_[i].size()) throw DomainError("alpha table index out of range");
      v = table_[i][j];
    } else {
      Env env;
      env.set(Var::x, a.x()).set(Var::y, b.x()).set(Var::x0, a.x());
      v = expr_.evaluate(env);
    }
    if (!(v > 0.0))
      throw DomainError("alpha(" + a.to_string() + ", " + b.to_string() + ") = " + Expression::format_number(v) +
                        " is not positive");
    return v;
  }

  bool is_table() const { return is_table_; }
  const PiecewiseExpression& pieces() const { return expr_; }
  const MetricSpace::Matrix& table_values() const { return table_; }

 private:
  AlphaFunction() = default;
  PiecewiseExpression expr_{Var::y};
  MetricSpace::Matrix table_;
  bool is_table_ = false;
  std::optional<double> constant_;
  std::function<double(const Point&, const Point&)> fn_;
};

}  // namespace fdlab
