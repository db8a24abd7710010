// Metric spaces, points, discs and sample sets.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fdlab {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Numerical slack used throughout the verifiers.
struct Tolerances {
  double eps_mem = 1e-12;          // closed-disc membership
  double eps_tri = 1e-9;           // triangle inequality checks
  double eps_fix = 1e-9;           // d(x, Tx) <= eps_fix counts as fixed
  double tau_rho = 1e-6;           // 1-D radius refinement
  double slope_cap = 2.0;          // Lipschitz cap for the conservative radius
  double critical_offset = 1e-6;   // breakpoint neighbours probed on each side
  double root_tol = 1e-9;          // bisection width for fixed-point roots
  double jump_tol = 1e-6;          // residual above which a bracketed sign change is a jump
  std::size_t witness_cap = 100;

  bool operator==(const Tolerances&) const = default;
};

class Point {
 public:
  static Point index(std::size_t i) { return Point(i); }
  static Point scalar(double x) { return coords({x}); }
  static Point coords(std::vector<double> c) {
    if (c.empty()) throw DomainError("point needs at least one coordinate");
    for (double v : c)
      if (!std::isfinite(v)) throw DomainError("point coordinates must be finite");
    return Point(std::move(c));
  }

  bool is_index() const { return std::holds_alternative<std::size_t>(rep_); }
  std::size_t index() const {
    if (!is_index()) throw DomainError("point is not an index");
    return std::get<std::size_t>(rep_);
  }
  std::span<const double> coordinates() const {
    if (is_index()) throw DomainError("point is an index, not coordinates");
    return std::get<std::vector<double>>(rep_);
  }
  std::size_t dimension() const { return is_index() ? 0 : std::get<std::vector<double>>(rep_).size(); }
  /// The single coordinate of a 1-D point.
  double x() const {
    auto c = coordinates();
    if (c.size() != 1) throw DomainError("point is not one-dimensional");
    return c[0];
  }

  friend bool operator==(const Point&, const Point&) = default;
  friend bool operator<(const Point& a, const Point& b) { return a.rep_ < b.rep_; }

  std::string to_string() const {
    if (is_index()) return "#" + std::to_string(index());
    std::ostringstream os;
    os.precision(17);
    const auto& c = std::get<std::vector<double>>(rep_);
    if (c.size() == 1) {
      os << c[0];
      return os.str();
    }
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
    os << ')';
    return os.str();
  }

 private:
  explicit Point(std::size_t i) : rep_(i) {}
  explicit Point(std::vector<double> c) : rep_(std::move(c)) {}
  std::variant<std::size_t, std::vector<double>> rep_;
};

enum class SpaceKind { finite_table, interval, box };
enum class Norm { euclidean, chebyshev, manhattan };

inline std::string to_string(Norm n) {
  switch (n) {
    case Norm::euclidean:
      return "euclidean";
    case Norm::chebyshev:
      return "chebyshev";
    case Norm::manhattan:
      return "manhattan";
  }
  return "?";
}

inline Norm parse_norm(const std::string& s) {
  if (s == "euclidean") return Norm::euclidean;
  if (s == "chebyshev") return Norm::chebyshev;
  if (s == "manhattan") return Norm::manhattan;
  throw DomainError("unknown metric '" + s + "'");
}

struct AxisGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2;

  bool operator==(const AxisGrid&) const = default;
};

/// A metric space with a sampling window.
///
/// Interval and box spaces are the whole of R^n with the chosen metric; the
/// bounds only describe where samples are drawn. Images of sampled points may
/// leave the window (T1 doubles its argument), so distances are defined for
/// any finite coordinates of the right dimension.
class MetricSpace {
 public:
  using Matrix = std::vector<std::vector<double>>;

  /// Throws DomainError when the table is not square/finite, or (when
  /// `require_metric`) when any metric axiom fails.
  static MetricSpace finite_table(Matrix m, bool require_metric = true);
  static MetricSpace interval(double lo, double hi, std::size_t count, std::vector<double> critical = {}) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw DomainError("interval needs finite a < b");
    if (count < 2) throw DomainError("interval needs at least 2 samples");
    MetricSpace s;
    s.kind_ = SpaceKind::interval;
    s.axes_ = {{lo, hi, count}};
    s.norm_ = Norm::euclidean;
    for (double c : critical)
      if (!std::isfinite(c)) throw DomainError("critical points must be finite");
    s.critical_ = std::move(critical);
    return s;
  }
  static MetricSpace box(std::vector<AxisGrid> axes, Norm norm) {
    if (axes.empty()) throw DomainError("box needs at least one axis");
    for (const auto& a : axes) {
      if (!(std::isfinite(a.lo) && std::isfinite(a.hi) && a.lo < a.hi))
        throw DomainError("box axis needs finite a < b");
      if (a.count < 2) throw DomainError("box axis needs at least 2 samples");
    }
    MetricSpace s;
    s.kind_ = SpaceKind::box;
    s.axes_ = std::move(axes);
    s.norm_ = norm;
    return s;
  }

  SpaceKind kind() const { return kind_; }
  std::size_t cardinality() const { return table_.size(); }
  std::size_t dimension() const { return kind_ == SpaceKind::finite_table ? 0 : axes_.size(); }
  const Matrix& table() const { return table_; }
  const std::vector<AxisGrid>& axes() const { return axes_; }
  Norm norm() const { return norm_; }
  const std::vector<double>& critical_points() const { return critical_; }

  /// Throws DomainError when `p` is not a point of this space.
  void require_member(const Point& p) const {
    if (kind_ == SpaceKind::finite_table) {
      if (!p.is_index()) throw DomainError("finite space expects index points");
      if (p.index() >= table_.size())
        throw DomainError("index " + std::to_string(p.index()) + " outside space of size " +
                          std::to_string(table_.size()));
      return;
    }
    if (p.is_index()) throw DomainError("continuous space expects coordinate points");
    if (p.dimension() != axes_.size())
      throw DomainError("point dimension " + std::to_string(p.dimension()) + " does not match space dimension " +
                        std::to_string(axes_.size()));
  }

  /// True when `p` lies inside the sampling window (always true for tables).
  bool in_window(const Point& p) const {
    if (kind_ == SpaceKind::finite_table) return p.is_index() && p.index() < table_.size();
    auto c = p.coordinates();
    for (std::size_t i = 0; i < axes_.size(); ++i)
      if (c[i] < axes_[i].lo || c[i] > axes_[i].hi) return false;
    return true;
  }

  double distance(const Point& x, const Point& y) const {
    require_member(x);
    require_member(y);
    if (kind_ == SpaceKind::finite_table) return table_[x.index()][y.index()];
    auto a = x.coordinates();
    auto b = y.coordinates();
    if (a.size() == 1) return std::fabs(a[0] - b[0]);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = std::fabs(a[i] - b[i]);
      switch (norm_) {
        case Norm::euclidean:
          acc += d * d;
          break;
        case Norm::chebyshev:
          acc = std::max(acc, d);
          break;
        case Norm::manhattan:
          acc += d;
          break;
      }
    }
    return norm_ == Norm::euclidean ? std::sqrt(acc) : acc;
  }

  /// Diameter of one grid cell; zero for finite tables.
  double grid_step() const {
    if (kind_ == SpaceKind::finite_table) return 0.0;
    std::vector<double> lo, hi;
    for (const auto& a : axes_) {
      lo.push_back(0.0);
      hi.push_back((a.hi - a.lo) / static_cast<double>(a.count - 1));
    }
    return distance(Point::coords(lo), Point::coords(hi));
  }

  /// Same space with a different sample count (every axis).
  MetricSpace with_sample_count(std::size_t n) const {
    if (kind_ == SpaceKind::finite_table) return *this;
    MetricSpace s = *this;
    for (auto& a : s.axes_) a.count = n;
    if (n < 2) throw DomainError("sample count must be at least 2");
    return s;
  }

 private:
  MetricSpace() = default;
  SpaceKind kind_ = SpaceKind::interval;
  Matrix table_;
  std::vector<AxisGrid> axes_;
  Norm norm_ = Norm::euclidean;
  std::vector<double> critical_;
};

inline double distance(const MetricSpace& space, const Point& x, const Point& y) { return space.distance(x, y); }

struct Disc {
  Point center;
  double radius = 0.0;

  Disc(Point c, double r) : center(std::move(c)), radius(r) {
    if (!(r >= 0.0)) throw DomainError("disc radius must be nonnegative");
  }
  /// Closed-disc membership with slack eps_mem. An infinite radius covers
  /// the whole space.
  bool contains(const MetricSpace& space, const Point& p, double eps_mem) const {
    if (std::isinf(radius)) return true;
    return space.distance(p, center) <= radius + eps_mem;
  }
};

// ---------------------------------------------------------------------------
// Metric axioms

struct AxiomCheck {
  std::string name;
  bool holds = true;
  bool by_construction = false;
  std::vector<std::size_t> witness;  // (i, j) or (i, j, k)
};

struct MetricAxiomReport {
  std::vector<AxiomCheck> checks;  // zero_diagonal, symmetry, positivity, triangle

  bool all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.holds; });
  }
  const AxiomCheck& get(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw std::out_of_range("no axiom named " + name);
  }
};

/// Checks zero diagonal, symmetry, positivity and d(i,j) <= d(i,k) + d(k,j)
/// (+ eps_tri) over all triples. Witnesses are the first violation in
/// row-major (i, j[, k]) order. Built-in interval/box metrics report
/// "holds by construction".
inline MetricAxiomReport check_metric_axioms(const MetricSpace& space, double eps_tri = Tolerances{}.eps_tri) {
  MetricAxiomReport rep;
  const char* names[] = {"zero_diagonal", "symmetry", "positivity", "triangle"};
  if (space.kind() != SpaceKind::finite_table) {
    for (const char* n : names) rep.checks.push_back({n, true, true, {}});
    return rep;
  }
  for (const char* n : names) rep.checks.push_back({n, true, false, {}});
  const auto& d = space.table();
  const std::size_t n = d.size();
  auto fail = [&](std::size_t which, std::vector<std::size_t> w) {
    if (rep.checks[which].holds) {
      rep.checks[which].holds = false;
      rep.checks[which].witness = std::move(w);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && d[i][j] != 0.0) fail(0, {i, j});
      if (d[i][j] != d[j][i]) fail(1, {i, j});
      if (i != j && !(d[i][j] > 0.0)) fail(2, {i, j});
      for (std::size_t k = 0; k < n; ++k)
        if (d[i][j] > d[i][k] + d[k][j] + eps_tri) fail(3, {i, j, k});
    }
  }
  return rep;
}

inline MetricSpace MetricSpace::finite_table(Matrix m, bool require_metric) {
  if (m.empty()) throw DomainError("finite space must be nonempty");
  for (const auto& row : m) {
    if (row.size() != m.size()) throw DomainError("distance table must be square");
    for (double v : row)
      if (!std::isfinite(v)) throw DomainError("distance table entries must be finite");
  }
  MetricSpace s;
  s.kind_ = SpaceKind::finite_table;
  s.table_ = std::move(m);
  if (require_metric) {
    const auto rep = check_metric_axioms(s);
    for (const auto& c : rep.checks) {
      if (c.holds) continue;
      std::string w;
      for (std::size_t i = 0; i < c.witness.size(); ++i) w += (i ? "," : "") + std::to_string(c.witness[i]);
      throw DomainError("distance table violates " + c.name + " at (" + w + ")");
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Sample sets

enum Provenance : std::uint8_t { kGrid = 1, kCritical = 2, kRefined = 4 };

inline std::string provenance_string(std::uint8_t flags) {
  std::string out;
  if (flags & kGrid) out += "grid";
  if (flags & kCritical) out += std::string(out.empty() ? "" : "|") + "critical";
  if (flags & kRefined) out += std::string(out.empty() ? "" : "|") + "refined";
  return out;
}

struct Sample {
  Point point;
  std::uint8_t provenance = kGrid;
};

/// Ordered points drawn from one space; 1-D sets are sorted ascending.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::vector<Sample> samples) : samples_(std::move(samples)) {}

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const Point& point(std::size_t i) const { return samples_[i].point; }
  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }
  const std::vector<Sample>& samples() const { return samples_; }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.point);
    return out;
  }
  /// Coordinates of a 1-D set.
  std::vector<double> xs() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.point.x());
    return out;
  }
  bool contains(const Point& p) const {
    return std::any_of(samples_.begin(), samples_.end(), [&](const Sample& s) { return s.point == p; });
  }

  /// Union with `extra`; sorts and merges duplicates (provenance flags are
  /// or-ed together).
  SampleSet merged(const std::vector<Sample>& extra) const {
    std::vector<Sample> all = samples_;
    all.insert(all.end(), extra.begin(), extra.end());
    std::stable_sort(all.begin(), all.end(), [](const Sample& a, const Sample& b) { return a.point < b.point; });
    std::vector<Sample> out;
    for (auto& s : all) {
      if (!out.empty() && out.back().point == s.point) {
        out.back().provenance |= s.provenance;
      } else {
        out.push_back(std::move(s));
      }
    }
    return SampleSet(std::move(out));
  }

  friend bool operator==(const SampleSet& a, const SampleSet& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a.point(i) == b.point(i))) return false;
    return true;
  }

 private:
  std::vector<Sample> samples_;
};

/// Grid value i of an axis; multiplies before dividing so that grids with
/// round step sizes hit integers exactly.
inline double grid_value(const AxisGrid& a, std::size_t i) {
  if (i + 1 == a.count) return a.hi;
  return a.lo + ((a.hi - a.lo) * static_cast<double>(i)) / static_cast<double>(a.count - 1);
}

/// Uniform grid, plus (1-D) every critical point c and c +/- critical_offset,
/// plus every disc center and (1-D) disc boundary x0 +/- r. Points outside the
/// sampling window are dropped; duplicates merged; 1-D output sorted.
inline SampleSet enumerate_samples(const MetricSpace& space, const std::vector<Disc>& discs = {},
                                   const std::vector<double>& map_breakpoints = {}, const Tolerances& tol = {}) {
  std::vector<Sample> out;
  switch (space.kind()) {
    case SpaceKind::finite_table: {
      if (space.cardinality() == 0) throw DomainError("empty space");
      for (std::size_t i = 0; i < space.cardinality(); ++i) out.push_back({Point::index(i), kGrid});
      for (const auto& d : discs) space.require_member(d.center);
      return SampleSet(std::move(out));
    }
    case SpaceKind::interval: {
      const AxisGrid& a = space.axes()[0];
      for (std::size_t i = 0; i < a.count; ++i) out.push_back({Point::scalar(grid_value(a, i)), kGrid});
      auto add_critical = [&](double c) {
        if (c >= a.lo && c <= a.hi) out.push_back({Point::scalar(c), kCritical});
      };
      std::vector<double> crit = space.critical_points();
      crit.insert(crit.end(), map_breakpoints.begin(), map_breakpoints.end());
      for (double c : crit) {
        add_critical(c);
        add_critical(c - tol.critical_offset);
        add_critical(c + tol.critical_offset);
      }
      for (const auto& d : discs) {
        space.require_member(d.center);
        const double x0 = d.center.x();
        add_critical(x0);
        if (std::isfinite(d.radius)) {
          add_critical(x0 - d.radius);
          add_critical(x0 + d.radius);
        }
      }
      return SampleSet().merged(out);
    }
    case SpaceKind::box: {
      const auto& axes = space.axes();
      std::vector<std::size_t> idx(axes.size(), 0);
      for (;;) {
        std::vector<double> c(axes.size());
        for (std::size_t k = 0; k < axes.size(); ++k) c[k] = grid_value(axes[k], idx[k]);
        out.push_back({Point::coords(std::move(c)), kGrid});
        std::size_t k = 0;
        while (k < axes.size() && ++idx[k] == axes[k].count) idx[k++] = 0;
        if (k == axes.size()) break;
      }
      for (const auto& d : discs) {
        space.require_member(d.center);
        out.push_back({d.center, kCritical});
      }
      if (discs.empty()) return SampleSet(std::move(out));
      return SampleSet().merged(out);
    }
  }
  throw DomainError("unknown space kind");
}

/// Samples inside the closed disc (membership slack eps_mem).
inline SampleSet disc_points(const MetricSpace& space, const SampleSet& samples, const Disc& disc,
                             double eps_mem = Tolerances{}.eps_mem) {
  std::vector<Sample> out;
  for (const auto& s : samples)
    if (disc.contains(space, s.point, eps_mem)) out.push_back(s);
  return SampleSet(std::move(out));
}

/// Adds the disc's center and (1-D) boundary points to `samples`.
inline SampleSet with_disc(const MetricSpace& space, const SampleSet& samples, const Disc& disc) {
  std::vector<Sample> extra{{disc.center, kCritical}};
  if (space.kind() == SpaceKind::interval && std::isfinite(disc.radius)) {
    const auto& a = space.axes()[0];
    for (double b : {disc.center.x() - disc.radius, disc.center.x() + disc.radius})
      if (b >= a.lo && b <= a.hi) extra.push_back({Point::scalar(b), kCritical});
  }
  if (space.kind() == SpaceKind::interval) return samples.merged(extra);
  if (samples.contains(disc.center)) return samples;
  std::vector<Sample> all = samples.samples();
  all.push_back({disc.center, kCritical});
  return SampleSet(std::move(all));
}

// ---------------------------------------------------------------------------
// CSV

/// n rows of n comma-separated reals, no header.
inline MetricSpace::Matrix parse_table_csv(std::istream& in) {
  MetricSpace::Matrix m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw DomainError("table CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    m.push_back(std::move(row));
  }
  return m;
}

inline MetricSpace::Matrix load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open table CSV '" + path + "'");
  return parse_table_csv(in);
}

/// Columns point_id, coord_1..coord_k, provenance. Finite-space points are
/// written as their index in coord_1.
inline void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  std::size_t k = 1;
  for (const auto& s : samples) k = std::max<std::size_t>(k, s.point.dimension());
  out << "point_id";
  for (std::size_t i = 1; i <= k; ++i) out << ",coord_" << i;
  out << ",provenance\n";
  out.precision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples.point(i);
    out << i;
    if (p.is_index()) {
      out << ',' << p.index();
    } else {
      for (double c : p.coordinates()) out << ',' << c;
    }
    out << ',' << provenance_string(samples[i].provenance) << '\n';
  }
}

}  // namespace fdlab
