// Arithmetic expressions and first-match piecewise functions.
//
// Grammar (whitespace insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | variable | func '(' expr (',' expr)* ')' | '(' expr ')'
//   func    := abs | exp | sqrt | min | max
//   variable:= x | y | x0 | t | s | u
//
// Expressions are compiled to a small stack program; constant subtrees are
// folded at parse time.
#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fdlab {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t column)
      : std::runtime_error(what + " (column " + std::to_string(column + 1) + ")"), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Var : unsigned char { x = 0, y, x0, t, s, u };
inline constexpr std::size_t kVarCount = 6;

inline std::string_view var_name(Var v) {
  static constexpr std::array<std::string_view, kVarCount> names{"x", "y", "x0", "t", "s", "u"};
  return names[static_cast<std::size_t>(v)];
}

inline std::optional<Var> parse_var_name(std::string_view name) {
  for (std::size_t i = 0; i < kVarCount; ++i) {
    if (var_name(static_cast<Var>(i)) == name) return static_cast<Var>(i);
  }
  return std::nullopt;
}

/// Variable bindings for one evaluation. Unbound variables are NaN and
/// reading one is an evaluation error.
struct Env {
  std::array<double, kVarCount> values{
      std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};

  Env& set(Var v, double value) {
    values[static_cast<std::size_t>(v)] = value;
    return *this;
  }
  double get(Var v) const { return values[static_cast<std::size_t>(v)]; }
};

namespace detail {

enum class Op : unsigned char { push, load, neg, add, sub, mul, div, pow, abs, exp, sqrt, min, max };

struct Instr {
  Op op;
  Var var = Var::x;
  double value = 0.0;
};

struct Node {
  Op op;
  double value = 0.0;
  Var var = Var::x;
  std::vector<std::unique_ptr<Node>> args;
};

inline double apply_unary(Op op, double a) {
  switch (op) {
    case Op::neg:
      return -a;
    case Op::abs:
      return std::fabs(a);
    case Op::exp:
      return std::exp(a);
    case Op::sqrt:
      if (a < 0.0) throw EvaluationError("sqrt of negative argument " + std::to_string(a));
      return std::sqrt(a);
    default:
      throw std::logic_error("not a unary op");
  }
}

inline double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::add:
      return a + b;
    case Op::sub:
      return a - b;
    case Op::mul:
      return a * b;
    case Op::div:
      if (b == 0.0) throw EvaluationError("division by zero");
      return a / b;
    case Op::pow: {
      const double r = std::pow(a, b);
      if (std::isnan(r)) throw EvaluationError("pow domain error");
      return r;
    }
    case Op::min:
      return std::min(a, b);
    case Op::max:
      return std::max(a, b);
    default:
      throw std::logic_error("not a binary op");
  }
}

inline bool is_unary(Op op) { return op == Op::neg || op == Op::abs || op == Op::exp || op == Op::sqrt; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<Node> parse_all() {
    auto node = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static std::unique_ptr<Node> make(Op op, std::vector<std::unique_ptr<Node>> args) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->args = std::move(args);
    bool all_const = true;
    for (const auto& a : n->args) all_const = all_const && a->op == Op::push;
    if (!all_const) return n;
    // Fold constants; leave runtime errors (e.g. sqrt(-1)) for evaluation.
    try {
      double v = is_unary(op) ? apply_unary(op, n->args[0]->value)
                              : apply_binary(op, n->args[0]->value, n->args[1]->value);
      auto c = std::make_unique<Node>();
      c->op = Op::push;
      c->value = v;
      return c;
    } catch (const EvaluationError&) {
      return n;
    }
  }

  static std::unique_ptr<Node> binary(Op op, std::unique_ptr<Node> a, std::unique_ptr<Node> b) {
    std::vector<std::unique_ptr<Node>> args;
    args.push_back(std::move(a));
    args.push_back(std::move(b));
    return make(op, std::move(args));
  }

  std::unique_ptr<Node> parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = binary(Op::add, std::move(lhs), parse_term());
      } else if (eat('-')) {
        lhs = binary(Op::sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = binary(Op::mul, std::move(lhs), parse_unary());
      } else if (eat('/')) {
        lhs = binary(Op::div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> parse_unary() {
    if (eat('-')) {
      std::vector<std::unique_ptr<Node>> args;
      args.push_back(parse_unary());
      return make(Op::neg, std::move(args));
    }
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  std::unique_ptr<Node> parse_power() {
    auto base = parse_primary();
    if (eat('^')) return binary(Op::pow, std::move(base), parse_unary());
    return base;
  }

  std::unique_ptr<Node> parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (auto v = parse_var_name(ident)) {
        auto n = std::make_unique<Node>();
        n->op = Op::load;
        n->var = *v;
        return n;
      }
      struct Fn {
        std::string_view name;
        Op op;
        int arity;
      };
      static constexpr std::array<Fn, 5> fns{{{"abs", Op::abs, 1},
                                              {"exp", Op::exp, 1},
                                              {"sqrt", Op::sqrt, 1},
                                              {"min", Op::min, 2},
                                              {"max", Op::max, 2}}};
      for (const auto& fn : fns) {
        if (fn.name != ident) continue;
        if (!eat('(')) fail("expected '(' after " + std::string(ident));
        std::vector<std::unique_ptr<Node>> args;
        args.push_back(parse_expr());
        while (eat(',')) args.push_back(parse_expr());
        if (!eat(')')) fail("expected ')'");
        if (static_cast<int>(args.size()) != fn.arity)
          fail(std::string(ident) + " expects " + std::to_string(fn.arity) + " argument(s)");
        return make(fn.op, std::move(args));
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(ident) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::unique_ptr<Node> parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(literal, &used);
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number '" + literal + "'");
    }
    if (used != literal.size()) {
      pos_ = start;
      fail("malformed number '" + literal + "'");
    }
    auto n = std::make_unique<Node>();
    n->op = Op::push;
    n->value = v;
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// A compiled arithmetic expression. Cheap to copy and safe to evaluate
/// concurrently.
class Expression {
 public:
  Expression() : Expression(0.0) {}
  explicit Expression(double constant) : source_(format_number(constant)) {
    code_.push_back({detail::Op::push, Var::x, constant});
    depth_ = 1;
  }

  static Expression parse(std::string_view raw) {
    const std::string normalized = normalize_minus(raw);
    const std::string_view text = normalized;
    detail::Parser parser(text);
    auto root = parser.parse_all();
    Expression e;
    e.code_.clear();
    e.source_ = std::string(trim(text));
    e.uses_ = {};
    std::size_t depth = 0;
    std::size_t max_depth = 0;
    e.emit(*root, depth, max_depth);
    e.depth_ = max_depth;
    return e;
  }

  double evaluate(const Env& env) const {
    constexpr std::size_t kInline = 32;
    std::array<double, kInline> inline_stack{};
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (depth_ > kInline) {
      heap_stack.resize(depth_);
      stack = heap_stack.data();
    }
    std::size_t sp = 0;
    for (const auto& in : code_) {
      switch (in.op) {
        case detail::Op::push:
          stack[sp++] = in.value;
          break;
        case detail::Op::load: {
          const double v = env.get(in.var);
          if (std::isnan(v))
            throw EvaluationError("variable '" + std::string(var_name(in.var)) + "' is not bound");
          stack[sp++] = v;
          break;
        }
        case detail::Op::neg:
        case detail::Op::abs:
        case detail::Op::exp:
        case detail::Op::sqrt:
          stack[sp - 1] = detail::apply_unary(in.op, stack[sp - 1]);
          break;
        default:
          --sp;
          stack[sp - 1] = detail::apply_binary(in.op, stack[sp - 1], stack[sp]);
          break;
      }
    }
    const double result = stack[0];
    if (!std::isfinite(result)) throw EvaluationError("non-finite result in '" + source_ + "'");
    return result;
  }

  /// Convenience for one-variable use: binds x, t and s to `arg`.
  double operator()(double arg) const {
    Env env;
    env.set(Var::x, arg).set(Var::t, arg).set(Var::s, arg);
    return evaluate(env);
  }

  bool uses(Var v) const { return uses_[static_cast<std::size_t>(v)]; }
  bool is_constant() const { return code_.size() == 1 && code_[0].op == detail::Op::push; }
  const std::string& source() const { return source_; }

  /// Replaces U+2212 MINUS SIGN with ASCII '-'.
  static std::string normalize_minus(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
          static_cast<unsigned char>(text[i + 1]) == 0x88 && static_cast<unsigned char>(text[i + 2]) == 0x92) {
        out.push_back('-');
        i += 2;
      } else {
        out.push_back(text[i]);
      }
    }
    return out;
  }

  static std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  void emit(const detail::Node& n, std::size_t& depth, std::size_t& max_depth) {
    for (const auto& a : n.args) emit(*a, depth, max_depth);
    switch (n.op) {
      case detail::Op::push:
      case detail::Op::load:
        ++depth;
        if (n.op == detail::Op::load) uses_[static_cast<std::size_t>(n.var)] = true;
        break;
      default:
        depth -= n.args.size() - 1;
        break;
    }
    max_depth = std::max(max_depth, depth);
    code_.push_back({n.op, n.var, n.value});
  }

  std::vector<detail::Instr> code_;
  std::size_t depth_ = 0;
  std::array<bool, kVarCount> uses_{};
  std::string source_;
};

/// Interval condition over one variable, e.g. "[-1, 1]", "(3, inf)",
/// or the catch-all "otherwise".
struct IntervalCondition {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;
  bool otherwise = false;

  bool contains(double v) const {
    if (otherwise) return true;
    const bool above = lo_closed ? v >= lo : v > lo;
    const bool below = hi_closed ? v <= hi : v < hi;
    return above && below;
  }

  static IntervalCondition parse(std::string_view text) {
    std::string s;
    for (char c : Expression::normalize_minus(text))
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    IntervalCondition cond;
    if (s == "otherwise") {
      cond.otherwise = true;
      return cond;
    }
    if (s.size() < 5 || (s.front() != '[' && s.front() != '(') || (s.back() != ']' && s.back() != ')'))
      throw ParseError("malformed interval '" + std::string(text) + "'", 0);
    const auto comma = s.find(',');
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
      throw ParseError("interval needs exactly two bounds: '" + std::string(text) + "'", 0);
    cond.lo_closed = s.front() == '[';
    cond.hi_closed = s.back() == ']';
    cond.lo = parse_bound(s.substr(1, comma - 1));
    cond.hi = parse_bound(s.substr(comma + 1, s.size() - comma - 2));
    if (std::isinf(cond.lo) && cond.lo_closed) throw ParseError("infinite bound must be open", 0);
    if (std::isinf(cond.hi) && cond.hi_closed) throw ParseError("infinite bound must be open", 0);
    if (!(cond.lo <= cond.hi)) throw ParseError("interval bounds out of order", 0);
    return cond;
  }

  std::string to_string() const {
    if (otherwise) return "otherwise";
    auto bound = [](double v) {
      if (std::isinf(v)) return std::string(v < 0 ? "-inf" : "inf");
      return Expression::format_number(v);
    };
    return std::string(lo_closed ? "[" : "(") + bound(lo) + ", " + bound(hi) + (hi_closed ? "]" : ")");
  }

 private:
  static double parse_bound(const std::string& b) {
    if (b == "inf" || b == "+inf") return std::numeric_limits<double>::infinity();
    if (b == "-inf") return -std::numeric_limits<double>::infinity();
    // Bounds may be constant expressions such as sqrt(2) or -1/2.
    const Expression e = Expression::parse(b);
    if (!e.is_constant()) throw ParseError("interval bound must be constant: '" + b + "'", 0);
    return e.evaluate(Env{});
  }
};

/// Ordered (condition, body) pieces with first-match semantics. The
/// condition is tested against one variable (`x` for maps, `t` for
/// auxiliary functions, `y` for alpha functions).
class PiecewiseExpression {
 public:
  struct Piece {
    IntervalCondition condition;
    Expression body;
  };

  PiecewiseExpression() = default;
  explicit PiecewiseExpression(Var condition_var) : condition_var_(condition_var) {}

  static PiecewiseExpression single(Expression body, Var condition_var = Var::x) {
    PiecewiseExpression pw(condition_var);
    IntervalCondition all;
    all.otherwise = true;
    pw.pieces_.push_back({all, std::move(body)});
    return pw;
  }

  /// Parses "<interval> : <expr>".
  void add_piece(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("piece needs '<interval> : <expr>'", 0);
    add_piece(IntervalCondition::parse(text.substr(0, colon)), Expression::parse(text.substr(colon + 1)));
  }

  void add_piece(IntervalCondition cond, Expression body) {
    if (!pieces_.empty() && pieces_.back().condition.otherwise)
      throw ParseError("'otherwise' must be the last piece", 0);
    pieces_.push_back({cond, std::move(body)});
  }

  double evaluate(const Env& env) const {
    const double key = env.get(condition_var_);
    if (std::isnan(key))
      throw EvaluationError("condition variable '" + std::string(var_name(condition_var_)) + "' is not bound");
    for (const auto& p : pieces_) {
      if (p.condition.contains(key)) return p.body.evaluate(env);
    }
    throw EvaluationError("no piece matches " + std::string(var_name(condition_var_)) + " = " +
                          Expression::format_number(key));
  }

  /// Finite interval endpoints of all conditions, sorted and unique.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (const auto& p : pieces_) {
      if (p.condition.otherwise) continue;
      if (std::isfinite(p.condition.lo)) out.push_back(p.condition.lo);
      if (std::isfinite(p.condition.hi)) out.push_back(p.condition.hi);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool uses(Var v) const {
    for (const auto& p : pieces_)
      if (p.body.uses(v)) return true;
    return false;
  }

  bool empty() const { return pieces_.empty(); }
  Var condition_var() const { return condition_var_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// One "piece = <interval> : <expr>" line per piece.
  std::vector<std::string> to_lines() const {
    std::vector<std::string> lines;
    for (const auto& p : pieces_) lines.push_back(p.condition.to_string() + " : " + p.body.source());
    return lines;
  }

 private:
  Var condition_var_ = Var::x;
  std::vector<Piece> pieces_;
};

}  // namespace fdlab
