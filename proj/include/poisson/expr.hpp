#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace poisson {

/// Parameter bindings, name -> value. Transparent comparator so lookups take string_view.
using ParameterMap = std::map<std::string, double, std::less<>>;

enum class Op : std::uint8_t { number, coordinate, parameter, neg, add, sub, mul, div, pow, call };

/// `sign` is not in the user-facing function list but is produced by d|u|/dx and
/// therefore accepted by the parser so rendered derivatives reparse.
enum class Func : std::uint8_t { exp, log, sqrt, abs, sin, cos, tan, sinh, cosh, tanh, sign };

std::string_view func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

inline double apply_func(Func f, double x) {
  switch (f) {
    case Func::exp: return std::exp(x);
    case Func::log: return std::log(x);
    case Func::sqrt: return std::sqrt(x);
    case Func::abs: return std::fabs(x);
    case Func::sin: return std::sin(x);
    case Func::cos: return std::cos(x);
    case Func::tan: return std::tan(x);
    case Func::sinh: return std::sinh(x);
    case Func::cosh: return std::cosh(x);
    case Func::tanh: return std::tanh(x);
    case Func::sign:
      if (std::isnan(x)) return x;
      return static_cast<double>((x > 0.0) - (x < 0.0));
  }
  return std::nan("");
}

/// Shared by the tree walker, the compiled evaluator and constant folding so all three
/// agree bit for bit.
inline double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::add: return a + b;
    case Op::sub: return a - b;
    case Op::mul: return a * b;
    case Op::div: return a / b;
    case Op::pow: return std::pow(a, b);
    default: return std::nan("");
  }
}

/// Immutable scalar expression in the coordinates x1..xm and free named parameters.
///
/// Nodes are shared, so copies are cheap. Every constructor constant-folds: numeric
/// subtrees collapse and the 0/1 identities are applied, nothing more.
class Expr {
 public:
  Expr() = default;  // the number 0

  static Expr number(double value);
  static Expr coordinate(int index);  // 1-based
  static Expr parameter(std::string name);
  static Expr call(Func f, const Expr& arg);
  static Expr power(const Expr& base, const Expr& exponent);

  Op op() const;
  double value() const;
  int index() const;
  const std::string& name() const;
  Func func() const;
  /// Operand of unary nodes, left operand of binary nodes.
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_number() const { return op() == Op::number; }
  bool is_number(double v) const { return is_number() && value() == v; }
  bool is_zero() const { return is_number(0.0); }

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

  friend Expr operator-(const Expr& a);
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, const Expr& a, const Expr& b);

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(const Expr& a, double b) { return a + Expr::number(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::number(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::number(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::number(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::number(b); }
inline Expr operator*(double a, const Expr& b) { return Expr::number(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / Expr::number(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::number(a) / b; }

/// Parses the string-literal function language: numbers, x1..xm, parameters, + - * / **,
/// unary minus and the calls exp log sqrt abs sin cos tan sinh cosh tanh.
/// `**` is right-associative and binds tighter than unary minus (`-x1**2 == -(x1**2)`).
/// Throws ParseError (with position) on syntax errors and on x0 / x(m+1) and beyond.
Expr parse(std::string_view source, int dim);

/// Partial derivative with respect to x_index, constant-folded.
Expr differentiate(const Expr& e, int index);

/// Canonical text: shortest round-trip doubles with a trailing ".0" for integral values,
/// `*` and `**`, minimal parentheses, operands in tree order. Reparses to an equal tree.
std::string render(const Expr& e);

/// Shortest round-trip decimal for a double, Python-repr style ("4.0", "0.5", "1e-07").
std::string format_double(double v);

std::set<std::string> free_parameters(const Expr& e);
/// Largest coordinate index referenced, 0 when none.
int max_coordinate(const Expr& e);
bool depends_on_coordinates(const Expr& e);
/// Node count.
std::size_t expr_size(const Expr& e);

/// Reference tree-walking evaluator. Unbound parameters evaluate to NaN.
double evaluate(const Expr& e, std::span<const double> point, const ParameterMap& params = {});

/// Substitutes every bound parameter and, when `point` is given, every coordinate, then
/// folds. The result is a number when nothing symbolic remains.
Expr substitute(const Expr& e, const ParameterMap& params,
                std::optional<std::span<const double>> point = std::nullopt);

/// Either a plain double or the canonical rendering of a symbolic residual such as "4.0*a".
using Residual = std::variant<double, std::string>;

Residual partial_eval(const Expr& e, const ParameterMap& params,
                      std::optional<std::span<const double>> point = std::nullopt);

struct Expr::Node {
  Op op = Op::number;
  Func func = Func::exp;
  int index = 0;
  double value = 0.0;
  std::string name;
  Expr a;
  Expr b;
};

}  // namespace poisson
