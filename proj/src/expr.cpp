#include "poisson/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <functional>

#include "poisson/error.hpp"

namespace poisson {

namespace {

constexpr std::array<std::string_view, 11> kFuncNames = {
    "exp", "log", "sqrt", "abs", "sin", "cos", "tan", "sinh", "cosh", "tanh", "sign"};

}  // namespace

std::string_view func_name(Func f) { return kFuncNames[static_cast<std::size_t>(f)]; }

std::optional<Func> func_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFuncNames.size(); ++i) {
    if (kFuncNames[i] == name) return static_cast<Func>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Node access and folding constructors

Op Expr::op() const { return node_ ? node_->op : Op::number; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
int Expr::index() const { return node_ ? node_->index : 0; }
Func Expr::func() const { return node_ ? node_->func : Func::exp; }

const std::string& Expr::name() const {
  static const std::string empty;
  return node_ ? node_->name : empty;
}

const Expr& Expr::lhs() const {
  static const Expr zero;
  return node_ ? node_->a : zero;
}

const Expr& Expr::rhs() const {
  static const Expr zero;
  return node_ ? node_->b : zero;
}

Expr Expr::number(double value) {
  if (value == 0.0 && !std::signbit(value)) return Expr();
  auto n = std::make_shared<Node>();
  n->op = Op::number;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::coordinate(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::coordinate;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::parameter;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::make(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a;
  n->b = b;
  return Expr(std::move(n));
}

Expr Expr::call(Func f, const Expr& arg) {
  if (arg.is_number()) return number(apply_func(f, arg.value()));
  auto n = std::make_shared<Node>();
  n->op = Op::call;
  n->func = f;
  n->a = arg;
  return Expr(std::move(n));
}

Expr Expr::power(const Expr& base, const Expr& exponent) {
  if (base.is_number() && exponent.is_number())
    return number(apply_binary(Op::pow, base.value(), exponent.value()));
  if (exponent.is_number(0.0)) return number(1.0);
  if (exponent.is_number(1.0)) return base;
  if (base.is_number(1.0)) return number(1.0);
  return make(Op::pow, base, exponent);
}

Expr operator-(const Expr& a) {
  switch (a.op()) {
    case Op::number: return Expr::number(-a.value());
    case Op::neg: return a.lhs();
    case Op::mul:
      if (a.lhs().is_number()) return Expr::make(Op::mul, Expr::number(-a.lhs().value()), a.rhs());
      break;
    default: break;
  }
  return Expr::make(Op::neg, a, Expr());
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr::number(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::make(Op::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr::number(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::make(Op::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr::number(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return -b;
  if (b.is_number(-1.0)) return -a;
  if (a.is_number() && b.op() == Op::mul && b.lhs().is_number())
    return Expr::make(Op::mul, Expr::number(a.value() * b.lhs().value()), b.rhs());
  return Expr::make(Op::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr::number(a.value() / b.value());
  if (a.is_zero()) return Expr();
  if (b.is_number(1.0)) return a;
  if (b.is_number(-1.0)) return -a;
  return Expr::make(Op::div, a, b);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::number: return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case Op::coordinate: return a.index() == b.index();
    case Op::parameter: return a.name() == b.name();
    case Op::neg: return a.lhs() == b.lhs();
    case Op::call: return a.func() == b.func() && a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  Expr run() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    Expr e = sum();
    skip_space();
    if (pos_ < src_.size())
      throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip_space();
    return src_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  Expr sum() {
    Expr e = term();
    for (;;) {
      if (accept("+")) {
        e = e + term();
      } else if (accept("-")) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (peek("**")) return e;
      if (accept("*")) {
        e = e * unary();
      } else if (accept("/")) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept("**")) return Expr::power(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      Expr e = sum();
      if (!accept(")")) throw ParseError("unbalanced '(' opened at " + std::to_string(open), pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    if (text == ".") throw ParseError("malformed number", start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc::result_out_of_range) {
      v = std::strtod(std::string(text).c_str(), nullptr);
    } else if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ParseError("malformed number '" + std::string(text) + "'", start);
    }
    return Expr::number(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    if (auto f = func_from_name(name)) {
      if (!accept("(")) throw ParseError("expected '(' after " + std::string(name), pos_);
      Expr arg = sum();
      if (!accept(")")) throw ParseError("expected ')' closing " + std::string(name), pos_);
      return Expr::call(*f, arg);
    }
    if (peek("(")) throw ParseError("unknown function '" + std::string(name) + "'", start);

    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int index = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec != std::errc() || index < 1 || index > dim_)
        throw ParseError("coordinate " + std::string(name) + " outside x1..x" + std::to_string(dim_),
                         start);
      return Expr::coordinate(index);
    }
    return Expr::parameter(std::string(name));
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, int dim) {
  if (dim < 1) throw ValidationError("dimension must be at least 1");
  return Parser(source, dim).run();
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, int i) {
  switch (e.op()) {
    case Op::number:
    case Op::parameter: return Expr();
    case Op::coordinate: return Expr::number(e.index() == i ? 1.0 : 0.0);
    case Op::neg: return -differentiate(e.lhs(), i);
    case Op::add: return differentiate(e.lhs(), i) + differentiate(e.rhs(), i);
    case Op::sub: return differentiate(e.lhs(), i) - differentiate(e.rhs(), i);
    case Op::mul: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      return differentiate(u, i) * v + u * differentiate(v, i);
    }
    case Op::div: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      const Expr du = differentiate(u, i);
      const Expr dv = differentiate(v, i);
      if (dv.is_zero()) return du / v;
      return (du * v - u * dv) / Expr::power(v, Expr::number(2.0));
    }
    case Op::pow: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      const Expr du = differentiate(u, i);
      if (!depends_on_coordinates(v)) {
        return v * Expr::power(u, v - Expr::number(1.0)) * du;
      }
      const Expr dv = differentiate(v, i);
      return e * (dv * Expr::call(Func::log, u) + v * du / u);
    }
    case Op::call: {
      const Expr& u = e.lhs();
      const Expr du = differentiate(u, i);
      if (du.is_zero()) return Expr();
      switch (e.func()) {
        case Func::exp: return e * du;
        case Func::log: return du / u;
        case Func::sqrt: return du / (Expr::number(2.0) * e);
        case Func::abs: return Expr::call(Func::sign, u) * du;
        case Func::sin: return Expr::call(Func::cos, u) * du;
        case Func::cos: return -Expr::call(Func::sin, u) * du;
        case Func::tan: return du / Expr::power(Expr::call(Func::cos, u), Expr::number(2.0));
        case Func::sinh: return Expr::call(Func::cosh, u) * du;
        case Func::cosh: return Expr::call(Func::sinh, u) * du;
        case Func::tanh:
          return (Expr::number(1.0) - Expr::power(e, Expr::number(2.0))) * du;
        case Func::sign: return Expr();  // zero almost everywhere
      }
      break;
    }
  }
  return Expr();
}

// ---------------------------------------------------------------------------
// Rendering

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    case Op::number: return (std::isfinite(e.value()) && std::signbit(e.value())) ? 3 : 5;
    default: return 5;
  }
}

void render_into(const Expr& e, std::string& out);

void render_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  render_into(e, out);
  if (wrap) out += ')';
}

void render_into(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::number: {
      const double v = e.value();
      // Non-finite literals have no token of their own; emit an expression that folds back.
      if (std::isnan(v)) {
        out += "(0.0/0.0)";
      } else if (std::isinf(v)) {
        out += v > 0 ? "(1.0/0.0)" : "(-1.0/0.0)";
      } else {
        out += format_double(v);
      }
      return;
    }
    case Op::coordinate:
      out += 'x';
      out += std::to_string(e.index());
      return;
    case Op::parameter: out += e.name(); return;
    case Op::call:
      out += func_name(e.func());
      out += '(';
      render_into(e.lhs(), out);
      out += ')';
      return;
    case Op::neg:
      out += '-';
      render_wrapped(e.lhs(), precedence(e.lhs()) < 3, out);
      return;
    case Op::pow:
      render_wrapped(e.lhs(), precedence(e.lhs()) <= 4, out);
      out += "**";
      if (e.rhs().is_number() && e.rhs().value() >= 0.0 && e.rhs().value() < 1e15 &&
          std::trunc(e.rhs().value()) == e.rhs().value()) {
        out += std::to_string(static_cast<long long>(e.rhs().value()));
        return;
      }
      render_wrapped(e.rhs(), precedence(e.rhs()) < 3, out);
      return;
    default: {
      const int p = precedence(e);
      render_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
      switch (e.op()) {
        case Op::add: out += '+'; break;
        case Op::sub: out += '-'; break;
        case Op::mul: out += '*'; break;
        default: out += '/'; break;
      }
      render_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
      return;
    }
  }
}

}  // namespace

std::string render(const Expr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Queries

namespace {

template <typename Fn>
void visit(const Expr& e, Fn&& fn) {
  fn(e);
  switch (e.op()) {
    case Op::number:
    case Op::coordinate:
    case Op::parameter: return;
    case Op::neg:
    case Op::call: visit(e.lhs(), fn); return;
    default:
      visit(e.lhs(), fn);
      visit(e.rhs(), fn);
  }
}

}  // namespace

std::set<std::string> free_parameters(const Expr& e) {
  std::set<std::string> out;
  visit(e, [&](const Expr& n) {
    if (n.op() == Op::parameter) out.insert(n.name());
  });
  return out;
}

int max_coordinate(const Expr& e) {
  int m = 0;
  visit(e, [&](const Expr& n) {
    if (n.op() == Op::coordinate) m = std::max(m, n.index());
  });
  return m;
}

bool depends_on_coordinates(const Expr& e) { return max_coordinate(e) > 0; }

std::size_t expr_size(const Expr& e) {
  std::size_t n = 0;
  visit(e, [&](const Expr&) { ++n; });
  return n;
}

double evaluate(const Expr& e, std::span<const double> point, const ParameterMap& params) {
  switch (e.op()) {
    case Op::number: return e.value();
    case Op::coordinate: return point[static_cast<std::size_t>(e.index() - 1)];
    case Op::parameter: {
      auto it = params.find(e.name());
      return it == params.end() ? std::nan("") : it->second;
    }
    case Op::neg: return -evaluate(e.lhs(), point, params);
    case Op::call: return apply_func(e.func(), evaluate(e.lhs(), point, params));
    default:
      return apply_binary(e.op(), evaluate(e.lhs(), point, params),
                          evaluate(e.rhs(), point, params));
  }
}

Expr substitute(const Expr& e, const ParameterMap& params,
                std::optional<std::span<const double>> point) {
  switch (e.op()) {
    case Op::number: return e;
    case Op::coordinate:
      if (point) return Expr::number((*point)[static_cast<std::size_t>(e.index() - 1)]);
      return e;
    case Op::parameter: {
      auto it = params.find(e.name());
      return it == params.end() ? e : Expr::number(it->second);
    }
    case Op::neg: return -substitute(e.lhs(), params, point);
    case Op::call: return Expr::call(e.func(), substitute(e.lhs(), params, point));
    case Op::add: return substitute(e.lhs(), params, point) + substitute(e.rhs(), params, point);
    case Op::sub: return substitute(e.lhs(), params, point) - substitute(e.rhs(), params, point);
    case Op::mul: return substitute(e.lhs(), params, point) * substitute(e.rhs(), params, point);
    case Op::div: return substitute(e.lhs(), params, point) / substitute(e.rhs(), params, point);
    case Op::pow:
      return Expr::power(substitute(e.lhs(), params, point), substitute(e.rhs(), params, point));
  }
  return e;
}

Residual partial_eval(const Expr& e, const ParameterMap& params,
                      std::optional<std::span<const double>> point) {
  Expr r = substitute(e, params, point);
  if (r.is_number()) return r.value();
  return render(r);
}

}  // namespace poisson
