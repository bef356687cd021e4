#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "corpus.hpp"
#include "oracle.hpp"
#include "poisson/compiled.hpp"
#include "poisson/error.hpp"
#include "poisson/expr.hpp"

using namespace poisson;

TEST_CASE("parser precedence and associativity") {
  const std::vector<double> x{2.0, 3.0, 5.0};
  auto val = [&](const char* s) { return evaluate(parse(s, 3), x); };
  CHECK(val("-x1**2") == -4.0);
  CHECK(val("x1**x1**2") == 16.0);  // 2**(2**2)
  CHECK(val("2**-1") == 0.5);
  CHECK(val("x1 - x2 - x3") == -6.0);
  CHECK(val("x3 / x1 / x1") == 1.25);
  CHECK(val("1/2*x1") == 1.0);
  CHECK(val("-(x1 + x2) * x3") == -25.0);
  CHECK(val("+x1 - -x2") == 5.0);
  CHECK(val("2e1 + .5 + 1.") == 21.5);
  CHECK(val("sqrt(x1**2 + x2**2 + 3)") == 4.0);
  CHECK(val("abs(x1 - x3)") == 3.0);
}

TEST_CASE("parser errors carry positions") {
  auto position = [](const char* s, int m) -> long {
    try {
      parse(s, m);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position("x1 +", 3) == 4);
  CHECK(position("x4", 3) == 0);
  CHECK(position("x1 + x0", 3) == 5);
  CHECK(position("foo(x1)", 3) == 0);
  CHECK(position("(x1", 3) == 3);
  CHECK(position("x1 $ x2", 3) == 3);
  CHECK(position("exp x1", 3) >= 0);
  CHECK(position("", 3) == 0);
  CHECK_THROWS_AS(parse("x1", 0), ValidationError);
}

TEST_CASE("parameters are free names") {
  const Expr e = parse("a*x1 + b", 2);
  CHECK(free_parameters(e) == std::set<std::string>{"a", "b"});
  CHECK(max_coordinate(e) == 1);
  const std::vector<double> x{3.0, 0.0};
  CHECK(std::isnan(evaluate(e, x)));
  CHECK(evaluate(e, x, {{"a", 2.0}, {"b", 1.0}}) == 7.0);
}

TEST_CASE("constant folding and identities") {
  const Expr x = Expr::coordinate(1);
  CHECK(render(x * 1.0) == "x1");
  CHECK((x * 0.0).is_zero());
  CHECK(render(x + 0.0) == "x1");
  CHECK(render(0.0 - x) == "-x1");
  CHECK(render(-(-x)) == "x1");
  CHECK(render(2.0 * (3.0 * x)) == "6.0*x1");
  CHECK(render(-(2.0 * x)) == "-2.0*x1");
  CHECK(render(Expr::power(x, Expr::number(1.0))) == "x1");
  CHECK(Expr::power(x, Expr::number(0.0)).is_number(1.0));
  CHECK(Expr::call(Func::exp, Expr::number(0.0)).is_number(1.0));
  CHECK(parse("2*3 + 4", 1).is_number(10.0));
}

TEST_CASE("canonical rendering") {
  CHECK(format_double(4.0) == "4.0");
  CHECK(format_double(-0.3125) == "-0.3125");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-7) == "1e-07");
  CHECK(format_double(1e22) == "1e+22");
  CHECK(format_double(123456789.0) == "123456789.0");
  CHECK(render(parse("x1 - 4*a*x2", 3)) == "x1-4.0*a*x2");
  CHECK(render(parse("(x1 + x2)**2", 2)) == "(x1+x2)**2");
  CHECK(render(parse("x1 - (x2 - x1)", 2)) == "x1-(x2-x1)");
  CHECK(render(parse("(-x1)**2", 1)) == "(-x1)**2");
  CHECK(render(parse("x1**(x1**2)", 1)) == "x1**x1**2");
  CHECK(render(parse("(x1**x1)**2", 1)) == "(x1**x1)**2");
  CHECK(render(parse("x1 / (x1 * x1)", 1)) == "x1/(x1*x1)");
  CHECK(render(parse("exp(-1/x1**2)", 1)) == "exp(-1.0/x1**2)");
}

TEST_CASE("rendering reparses to the same tree") {
  for (const auto& src : test_corpus::kExpressions) {
    const Expr e = parse(src, 3);
    CAPTURE(src);
    CHECK(parse(render(e), 3) == e);
    for (int i = 1; i <= 3; ++i) {
      const Expr d = differentiate(e, i);
      CHECK(parse(render(d), 3) == d);
    }
  }
}

TEST_CASE("partial evaluation leaves canonical residuals") {
  const Expr e = parse("x1 - 4*a*x2", 3);
  const std::vector<double> p{1.0, 1.0, 0.0};
  const Residual r = partial_eval(e, {}, std::span<const double>(p));
  REQUIRE(std::holds_alternative<std::string>(r));
  CHECK(std::get<std::string>(r) == "1.0-4.0*a");
  const Residual bound = partial_eval(e, {{"a", 0.25}}, std::span<const double>(p));
  REQUIRE(std::holds_alternative<double>(bound));
  CHECK(std::get<double>(bound) == 0.0);
  const Expr s = substitute(parse("a*x1 + b", 2), {{"b", 1.0}});
  CHECK(render(s) == "a*x1+1.0");
}

TEST_CASE("derivatives of polynomials agree with exact polynomial derivatives") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const oracle::Poly p = oracle::random_poly(rng, 4, 4, 6);
    const Expr e = parse(p.str(), 4);
    for (int i = 1; i <= 4; ++i) {
      const Expr d = differentiate(e, i);
      const oracle::Poly dp = p.diff(i);
      const std::vector<double> x{u(rng), u(rng), u(rng), u(rng)};
      CHECK(evaluate(d, x) == doctest::Approx(dp.eval(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("derivatives match central differences over the corpus") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.6, 1.6);
  REQUIRE(test_corpus::kExpressions.size() >= 20);
  for (const auto& src : test_corpus::kExpressions) {
    const Expr e = parse(src, 3);
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> x{u(rng), u(rng), u(rng)};
      for (int i = 1; i <= 3; ++i) {
        const double exact = evaluate(differentiate(e, i), x);
        const double fd = oracle::central_difference(
            [&](const std::vector<double>& y) { return evaluate(e, y); }, x, i - 1);
        CAPTURE(src);
        CAPTURE(i);
        CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("compiled evaluation is bitwise equal to the tree walk") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const ParameterMap params{{"a", 0.75}};
  std::vector<double> rows;
  constexpr std::size_t kRows = 300;
  for (std::size_t r = 0; r < kRows * 3; ++r) rows.push_back(u(rng));
  auto exprs = test_corpus::kExpressions;
  exprs.push_back("a*x1 - x2/a");
  exprs.push_back("x1**x2");  // NaN for negative bases
  exprs.push_back("1/(x1 - x1)");
  for (const auto& src : exprs) {
    std::vector<Expr> all{parse(src, 3)};
    for (int i = 1; i <= 3; ++i) all.push_back(differentiate(all[0], i));
    for (const Expr& e : all) {
      const CompiledFunction f(e, 3, params);
      std::vector<double> out(kRows);
      f.evaluate_rows(rows.data(), kRows, out.data());
      for (std::size_t r = 0; r < kRows; ++r) {
        const std::span<const double> x(rows.data() + r * 3, 3);
        const double tree = evaluate(e, x, params);
        const double single = f(x);
        CAPTURE(src);
        if (std::isnan(tree)) {
          CHECK(std::isnan(out[r]));
          CHECK(std::isnan(single));
        } else {
          CHECK(std::memcmp(&tree, &out[r], sizeof(double)) == 0);
          CHECK(std::memcmp(&tree, &single, sizeof(double)) == 0);
        }
      }
    }
  }
}

TEST_CASE("compilation errors") {
  CHECK_THROWS_AS(CompiledFunction(parse("a*x1 + b", 2), 2, {{"a", 1.0}}), UnboundParameterError);
  CHECK_THROWS_AS(CompiledFunction(parse("x3", 3), 2), DimensionError);
  const CompiledFunction c(parse("2*a", 1), 1, {{"a", 1.5}});
  CHECK(c.is_constant());
  CHECK(c.constant_value() == 3.0);
}

TEST_CASE("deep expressions use the heap stack") {
  std::string src = "x1";
  for (int i = 0; i < 40; ++i) src = "(x1 + " + src + ")*1.5";
  const Expr e = parse(src, 1);
  const CompiledFunction f(e, 1);
  std::vector<double> rows(200);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = 0.01 * static_cast<double>(i);
  std::vector<double> out(rows.size());
  f.evaluate_rows(rows.data(), rows.size(), out.data());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double tree = evaluate(e, std::span<const double>(&rows[i], 1));
    CHECK(tree == out[i]);
  }
}
