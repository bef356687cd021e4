#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "examples.hpp"
#include "golden.hpp"
#include "helpers.hpp"
#include "oracle.hpp"
#include "poisson/error.hpp"
#include "poisson/num_eval.hpp"
#include "poisson/symbolic.hpp"

using namespace poisson;

namespace {

EvalOptions tensor() {
  EvalOptions o;
  o.mode = OutputMode::tensor;
  return o;
}

/// {a1,b1} x {1} x {a2,b2} x ... x {a5,b5}, random a_i, b_i in [0,1).
Mesh unit_x2_mesh(std::uint64_t seed) {
  Xoshiro256 rng(seed);
  std::vector<std::vector<double>> axes;
  for (int i = 0; i < 6; ++i) {
    if (i == 1) {
      axes.push_back({1.0});
    } else {
      axes.push_back({rng.uniform(), rng.uniform()});
    }
  }
  return product_mesh(axes);
}

}  // namespace

TEST_CASE("meshes") {
  const Mesh q = corners_mesh(3);
  REQUIRE(q.size() == 8);
  CHECK(q.row(1)[2] == 1.0);
  CHECK(q.row(4)[0] == 1.0);
  const Mesh r1 = random_mesh(100, 3, 9);
  const Mesh r2 = random_mesh(100, 3, 9);
  CHECK(r1.values() == r2.values());
  CHECK(random_mesh(100, 3, 10).values() != r1.values());
  for (double v : r1.values()) CHECK((v >= 0.0 && v < 1.0));
  CHECK_THROWS_AS(Mesh(0, 3, {}), ValidationError);
  CHECK_THROWS_AS(Mesh(1, 2, {1.0, NAN}), ValidationError);
  CHECK_THROWS_AS(Mesh(2, 2, {1.0}), ValidationError);
}

TEST_CASE("num_bivector reproduces the so(3) corner records") {
  const BatchResult r = num_bivector(examples::so3(), corners_mesh(3));
  REQUIRE(r.keys == std::vector<IndexTuple>{{1, 2}, {1, 3}, {2, 3}});
  for (std::size_t p = 0; p < 8; ++p) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(r.values[p * 3 + c] == golden::kSo3Records[p][c]);
  }
  const BatchResult t = num_bivector(examples::so3(), corners_mesh(3), tensor());
  REQUIRE(t.shape == std::vector<std::size_t>{8, 3, 3});
  for (std::size_t p = 0; p < 8; ++p) {
    for (std::size_t j = 0; j < 9; ++j) CHECK(t.values[p * 9 + j] == golden::kSo3Matrices[p][j]);
  }
}

TEST_CASE("num_bivector_to_matrix follows M[i][j] = P^ij") {
  const BatchResult r = num_bivector_to_matrix(examples::sl2(), corners_mesh(3));
  CHECK(r.mode == OutputMode::tensor);
  REQUIRE(r.shape == std::vector<std::size_t>{8, 3, 3});
  const Mesh q = corners_mesh(3);
  for (std::size_t p = 0; p < 8; ++p) {
    const auto x = q.row(p);
    const double want[9] = {0, -x[2], -x[1], x[2], 0, x[0], x[1], -x[0], 0};
    for (int j = 0; j < 9; ++j) CHECK(r.values[p * 9 + j] == want[j]);
  }
}

TEST_CASE("num_hamiltonian_vf on the canonical R^6 example") {
  const Mesh mesh = product_mesh({{-2, -1}, {0, 1}, {2, 3}, {0, 1}, {0, 1}, {0, 1}});
  const BatchResult r = num_hamiltonian_vf(examples::canonical_r6(),
                                           parse(examples::kCanonicalHamiltonian, 6), mesh, tensor());
  REQUIRE(r.shape == std::vector<std::size_t>{64, 6});
  for (int j = 0; j < 6; ++j) CHECK(r.values[j] == doctest::Approx(golden::kHamiltonianFirstRow[j]).epsilon(1e-12));
  const double last[6] = {-1, -1, -1, -0.3125, 0, 0.3125};
  const double before_last[6] = {-1, -1, 0, -0.3125, 0, 0.3125};
  for (int j = 0; j < 6; ++j) {
    CHECK(r.values[63 * 6 + j] == doctest::Approx(last[j]));
    CHECK(r.values[62 * 6 + j] == doctest::Approx(before_last[j]));
  }
}

TEST_CASE("num_poisson_bracket on the twisted structure") {
  const Mesh mesh = unit_x2_mesh(17);
  const BatchResult r = num_poisson_bracket(examples::twist_r6(), parse("x6", 6), parse("x5", 6), mesh);
  REQUIRE(r.points() == 32);
  for (double v : r.values) CHECK(v == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("structurally equal functions short-circuit the bracket") {
  const auto P = examples::so3();
  const BatchResult r =
      num_poisson_bracket(P, parse("x1 + x2*b", 3), parse("x1+x2*b", 3), random_mesh(50, 3, 1));
  for (double v : r.values) CHECK(v == 0.0);
  CHECK_THROWS_AS(num_poisson_bracket(P, parse("x1 + x2*b", 3), parse("x2", 3), random_mesh(5, 3, 1)),
                  UnboundParameterError);
}

TEST_CASE("bracket is antisymmetric and matches the oracle") {
  std::mt19937_64 rng(2);
  const auto P = oracle::random_field(rng, 4, 2, 2, 3);
  const auto f = oracle::random_poly(rng, 4, 3, 3);
  const auto g = oracle::random_poly(rng, 4, 3, 3);
  const Mesh mesh = random_mesh(500, 4, 3);
  const auto Pm = test_helpers::to_multivector(P);
  const BatchResult fg = num_poisson_bracket(Pm, parse(f.str(), 4), parse(g.str(), 4), mesh);
  const BatchResult gf = num_poisson_bracket(Pm, parse(g.str(), 4), parse(f.str(), 4), mesh);
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    const auto x = mesh.row(p);
    double want = 0.0;
    for (const auto& [ij, c] : P.coeffs) {
      want += c.eval(x) * (f.diff(ij[0]).eval(x) * g.diff(ij[1]).eval(x) -
                           f.diff(ij[1]).eval(x) * g.diff(ij[0]).eval(x));
    }
    CHECK(fg.values[p] == doctest::Approx(want).epsilon(1e-10));
    CHECK(gf.values[p] == doctest::Approx(-want).epsilon(1e-10));
  }
}

TEST_CASE("num_sharp_morphism of the Casimir differential") {
  const BatchResult r =
      num_sharp_morphism(examples::so3(), examples::so3_casimir_differential(), random_mesh(1000, 3, 4), tensor());
  REQUIRE(r.shape == std::vector<std::size_t>{1000, 3});
  for (double v : r.values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("num_coboundary_operator of the sl(2) cocycle") {
  const BatchResult r =
      num_coboundary_operator(examples::sl2(), examples::sl2_cocycle(), random_mesh(2000, 3, 5), tensor());
  REQUIRE(r.shape == std::vector<std::size_t>{2000, 3, 3});
  for (double v : r.values) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("num_coboundary_operator in records mode keeps every key of the image") {
  const BatchResult r = num_coboundary_operator(examples::so3(), examples::so3(), random_mesh(10, 3, 5));
  CHECK(r.degree == 3);
  for (double v : r.values) CHECK(std::abs(v) <= 1e-12);
  const auto A = Multivector::scalar(3, parse("x1*x2", 3));
  const BatchResult s = num_coboundary_operator(examples::so3(), A, corners_mesh(3), tensor());
  CHECK(s.shape == std::vector<std::size_t>{8, 3});
}

TEST_CASE("num_modular_vf and num_curl_operator") {
  const Mesh mesh = random_mesh(500, 3, 6);
  const BatchResult z = num_modular_vf(examples::quartic_so3(), Expr::number(1.0), mesh, tensor());
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    const auto x = mesh.row(p);
    CHECK(z.values[p * 3 + 0] == doctest::Approx(x[1] * x[2] * x[2] * x[2] - x[1] * x[1] * x[1] * x[2]));
    CHECK(z.values[p * 3 + 2] == doctest::Approx(x[0] * x[1] * x[1] * x[1] - x[0] * x[0] * x[0] * x[1]));
  }
  const BatchResult pu = num_curl_operator(examples::pais_uhlenbeck(), Expr::number(1.0),
                                           random_mesh(1000, 4, 7), tensor());
  REQUIRE(pu.shape == std::vector<std::size_t>{1000, 4});
  for (double v : pu.values) CHECK(v == 0.0);
  const BatchResult d0 = num_curl_operator(examples::so3_casimir_differential(), Expr::number(1.0),
                                           corners_mesh(3), tensor());
  REQUIRE(d0.shape == std::vector<std::size_t>{8});
  for (double v : d0.values) CHECK(v == 3.0);
}

TEST_CASE("num_one_forms_bracket on the twisted structure") {
  const Mesh mesh = unit_x2_mesh(23);
  const auto a = make_multivector(6, 1, {{{5}, "1"}});
  const auto b = make_multivector(6, 1, {{{6}, "1"}});
  const BatchResult r = num_one_forms_bracket(examples::twist_r6(), a, b, mesh, tensor());
  REQUIRE(r.shape == std::vector<std::size_t>{32, 6});
  for (std::size_t p = 0; p < 32; ++p) {
    for (int j = 0; j < 6; ++j) CHECK(r.values[p * 6 + j] == doctest::Approx(j == 1 ? 2.0 : 0.0));
  }
}

TEST_CASE("numeric Koszul bracket matches the symbolic one") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 3 + trial % 2;
    const auto P = test_helpers::to_multivector(oracle::random_field(rng, m, 2, 2, 3));
    const auto a = test_helpers::to_multivector(oracle::random_field(rng, m, 1, 2, 3));
    const auto b = test_helpers::to_multivector(oracle::random_field(rng, m, 1, 2, 3));
    const Mesh mesh = random_mesh(100, m, trial);
    const BatchResult num = num_one_forms_bracket(P, a, b, mesh, tensor());
    const auto sym = one_forms_bracket_sym(P, a, b);
    for (std::size_t p = 0; p < mesh.size(); ++p) {
      for (int j = 1; j <= m; ++j) {
        const double want = evaluate(sym.coeff({j}), mesh.row(p));
        CHECK(num.values[p * m + (j - 1)] == doctest::Approx(want).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("gauge transformation of so(3) is the identity on the corners") {
  const BatchResult r = num_gauge_transformation(examples::so3(), examples::gauge_lambda(), corners_mesh(3), tensor());
  REQUIRE(r.has_mask());
  for (std::size_t p = 0; p < 8; ++p) {
    CHECK(r.is_valid(p));
    for (int j = 0; j < 9; ++j) CHECK(r.values[p * 9 + j] == doctest::Approx(golden::kSo3Matrices[p][j]));
  }
}

TEST_CASE("3D gauge transformation equals P / (1 + <lambda, P>)") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  while (checked < 100) {
    const auto P = oracle::random_field(rng, 3, 2, 1, 3);
    const auto L = oracle::random_field(rng, 3, 2, 1, 3);
    const auto x = test_helpers::random_point(rng, 3, -1.0, 1.0);
    double F = 1.0;
    for (const auto& [k, c] : P.coeffs) {
      auto l = L.coeffs.find(k);
      if (l != L.coeffs.end()) F += c.eval(x) * l->second.eval(x);
    }
    if (std::abs(F) < 0.05) continue;
    const BatchResult r = num_gauge_transformation(test_helpers::to_multivector(P), test_helpers::to_multivector(L),
                                                   Mesh(1, 3, x), tensor());
    REQUIRE(r.is_valid(0));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double pij = 0.0;
        if (i != j) {
          const std::vector<int> key{std::min(i, j) + 1, std::max(i, j) + 1};
          auto it = P.coeffs.find(key);
          if (it != P.coeffs.end()) pij = (i < j ? 1.0 : -1.0) * it->second.eval(x);
        }
        const double want = pij / F;
        const double got = r.values[static_cast<std::size_t>(i * 3 + j)];
        CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
    ++checked;
  }
}

TEST_CASE("singular gauge points are masked") {
  // P = d1^d2, lambda = -dx1^dx2: F = 1 - 1 = 0 everywhere
  const auto P = make_multivector(3, 2, {{{1, 2}, "1"}});
  const auto L = make_multivector(3, 2, {{{1, 2}, "-1"}});
  const BatchResult r = num_gauge_transformation(P, L, corners_mesh(3));
  for (std::size_t p = 0; p < 8; ++p) CHECK_FALSE(r.is_valid(p));
  CHECK(r.non_finite == 0);
  CHECK(std::isnan(r.values[0]));
  // singular only where x1 = 1
  const auto L2 = make_multivector(3, 2, {{{1, 2}, "-x1"}});
  const BatchResult s = num_gauge_transformation(P, L2, corners_mesh(3));
  for (std::size_t p = 0; p < 8; ++p) CHECK(s.is_valid(p) == (p < 4));
}

TEST_CASE("normal form of the open book structure") {
  const BatchResult r = num_linear_normal_form_r3(examples::open_book(), corners_mesh(3));
  REQUIRE(r.keys == std::vector<IndexTuple>{{1, 3}, {2, 3}});
  for (std::size_t p = 0; p < 8; ++p) {
    for (std::size_t c = 0; c < 2; ++c) {
      const Residual got = r.record(p, c);
      const std::string& want = golden::kNormalFormRecords[p][c];
      if (std::holds_alternative<std::string>(got)) {
        CHECK(std::get<std::string>(got) == want);
      } else {
        CHECK(format_double(std::get<double>(got)) == want);
      }
    }
  }
  EvalOptions bound;
  bound.params = {{"a", 1.0}};
  const BatchResult one = num_linear_normal_form_r3(examples::open_book(), corners_mesh(3), bound);
  CHECK(one.residuals.empty());
  CHECK(one.values[6 * 2 + 0] == -3.0);
  CHECK(one.values[6 * 2 + 1] == 5.0);
  CHECK_THROWS_AS(num_linear_normal_form_r3(examples::open_book(), corners_mesh(3), tensor()),
                  UnboundParameterError);
}

TEST_CASE("num_flaschka_ratiu_bivector on Q^4") {
  const BatchResult r =
      num_flaschka_ratiu_bivector({parse("1/2*x4", 4), parse("-x1**2 + x2**2 + x3**2", 4)}, corners_mesh(4));
  REQUIRE(r.keys == std::vector<IndexTuple>{{1, 2}, {1, 3}, {2, 3}});
  for (std::size_t p = 0; p < 16; ++p) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(r.values[p * 3 + c] == golden::kFlaschkaRatiuRecords[p][c]);
  }
}

TEST_CASE("inputs must live in the mesh dimension") {
  CHECK_THROWS_AS(num_bivector(examples::so3(), corners_mesh(2)), DimensionError);
  CHECK_THROWS_AS(num_bivector(examples::so3(), corners_mesh(4)), DimensionError);
  CHECK_THROWS_AS(num_linear_normal_form_r3(examples::pais_uhlenbeck(), corners_mesh(4)), DimensionError);
}

TEST_CASE("output does not depend on the worker count") {
  MethodInputs in;
  in.bivector = examples::sl2();
  in.multivector = examples::sl2_cocycle();
  in.alpha = examples::so3_casimir_differential();
  in.beta = make_multivector(3, 1, {{{1}, "x2*x3"}, {{3}, "sin(x1)"}});
  in.lambda = examples::gauge_lambda();
  in.h = parse("x1**2 + x2**2 - x3**2", 3);
  in.f = in.h;
  in.g = parse("x1*x2*x3", 3);
  const Mesh mesh = random_mesh(10000, 3, 77);
  for (Method m : all_methods()) {
    if (m == Method::flaschka_ratiu_bivector || m == Method::linear_normal_form_r3) continue;
    EvalOptions one = tensor();
    one.workers = 1;
    EvalOptions many = tensor();
    many.workers = 4;
    const BatchResult a = run_method(m, in, mesh, one);
    const BatchResult b = run_method(m, in, mesh, many);
    CAPTURE(method_name(m));
    REQUIRE(a.values.size() == b.values.size());
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("method names round-trip") {
  CHECK(all_methods().size() == 12);
  for (Method m : all_methods()) CHECK(method_from_name(method_name(m)) == m);
  CHECK_FALSE(method_from_name("num_nothing").has_value());
}
