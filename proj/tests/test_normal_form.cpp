#include <doctest.h>

#include <array>
#include <cstdio>
#include <random>

#include "examples.hpp"
#include "poisson/error.hpp"
#include "poisson/normal_form.hpp"

using namespace poisson;

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// B[k][c]: coefficient of x_c in the k-th entry of (P^12, P^13, P^23).
std::array<std::array<double, 3>, 3> linear_coefficients(const Multivector& P, const ParameterMap& params) {
  const IndexTuple keys[3] = {{1, 2}, {1, 3}, {2, 3}};
  std::array<std::array<double, 3>, 3> B{};
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 3; ++c) {
      std::vector<double> e(3, 0.0);
      e[c] = 1.0;
      B[k][c] = evaluate(P.coeff(keys[k]), e, params);
    }
  }
  return B;
}

Mat3 inverse(const Mat3& a) {
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  Mat3 inv{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      inv[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
    }
  }
  return inv;
}

/// Push-forward of a linear bivector under y = A x.
Multivector transform(const Multivector& P, const Mat3& A, const ParameterMap& params) {
  const auto B = linear_coefficients(P, params);
  const Mat3 Ainv = inverse(A);
  // full antisymmetric structure: pij[i][j][c]
  double pij[3][3][3] = {};
  const int idx[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 3; ++c) {
      pij[idx[k][0]][idx[k][1]][c] = B[k][c];
      pij[idx[k][1]][idx[k][0]][c] = -B[k][c];
    }
  }
  std::vector<std::pair<IndexTuple, std::string>> coeffs;
  for (int k = 0; k < 3; ++k) {
    const int a = idx[k][0], b = idx[k][1];
    std::string src;
    for (int d = 0; d < 3; ++d) {  // coefficient of y_d
      double v = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          for (int c = 0; c < 3; ++c) v += A[a][i] * A[b][j] * pij[i][j][c] * Ainv[c][d];
        }
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s(%.17g)*x%d", src.empty() ? "" : " + ", v, d + 1);
      src += buf;
    }
    coeffs.emplace_back(IndexTuple{a + 1, b + 1}, src);
  }
  return make_multivector(3, 2, coeffs);
}

}  // namespace

TEST_CASE("every representative is classified as itself") {
  for (const auto& label : normal_form_labels()) {
    CAPTURE(label);
    const Multivector rep = normal_form_representative(label);
    const ParameterMap a{{"a", 0.3}};
    const Multivector concrete = transform(rep, Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, a);
    CHECK(linear_normal_form_r3(concrete).label == label);
  }
  CHECK(normal_form_labels().size() == 10);
}

TEST_CASE("classification is invariant under linear changes of coordinates") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (const auto& label : normal_form_labels()) {
    for (int trial = 0; trial < 10; ++trial) {
      Mat3 A{};
      double det = 0.0;
      do {
        for (auto& row : A) {
          for (double& v : row) v = entry(rng);
        }
        det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
              A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
              A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
      } while (det == 0.0);
      const Multivector P = transform(normal_form_representative(label), A, {{"a", 0.7}});
      CAPTURE(label);
      CAPTURE(render(P));
      CHECK(linear_normal_form_r3(P).label == label);
    }
  }
}

TEST_CASE("named examples") {
  CHECK(linear_normal_form_r3(examples::so3()).label == "so3");
  CHECK(linear_normal_form_r3(examples::sl2()).label == "sl2");
  const auto neg_sl2 = make_multivector(3, 2, {{{1, 2}, "x3"}, {{1, 3}, "x2"}, {{2, 3}, "-x1"}});
  CHECK(linear_normal_form_r3(neg_sl2).label == "sl2");
  const NormalForm book = linear_normal_form_r3(examples::open_book());
  CHECK(book.label == "vii_a");
  CHECK(render(book.representative) ==
        std::map<IndexTuple, std::string>{{{1, 3}, "x1-4.0*a*x2"}, {{2, 3}, "4.0*a*x1+x2"}});
  CHECK(linear_normal_form_r3(Multivector(3, 2)).label == "trivial");
}

TEST_CASE("inputs outside the classification are rejected") {
  const auto not_jacobi = make_multivector(3, 2, {{{1, 2}, "x3"}, {{1, 3}, "x1"}, {{2, 3}, "x2"}});
  CHECK_THROWS_AS(linear_normal_form_r3(not_jacobi), ValidationError);
  CHECK_THROWS_AS(linear_normal_form_r3(examples::quartic_so3()), ValidationError);
  CHECK_THROWS_AS(linear_normal_form_r3(make_multivector(3, 2, {{{1, 2}, "x3 + 1"}})), ValidationError);
  CHECK_THROWS_AS(linear_normal_form_r3(make_multivector(3, 2, {{{1, 2}, "b*x3"}})), ValidationError);
  CHECK_THROWS_AS(linear_normal_form_r3(examples::pais_uhlenbeck()), DimensionError);
  CHECK_THROWS_AS(normal_form_representative("nope"), ValidationError);
}
