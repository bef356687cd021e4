#include "poisson/normal_form.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "poisson/error.hpp"

namespace poisson {

namespace {

struct ClassEntry {
  const char* label;
  std::vector<std::pair<IndexTuple, std::string>> coeffs;
};

const std::vector<ClassEntry>& class_table() {
  static const std::vector<ClassEntry> table = {
      {"trivial", {}},
      {"so3", {{{1, 2}, "x3"}, {{1, 3}, "-x2"}, {{2, 3}, "x1"}}},
      {"sl2", {{{1, 2}, "-x3"}, {{1, 3}, "-x2"}, {{2, 3}, "x1"}}},
      {"e2", {{{1, 3}, "-x2"}, {{2, 3}, "x1"}}},
      {"e11", {{{1, 3}, "x2"}, {{2, 3}, "x1"}}},
      {"heisenberg", {{{2, 3}, "x1"}}},
      {"book", {{{1, 3}, "x1"}, {{2, 3}, "x2"}}},
      {"jordan", {{{1, 3}, "x1"}, {{2, 3}, "4*x1 + x2"}}},
      {"vi_a", {{{1, 3}, "x1 + 4*a*x2"}, {{2, 3}, "4*a*x1 + x2"}}},
      {"vii_a", {{{1, 3}, "x1 - 4*a*x2"}, {{2, 3}, "4*a*x1 + x2"}}},
  };
  return table;
}

/// Gradient of a homogeneous linear coefficient; throws if it is anything else.
std::array<double, 3> linear_coefficients(const Expr& e, const IndexTuple& key) {
  auto fail = [&] {
    throw ValidationError("coefficient (" + key_to_string(key) +
                          ") is not a homogeneous linear polynomial: " + render(e));
  };
  if (!free_parameters(e).empty()) fail();
  std::array<double, 3> g{};
  for (int i = 1; i <= 3; ++i) {
    Expr d = differentiate(e, i);
    if (!d.is_number()) {
      // Folding may leave a coordinate-free but unfolded tree, e.g. x1*0 inside a product.
      if (depends_on_coordinates(d)) fail();
      d = substitute(d, {});
      if (!d.is_number()) fail();
    }
    g[static_cast<std::size_t>(i - 1)] = d.value();
  }
  const double origin[3] = {0.0, 0.0, 0.0};
  if (evaluate(e, origin) != 0.0) fail();
  return g;
}

}  // namespace

const std::vector<std::string>& normal_form_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const auto& c : class_table()) out.emplace_back(c.label);
    return out;
  }();
  return labels;
}

Multivector normal_form_representative(const std::string& label) {
  for (const auto& c : class_table()) {
    if (label == c.label) return make_multivector(3, 2, c.coeffs);
  }
  throw ValidationError("unknown normal form class '" + label + "'");
}

NormalForm linear_normal_form_r3(const Multivector& bivector) {
  if (bivector.degree() != 2) throw ValidationError("normal forms need a bivector");
  if (bivector.dim() != 3) throw DimensionError("normal forms are only defined on R^3");

  // pi_1 = P^{23}, pi_2 = -P^{13}, pi_3 = P^{12}; B(r, c) = d pi_r / d x_c.
  Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
  for (const auto& [key, c] : bivector.coeffs()) {
    const auto g = linear_coefficients(c, key);
    int row = 0;
    double sign = 1.0;
    if (key == IndexTuple{2, 3}) {
      row = 0;
    } else if (key == IndexTuple{1, 3}) {
      row = 1;
      sign = -1.0;
    } else {
      row = 2;
    }
    for (int col = 0; col < 3; ++col) B(row, col) = sign * g[static_cast<std::size_t>(col)];
  }

  const Eigen::Matrix3d S = (B + B.transpose()) / 2.0;
  const Eigen::Matrix3d K = (B - B.transpose()) / 2.0;
  const Eigen::Vector3d a(K(2, 1), K(0, 2), K(1, 0));

  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  if ((S * a).cwiseAbs().maxCoeff() > tol * scale)
    throw ValidationError("linear bivector does not satisfy the Jacobi identity");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(S, Eigen::EigenvaluesOnly);
  int positive = 0;
  int negative = 0;
  for (int i = 0; i < 3; ++i) {
    const double v = eig.eigenvalues()(i);
    if (v > tol) ++positive;
    if (v < -tol) --negative;
  }
  negative = -negative;
  const int rank = positive + negative;
  const bool definite = positive == 0 || negative == 0;
  const bool has_a = a.cwiseAbs().maxCoeff() > tol;

  std::string label;
  switch (rank) {
    case 0: label = has_a ? "book" : "trivial"; break;
    case 1: label = has_a ? "jordan" : "heisenberg"; break;
    case 2:
      if (has_a) {
        label = definite ? "vii_a" : "vi_a";
      } else {
        label = definite ? "e2" : "e11";
      }
      break;
    default: label = definite ? "so3" : "sl2"; break;
  }
  return {label, normal_form_representative(label)};
}

}  // namespace poisson
