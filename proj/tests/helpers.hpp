#pragma once

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "poisson/multivector.hpp"

namespace test_helpers {

inline poisson::Multivector to_multivector(const oracle::Field& f) {
  if (f.degree == 0) {
    auto it = f.coeffs.find({});
    const std::string src = it == f.coeffs.end() ? "0" : it->second.str();
    return poisson::Multivector::scalar(f.dim, poisson::parse(src, f.dim));
  }
  std::vector<std::pair<poisson::IndexTuple, std::string>> coeffs;
  for (const auto& [k, c] : f.coeffs) coeffs.emplace_back(k, c.str());
  return poisson::make_multivector(f.dim, f.degree, coeffs);
}

/// Largest |library - oracle| over every increasing key, relative to max(1, |oracle|).
inline double max_field_error(const poisson::Multivector& got, const oracle::Field& want,
                              std::span<const double> x) {
  double worst = 0.0;
  for (const auto& key : poisson::increasing_tuples(want.dim, want.degree)) {
    auto it = want.coeffs.find(key);
    const double w = it == want.coeffs.end() ? 0.0 : it->second.eval(x);
    const double g = poisson::evaluate(got.coeff(key), x);
    worst = std::max(worst, std::abs(g - w) / std::max(1.0, std::abs(w)));
  }
  for (const auto& [key, e] : got.coeffs()) {
    if (static_cast<int>(key.size()) != want.degree) return INFINITY;
  }
  return worst;
}

inline std::vector<double> random_point(std::mt19937_64& rng, int m, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(m);
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace test_helpers
