#pragma once

#include <string>
#include <vector>

#include "poisson/multivector.hpp"

namespace poisson {

/// Class of a Lie-Poisson structure on R^3 with its representative bivector.
/// Representatives of the two one-parameter families carry the free parameter `a`.
struct NormalForm {
  std::string label;
  Multivector representative;
};

/// Labels in table order: trivial, so3, sl2, e2, e11, heisenberg, book, jordan, vi_a, vii_a.
const std::vector<std::string>& normal_form_labels();

/// Representative of a class by label. Throws ValidationError for unknown labels.
Multivector normal_form_representative(const std::string& label);

/// Classifies a linear bivector on R^3.
///
/// Writing the structure as P = pi_1 d2^d3 + pi_2 d3^d1 + pi_3 d1^d2 with pi = B x, B
/// splits into a symmetric part S and an antisymmetric part carrying a vector a. The
/// Jacobi identity is S a = 0; the class follows from rank and signature of S and from
/// whether a vanishes. Throws ValidationError for m != 3, non-linear coefficients, or a
/// linear bivector that fails the Jacobi identity.
NormalForm linear_normal_form_r3(const Multivector& bivector);

}  // namespace poisson
