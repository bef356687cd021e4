#pragma once

#include <vector>

#include "poisson/expr.hpp"
#include "poisson/multivector.hpp"

namespace poisson {

/// m x m grid of expressions, row-major, indices 0-based.
class SymbolicMatrix {
 public:
  explicit SymbolicMatrix(int dim);
  int dim() const { return dim_; }
  const Expr& operator()(int i, int j) const { return cells_[index(i, j)]; }
  Expr& operator()(int i, int j) { return cells_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j);
  }
  int dim_;
  std::vector<Expr> cells_;
};

/// M[i][j] = P^{ij}, M[j][i] = -P^{ij}. Also used for 2-forms. Throws on degree != 2.
SymbolicMatrix bivector_to_matrix_sym(const Multivector& bivector);

/// Components of a degree-1 field as a dense vector of m expressions.
std::vector<Expr> dense_vector(const Multivector& v);

std::vector<Expr> gradient(const Expr& f, int dim);

/// Coefficients of -M a as a degree-1 field, zeros dropped.
Multivector sharp_sym(const Multivector& bivector, const Multivector& form);

/// Coordinate Schouten-Nijenhuis bracket [[A, B]] of degree a + b - 1.
///
/// Sign convention: with the Grassmann-variable formula used here, [[P, f]] has
/// components M grad f, i.e. the negative of the Hamiltonian field -M grad f.
/// Returns an empty multivector of degree a + b - 1 when that degree exceeds m.
Multivector schouten_bracket(const Multivector& a, const Multivector& b);

/// [[P, A]]. A scalar (degree 0) argument is given as Multivector::scalar.
Multivector schouten_coboundary(const Multivector& bivector, const Multivector& a);

/// Contraction of the Euclidean volume form by the unit multivector of `key`:
/// i_{d_{k1} ^ ... ^ d_{ka}} Omega0 = sign * dx^{complement}, innermost contraction by the
/// last index. Returns the sign, fills the complement.
int contraction_sign(const IndexTuple& key, int dim, IndexTuple* complement);

/// Divergence w.r.t. f0 Omega0: the (a-1)-field D with i_D(f0 Omega0) = d i_A(f0 Omega0).
/// Throws ValidationError for degree 0.
Multivector curl_sym(const Multivector& a, const Expr& f0);

/// Modular vector field of P relative to f0 Omega0; identical to curl_sym(P, f0).
Multivector modular_vf_sym(const Multivector& bivector, const Expr& f0);

/// P with i_P Omega0 = dK1 ^ ... ^ dK_{m-2}. Zero coefficients are dropped.
Multivector flaschka_ratiu_sym(const std::vector<Expr>& casimirs, int dim);

/// Koszul bracket {alpha, beta}_P of two 1-forms.
Multivector one_forms_bracket_sym(const Multivector& bivector, const Multivector& alpha,
                                  const Multivector& beta);

/// Determinant by cofactor expansion along the first row, skipping zero entries.
Expr determinant(const std::vector<std::vector<Expr>>& m);

}  // namespace poisson
