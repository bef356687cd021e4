#include "poisson/symbolic.hpp"

#include <algorithm>

#include "poisson/error.hpp"

namespace poisson {

SymbolicMatrix::SymbolicMatrix(int dim)
    : dim_(dim), cells_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

namespace {

Expr signed_expr(int sign, const Expr& e) { return sign < 0 ? -e : e; }

void require_degree(const Multivector& mv, int degree, const char* what) {
  if (mv.degree() != degree)
    throw ValidationError(std::string(what) + " must have degree " + std::to_string(degree) +
                          ", got " + std::to_string(mv.degree()));
}

void require_same_dim(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim())
    throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
}

/// Sign of sorting I ++ J, 0 if they share an index; `out` receives the sorted union.
int wedge_sign(const IndexTuple& I, const IndexTuple& J, IndexTuple* out) {
  int inversions = 0;
  for (int x : I) {
    for (int y : J) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  }
  out->clear();
  std::merge(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(*out));
  return inversions % 2 ? -1 : 1;
}

/// Right derivative of zeta_I with respect to zeta_i; 0 when i is not in I.
int right_derivative(const IndexTuple& I, int i, IndexTuple* rest) {
  auto it = std::find(I.begin(), I.end(), i);
  if (it == I.end()) return 0;
  const auto p = static_cast<int>(it - I.begin());
  rest->assign(I.begin(), it);
  rest->insert(rest->end(), it + 1, I.end());
  const int a = static_cast<int>(I.size());
  return (a - 1 - p) % 2 ? -1 : 1;
}

using Partials = std::vector<std::map<IndexTuple, Expr>>;

/// partials[i - 1][key] = d coeff / dx_i, zeros omitted.
Partials coefficient_partials(const Multivector& mv) {
  Partials out(static_cast<std::size_t>(mv.dim()));
  for (int i = 1; i <= mv.dim(); ++i) {
    for (const auto& [key, c] : mv.coeffs()) {
      Expr d = differentiate(c, i);
      if (!d.is_zero()) out[static_cast<std::size_t>(i - 1)].emplace(key, std::move(d));
    }
  }
  return out;
}

}  // namespace

SymbolicMatrix bivector_to_matrix_sym(const Multivector& bivector) {
  require_degree(bivector, 2, "bivector");
  SymbolicMatrix m(bivector.dim());
  for (const auto& [key, c] : bivector.coeffs()) {
    m(key[0] - 1, key[1] - 1) = c;
    m(key[1] - 1, key[0] - 1) = -c;
  }
  return m;
}

std::vector<Expr> dense_vector(const Multivector& v) {
  require_degree(v, 1, "1-form or vector field");
  std::vector<Expr> out(static_cast<std::size_t>(v.dim()));
  for (const auto& [key, c] : v.coeffs()) out[static_cast<std::size_t>(key[0] - 1)] = c;
  return out;
}

std::vector<Expr> gradient(const Expr& f, int dim) {
  std::vector<Expr> out;
  out.reserve(static_cast<std::size_t>(dim));
  for (int i = 1; i <= dim; ++i) out.push_back(differentiate(f, i));
  return out;
}

Multivector sharp_sym(const Multivector& bivector, const Multivector& form) {
  require_same_dim(bivector, form);
  const SymbolicMatrix m = bivector_to_matrix_sym(bivector);
  const std::vector<Expr> a = dense_vector(form);
  Multivector out(bivector.dim(), 1);
  for (int i = 0; i < m.dim(); ++i) {
    Expr s;
    for (int j = 0; j < m.dim(); ++j) s = s + m(i, j) * a[static_cast<std::size_t>(j)];
    Expr v = -s;
    if (!v.is_zero()) out.set({i + 1}, v);
  }
  return out;
}

Multivector schouten_bracket(const Multivector& A, const Multivector& B) {
  require_same_dim(A, B);
  const int m = A.dim();
  const int a = A.degree();
  const int b = B.degree();
  const int degree = a + b - 1;
  if (degree < 0) return Multivector(m, 0);
  Multivector out(m, degree);
  if (degree > m) return out;

  const Partials dA = coefficient_partials(A);
  const Partials dB = coefficient_partials(B);
  const int graded = ((a - 1) * (b - 1)) % 2 ? -1 : 1;

  IndexTuple rest;
  IndexTuple key;
  for (int i = 1; i <= m; ++i) {
    const auto& dBi = dB[static_cast<std::size_t>(i - 1)];
    const auto& dAi = dA[static_cast<std::size_t>(i - 1)];
    for (const auto& [I, cA] : A.coeffs()) {
      const int s = right_derivative(I, i, &rest);
      if (!s) continue;
      for (const auto& [J, dcB] : dBi) {
        const int w = wedge_sign(rest, J, &key);
        if (w) out.accumulate(key, signed_expr(s * w, cA * dcB));
      }
    }
    for (const auto& [J, cB] : B.coeffs()) {
      const int s = right_derivative(J, i, &rest);
      if (!s) continue;
      for (const auto& [I, dcA] : dAi) {
        const int w = wedge_sign(rest, I, &key);
        if (w) out.accumulate(key, signed_expr(-graded * s * w, cB * dcA));
      }
    }
  }
  return out;
}

Multivector schouten_coboundary(const Multivector& bivector, const Multivector& a) {
  require_degree(bivector, 2, "bivector");
  require_same_dim(bivector, a);
  return schouten_bracket(bivector, a);
}

int contraction_sign(const IndexTuple& key, int dim, IndexTuple* complement) {
  IndexTuple rest(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) rest[static_cast<std::size_t>(i)] = i + 1;
  int sign = 1;
  for (auto it = key.rbegin(); it != key.rend(); ++it) {
    auto pos = std::find(rest.begin(), rest.end(), *it);
    if ((pos - rest.begin()) % 2) sign = -sign;
    rest.erase(pos);
  }
  if (complement) *complement = std::move(rest);
  return sign;
}

Multivector curl_sym(const Multivector& A, const Expr& f0) {
  if (A.degree() < 1) throw ValidationError("curl needs a multivector of degree at least 1");
  const int m = A.dim();
  if (A.degree() > m) return Multivector(m, A.degree() - 1);

  // omega = i_A (f0 Omega0), keyed by the complement of each key of A.
  std::map<IndexTuple, Expr> omega;
  IndexTuple comp;
  for (const auto& [key, c] : A.coeffs()) {
    const int s = contraction_sign(key, m, &comp);
    omega[comp] = signed_expr(s, f0 * c);
  }

  // d omega
  std::map<IndexTuple, Expr> domega;
  for (const auto& [J, c] : omega) {
    for (int l = 1; l <= m; ++l) {
      if (std::find(J.begin(), J.end(), l) != J.end()) continue;
      Expr d = differentiate(c, l);
      if (d.is_zero()) continue;
      const auto below = std::count_if(J.begin(), J.end(), [l](int j) { return j < l; });
      IndexTuple L = J;
      L.insert(std::lower_bound(L.begin(), L.end(), l), l);
      Expr& slot = domega[L];
      slot = slot + signed_expr(below % 2 ? -1 : 1, d);
    }
  }

  Multivector out(m, A.degree() - 1);
  for (const auto& K : increasing_tuples(m, A.degree() - 1)) {
    const int s = contraction_sign(K, m, &comp);
    auto it = domega.find(comp);
    if (it == domega.end() || it->second.is_zero()) continue;
    Expr v = signed_expr(s, it->second) / f0;
    if (!v.is_zero()) out.set(K, v);
  }
  return out;
}

Multivector modular_vf_sym(const Multivector& bivector, const Expr& f0) {
  require_degree(bivector, 2, "bivector");
  return curl_sym(bivector, f0);
}

Expr determinant(const std::vector<std::vector<Expr>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Expr::number(1.0);
  if (n == 1) return m[0][0];
  Expr det;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    minor.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      row.reserve(n - 1);
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    Expr term = m[0][c] * determinant(minor);
    det = (c % 2) ? det - term : det + term;
  }
  return det;
}

Multivector flaschka_ratiu_sym(const std::vector<Expr>& casimirs, int dim) {
  if (dim < 3) throw ValidationError("Flaschka-Ratiu bivector needs dimension at least 3");
  if (static_cast<int>(casimirs.size()) != dim - 2)
    throw ValidationError("expected " + std::to_string(dim - 2) + " functions, got " +
                          std::to_string(casimirs.size()));
  std::vector<std::vector<Expr>> jac;
  for (const auto& k : casimirs) {
    if (max_coordinate(k) > dim)
      throw DimensionError("function uses a coordinate beyond x" + std::to_string(dim));
    jac.push_back(gradient(k, dim));
  }
  Multivector out(dim, 2);
  for (int i = 1; i <= dim; ++i) {
    for (int j = i + 1; j <= dim; ++j) {
      std::vector<std::vector<Expr>> minor;
      for (const auto& row : jac) {
        std::vector<Expr> r;
        for (int c = 1; c <= dim; ++c) {
          if (c != i && c != j) r.push_back(row[static_cast<std::size_t>(c - 1)]);
        }
        minor.push_back(std::move(r));
      }
      Expr v = signed_expr((i + j) % 2 ? -1 : 1, determinant(minor));
      if (!v.is_zero()) out.set({i, j}, v);
    }
  }
  return out;
}

Multivector one_forms_bracket_sym(const Multivector& bivector, const Multivector& alpha,
                                  const Multivector& beta) {
  require_degree(bivector, 2, "bivector");
  require_degree(alpha, 1, "alpha");
  require_degree(beta, 1, "beta");
  require_same_dim(bivector, alpha);
  require_same_dim(bivector, beta);
  const int m = bivector.dim();
  const auto um = static_cast<std::size_t>(m);

  const std::vector<Expr> a = dense_vector(alpha);
  const std::vector<Expr> b = dense_vector(beta);
  const std::vector<Expr> sa = dense_vector(sharp_sym(bivector, alpha));
  const std::vector<Expr> sb = dense_vector(sharp_sym(bivector, beta));

  std::vector<std::vector<Expr>> ja(um), jb(um);
  for (std::size_t r = 0; r < um; ++r) {
    ja[r] = gradient(a[r], m);
    jb[r] = gradient(b[r], m);
  }
  Expr pairing;
  for (std::size_t k = 0; k < um; ++k) pairing = pairing + sa[k] * b[k];
  const std::vector<Expr> grad_pairing = gradient(pairing, m);

  Multivector out(m, 1);
  for (std::size_t r = 0; r < um; ++r) {
    Expr v;
    for (std::size_t c = 0; c < um; ++c) {
      v = v + (jb[r][c] - jb[c][r]) * sa[c];
      v = v - (ja[r][c] - ja[c][r]) * sb[c];
    }
    v = v + grad_pairing[r];
    if (!v.is_zero()) out.set({static_cast<int>(r) + 1}, v);
  }
  return out;
}

}  // namespace poisson
