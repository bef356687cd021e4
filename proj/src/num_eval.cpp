#include "poisson/num_eval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "poisson/compiled.hpp"
#include "poisson/error.hpp"
#include "poisson/normal_form.hpp"
#include "poisson/symbolic.hpp"

namespace poisson {

namespace {

constexpr std::array<std::string_view, 12> kMethodNames = {
    "num_bivector",          "num_bivector_to_matrix",   "num_hamiltonian_vf",
    "num_poisson_bracket",   "num_sharp_morphism",       "num_coboundary_operator",
    "num_modular_vf",        "num_curl_operator",        "num_one_forms_bracket",
    "num_gauge_transformation", "num_linear_normal_form_r3", "num_flaschka_ratiu_bivector"};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_dim(int dim, const Mesh& mesh, const char* what) {
  if (dim != mesh.dim())
    throw DimensionError(std::string(what) + " lives in dimension " + std::to_string(dim) +
                         " but the mesh has dimension " + std::to_string(mesh.dim()));
}

void require_dim(const Expr& e, const Mesh& mesh, const char* what) {
  if (max_coordinate(e) > mesh.dim())
    throw DimensionError(std::string(what) + " uses x" + std::to_string(max_coordinate(e)) +
                         " but the mesh has dimension " + std::to_string(mesh.dim()));
}

/// Compiled expressions evaluated together into a row-major tile buffer.
class Columns {
 public:
  Columns(int dim, const ParameterMap& params) : dim_(dim), params_(params) {}

  std::size_t add(const Expr& e) {
    fns_.emplace_back(e, dim_, params_);
    return fns_.size() - 1;
  }
  std::size_t size() const { return fns_.size(); }

  /// buf receives (end - begin) x size() values.
  void eval(const Mesh& mesh, std::size_t begin, std::size_t end, double* buf) const {
    const std::size_t n = end - begin;
    const double* rows = mesh.data() + begin * static_cast<std::size_t>(mesh.dim());
    for (std::size_t c = 0; c < fns_.size(); ++c) fns_[c].evaluate_rows(rows, n, buf + c, fns_.size());
  }

 private:
  int dim_;
  const ParameterMap& params_;
  std::vector<CompiledFunction> fns_;
};

/// For each key, the flat offsets (within one point's m^d block) of every permutation and
/// the permutation's sign.
std::vector<std::vector<std::pair<std::size_t, double>>> tensor_plan(
    int dim, const std::vector<IndexTuple>& keys) {
  std::vector<std::vector<std::pair<std::size_t, double>>> plan;
  plan.reserve(keys.size());
  for (const auto& key : keys) {
    std::vector<std::pair<std::size_t, double>> slots;
    std::vector<std::size_t> perm(key.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
      std::size_t offset = 0;
      int inversions = 0;
      for (std::size_t i = 0; i < perm.size(); ++i) {
        offset = offset * static_cast<std::size_t>(dim) + static_cast<std::size_t>(key[perm[i]] - 1);
        for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
      }
      slots.emplace_back(offset, inversions % 2 ? -1.0 : 1.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    plan.push_back(std::move(slots));
  }
  return plan;
}

enum class Init { zero, uninitialized, none };

BatchResult blank_result(OutputMode mode, int dim, int degree, std::vector<IndexTuple> keys,
                         std::size_t k, Init init = Init::zero) {
  BatchResult r;
  r.mode = mode;
  r.dim = dim;
  r.degree = degree;
  r.keys = std::move(keys);
  if (mode == OutputMode::records) {
    r.shape = {k, r.keys.size()};
  } else {
    r.shape.assign(static_cast<std::size_t>(degree) + 1, static_cast<std::size_t>(dim));
    r.shape[0] = k;
  }
  if (init == Init::zero) r.values.assign(k * r.row_size(), 0.0);
  if (init == Init::uninitialized) r.values.resize(k * r.row_size());
  return r;
}

void count_non_finite(BatchResult& r) {
  const std::size_t row = r.row_size();
  std::size_t bad = 0;
  for (std::size_t p = 0; p < r.points(); ++p) {
    if (!r.is_valid(p)) continue;
    for (std::size_t j = 0; j < row; ++j) {
      const std::size_t idx = p * row + j;
      if (!std::isfinite(r.values[idx]) && !r.residuals.count(idx)) ++bad;
    }
  }
  r.non_finite = bad;
}

/// Runs fn over the row tiles of r and counts non-finite values tile by tile, while the
/// tile is still in cache. For results without residuals or a mask.
template <typename Fn>
void fill_tiles(BatchResult& r, const Mesh& mesh, unsigned workers, Fn&& fn) {
  std::atomic<std::size_t> bad{0};
  const std::size_t row = r.row_size();
  detail::for_each_tile(mesh.size(), workers, [&](std::size_t b, std::size_t e) {
    fn(b, e);
    std::size_t n = 0;
    for (const double* v = r.values.data() + b * row, *end = r.values.data() + e * row; v != end; ++v)
      n += !std::isfinite(*v);
    bad += n;
  });
  r.non_finite = bad;
}

/// Evaluates one expression per key and lays the values out per the output mode.
BatchResult eval_keyed(const std::vector<Expr>& coeffs, std::vector<IndexTuple> keys, int degree,
                       const Mesh& mesh, const EvalOptions& opts, OutputMode mode) {
  const int dim = mesh.dim();
  Columns cols(dim, opts.params);
  for (const auto& e : coeffs) cols.add(e);
  BatchResult r = blank_result(mode, dim, degree, std::move(keys), mesh.size(), Init::uninitialized);
  const std::size_t nk = cols.size();

  if (mode == OutputMode::records) {
    fill_tiles(r, mesh, opts.workers, [&](std::size_t b, std::size_t e) {
      cols.eval(mesh, b, e, r.values.data() + b * nk);
    });
  } else {
    const auto plan = tensor_plan(dim, r.keys);
    const std::size_t row = r.row_size();
    fill_tiles(r, mesh, opts.workers, [&](std::size_t b, std::size_t e) {
      std::vector<double> buf((e - b) * nk);
      cols.eval(mesh, b, e, buf.data());
      for (std::size_t p = 0; p < e - b; ++p) {
        double* out = r.values.data() + (b + p) * row;
        std::fill(out, out + row, 0.0);
        for (std::size_t c = 0; c < nk; ++c) {
          const double v = buf[p * nk + c];
          for (const auto& [off, sign] : plan[c]) out[off] = sign * v;
        }
      }
    });
  }
  return r;
}

/// Keys for results of symbolic operators: every key for degrees 0 and 1, otherwise the
/// non-zero coefficients of the symbolic result.
std::vector<IndexTuple> result_keys(const Multivector& mv) {
  if (mv.degree() <= 1) return increasing_tuples(mv.dim(), mv.degree());
  std::vector<IndexTuple> keys;
  for (const auto& [k, v] : mv.coeffs()) {
    if (!v.is_zero()) keys.push_back(k);
  }
  return keys;
}

BatchResult eval_multivector(const Multivector& mv, std::vector<IndexTuple> keys, const Mesh& mesh,
                             const EvalOptions& opts, OutputMode mode) {
  std::vector<Expr> coeffs;
  coeffs.reserve(keys.size());
  for (const auto& k : keys) coeffs.push_back(mv.coeff(k));
  return eval_keyed(coeffs, std::move(keys), mv.degree(), mesh, opts, mode);
}

/// Upper-triangle entries of a bivector in increasing-tuple order, plus their keys.
struct PackedMatrix {
  std::vector<IndexTuple> keys;
  std::vector<Expr> coeffs;
};

PackedMatrix packed(const Multivector& P) {
  PackedMatrix out;
  for (const auto& [k, v] : P.coeffs()) {
    if (v.is_zero()) continue;
    out.keys.push_back(k);
    out.coeffs.push_back(v);
  }
  return out;
}

/// y = -M v for a packed antisymmetric M with entries `pm` (one value per key).
void neg_matvec(const std::vector<IndexTuple>& keys, const double* pm, const double* v, double* y,
                std::size_t m) {
  std::fill(y, y + m, 0.0);
  for (std::size_t c = 0; c < keys.size(); ++c) {
    const auto i = static_cast<std::size_t>(keys[c][0] - 1);
    const auto j = static_cast<std::size_t>(keys[c][1] - 1);
    y[i] -= pm[c] * v[j];
    y[j] += pm[c] * v[i];
  }
}

BatchResult vector_result(const Mesh& mesh, OutputMode mode, int degree, Init init = Init::zero) {
  return blank_result(mode, mesh.dim(), degree, increasing_tuples(mesh.dim(), degree), mesh.size(), init);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view method_name(Method m) { return kMethodNames[static_cast<std::size_t>(m) - 1]; }

std::optional<Method> method_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
    if (kMethodNames[i] == name) return static_cast<Method>(i + 1);
  }
  return std::nullopt;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = [] {
    std::vector<Method> out;
    for (int i = 1; i <= 12; ++i) out.push_back(static_cast<Method>(i));
    return out;
  }();
  return methods;
}

Residual BatchResult::record(std::size_t point, std::size_t key) const {
  const std::size_t idx = point * keys.size() + key;
  auto it = residuals.find(idx);
  if (it != residuals.end()) return it->second;
  return values[idx];
}

std::size_t BatchResult::row_size() const {
  std::size_t n = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) n *= shape[i];
  return n;
}

BatchResult num_bivector(const Multivector& P, const Mesh& mesh, const EvalOptions& opts) {
  if (P.degree() != 2) throw ValidationError("num_bivector needs a bivector");
  require_dim(P.dim(), mesh, "bivector");
  std::vector<IndexTuple> keys;
  for (const auto& [k, v] : P.coeffs()) keys.push_back(k);
  return eval_multivector(P, std::move(keys), mesh, opts, opts.mode);
}

BatchResult num_bivector_to_matrix(const Multivector& P, const Mesh& mesh,
                                   const EvalOptions& opts) {
  if (P.degree() != 2) throw ValidationError("num_bivector_to_matrix needs a bivector");
  require_dim(P.dim(), mesh, "bivector");
  std::vector<IndexTuple> keys;
  for (const auto& [k, v] : P.coeffs()) keys.push_back(k);
  return eval_multivector(P, std::move(keys), mesh, opts, OutputMode::tensor);
}

BatchResult num_hamiltonian_vf(const Multivector& P, const Expr& h, const Mesh& mesh,
                               const EvalOptions& opts) {
  if (P.degree() != 2) throw ValidationError("num_hamiltonian_vf needs a bivector");
  require_dim(P.dim(), mesh, "bivector");
  require_dim(h, mesh, "h");
  const std::size_t m = static_cast<std::size_t>(mesh.dim());
  const PackedMatrix pm = packed(P);
  Columns cols(mesh.dim(), opts.params);
  for (const auto& c : pm.coeffs) cols.add(c);
  for (const auto& d : gradient(h, mesh.dim())) cols.add(d);
  const std::size_t np = pm.coeffs.size();
  const std::size_t nc = cols.size();

  BatchResult r = vector_result(mesh, opts.mode, 1, Init::uninitialized);
  fill_tiles(r, mesh, opts.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> buf((e - b) * nc);
    cols.eval(mesh, b, e, buf.data());
    for (std::size_t p = 0; p < e - b; ++p) {
      const double* row = buf.data() + p * nc;
      neg_matvec(pm.keys, row, row + np, r.values.data() + (b + p) * m, m);
    }
  });
  return r;
}

BatchResult num_poisson_bracket(const Multivector& P, const Expr& f, const Expr& g,
                                const Mesh& mesh, const EvalOptions& opts) {
  if (P.degree() != 2) throw ValidationError("num_poisson_bracket needs a bivector");
  require_dim(P.dim(), mesh, "bivector");
  require_dim(f, mesh, "f");
  require_dim(g, mesh, "g");
  if (f == g) return vector_result(mesh, opts.mode, 0);
  BatchResult r = vector_result(mesh, opts.mode, 0, Init::uninitialized);

  const std::size_t m = static_cast<std::size_t>(mesh.dim());
  const PackedMatrix pm = packed(P);
  Columns cols(mesh.dim(), opts.params);
  for (const auto& c : pm.coeffs) cols.add(c);
  for (const auto& d : gradient(f, mesh.dim())) cols.add(d);
  for (const auto& d : gradient(g, mesh.dim())) cols.add(d);
  const std::size_t np = pm.coeffs.size();
  const std::size_t nc = cols.size();

  fill_tiles(r, mesh, opts.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> buf((e - b) * nc);
    std::vector<double> xf(m);
    cols.eval(mesh, b, e, buf.data());
    for (std::size_t p = 0; p < e - b; ++p) {
      const double* row = buf.data() + p * nc;
      // -grad g . M grad f = grad g . X_f
      neg_matvec(pm.keys, row, row + np, xf.data(), m);
      const double* dg = row + np + m;
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += dg[i] * xf[i];
      r.values[b + p] = s;
    }
  });
  return r;
}

BatchResult num_sharp_morphism(const Multivector& P, const Multivector& alpha, const Mesh& mesh,
                               const EvalOptions& opts) {
  if (P.degree() != 2) throw ValidationError("num_sharp_morphism needs a bivector");
  if (alpha.degree() != 1) throw ValidationError("num_sharp_morphism needs a 1-form");
  require_dim(P.dim(), mesh, "bivector");
  require_dim(alpha.dim(), mesh, "alpha");
  const std::size_t m = static_cast<std::size_t>(mesh.dim());
  const PackedMatrix pm = packed(P);
  Columns cols(mesh.dim(), opts.params);
  for (const auto& c : pm.coeffs) cols.add(c);
  for (const auto& a : dense_vector(alpha)) cols.add(a);
  const std::size_t np = pm.coeffs.size();
  const std::size_t nc = cols.size();

  BatchResult r = vector_result(mesh, opts.mode, 1, Init::uninitialized);
  fill_tiles(r, mesh, opts.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> buf((e - b) * nc);
    cols.eval(mesh, b, e, buf.data());
    for (std::size_t p = 0; p < e - b; ++p) {
      const double* row = buf.data() + p * nc;
      neg_matvec(pm.keys, row, row + np, r.values.data() + (b + p) * m, m);
    }
  });
  return r;
}

BatchResult num_coboundary_operator(const Multivector& P, const Multivector& A, const Mesh& mesh,
                                    const EvalOptions& opts) {
  require_dim(P.dim(), mesh, "bivector");
  require_dim(A.dim(), mesh, "multivector");
  const Multivector d = schouten_coboundary(P, A);
  return eval_multivector(d, result_keys(d), mesh, opts, opts.mode);
}

BatchResult num_modular_vf(const Multivector& P, const Expr& f0, const Mesh& mesh,
                           const EvalOptions& opts) {
  require_dim(P.dim(), mesh, "bivector");
  require_dim(f0, mesh, "f0");
  const Multivector z = modular_vf_sym(P, f0);
  return eval_multivector(z, result_keys(z), mesh, opts, opts.mode);
}

BatchResult num_curl_operator(const Multivector& A, const Expr& f0, const Mesh& mesh,
                              const EvalOptions& opts) {
  require_dim(A.dim(), mesh, "multivector");
  require_dim(f0, mesh, "f0");
  const Multivector d = curl_sym(A, f0);
  return eval_multivector(d, result_keys(d), mesh, opts, opts.mode);
}

BatchResult num_one_forms_bracket(const Multivector& P, const Multivector& alpha,
                                  const Multivector& beta, const Mesh& mesh,
                                  const EvalOptions& opts) {
  if (P.degree() != 2) throw ValidationError("num_one_forms_bracket needs a bivector");
  if (alpha.degree() != 1 || beta.degree() != 1)
    throw ValidationError("num_one_forms_bracket needs two 1-forms");
  require_dim(P.dim(), mesh, "bivector");
  require_dim(alpha.dim(), mesh, "alpha");
  require_dim(beta.dim(), mesh, "beta");
  const int dim = mesh.dim();
  const std::size_t m = static_cast<std::size_t>(dim);

  const std::vector<Expr> a = dense_vector(alpha);
  const std::vector<Expr> bt = dense_vector(beta);
  const std::vector<Expr> sa = dense_vector(sharp_sym(P, alpha));
  Expr pairing;
  for (std::size_t k = 0; k < m; ++k) pairing = pairing + sa[k] * bt[k];

  const PackedMatrix pm = packed(P);
  Columns cols(dim, opts.params);
  for (const auto& c : pm.coeffs) cols.add(c);
  const std::size_t off_a = cols.size();
  for (const auto& e : a) cols.add(e);
  const std::size_t off_b = cols.size();
  for (const auto& e : bt) cols.add(e);
  const std::size_t off_ja = cols.size();
  for (const auto& e : a) {
    for (const auto& d : gradient(e, dim)) cols.add(d);
  }
  const std::size_t off_jb = cols.size();
  for (const auto& e : bt) {
    for (const auto& d : gradient(e, dim)) cols.add(d);
  }
  const std::size_t off_gp = cols.size();
  for (const auto& d : gradient(pairing, dim)) cols.add(d);
  const std::size_t nc = cols.size();

  BatchResult r = vector_result(mesh, opts.mode, 1, Init::uninitialized);
  fill_tiles(r, mesh, opts.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> buf((e - b) * nc);
    std::vector<double> sharp_a(m), sharp_b(m);
    cols.eval(mesh, b, e, buf.data());
    for (std::size_t p = 0; p < e - b; ++p) {
      const double* row = buf.data() + p * nc;
      neg_matvec(pm.keys, row, row + off_a, sharp_a.data(), m);
      neg_matvec(pm.keys, row, row + off_b, sharp_b.data(), m);
      const double* ja = row + off_ja;
      const double* jb = row + off_jb;
      const double* gp = row + off_gp;
      double* out = r.values.data() + (b + p) * m;
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
          s += (jb[i * m + c] - jb[c * m + i]) * sharp_a[c];
          s -= (ja[i * m + c] - ja[c * m + i]) * sharp_b[c];
        }
        out[i] = s + gp[i];
      }
    }
  });
  return r;
}

BatchResult num_gauge_transformation(const Multivector& P, const Multivector& lambda,
                                     const Mesh& mesh, const EvalOptions& opts) {
  if (P.degree() != 2 || lambda.degree() != 2)
    throw ValidationError("num_gauge_transformation needs a bivector and a 2-form");
  require_dim(P.dim(), mesh, "bivector");
  require_dim(lambda.dim(), mesh, "lambda");
  const int dim = mesh.dim();
  const std::size_t m = static_cast<std::size_t>(dim);

  const PackedMatrix pp = packed(P);
  const PackedMatrix pl = packed(lambda);
  Columns cols(dim, opts.params);
  for (const auto& c : pp.coeffs) cols.add(c);
  for (const auto& c : pl.coeffs) cols.add(c);
  const std::size_t np = pp.coeffs.size();
  const std::size_t nc = cols.size();

  ValueBuffer full(mesh.size() * m * m);
  std::vector<std::uint8_t> valid(mesh.size(), 1);
  detail::for_each_tile(mesh.size(), opts.workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> buf((e - b) * nc);
    cols.eval(mesh, b, e, buf.data());
    Eigen::MatrixXd M(dim, dim), L(dim, dim), A(dim, dim), R(dim, dim), G(dim, dim);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(dim);
    auto fill = [&](Eigen::MatrixXd& X, const std::vector<IndexTuple>& keys, const double* v) {
      X.setZero();
      for (std::size_t c = 0; c < keys.size(); ++c) {
        X(keys[c][0] - 1, keys[c][1] - 1) = v[c];
        X(keys[c][1] - 1, keys[c][0] - 1) = -v[c];
      }
    };
    for (std::size_t p = 0; p < e - b; ++p) {
      const double* row = buf.data() + p * nc;
      fill(M, pp.keys, row);
      fill(L, pl.keys, row + np);
      A.setIdentity();
      A.noalias() -= L * M;
      lu.compute(A);
      const double det = lu.determinant();
      double* out = full.data() + (b + p) * m * m;
      if (!(std::fabs(det) > kGaugeSingularTolerance)) {
        valid[b + p] = 0;
        std::fill(out, out + m * m, kNaN);
        continue;
      }
      R.noalias() = lu.inverse();
      G.noalias() = M * R;
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, dim, dim) = G;
    }
  });

  BatchResult r;
  if (opts.mode == OutputMode::tensor) {
    r = blank_result(OutputMode::tensor, dim, 2, increasing_tuples(dim, 2), mesh.size(), Init::none);
    r.values = std::move(full);
  } else {
    r = blank_result(OutputMode::records, dim, 2, increasing_tuples(dim, 2), mesh.size());
    const std::size_t nk = r.keys.size();
    for (std::size_t p = 0; p < mesh.size(); ++p) {
      for (std::size_t c = 0; c < nk; ++c) {
        const auto i = static_cast<std::size_t>(r.keys[c][0] - 1);
        const auto j = static_cast<std::size_t>(r.keys[c][1] - 1);
        r.values[p * nk + c] = full[p * m * m + i * m + j];
      }
    }
  }
  r.valid = std::move(valid);
  count_non_finite(r);
  return r;
}

BatchResult num_linear_normal_form_r3(const Multivector& P, const Mesh& mesh,
                                      const EvalOptions& opts) {
  require_dim(P.dim(), mesh, "bivector");
  const NormalForm nf = linear_normal_form_r3(P);
  const Multivector& rep = nf.representative;
  std::vector<IndexTuple> keys;
  for (const auto& [k, v] : rep.coeffs()) keys.push_back(k);

  bool residual = false;
  for (const auto& name : free_parameters(rep)) residual |= !opts.params.count(name);
  if (opts.mode == OutputMode::tensor || !residual)
    return eval_multivector(rep, std::move(keys), mesh, opts, opts.mode);

  BatchResult r = blank_result(OutputMode::records, 3, 2, keys, mesh.size());
  const std::size_t nk = keys.size();
  for (std::size_t c = 0; c < nk; ++c) {
    const Expr coeff = substitute(rep.coeff(keys[c]), opts.params);
    for (std::size_t p = 0; p < mesh.size(); ++p) {
      const std::size_t idx = p * nk + c;
      Residual v = partial_eval(coeff, {}, mesh.row(p));
      if (const double* d = std::get_if<double>(&v)) {
        r.values[idx] = *d;
      } else {
        r.values[idx] = kNaN;
        r.residuals.emplace(idx, std::get<std::string>(std::move(v)));
      }
    }
  }
  count_non_finite(r);
  return r;
}

BatchResult num_flaschka_ratiu_bivector(const std::vector<Expr>& casimirs, const Mesh& mesh,
                                        const EvalOptions& opts) {
  for (const auto& k : casimirs) require_dim(k, mesh, "function");
  const Multivector P = flaschka_ratiu_sym(casimirs, mesh.dim());
  return eval_multivector(P, result_keys(P), mesh, opts, opts.mode);
}

BatchResult run_method(Method method, const MethodInputs& in, const Mesh& mesh,
                       const EvalOptions& opts) {
  switch (method) {
    case Method::bivector: return num_bivector(in.bivector, mesh, opts);
    case Method::bivector_to_matrix: return num_bivector_to_matrix(in.bivector, mesh, opts);
    case Method::hamiltonian_vf: return num_hamiltonian_vf(in.bivector, in.h, mesh, opts);
    case Method::poisson_bracket: return num_poisson_bracket(in.bivector, in.f, in.g, mesh, opts);
    case Method::sharp_morphism: return num_sharp_morphism(in.bivector, in.alpha, mesh, opts);
    case Method::coboundary_operator:
      return num_coboundary_operator(in.bivector, in.multivector, mesh, opts);
    case Method::modular_vf: return num_modular_vf(in.bivector, in.f0, mesh, opts);
    case Method::curl_operator: return num_curl_operator(in.multivector, in.f0, mesh, opts);
    case Method::one_forms_bracket:
      return num_one_forms_bracket(in.bivector, in.alpha, in.beta, mesh, opts);
    case Method::gauge_transformation:
      return num_gauge_transformation(in.bivector, in.lambda, mesh, opts);
    case Method::linear_normal_form_r3: return num_linear_normal_form_r3(in.bivector, mesh, opts);
    case Method::flaschka_ratiu_bivector:
      return num_flaschka_ratiu_bivector(in.casimirs, mesh, opts);
  }
  throw ValidationError("unknown method");
}

}  // namespace poisson
