#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "poisson/batch.hpp"
#include "poisson/mesh.hpp"
#include "poisson/multivector.hpp"

namespace poisson {

enum class Method {
  bivector = 1,
  bivector_to_matrix,
  hamiltonian_vf,
  poisson_bracket,
  sharp_morphism,
  coboundary_operator,
  modular_vf,
  curl_operator,
  one_forms_bracket,
  gauge_transformation,
  linear_normal_form_r3,
  flaschka_ratiu_bivector,
};

/// "num_bivector", "num_bivector_to_matrix", ...
std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);
const std::vector<Method>& all_methods();

/// Gauge points with |det(I - Lambda M)| at or below this are marked invalid.
inline constexpr double kGaugeSingularTolerance = 1e-12;

// Every method checks that its inputs live in the mesh dimension (DimensionError) and
// compiles its expressions with opts.params (UnboundParameterError on missing names).
// Row i of the output always belongs to mesh row i, whatever opts.workers is.

/// Records keyed by the bivector's own keys, or (k, m, m) antisymmetric matrices.
BatchResult num_bivector(const Multivector& P, const Mesh& mesh, const EvalOptions& opts = {});

/// Always (k, m, m), whatever opts.mode says.
BatchResult num_bivector_to_matrix(const Multivector& P, const Mesh& mesh,
                                   const EvalOptions& opts = {});

/// -M grad h per point, (k, m).
BatchResult num_hamiltonian_vf(const Multivector& P, const Expr& h, const Mesh& mesh,
                               const EvalOptions& opts = {});

/// {f, g} = -grad g^T M grad f per point, (k). Structurally equal f and g short-circuit to
/// a zero column without compiling anything.
BatchResult num_poisson_bracket(const Multivector& P, const Expr& f, const Expr& g,
                                const Mesh& mesh, const EvalOptions& opts = {});

/// -M alpha per point, (k, m).
BatchResult num_sharp_morphism(const Multivector& P, const Multivector& alpha, const Mesh& mesh,
                               const EvalOptions& opts = {});

/// [[P, A]] per point. A of degree 0 is passed as Multivector::scalar.
BatchResult num_coboundary_operator(const Multivector& P, const Multivector& A,
                                    const Mesh& mesh, const EvalOptions& opts = {});

BatchResult num_modular_vf(const Multivector& P, const Expr& f0, const Mesh& mesh,
                           const EvalOptions& opts = {});

BatchResult num_curl_operator(const Multivector& A, const Expr& f0, const Mesh& mesh,
                              const EvalOptions& opts = {});

/// Koszul bracket assembled numerically from Jacobians, sharp images and the gradient of
/// the pairing <P#(alpha), beta>, (k, m).
BatchResult num_one_forms_bracket(const Multivector& P, const Multivector& alpha,
                                  const Multivector& beta, const Mesh& mesh,
                                  const EvalOptions& opts = {});

/// M (I - Lambda M)^{-1} per point with a validity mask. Invalid points are NaN.
BatchResult num_gauge_transformation(const Multivector& P, const Multivector& lambda,
                                     const Mesh& mesh, const EvalOptions& opts = {});

/// Representative of the normal form evaluated per point. In records mode coefficients
/// that keep an unbound parameter come back as residual text such as "-4.0*a".
BatchResult num_linear_normal_form_r3(const Multivector& P, const Mesh& mesh,
                                      const EvalOptions& opts = {});

BatchResult num_flaschka_ratiu_bivector(const std::vector<Expr>& casimirs, const Mesh& mesh,
                                        const EvalOptions& opts = {});

/// Everything any method might need; each method reads only its own fields.
struct MethodInputs {
  Multivector bivector;
  Multivector multivector;  // A for coboundary and curl
  Multivector alpha;
  Multivector beta;
  Multivector lambda;
  Expr h;
  Expr f;
  Expr g;
  Expr f0 = Expr::number(1.0);
  std::vector<Expr> casimirs;
};

BatchResult run_method(Method method, const MethodInputs& in, const Mesh& mesh,
                       const EvalOptions& opts = {});

}  // namespace poisson
