#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "poisson/expr.hpp"

namespace poisson {

/// Strictly increasing 1-based indices; empty for degree 0.
using IndexTuple = std::vector<int>;

/// "1,2" form used by the JSON interfaces; "" for the empty tuple.
std::string key_to_string(const IndexTuple& key);
IndexTuple key_from_string(const std::string& text);

/// All strictly increasing tuples of length `degree` in [1, dim], lexicographic.
std::vector<IndexTuple> increasing_tuples(int dim, int degree);

/// Coefficient map of a multivector field or differential form on R^dim.
/// Absent keys are zero. The same type serves for forms.
class Multivector {
 public:
  Multivector() = default;
  Multivector(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::map<IndexTuple, Expr>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  /// Zero when absent.
  Expr coeff(const IndexTuple& key) const;

  /// Throws ValidationError if the key breaks the invariants. Stores zeros as given, so
  /// record outputs keep every key the caller supplied.
  void set(const IndexTuple& key, const Expr& value);

  /// Adds to an existing coefficient, dropping the key if the sum folds to zero.
  void accumulate(const IndexTuple& key, const Expr& value);

  /// Copy without coefficients that folded to the number zero.
  Multivector pruned() const;

  /// Degree-0 field holding a single expression.
  static Multivector scalar(int dim, const Expr& e);

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<IndexTuple, Expr> coeffs_;
};

/// Unvalidated multivector as read from input: keys and coefficient source text.
struct RawMultivector {
  int degree = 0;
  std::vector<std::pair<IndexTuple, std::string>> coeffs;
};

/// Checks every key (length, order, range) and parses every coefficient under `dim`.
/// Errors name the offending key. Duplicate keys are rejected.
Multivector validate_multivector(const RawMultivector& raw, int dim);

/// Convenience for tests and examples: keys as initializer lists, coefficients as text.
Multivector make_multivector(int dim, int degree,
                             const std::vector<std::pair<IndexTuple, std::string>>& coeffs);

/// Every coefficient rendered canonically.
std::map<IndexTuple, std::string> render(const Multivector& mv);

std::set<std::string> free_parameters(const Multivector& mv);

}  // namespace poisson
