#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "poisson/buffer.hpp"
#include "poisson/expr.hpp"
#include "poisson/multivector.hpp"

namespace poisson {

enum class OutputMode { records, tensor };

struct EvalOptions {
  OutputMode mode = OutputMode::records;
  ParameterMap params;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

/// Per-point output of a batch method.
///
/// Records mode: `values` is k x keys.size(); a coefficient that kept a free parameter is
/// stored as text in `residuals` under its flat index and its slot in `values` is NaN.
/// Tensor mode: `values` has `shape`, i.e. (k), (k, m), (k, m, m), ... with every
/// antisymmetric slot filled.
struct BatchResult {
  OutputMode mode = OutputMode::records;
  int dim = 0;
  int degree = 0;
  std::vector<IndexTuple> keys;
  std::vector<std::size_t> shape;
  ValueBuffer values;
  std::map<std::size_t, std::string> residuals;
  /// One flag per point, empty when the method has no notion of invalid points.
  std::vector<std::uint8_t> valid;
  /// Non-finite numbers among the values of valid points.
  std::size_t non_finite = 0;

  std::size_t points() const { return shape.empty() ? 0 : shape[0]; }
  bool has_mask() const { return !valid.empty(); }
  bool is_valid(std::size_t point) const { return valid.empty() || valid[point] != 0; }

  /// Records mode only.
  Residual record(std::size_t point, std::size_t key) const;
  /// Tensor mode: values per point.
  std::size_t row_size() const;
};

}  // namespace poisson
