#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "poisson/expr.hpp"

namespace poisson {

/// Flat post-order program for one expression with every parameter resolved.
///
/// Evaluation runs the program over a tile of points at a time so each instruction is a
/// tight loop the compiler can vectorize. Arithmetic goes through apply_binary/apply_func,
/// so results are bitwise identical to evaluate() on the same tree.
class CompiledFunction {
 public:
  CompiledFunction() = default;

  /// Throws UnboundParameterError naming every parameter missing from `params`, and
  /// DimensionError if the expression references a coordinate beyond `dim`.
  CompiledFunction(const Expr& e, int dim, const ParameterMap& params = {});

  int dim() const { return dim_; }
  bool is_constant() const { return code_.size() == 1 && code_[0].op == Code::constant; }
  /// Valid when is_constant().
  double constant_value() const { return code_.empty() ? 0.0 : code_[0].value; }

  double operator()(std::span<const double> point) const;

  /// `rows` holds `count` points of dim() doubles each, row-major. Writes `count` values
  /// to `out` with stride `out_stride`.
  void evaluate_rows(const double* rows, std::size_t count, double* out,
                     std::size_t out_stride = 1) const;

  /// Points per inner block. Callers that tile work should use multiples of this.
  static constexpr std::size_t kBlock = 64;

 private:
  enum class Code : std::uint8_t { constant, coordinate, neg, add, sub, mul, div, pow, call };
  struct Instr {
    Code op;
    Func func;
    int index;
    double value;
  };

  void emit(const Expr& e, const ParameterMap& params, std::size_t depth);
  void run_block(const double* rows, std::size_t count, double* stack) const;

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  int dim_ = 0;
};

}  // namespace poisson
