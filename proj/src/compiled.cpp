#include "poisson/compiled.hpp"

#include <algorithm>
#include <array>

#include "poisson/error.hpp"

namespace poisson {

CompiledFunction::CompiledFunction(const Expr& e, int dim, const ParameterMap& params)
    : dim_(dim) {
  std::string missing;
  for (const auto& name : free_parameters(e)) {
    if (params.find(name) == params.end()) {
      if (!missing.empty()) missing += ", ";
      missing += name;
    }
  }
  if (!missing.empty()) throw UnboundParameterError("unbound parameters: " + missing);
  if (max_coordinate(e) > dim)
    throw DimensionError("expression uses x" + std::to_string(max_coordinate(e)) +
                         " but dimension is " + std::to_string(dim));
  if (max_coordinate(e) == 0) {
    code_.push_back({Code::constant, Func::exp, 0, evaluate(e, {}, params)});
    max_depth_ = 1;
    return;
  }
  emit(e, params, 1);
}

void CompiledFunction::emit(const Expr& e, const ParameterMap& params, std::size_t depth) {
  max_depth_ = std::max(max_depth_, depth);
  switch (e.op()) {
    case Op::number: code_.push_back({Code::constant, Func::exp, 0, e.value()}); return;
    case Op::coordinate: code_.push_back({Code::coordinate, Func::exp, e.index() - 1, 0.0}); return;
    case Op::parameter:
      code_.push_back({Code::constant, Func::exp, 0, params.find(e.name())->second});
      return;
    case Op::neg:
      emit(e.lhs(), params, depth);
      code_.push_back({Code::neg, Func::exp, 0, 0.0});
      return;
    case Op::call:
      emit(e.lhs(), params, depth);
      code_.push_back({Code::call, e.func(), 0, 0.0});
      return;
    default: break;
  }
  emit(e.lhs(), params, depth);
  emit(e.rhs(), params, depth + 1);
  Code c = Code::add;
  switch (e.op()) {
    case Op::add: c = Code::add; break;
    case Op::sub: c = Code::sub; break;
    case Op::mul: c = Code::mul; break;
    case Op::div: c = Code::div; break;
    default: c = Code::pow; break;
  }
  code_.push_back({c, Func::exp, 0, 0.0});
}

void CompiledFunction::run_block(const double* rows, std::size_t count, double* stack) const {
  constexpr std::size_t B = kBlock;
  const std::size_t dim = static_cast<std::size_t>(dim_);
  double* top = nullptr;
  for (const Instr& ins : code_) {
    switch (ins.op) {
      case Code::constant:
        top = top ? top + B : stack;
        std::fill(top, top + count, ins.value);
        break;
      case Code::coordinate: {
        top = top ? top + B : stack;
        const double* src = rows + ins.index;
        for (std::size_t r = 0; r < count; ++r) top[r] = src[r * dim];
        break;
      }
      case Code::neg:
        for (std::size_t r = 0; r < count; ++r) top[r] = -top[r];
        break;
      case Code::call:
        for (std::size_t r = 0; r < count; ++r) top[r] = apply_func(ins.func, top[r]);
        break;
      case Code::add: {
        double* a = top - B;
        for (std::size_t r = 0; r < count; ++r) a[r] = a[r] + top[r];
        top = a;
        break;
      }
      case Code::sub: {
        double* a = top - B;
        for (std::size_t r = 0; r < count; ++r) a[r] = a[r] - top[r];
        top = a;
        break;
      }
      case Code::mul: {
        double* a = top - B;
        for (std::size_t r = 0; r < count; ++r) a[r] = a[r] * top[r];
        top = a;
        break;
      }
      case Code::div: {
        double* a = top - B;
        for (std::size_t r = 0; r < count; ++r) a[r] = a[r] / top[r];
        top = a;
        break;
      }
      case Code::pow: {
        double* a = top - B;
        for (std::size_t r = 0; r < count; ++r) a[r] = apply_binary(Op::pow, a[r], top[r]);
        top = a;
        break;
      }
    }
  }
}

double CompiledFunction::operator()(std::span<const double> point) const {
  double out = 0.0;
  evaluate_rows(point.data(), 1, &out);
  return out;
}

void CompiledFunction::evaluate_rows(const double* rows, std::size_t count, double* out,
                                     std::size_t out_stride) const {
  if (code_.empty()) {
    for (std::size_t r = 0; r < count; ++r) out[r * out_stride] = 0.0;
    return;
  }
  if (is_constant()) {
    for (std::size_t r = 0; r < count; ++r) out[r * out_stride] = code_[0].value;
    return;
  }
  constexpr std::size_t kInline = 16;
  std::array<double, kInline * kBlock> small;
  std::vector<double> large;
  double* stack = small.data();
  if (max_depth_ > kInline) {
    large.resize(max_depth_ * kBlock);
    stack = large.data();
  }
  const std::size_t dim = static_cast<std::size_t>(dim_);
  for (std::size_t start = 0; start < count; start += kBlock) {
    const std::size_t n = std::min(kBlock, count - start);
    run_block(rows + start * dim, n, stack);
    for (std::size_t r = 0; r < n; ++r) out[(start + r) * out_stride] = stack[r];
  }
}

}  // namespace poisson
