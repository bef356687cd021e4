#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poisson/num_eval.hpp"

namespace poisson {

struct TimingRow {
  std::size_t points = 0;
  double mean_s = 0.0;
  /// Sample standard deviation; 0 for a single repeat.
  double std_s = 0.0;
  unsigned repeats = 0;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct TimingReport {
  std::string method;
  std::vector<TimingRow> rows;
  std::optional<LogLogFit> fit;
  unsigned repeats = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string environment;
};

/// Times `method` on random_mesh(k, dim, seed + i) for the i-th size, `repeats` runs each,
/// in tensor mode. Each timed run is one complete method call on already parsed inputs:
/// symbolic construction, compilation and evaluation. Mesh generation and one warm-up
/// call per size are not timed.
/// Sizes must be strictly increasing and positive.
TimingReport time_method(Method method, const MethodInputs& inputs, int dim,
                         const std::vector<std::size_t>& sizes, unsigned repeats,
                         std::uint64_t seed, unsigned workers = 1);

/// Ordinary least squares of log10(mean) on log10(k). Needs at least two sizes.
LogLogFit fit_loglog(std::span<const double> points, std::span<const double> means);
TimingReport fit_loglog(TimingReport report);

/// {method, sizes[], mean_s[], std_s[], slope, intercept, r2, repeats, seed, workers, environment}
std::string report_to_json(const TimingReport& report);

/// The fixed benchmark input set per method (Lie-Poisson sl(2) structure on R^3 and its
/// companions, the Flaschka-Ratiu pair on R^4). Sets `dim`.
MethodInputs reference_inputs(Method method, int* dim);

}  // namespace poisson
