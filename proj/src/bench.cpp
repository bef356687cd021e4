#include "poisson/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <thread>

#include "poisson/error.hpp"
#include "poisson/mesh.hpp"

namespace poisson {

TimingReport time_method(Method method, const MethodInputs& inputs, int dim,
                         const std::vector<std::size_t>& sizes, unsigned repeats,
                         std::uint64_t seed, unsigned workers) {
  if (sizes.empty()) throw ValidationError("at least one mesh size is required");
  if (repeats == 0) throw ValidationError("repeats must be positive");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw ValidationError("mesh sizes must be positive");
    if (i && sizes[i] <= sizes[i - 1]) throw ValidationError("mesh sizes must be strictly increasing");
  }

  TimingReport report;
  report.method = std::string(method_name(method));
  report.repeats = repeats;
  report.seed = seed;
  report.workers = workers;
  report.environment = "workers=" + std::to_string(workers) +
                       " hardware_threads=" + std::to_string(std::thread::hardware_concurrency());

  EvalOptions opts;
  opts.mode = OutputMode::tensor;
  opts.workers = workers;

  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const Mesh mesh = random_mesh(sizes[i], dim, seed + i);
    run_method(method, inputs, mesh, opts);  // warm-up, untimed
    std::vector<double> samples;
    samples.reserve(repeats);
    for (unsigned r = 0; r < repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      BatchResult out = run_method(method, inputs, mesh, opts);
      const auto t1 = std::chrono::steady_clock::now();
      samples.push_back(std::chrono::duration<double>(t1 - t0).count());
      if (out.points() != mesh.size()) throw ValidationError("method returned the wrong row count");
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    const double sd = samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1)) : 0.0;
    report.rows.push_back({sizes[i], mean, sd, repeats});
  }
  return report;
}

LogLogFit fit_loglog(std::span<const double> points, std::span<const double> means) {
  if (points.size() != means.size()) throw ValidationError("sizes and means differ in length");
  if (points.size() < 2) throw ValidationError("a fit needs at least two sizes");
  const std::size_t n = points.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(points[i] > 0.0) || !(means[i] > 0.0))
      throw ValidationError("log-log fit needs positive sizes and times");
    x[i] = std::log10(points[i]);
    y[i] = std::log10(means[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("a fit needs at least two distinct sizes");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += e * e;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

TimingReport fit_loglog(TimingReport report) {
  std::vector<double> k, t;
  for (const auto& row : report.rows) {
    k.push_back(static_cast<double>(row.points));
    t.push_back(row.mean_s);
  }
  report.fit = fit_loglog(k, t);
  return report;
}

std::string report_to_json(const TimingReport& report) {
  nlohmann::ordered_json j;
  j["method"] = report.method;
  j["sizes"] = nlohmann::ordered_json::array();
  j["mean_s"] = nlohmann::ordered_json::array();
  j["std_s"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    j["sizes"].push_back(row.points);
    j["mean_s"].push_back(row.mean_s);
    j["std_s"].push_back(row.std_s);
  }
  if (report.fit) {
    j["slope"] = report.fit->slope;
    j["intercept"] = report.fit->intercept;
    j["r2"] = report.fit->r2;
  } else {
    j["slope"] = nullptr;
    j["intercept"] = nullptr;
    j["r2"] = nullptr;
  }
  j["repeats"] = report.repeats;
  j["seed"] = report.seed;
  j["workers"] = report.workers;
  j["environment"] = report.environment;
  return j.dump(2) + "\n";
}

MethodInputs reference_inputs(Method method, int* dim) {
  MethodInputs in;
  *dim = 3;
  const auto sl2 = make_multivector(3, 2, {{{1, 2}, "-x3"}, {{1, 3}, "-x2"}, {{2, 3}, "x1"}});
  in.bivector = sl2;
  in.h = parse("x1**2 + x2**2 - x3**2", 3);
  in.f = in.h;
  in.g = parse("x1 + x2 + x3", 3);
  in.alpha = make_multivector(3, 1, {{{1}, "x1"}, {{2}, "x2"}, {{3}, "-x3"}});
  in.beta = make_multivector(3, 1, {{{1}, "1"}, {{2}, "1"}, {{3}, "1"}});
  in.f0 = Expr::number(1.0);
  switch (method) {
    case Method::coboundary_operator:
      in.multivector = make_multivector(
          3, 1,
          {{{1}, "x1 * x3 * exp(-1/(x1**2 + x2**2 - x3**2)**2) / (x1**2 + x2**2)"},
           {{2}, "x2 * x3 * exp(-1/(x1**2 + x2**2 - x3**2)**2) / (x1**2 + x2**2)"},
           {{3}, "exp(-1/(x1**2 + x2**2 - x3**2)**2)"}});
      break;
    case Method::curl_operator: in.multivector = sl2; break;
    case Method::gauge_transformation:
      in.lambda = make_multivector(3, 2, {{{1, 2}, "x2 - x1"}, {{1, 3}, "x3 - x1"}, {{2, 3}, "x2 - x3"}});
      break;
    case Method::linear_normal_form_r3:
      in.bivector = make_multivector(3, 2, {{{1, 2}, "x3"}, {{1, 3}, "x2"}, {{2, 3}, "-x1"}});
      break;
    case Method::flaschka_ratiu_bivector:
      *dim = 4;
      in.casimirs = {parse("1/2*x4", 4), parse("-x1**2 + x2**2 + x3**2", 4)};
      break;
    default: break;
  }
  return in;
}

}  // namespace poisson
