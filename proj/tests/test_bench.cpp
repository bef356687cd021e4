#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <vector>

#include "poisson/bench.hpp"
#include "poisson/error.hpp"

using namespace poisson;

TEST_CASE("log-log fit recovers an exact power law") {
  const std::vector<double> k{1e3, 1e4, 1e5, 1e6};
  std::vector<double> t;
  for (double v : k) t.push_back(3e-7 * std::pow(v, 1.1));
  const LogLogFit fit = fit_loglog(k, t);
  CHECK(fit.slope == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log10(3e-7)).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("log-log fit of noisy data") {
  // log10 points x = 1..4, log10 times y = 2.1, 3.9, 6.1, 7.9
  const std::vector<double> k{10, 100, 1000, 10000};
  const std::vector<double> t{std::pow(10.0, 2.1), std::pow(10.0, 3.9), std::pow(10.0, 6.1), std::pow(10.0, 7.9)};
  const LogLogFit fit = fit_loglog(k, t);
  // sxy = (-1.5)(-2.9) + (-0.5)(-1.1) + (0.5)(1.1) + (1.5)(2.9) = 9.8, sxx = 5
  CHECK(fit.slope == doctest::Approx(1.96));
  CHECK(fit.r2 > 0.99);
  CHECK(fit.r2 < 1.0);
}

TEST_CASE("fit input validation") {
  const std::vector<double> one{1000};
  CHECK_THROWS_AS(fit_loglog(one, one), ValidationError);
  const std::vector<double> k{10, 100}, bad{1.0, 0.0};
  CHECK_THROWS_AS(fit_loglog(k, bad), ValidationError);
  const std::vector<double> same{10, 10}, t{1, 2};
  CHECK_THROWS_AS(fit_loglog(same, t), ValidationError);
}

TEST_CASE("timing a method produces a complete report") {
  int dim = 0;
  const MethodInputs in = reference_inputs(Method::hamiltonian_vf, &dim);
  CHECK(dim == 3);
  const TimingReport report = fit_loglog(time_method(Method::hamiltonian_vf, in, dim, {100, 1000}, 3, 42, 1));
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].points == 100);
  CHECK(report.rows[1].repeats == 3);
  CHECK(report.rows[0].mean_s > 0.0);
  REQUIRE(report.fit.has_value());
  const auto j = nlohmann::json::parse(report_to_json(report));
  for (const char* key : {"method", "sizes", "mean_s", "std_s", "slope", "intercept", "r2", "repeats", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["method"] == "num_hamiltonian_vf");
  CHECK(j["sizes"] == std::vector<int>{100, 1000});
  CHECK(j["seed"] == 42);

  const TimingReport single = time_method(Method::bivector, reference_inputs(Method::bivector, &dim), dim, {50}, 1, 0);
  CHECK(single.rows[0].std_s == 0.0);
  CHECK_THROWS_AS(time_method(Method::bivector, in, 3, {100, 100}, 1, 0), ValidationError);
  CHECK_THROWS_AS(time_method(Method::bivector, in, 3, {100, 1000}, 0, 0), ValidationError);
}

TEST_CASE("every method has reference inputs that run") {
  for (Method m : all_methods()) {
    int dim = 0;
    const MethodInputs in = reference_inputs(m, &dim);
    CAPTURE(method_name(m));
    EvalOptions o;
    o.mode = OutputMode::tensor;
    CHECK_NOTHROW(run_method(m, in, random_mesh(20, dim, 1), o));
  }
}
