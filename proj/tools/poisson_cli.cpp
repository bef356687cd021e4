// Command-line front end: `poisson eval`, `poisson mesh`, `poisson bench`.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "poisson/bench.hpp"
#include "poisson/error.hpp"
#include "poisson/io.hpp"
#include "poisson/mesh.hpp"
#include "poisson/num_eval.hpp"

namespace {

using namespace poisson;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return 2;
    case ErrorKind::parse: return 3;
    case ErrorKind::unbound_parameter: return 4;
    case ErrorKind::dimension_mismatch: return 5;
    case ErrorKind::io: return 6;
  }
  return 1;
}

struct InputFlags {
  int dim = 0;
  std::string bivector, multivector, alpha, beta, lambda;
  std::string h, f, g, f0, scalar;
  std::vector<std::string> functions;
  std::string functions_file;
  std::vector<std::string> params;

  void attach(CLI::App* app) {
    app->add_option("--dim", dim, "Ambient dimension m");
    app->add_option("--bivector", bivector, "Bivector JSON file (P)");
    app->add_option("--multivector", multivector, "Multivector JSON file (A for coboundary/curl)");
    app->add_option("--scalar", scalar, "Degree-0 A for the coboundary operator");
    app->add_option("--alpha", alpha, "1-form JSON file");
    app->add_option("--beta", beta, "1-form JSON file");
    app->add_option("--lambda", lambda, "2-form JSON file");
    app->add_option("--h", h, "Hamiltonian function");
    app->add_option("--f", f, "First function of the bracket");
    app->add_option("--g", g, "Second function of the bracket");
    app->add_option("--f0", f0, "Volume density f0 (default 1)");
    app->add_option("--function", functions, "Flaschka-Ratiu function K_i, repeat in order");
    app->add_option("--functions-file", functions_file, "File with one K_i per line");
    app->add_option("--param", params, "Parameter binding name=value, repeatable");
  }

  bool any_input() const {
    return !bivector.empty() || !multivector.empty() || !scalar.empty() || !alpha.empty() ||
           !beta.empty() || !lambda.empty() || !h.empty() || !f.empty() || !g.empty() ||
           !f0.empty() || !functions.empty() || !functions_file.empty();
  }
};

/// "@path" reads the first expression from a one-per-line file.
std::string function_text(const std::string& value) {
  if (value.empty() || value[0] != '@') return value;
  const auto lines = read_function_lines(value.substr(1));
  if (lines.empty()) throw ValidationError("no expression in " + value.substr(1));
  return lines.front();
}

ParameterMap parse_params(const std::vector<std::string>& items) {
  ParameterMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("parameter binding must look like name=value: " + item);
    std::size_t used = 0;
    double v = 0.0;
    const std::string text = item.substr(eq + 1);
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw ValidationError("bad parameter value: " + item);
    out[item.substr(0, eq)] = v;
  }
  return out;
}

MethodInputs build_inputs(Method method, const InputFlags& in) {
  if (in.dim < 1) throw ValidationError("--dim is required");
  const int m = in.dim;
  MethodInputs out;
  auto need = [&](const std::string& value, const char* flag) {
    if (value.empty()) throw ValidationError(std::string(method_name(method)) + " needs " + flag);
  };
  auto needs_bivector = [&] {
    need(in.bivector, "--bivector");
    out.bivector = read_multivector(in.bivector, m);
  };
  if (!in.f0.empty()) out.f0 = parse(function_text(in.f0), m);

  switch (method) {
    case Method::bivector:
    case Method::bivector_to_matrix:
    case Method::linear_normal_form_r3:
    case Method::modular_vf: needs_bivector(); break;
    case Method::hamiltonian_vf:
      needs_bivector();
      need(in.h, "--h");
      out.h = parse(function_text(in.h), m);
      break;
    case Method::poisson_bracket:
      needs_bivector();
      need(in.f, "--f");
      need(in.g, "--g");
      out.f = parse(function_text(in.f), m);
      out.g = parse(function_text(in.g), m);
      break;
    case Method::sharp_morphism:
      needs_bivector();
      need(in.alpha, "--alpha");
      out.alpha = read_multivector(in.alpha, m);
      break;
    case Method::coboundary_operator:
      needs_bivector();
      if (!in.scalar.empty()) {
        out.multivector = Multivector::scalar(m, parse(function_text(in.scalar), m));
      } else {
        need(in.multivector, "--multivector or --scalar");
        out.multivector = read_multivector(in.multivector, m);
      }
      break;
    case Method::curl_operator:
      need(in.multivector, "--multivector");
      out.multivector = read_multivector(in.multivector, m);
      break;
    case Method::one_forms_bracket:
      needs_bivector();
      need(in.alpha, "--alpha");
      need(in.beta, "--beta");
      out.alpha = read_multivector(in.alpha, m);
      out.beta = read_multivector(in.beta, m);
      break;
    case Method::gauge_transformation:
      needs_bivector();
      need(in.lambda, "--lambda");
      out.lambda = read_multivector(in.lambda, m);
      break;
    case Method::flaschka_ratiu_bivector: {
      std::vector<std::string> ks = in.functions;
      if (!in.functions_file.empty()) {
        const auto lines = read_function_lines(in.functions_file);
        ks.insert(ks.end(), lines.begin(), lines.end());
      }
      for (const auto& k : ks) out.casimirs.push_back(parse(k, m));
      break;
    }
  }
  return out;
}

Method parse_method(const std::string& name) {
  auto m = method_from_name(name);
  if (!m) m = method_from_name("num_" + name);
  if (!m) throw ValidationError("unknown method '" + name + "'");
  return *m;
}

Mesh load_mesh(const std::string& source, int dim, std::size_t k, std::uint64_t seed) {
  if (source == "corners") return corners_mesh(dim);
  if (source == "random") return random_mesh(k, dim, seed);
  Mesh mesh = read_mesh(source);
  if (mesh.dim() != dim)
    throw DimensionError("mesh has dimension " + std::to_string(mesh.dim()) + ", expected " +
                         std::to_string(dim));
  return mesh;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1 || v != std::floor(v))
      throw ValidationError("bad size '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical Poisson geometry over point meshes"};
  // -h stays free for the Hamiltonian flag.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "Run one of the twelve methods over a mesh");
  std::string eval_method;
  InputFlags eval_in;
  std::string eval_mesh = "corners";
  std::size_t eval_k = 1000;
  std::uint64_t eval_seed = 0;
  std::string eval_out;
  std::string eval_format;
  std::string eval_mode;
  unsigned eval_workers = 0;
  eval->add_option("method", eval_method, "Method name, e.g. num_bivector")->required();
  eval_in.attach(eval);
  eval->add_option("--mesh", eval_mesh, "corners, random, or a CSV/NPY file");
  eval->add_option("--k", eval_k, "Points for --mesh random");
  eval->add_option("--seed", eval_seed, "Seed for --mesh random");
  eval->add_option("--out", eval_out, "Output file")->required();
  eval->add_option("--format", eval_format, "jsonl, npy or csv (default from extension)")
      ->check(CLI::IsMember({"jsonl", "npy", "csv"}));
  eval->add_option("--mode", eval_mode, "records or tensor (default: tensor for npy)")
      ->check(CLI::IsMember({"records", "tensor"}));
  eval->add_option("--workers", eval_workers, "Worker threads, 0 = all hardware threads");

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "Write a corners or random mesh");
  std::string mesh_kind;
  int mesh_dim = 0;
  long long mesh_k = 1000;
  std::uint64_t mesh_seed = 0;
  std::string mesh_out;
  std::string mesh_format;
  mesh_cmd->add_option("kind", mesh_kind, "corners or random")
      ->required()
      ->check(CLI::IsMember({"corners", "random"}));
  mesh_cmd->add_option("--dim", mesh_dim, "Dimension m")->required();
  mesh_cmd->add_option("--k", mesh_k, "Number of random points");
  mesh_cmd->add_option("--seed", mesh_seed, "Seed for random points");
  mesh_cmd->add_option("--out", mesh_out, "Output file (.csv or .npy)")->required();
  mesh_cmd->add_option("--format", mesh_format, "csv or npy (default from extension)")
      ->check(CLI::IsMember({"csv", "npy"}));

  // bench
  auto* bench = app.add_subcommand("bench", "Time a method across mesh sizes and fit log-log");
  std::string bench_method;
  InputFlags bench_in;
  std::string bench_sizes = "1000,10000,100000,1000000";
  bool bench_large = false;
  unsigned bench_repeats = 5;
  std::uint64_t bench_seed = 0;
  unsigned bench_workers = 1;
  std::string bench_report;
  bench->add_option("method", bench_method, "Method name")->required();
  bench_in.attach(bench);
  bench->add_option("--sizes", bench_sizes, "Comma separated mesh sizes");
  bench->add_flag("--large", bench_large, "Append 10^7 to the sizes");
  bench->add_option("--repeats", bench_repeats, "Timed runs per size");
  bench->add_option("--seed", bench_seed, "Base seed; size i uses seed + i");
  bench->add_option("--workers", bench_workers, "Worker threads");
  bench->add_option("--report", bench_report, "Report JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) {
      const Method method = parse_method(eval_method);
      const MethodInputs inputs = build_inputs(method, eval_in);
      const Mesh mesh = load_mesh(eval_mesh, eval_in.dim, eval_k, eval_seed);

      ResultFormat format = ResultFormat::jsonl;
      if (eval_format == "npy" || (eval_format.empty() && format_from_path(eval_out) == TableFormat::npy)) {
        format = ResultFormat::npy;
      } else if (eval_format == "csv" ||
                 (eval_format.empty() && std::filesystem::path(eval_out).extension() == ".csv")) {
        format = ResultFormat::csv;
      }
      EvalOptions opts;
      opts.params = parse_params(eval_in.params);
      opts.workers = eval_workers;
      opts.mode = format == ResultFormat::npy ? OutputMode::tensor : OutputMode::records;
      if (eval_mode == "records") opts.mode = OutputMode::records;
      if (eval_mode == "tensor") opts.mode = OutputMode::tensor;

      const auto t0 = std::chrono::steady_clock::now();
      const BatchResult result = run_method(method, inputs, mesh, opts);
      const auto t1 = std::chrono::steady_clock::now();
      write_result(eval_out, result, format);
      std::size_t invalid = 0;
      for (std::size_t p = 0; p < result.points(); ++p) invalid += !result.is_valid(p);
      std::printf("%s: %zu points, %.6f s, %zu non-finite, %zu invalid -> %s\n",
                  std::string(method_name(method)).c_str(), result.points(),
                  std::chrono::duration<double>(t1 - t0).count(), result.non_finite, invalid,
                  eval_out.c_str());
      return 0;
    }

    if (mesh_cmd->parsed()) {
      if (mesh_dim < 1) throw ValidationError("--dim must be at least 1");
      Mesh mesh;
      if (mesh_kind == "corners") {
        mesh = corners_mesh(mesh_dim);
      } else {
        if (mesh_k < 1) throw ValidationError("--k must be at least 1");
        mesh = random_mesh(static_cast<std::size_t>(mesh_k), mesh_dim, mesh_seed);
      }
      TableFormat format = format_from_path(mesh_out);
      if (mesh_format == "csv") format = TableFormat::csv;
      if (mesh_format == "npy") format = TableFormat::npy;
      write_mesh(mesh_out, mesh, format);
      std::printf("%zu x %d mesh -> %s\n", mesh.size(), mesh.dim(), mesh_out.c_str());
      return 0;
    }

    if (bench->parsed()) {
      const Method method = parse_method(bench_method);
      std::vector<std::size_t> sizes = parse_sizes(bench_sizes);
      if (bench_large) sizes.push_back(10'000'000);
      if (sizes.size() < 2) throw ValidationError("bench needs at least two mesh sizes to fit");
      int dim = 0;
      MethodInputs inputs;
      if (bench_in.any_input()) {
        inputs = build_inputs(method, bench_in);
        dim = bench_in.dim;
      } else {
        inputs = reference_inputs(method, &dim);
      }
      TimingReport report =
          fit_loglog(time_method(method, inputs, dim, sizes, bench_repeats, bench_seed, bench_workers));
      write_file_atomic(bench_report, report_to_json(report));
      std::printf("%s: slope %.4f, r2 %.4f over %zu sizes -> %s\n", report.method.c_str(),
                  report.fit->slope, report.fit->r2, report.rows.size(), bench_report.c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(ErrorKind::io);
  }
  return 0;
}
