#include "poisson/io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "poisson/error.hpp"
#include "poisson/npy.hpp"

namespace poisson {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Multivectors and functions

Multivector multivector_from_json(const std::string& text, int expected_dim) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ValidationError(std::string("multivector JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("degree") || !j.contains("coeffs") ||
      !j["dim"].is_number_integer() || !j["degree"].is_number_integer() || !j["coeffs"].is_object())
    throw ValidationError("multivector JSON needs integer \"dim\", \"degree\" and object \"coeffs\"");
  const int dim = j["dim"].get<int>();
  if (expected_dim > 0 && dim != expected_dim)
    throw DimensionError("multivector has dimension " + std::to_string(dim) + ", expected " +
                         std::to_string(expected_dim));
  RawMultivector raw;
  raw.degree = j["degree"].get<int>();
  for (const auto& [key, value] : j["coeffs"].items()) {
    std::string src;
    if (value.is_string()) {
      src = value.get<std::string>();
    } else if (value.is_number_integer()) {
      src = std::to_string(value.get<long long>());
    } else if (value.is_number()) {
      src = format_double(value.get<double>());
    } else {
      throw ValidationError("coefficient (" + key + ") must be a string or a number");
    }
    raw.coeffs.emplace_back(key_from_string(key), std::move(src));
  }
  return validate_multivector(raw, dim);
}

std::string multivector_to_json(const Multivector& mv) {
  ordered_json j;
  j["dim"] = mv.dim();
  j["degree"] = mv.degree();
  j["coeffs"] = ordered_json::object();
  for (const auto& [k, v] : mv.coeffs()) j["coeffs"][key_to_string(k)] = render(v);
  return j.dump(2) + "\n";
}

Multivector read_multivector(const std::filesystem::path& path, int expected_dim) {
  return multivector_from_json(read_file(path), expected_dim);
}

std::vector<std::string> read_function_lines(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Meshes

TableFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".npy" ? TableFormat::npy : TableFormat::csv;
}

Mesh read_mesh(const std::filesystem::path& path) {
  if (format_from_path(path) == TableFormat::npy) {
    NpyArray a = read_npy(path);
    if (a.shape.size() != 2) throw ValidationError("mesh NPY must have shape (k, m)");
    return Mesh(a.shape[0], static_cast<int>(a.shape[1]), std::move(a.data));
  }
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    std::size_t n = 0;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size())
        throw ValidationError("mesh line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      data.push_back(v);
      ++n;
    }
    if (rows == 0) cols = n;
    if (n != cols)
      throw ValidationError("mesh line " + std::to_string(lineno) + " has " + std::to_string(n) +
                            " values, expected " + std::to_string(cols));
    ++rows;
  }
  return Mesh(rows, static_cast<int>(cols), std::move(data));
}

void write_mesh(const std::filesystem::path& path, const Mesh& mesh, TableFormat format) {
  if (format == TableFormat::npy) {
    const std::size_t shape[2] = {mesh.size(), static_cast<std::size_t>(mesh.dim())};
    write_file_atomic(path, encode_npy(shape, mesh.values()));
    return;
  }
  std::string out;
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    const auto row = mesh.row(p);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// Results

namespace {

/// Value of key c at point p for either layout. Text output prints -0.0 as 0.0.
double keyed_value(const BatchResult& r, std::size_t p, std::size_t c) {
  if (r.mode == OutputMode::records) return r.values[p * r.keys.size() + c] + 0.0;
  std::size_t off = 0;
  for (int idx : r.keys[c]) off = off * static_cast<std::size_t>(r.dim) + static_cast<std::size_t>(idx - 1);
  return r.values[p * r.row_size() + off] + 0.0;
}

bool has_residual(const BatchResult& r, std::size_t p, std::size_t c) {
  return r.mode == OutputMode::records && r.residuals.count(p * r.keys.size() + c);
}

}  // namespace

std::string result_to_jsonl(const BatchResult& r) {
  std::string out;
  for (std::size_t p = 0; p < r.points(); ++p) {
    ordered_json rec;
    ordered_json coeffs = ordered_json::object();
    for (std::size_t c = 0; c < r.keys.size(); ++c) {
      const std::string key = key_to_string(r.keys[c]);
      if (has_residual(r, p, c)) {
        coeffs[key] = r.residuals.at(p * r.keys.size() + c);
        continue;
      }
      const double v = keyed_value(r, p, c);
      if (std::isfinite(v)) {
        coeffs[key] = v;
      } else {
        coeffs[key] = nullptr;
      }
    }
    rec["coeffs"] = std::move(coeffs);
    if (r.has_mask()) rec["valid"] = r.is_valid(p);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::string result_to_npy(const BatchResult& r) {
  return encode_npy(r.shape, r.values);
}

std::string result_to_csv(const BatchResult& r) {
  std::string out;
  for (std::size_t c = 0; c < r.keys.size(); ++c) {
    if (c) out += ',';
    out += '"' + key_to_string(r.keys[c]) + '"';
  }
  if (r.has_mask()) out += r.keys.empty() ? "valid" : ",valid";
  out += '\n';
  for (std::size_t p = 0; p < r.points(); ++p) {
    for (std::size_t c = 0; c < r.keys.size(); ++c) {
      if (c) out += ',';
      if (has_residual(r, p, c)) {
        out += '"' + r.residuals.at(p * r.keys.size() + c) + '"';
      } else {
        out += format_double(keyed_value(r, p, c));
      }
    }
    if (r.has_mask()) {
      if (!r.keys.empty()) out += ',';
      out += r.is_valid(p) ? "true" : "false";
    }
    out += '\n';
  }
  return out;
}

void write_result(const std::filesystem::path& path, const BatchResult& r, ResultFormat format) {
  switch (format) {
    case ResultFormat::jsonl: write_file_atomic(path, result_to_jsonl(r)); return;
    case ResultFormat::npy: write_file_atomic(path, result_to_npy(r)); return;
    case ResultFormat::csv: write_file_atomic(path, result_to_csv(r)); return;
  }
}

}  // namespace poisson
