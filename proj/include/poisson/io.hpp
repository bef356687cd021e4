#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "poisson/batch.hpp"
#include "poisson/mesh.hpp"
#include "poisson/multivector.hpp"

namespace poisson {

/// {"dim": 3, "degree": 2, "coeffs": {"1,2": "x3", "1,3": "-x2"}}. Numeric coefficient
/// values are accepted and turned into constants. `expected_dim` > 0 must match "dim".
Multivector multivector_from_json(const std::string& text, int expected_dim = 0);
std::string multivector_to_json(const Multivector& mv);
Multivector read_multivector(const std::filesystem::path& path, int expected_dim = 0);

/// One expression per non-blank line; lines starting with '#' are skipped.
std::vector<std::string> read_function_lines(const std::filesystem::path& path);

enum class TableFormat { csv, npy };

/// Format from the extension: ".npy" is NPY, anything else CSV.
TableFormat format_from_path(const std::filesystem::path& path);

/// CSV: one point per line, comma or whitespace separated, '#' comments. NPY: (k, m) float64.
Mesh read_mesh(const std::filesystem::path& path);
void write_mesh(const std::filesystem::path& path, const Mesh& mesh, TableFormat format);

/// One JSON object per point: {"coeffs": {"1,2": 0.0, ...}, "valid": true}. "valid" only
/// appears for methods with a mask. Non-finite numbers are written as null.
/// A tensor-mode result is written through its upper-triangle keys.
std::string result_to_jsonl(const BatchResult& r);
/// Tensor mode writes the tensor as is; records mode writes (k, keys) with residuals as NaN.
std::string result_to_npy(const BatchResult& r);
/// Header row of keys, one row per point; residuals appear as text.
std::string result_to_csv(const BatchResult& r);

enum class ResultFormat { jsonl, npy, csv };
void write_result(const std::filesystem::path& path, const BatchResult& r, ResultFormat format);

/// Writes via a temporary file and rename, so the target exists only when complete.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace poisson
