#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace poisson {

/// Little-endian float64, C order. Nothing else is read or written.
struct NpyArray {
  std::vector<std::size_t> shape;
  std::vector<double> data;
};

/// Format version 1.0, header padded to a 64-byte boundary.
std::string encode_npy(std::span<const std::size_t> shape, std::span<const double> data);
NpyArray decode_npy(const std::string& bytes);

void write_npy(const std::filesystem::path& path, std::span<const std::size_t> shape,
               std::span<const double> data);
NpyArray read_npy(const std::filesystem::path& path);

}  // namespace poisson
