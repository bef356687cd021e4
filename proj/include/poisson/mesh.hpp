#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace poisson {

/// xoshiro256** seeded through splitmix64. Doubles take the top 53 bits, so every
/// value lies in [0, 1).
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// k points in R^m, row-major. Entries are finite.
class Mesh {
 public:
  Mesh() = default;
  /// Throws ValidationError on k = 0, m = 0, a size mismatch or a non-finite entry.
  Mesh(std::size_t points, int dim, std::vector<double> data);

  std::size_t size() const { return points_; }
  int dim() const { return dim_; }
  const double* data() const { return data_.data(); }
  const std::vector<double>& values() const { return data_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

 private:
  std::size_t points_ = 0;
  int dim_ = 0;
  std::vector<double> data_;
};

/// Cartesian product of the axes with the last axis varying fastest.
Mesh product_mesh(const std::vector<std::vector<double>>& axes);

/// {0,1}^m, last coordinate fastest: (0,..,0), (0,..,1), (0,..,1,0), ...
Mesh corners_mesh(int dim);

Mesh random_mesh(std::size_t points, int dim, std::uint64_t seed);

}  // namespace poisson
