#include "poisson/mesh.hpp"

#include <cmath>
#include <string>

#include "poisson/error.hpp"

namespace poisson {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Mesh::Mesh(std::size_t points, int dim, std::vector<double> data)
    : points_(points), dim_(dim), data_(std::move(data)) {
  if (points == 0) throw ValidationError("mesh must have at least one point");
  if (dim < 1) throw ValidationError("mesh dimension must be at least 1");
  if (data_.size() != points * static_cast<std::size_t>(dim))
    throw ValidationError("mesh data has " + std::to_string(data_.size()) + " values, expected " +
                          std::to_string(points * static_cast<std::size_t>(dim)));
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i]))
      throw ValidationError("mesh entry at row " + std::to_string(i / static_cast<std::size_t>(dim)) +
                            " is not finite");
  }
}

Mesh product_mesh(const std::vector<std::vector<double>>& axes) {
  if (axes.empty()) throw ValidationError("product mesh needs at least one axis");
  std::size_t k = 1;
  for (const auto& a : axes) {
    if (a.empty()) throw ValidationError("product mesh axis is empty");
    k *= a.size();
  }
  const std::size_t m = axes.size();
  std::vector<double> data(k * m);
  std::vector<std::size_t> idx(m, 0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < m; ++c) data[r * m + c] = axes[c][idx[c]];
    for (std::size_t c = m; c-- > 0;) {
      if (++idx[c] < axes[c].size()) break;
      idx[c] = 0;
    }
  }
  return Mesh(k, static_cast<int>(m), std::move(data));
}

Mesh corners_mesh(int dim) {
  if (dim < 1) throw ValidationError("mesh dimension must be at least 1");
  return product_mesh(std::vector<std::vector<double>>(static_cast<std::size_t>(dim), {0.0, 1.0}));
}

Mesh random_mesh(std::size_t points, int dim, std::uint64_t seed) {
  if (points == 0) throw ValidationError("mesh must have at least one point");
  if (dim < 1) throw ValidationError("mesh dimension must be at least 1");
  Xoshiro256 rng(seed);
  std::vector<double> data(points * static_cast<std::size_t>(dim));
  for (auto& v : data) v = rng.uniform();
  return Mesh(points, dim, std::move(data));
}

}  // namespace poisson
