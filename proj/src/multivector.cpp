#include "poisson/multivector.hpp"

#include <sstream>

#include "poisson/error.hpp"

namespace poisson {

std::string key_to_string(const IndexTuple& key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(key[i]);
  }
  return out;
}

IndexTuple key_from_string(const std::string& text) {
  IndexTuple key;
  if (text.empty()) return key;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw ValidationError("malformed key '" + text + "'");
    }
    while (used < part.size() && part[used] == ' ') ++used;
    if (used != part.size()) throw ValidationError("malformed key '" + text + "'");
    key.push_back(v);
  }
  return key;
}

std::vector<IndexTuple> increasing_tuples(int dim, int degree) {
  std::vector<IndexTuple> out;
  if (degree < 0 || degree > dim) return out;
  IndexTuple t(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) t[static_cast<std::size_t>(i)] = i + 1;
  for (;;) {
    out.push_back(t);
    int pos = degree - 1;
    while (pos >= 0 && t[static_cast<std::size_t>(pos)] == dim - (degree - 1 - pos)) --pos;
    if (pos < 0) break;
    ++t[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < degree; ++j)
      t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

void check_key(const IndexTuple& key, int dim, int degree) {
  const std::string shown = "(" + key_to_string(key) + ")";
  if (static_cast<int>(key.size()) != degree)
    throw ValidationError("key " + shown + " has length " + std::to_string(key.size()) +
                          ", expected " + std::to_string(degree));
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] < 1 || key[i] > dim)
      throw ValidationError("key " + shown + ": index out of range 1.." + std::to_string(dim));
    if (i && key[i] <= key[i - 1])
      throw ValidationError("key " + shown + ": indices not strictly increasing");
  }
}

}  // namespace

Multivector::Multivector(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1) throw ValidationError("dimension must be at least 1");
  if (degree < 0) throw ValidationError("degree must be non-negative");
}

Expr Multivector::coeff(const IndexTuple& key) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? Expr() : it->second;
}

void Multivector::set(const IndexTuple& key, const Expr& value) {
  check_key(key, dim_, degree_);
  if (max_coordinate(value) > dim_)
    throw DimensionError("coefficient (" + key_to_string(key) + ") uses a coordinate beyond x" +
                         std::to_string(dim_));
  coeffs_[key] = value;
}

void Multivector::accumulate(const IndexTuple& key, const Expr& value) {
  if (value.is_zero()) return;
  check_key(key, dim_, degree_);
  auto it = coeffs_.find(key);
  if (it == coeffs_.end()) {
    coeffs_.emplace(key, value);
    return;
  }
  it->second = it->second + value;
  if (it->second.is_zero()) coeffs_.erase(it);
}

Multivector Multivector::pruned() const {
  Multivector out(dim_, degree_);
  for (const auto& [k, v] : coeffs_) {
    if (!v.is_zero()) out.coeffs_.emplace(k, v);
  }
  return out;
}

Multivector Multivector::scalar(int dim, const Expr& e) {
  Multivector out(dim, 0);
  out.set({}, e);
  return out;
}

Multivector validate_multivector(const RawMultivector& raw, int dim) {
  Multivector out(dim, raw.degree);
  for (const auto& [key, text] : raw.coeffs) {
    check_key(key, dim, raw.degree);
    if (out.coeffs().count(key))
      throw ValidationError("duplicate key (" + key_to_string(key) + ")");
    Expr e;
    try {
      e = parse(text, dim);
    } catch (const ParseError& err) {
      throw ParseError("coefficient (" + key_to_string(key) + "): " + text, err.position());
    }
    out.set(key, e);
  }
  return out;
}

Multivector make_multivector(int dim, int degree,
                             const std::vector<std::pair<IndexTuple, std::string>>& coeffs) {
  return validate_multivector(RawMultivector{degree, coeffs}, dim);
}

std::map<IndexTuple, std::string> render(const Multivector& mv) {
  std::map<IndexTuple, std::string> out;
  for (const auto& [k, v] : mv.coeffs()) out.emplace(k, render(v));
  return out;
}

std::set<std::string> free_parameters(const Multivector& mv) {
  std::set<std::string> out;
  for (const auto& [k, v] : mv.coeffs()) {
    auto p = free_parameters(v);
    out.insert(p.begin(), p.end());
  }
  return out;
}

}  // namespace poisson
