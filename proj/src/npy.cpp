#include "poisson/npy.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

#include "poisson/error.hpp"

namespace poisson {

static_assert(std::endian::native == std::endian::little, "npy I/O assumes a little-endian host");

namespace {

constexpr char kMagic[] = "\x93NUMPY";

std::string shape_text(std::span<const std::size_t> shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    s += std::to_string(shape[i]);
    if (shape.size() == 1 || i + 1 < shape.size()) s += ",";
    if (i + 1 < shape.size()) s += " ";
  }
  return s + ")";
}

}  // namespace

std::string encode_npy(std::span<const std::size_t> shape, std::span<const double> data) {
  std::size_t count = 1;
  for (auto d : shape) count *= d;
  if (count != data.size()) throw IoError("npy: shape does not match data length");

  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': " + shape_text(shape) + ", }";
  const std::size_t preamble = 10;  // magic(6) + version(2) + header length(2)
  const std::size_t total = ((preamble + header.size() + 1 + 63) / 64) * 64;
  header.append(total - preamble - header.size() - 1, ' ');
  header += '\n';

  std::string out(kMagic, 6);
  out += '\x01';
  out += '\x00';
  const auto len = static_cast<std::uint16_t>(header.size());
  out += static_cast<char>(len & 0xff);
  out += static_cast<char>(len >> 8);
  out += header;
  const std::size_t offset = out.size();
  out.resize(offset + data.size() * sizeof(double));
  if (!data.empty()) std::memcpy(out.data() + offset, data.data(), data.size() * sizeof(double));
  return out;
}

NpyArray decode_npy(const std::string& bytes) {
  if (bytes.size() < 10 || bytes.compare(0, 6, kMagic, 6) != 0) throw IoError("npy: bad magic");
  const auto major = static_cast<unsigned char>(bytes[6]);
  std::size_t header_len = 0;
  std::size_t offset = 0;
  if (major == 1) {
    header_len = static_cast<unsigned char>(bytes[8]) | (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    offset = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw IoError("npy: truncated header");
    for (int i = 3; i >= 0; --i) header_len = (header_len << 8) | static_cast<unsigned char>(bytes[8 + static_cast<std::size_t>(i)]);
    offset = 12;
  } else {
    throw IoError("npy: unsupported format version " + std::to_string(major));
  }
  if (bytes.size() < offset + header_len) throw IoError("npy: truncated header");
  const std::string header = bytes.substr(offset, header_len);

  std::smatch m;
  if (!std::regex_search(header, m, std::regex(R"('descr'\s*:\s*'([^']*)')")) ||
      (m[1] != "<f8" && m[1] != "=f8" && m[1] != "f8"))
    throw IoError("npy: only little-endian float64 is supported");
  if (!std::regex_search(header, m, std::regex(R"('fortran_order'\s*:\s*(True|False))")) || m[1] == "True")
    throw IoError("npy: fortran order is not supported");
  if (!std::regex_search(header, m, std::regex(R"('shape'\s*:\s*\(([^)]*)\))")))
    throw IoError("npy: missing shape");

  NpyArray arr;
  std::stringstream dims(m[1].str());
  std::string item;
  std::size_t count = 1;
  while (std::getline(dims, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto d = static_cast<std::size_t>(std::stoull(item));
    arr.shape.push_back(d);
    count *= d;
  }
  const std::size_t data_offset = offset + header_len;
  if (bytes.size() - data_offset != count * sizeof(double))
    throw IoError("npy: data length does not match shape");
  arr.data.resize(count);
  if (count) std::memcpy(arr.data.data(), bytes.data() + data_offset, count * sizeof(double));
  return arr;
}

void write_npy(const std::filesystem::path& path, std::span<const std::size_t> shape,
               std::span<const double> data) {
  const std::string bytes = encode_npy(shape, data);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

NpyArray read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_npy(buf.str());
}

}  // namespace poisson
