#include "hs/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hs {
namespace {

constexpr char kMagic[4] = {'H', 'S', 'F', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_field(const Field& f, const std::string& path) {
  require_valid(f);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(kMagic, 4);
  put_u64(os, static_cast<std::uint64_t>(f.grid.dim));
  put_u64(os, static_cast<std::uint64_t>(f.grid.points_per_axis));
  put_f64(os, f.grid.half_length);
  put_f64(os, f.time);
  for (const cplx& v : f.values) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a field file (bad magic): " + path);
  const auto dim = static_cast<int>(get_u64(is));
  const auto n = static_cast<int>(get_u64(is));
  const double L = get_f64(is);
  const double t = get_f64(is);
  Field f;
  f.grid = make_grid(dim, n, L);
  f.time = t;
  f.values.resize(f.grid.total_points());
  for (cplx& v : f.values) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    v = cplx{re, im};
  }
  if (!is) throw std::runtime_error("truncated field file: " + path);
  return f;
}

}  // namespace hs
