#include "bhlab/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace bhlab {

namespace {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw InvalidInput("read_field: truncated header or payload");
  return value;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& field) {
  os.write(kFieldMagic, 4);
  put<std::uint32_t>(os, kFieldVersion);
  put<std::uint32_t>(os, std::uint32_t(field.box.nodes));
  put<std::uint32_t>(os, 0);
  put<double>(os, field.box.length);
  const auto& a = field.array();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    put<double>(os, a[i].real());
    put<double>(os, a[i].imag());
  }
}

void write_field(const std::filesystem::path& path, const ScalarField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot open " + path.string() + " for writing");
  write_field(os, field);
}

ScalarField read_field(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kFieldMagic, 4) != 0) throw InvalidInput("read_field: bad magic");
  const auto version = get<std::uint32_t>(is);
  if (version != kFieldVersion) throw InvalidInput("read_field: unsupported version " + std::to_string(version));
  BoxDomain box;
  box.nodes = int(get<std::uint32_t>(is));
  get<std::uint32_t>(is);
  box.length = get<double>(is);
  box.validate();
  ScalarField f(box);
  auto& a = f.array();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    a[i] = cplx(re, im);
  }
  return f;
}

ScalarField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open " + path.string());
  return read_field(is);
}

}  // namespace bhlab
