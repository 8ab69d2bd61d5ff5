#pragma once

#include <filesystem>
#include <iosfwd>

#include "bhlab/grid.hpp"

namespace bhlab {

// Binary field dump, all little-endian:
//   offset 0  char[4]  magic "BHFD"
//   offset 4  uint32   version (1)
//   offset 8  uint32   N (interior nodes per axis)
//   offset 12 uint32   reserved (0)
//   offset 16 float64  L
//   offset 24 payload  (N+2)^3 x {float64 re, float64 im}, x fastest, then y, then z
inline constexpr char kFieldMagic[4] = {'B', 'H', 'F', 'D'};
inline constexpr std::uint32_t kFieldVersion = 1;

void write_field(std::ostream& os, const ScalarField& field);
void write_field(const std::filesystem::path& path, const ScalarField& field);
ScalarField read_field(std::istream& is);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace bhlab
