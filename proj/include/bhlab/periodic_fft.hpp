#pragma once

#include "bhlab/grid.hpp"

namespace bhlab {

/// Samples of the whole-space Fourier transform Fq(xi) = int q e^{-i xi.x} dx on the
/// lattice xi = (2 pi / L) j, j in (-M/2, M/2]^3, M = N + 1, for a field that vanishes
/// on the box boundary. Storage index j is wrapped (0..M-1).
struct PeriodicSpectrum {
  BoxDomain box;
  Grid3<cplx> values;

  PeriodicSpectrum() = default;
  explicit PeriodicSpectrum(const BoxDomain& b) : box(b), values(b.nodes + 1) {}

  int side() const { return values.side(); }
  double spacing() const { return 2.0 * std::numbers::pi / box.length; }
  /// Signed lattice index for a wrapped storage index.
  int signed_index(int i) const { return i <= side() / 2 ? i : i - side(); }
  int wrapped_index(int j) const { return j >= 0 ? j : j + side(); }
  double wavenumber(int i) const { return spacing() * signed_index(i); }
};

/// h^3-weighted FFT over nodes 0..N (the periodic cell); node N+1 is its periodic image.
PeriodicSpectrum periodic_fourier_transform(const ScalarField& field);

/// q(x) = L^-3 sum_xi Fq(xi) e^{i xi.x} at every node; node N+1 repeats node 0.
ScalarField periodic_inverse_transform(const PeriodicSpectrum& spectrum);

}  // namespace bhlab
