#pragma once

#include "bhlab/grid.hpp"
#include "bhlab/periodic_fft.hpp"

namespace bhlab {

/// ||f||_{H^s} from the lattice spectrum:
///   ( L^-3 sum_xi |Ff(xi)|^2 (1 + |xi|^2)^s )^{1/2}
/// which is (2 pi)^-3 sum |Ff|^2 (1+|xi|^2)^s dxi^3 with dxi = 2 pi / L.
/// s = 0 reproduces the grid L2 norm exactly (Parseval). Negative s gives H^{-|s|}.
double sobolev_norm(const PeriodicSpectrum& spectrum, double s);
double sobolev_norm(const ScalarField& field, double s);

}  // namespace bhlab
