#pragma once

#include <Eigen/Dense>

#include "bhlab/grid.hpp"

namespace bhlab {

/// Forward sine transform of the interior nodes:
///   c(m,n,p) = (2/(N+1))^3 sum f(x_i,y_j,z_l) sin(m pi x_i/L) sin(n pi y_j/L) sin(p pi z_l/L).
/// Boundary node values are ignored.
SineSpectrum sine_transform(const ScalarField& field);

/// Sums the sine series at every node; boundary nodes come out exactly zero.
ScalarField inverse_sine_transform(const SineSpectrum& spectrum);

/// Largest |f| over boundary nodes.
double boundary_max_abs(const ScalarField& field);

/// 2-D analogue on an N x N face lattice (column-major, first index fastest).
Eigen::ArrayXXcd sine_analyze_2d(const Eigen::ArrayXXcd& values);
Eigen::ArrayXXcd sine_synthesize_2d(const Eigen::ArrayXXcd& coeffs);

namespace detail {
/// In-place unnormalised RODFT00 along every axis of an interleaved complex
/// cube (rank 3) or square (rank 2) of side n.
void rodft00_inplace(cplx* data, int n, int rank);
}  // namespace detail

}  // namespace bhlab
