#pragma once

#include <array>
#include <cstdint>

#include "bhlab/grid.hpp"
#include "bhlab/probes.hpp"

namespace bhlab {

/// Linearised Neumann data on one face. Arrays are N x N over the face's interior
/// nodes; rows follow the lower-numbered tangential axis, columns the other.
struct FaceTrace {
  int axis = 0;              // normal axis
  int side = 0;              // 0: coordinate 0, 1: coordinate L
  double outward_sign = -1;  // outward normal = outward_sign * e_axis
  Eigen::ArrayXXcd normal_derivative;            // d_nu u1
  Eigen::ArrayXXcd normal_derivative_laplacian;  // d_nu (Delta u1)

  int tangential(int which) const { return which == 0 ? (axis == 0 ? 1 : 0) : (axis == 2 ? 1 : 2); }
};

/// Faces ordered x=0, x=L, y=0, y=L, z=0, z=L.
struct FaceTraces {
  BoxDomain box;
  std::array<FaceTrace, 6> faces;

  /// Unweighted discrete L2 norm over both components of all faces.
  double l2_norm() const;
  bool all_finite() const;
};

struct NoiseModel {
  double delta = 0;         // relative noise level
  std::uint64_t seed = 0;
};

/// Face-integration rule for the boundary pairing.
enum class FaceQuadrature {
  SineExact,   // trace sine series integrated exactly against the separable probe
  Trapezoid,   // nodal trapezoid rule on the uniform face lattice
};

/// Normal derivatives of u1 and Delta u1 on the six faces by term-wise differentiation
/// of the sine series.
FaceTraces navier_traces(const SineSpectrum& u1);

/// Adds i.i.d. complex Gaussian noise, rescaled so that ||noise|| = delta ||traces||.
/// delta = 0 returns the input unchanged.
FaceTraces add_noise(const FaceTraces& traces, const NoiseModel& model);

/// sum over faces of int d_nu(Delta u1) v dS + int d_nu u1 (Delta v) dS for
/// v = e^{i zeta2.x}, Delta v = -kappa v.
cplx boundary_pairing(const FaceTraces& traces, const CVec3<double>& zeta2, cplx kappa,
                      FaceQuadrature quadrature = FaceQuadrature::SineExact);

/// Euclidean norm of the pairing viewed as a linear functional on the nodal trace
/// values, so |pairing(t)| <= functional_norm * ||t|| for any traces t.
double pairing_functional_norm(const BoxDomain& box, const CVec3<double>& zeta2, cplx kappa,
                               FaceQuadrature quadrature = FaceQuadrature::SineExact);

/// int_0^L sin(n pi y / L) e^{i beta y} dy for n = 1..N (entry n-1).
Eigen::ArrayXcd sine_exponential_integrals(const BoxDomain& box, cplx beta);

}  // namespace bhlab
