#pragma once

// Orthonormal frames and complex exponential probe vectors zeta with
// zeta . zeta = kappa (bilinear product, no conjugation).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>

#include "bhlab/errors.hpp"

namespace bhlab {

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T>
using CVec3 = Eigen::Matrix<std::complex<T>, 3, 1>;

template <typename T = double>
struct Frame {
  Vec3<T> omega;
  Vec3<T> omega1;
  Vec3<T> omega2;
};

template <typename T = double>
struct ProbeParams {
  T k{1};  // wavenumber
  T b{0};  // attenuation, 0 = unattenuated
  T a{1};  // imaginary growth
  T r{0};  // frequency radius
};

template <typename T = double>
struct CgoPair {
  CVec3<T> zeta1;
  CVec3<T> zeta2;
  std::complex<T> kappa;
};

/// Bilinear dot product u . v (no conjugation).
template <typename DerivedA, typename DerivedB>
auto bilinear_dot(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
  return (u.array() * v.array()).sum();
}

/// Completes omega to a right-handed orthonormal frame. The standard axis
/// least aligned with omega (lowest index on ties) is Gram-Schmidt'ed
/// against omega; the third vector is omega x omega1.
template <typename T>
Frame<T> orthonormal_frame(const Vec3<T>& omega) {
  const T norm = omega.norm();
  if (!std::isfinite(norm) || std::abs(norm - T(1)) > T(1e-12)) {
    std::ostringstream os;
    os << "orthonormal_frame: direction must be a unit vector, got |omega| = " << norm;
    throw InvalidInput(os.str());
  }
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(omega[i]) < std::abs(omega[axis])) axis = i;
  }
  Vec3<T> e = Vec3<T>::Unit(axis);
  Vec3<T> w1 = e - omega.dot(e) * omega;
  w1.normalize();
  Vec3<T> w2 = omega.cross(w1);
  w2.normalize();
  return {omega, w1, w2};
}

template <typename T>
void validate_probe_params(const ProbeParams<T>& p) {
  std::ostringstream os;
  if (!(p.k >= T(1))) os << "k must be >= 1 (got " << p.k << "); ";
  if (!(p.b >= T(0))) os << "b must be >= 0 (got " << p.b << "); ";
  if (!(p.a > T(0))) os << "a must be > 0 (got " << p.a << "); ";
  if (!(p.r >= T(0))) os << "r must be >= 0 (got " << p.r << "); ";
  if (os.tellp() == 0 && p.k * p.k + p.a * p.a < p.r * p.r / T(4)) {
    os << "probe existence condition k^2 + a^2 >= r^2/4 violated (k=" << p.k << ", a=" << p.a
       << ", r=" << p.r << ")";
  }
  if (os.tellp() != 0) throw InvalidInput("invalid probe parameters: " + os.str());
}

/// Principal square root X + iY of k^2 + a^2 - r^2/4 + i k b.
/// Returns (X, Y) with X >= 0, Y >= 0; b = 0 is the exact real root.
template <typename T>
std::pair<T, T> attenuated_sqrt(const ProbeParams<T>& p) {
  validate_probe_params(p);
  const T re = p.k * p.k + p.a * p.a - p.r * p.r / T(4);
  if (p.b == T(0)) return {std::sqrt(re), T(0)};
  const T im = p.k * p.b;
  // X^2 - Y^2 = re, 2XY = im; X from the half-sum avoids cancellation.
  const T x = std::sqrt((re + std::hypot(re, im)) / T(2));
  return {x, im / (T(2) * x)};
}

/// zeta_1 = -(r/2) w + (X + iY) w' + i a w'',  zeta_2 = -(r/2) w - (X + iY) w' - i a w''.
template <typename T>
CgoPair<T> cgo_pair(const ProbeParams<T>& p, const Frame<T>& f) {
  const auto [x, y] = attenuated_sqrt(p);
  using C = std::complex<T>;
  const C root(x, y);
  const C ia(T(0), p.a);
  CVec3<T> half = (-(p.r / T(2)) * f.omega).template cast<C>();
  CVec3<T> lateral = root * f.omega1.template cast<C>() + ia * f.omega2.template cast<C>();
  return {half + lateral, half - lateral, C(p.k * p.k, p.k * p.b)};
}

/// Hermitian |zeta|^2.
template <typename T>
T squared_modulus(const CVec3<T>& z) {
  return z.squaredNorm();
}

}  // namespace bhlab
