#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "bhlab/errors.hpp"

namespace bhlab {

using cplx = std::complex<double>;

/// The cube [0, L]^3 with N interior nodes per axis and spacing L/(N+1).
struct BoxDomain {
  double length = 6.0;
  int nodes = 63;

  double spacing() const { return length / (nodes + 1); }
  int lattice_side() const { return nodes + 2; }
  double coordinate(int i) const { return i * spacing(); }
  /// pi N / L, the largest sine wavenumber carried by the grid.
  double max_resolved_wavenumber() const { return std::numbers::pi * nodes / length; }
  /// Radius of the ball around the centre containing the box.
  double circumradius() const { return length * std::sqrt(3.0) / 2.0; }
  /// Dirichlet-Laplacian eigenvalue of sin(m pi x / L), m >= 1.
  double axis_eigenvalue(int m) const {
    const double s = std::numbers::pi * m / length;
    return s * s;
  }
  void validate() const {
    if (nodes < 8) throw InvalidInput("BoxDomain: need N >= 8 interior nodes per axis");
    if (!(length > 0) || !std::isfinite(length)) throw InvalidInput("BoxDomain: L must be positive");
  }
  bool operator==(const BoxDomain&) const = default;
};

/// Dense cube of side n stored x-fastest.
template <typename Scalar>
class Grid3 {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Grid3() = default;
  explicit Grid3(int side) : side_(side), data_(Storage::Zero(Eigen::Index(side) * side * side)) {}

  int side() const { return side_; }
  Eigen::Index index(int i, int j, int k) const {
    return i + Eigen::Index(side_) * (j + Eigen::Index(side_) * k);
  }
  Scalar& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  const Scalar& operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  Storage& array() { return data_; }
  const Storage& array() const { return data_; }

 private:
  int side_ = 0;
  Storage data_;
};

/// Complex grid function on the (N+2)^3 node lattice, boundary nodes included.
struct ScalarField {
  BoxDomain box;
  Grid3<cplx> values;

  ScalarField() = default;
  explicit ScalarField(const BoxDomain& b) : box(b), values(b.lattice_side()) {}

  cplx& operator()(int i, int j, int k) { return values(i, j, k); }
  const cplx& operator()(int i, int j, int k) const { return values(i, j, k); }
  auto& array() { return values.array(); }
  const auto& array() const { return values.array(); }
};

/// Sine-series coefficients c(m,n,p), m,n,p in 1..N, stored at (m-1, n-1, p-1).
struct SineSpectrum {
  BoxDomain box;
  Grid3<cplx> coeffs;

  SineSpectrum() = default;
  explicit SineSpectrum(const BoxDomain& b) : box(b), coeffs(b.nodes) {}

  cplx& operator()(int m, int n, int p) { return coeffs(m - 1, n - 1, p - 1); }
  const cplx& operator()(int m, int n, int p) const { return coeffs(m - 1, n - 1, p - 1); }
  double lambda(int m, int n, int p) const {
    return box.axis_eigenvalue(m) + box.axis_eigenvalue(n) + box.axis_eigenvalue(p);
  }
};

/// Discrete L2 norm h^3 sum |f|^2 over all lattice nodes.
inline double l2_norm(const ScalarField& f) {
  const double h = f.box.spacing();
  return std::sqrt(f.array().abs2().sum() * h * h * h);
}

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.box);
  out.array() = a.array() - b.array();
  return out;
}

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.box);
  out.array() = a.array() + b.array();
  return out;
}

inline ScalarField operator*(cplx s, const ScalarField& a) {
  ScalarField out(a.box);
  out.array() = s * a.array();
  return out;
}

/// Pointwise product (collocation).
inline ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.box);
  out.array() = a.array() * b.array();
  return out;
}

}  // namespace bhlab
