#include "bhlab/dtn.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bhlab/sine_transform.hpp"

namespace bhlab {

double FaceTraces::l2_norm() const {
  double total = 0;
  for (const auto& f : faces) total += f.normal_derivative.abs2().sum() + f.normal_derivative_laplacian.abs2().sum();
  return std::sqrt(total);
}

bool FaceTraces::all_finite() const {
  for (const auto& f : faces) {
    if (!f.normal_derivative.allFinite() || !f.normal_derivative_laplacian.allFinite()) return false;
  }
  return true;
}

FaceTraces navier_traces(const SineSpectrum& u1) {
  const BoxDomain& box = u1.box;
  const int n = box.nodes;
  std::vector<double> slope(n), lam(n), parity(n);
  for (int m = 1; m <= n; ++m) {
    slope[m - 1] = std::numbers::pi * m / box.length;
    lam[m - 1] = box.axis_eigenvalue(m);
    parity[m - 1] = (m % 2 == 0) ? 1.0 : -1.0;  // cos(m pi)
  }
  // Sine coefficients of the traces, per face: [face][0 = d_nu u, 1 = d_nu Delta u].
  std::array<std::array<Eigen::ArrayXXcd, 2>, 6> coeff;
  for (auto& c : coeff)
    for (auto& a : c) a = Eigen::ArrayXXcd::Zero(n, n);

  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const cplx u = u1.coeffs(i, j, p);
        const cplx lap = -(lam[i] + lam[j] + lam[p]) * u;
        // d/dx sin(m pi x / L) is slope at x = 0 and slope * cos(m pi) at x = L.
        coeff[0][0](j, p) += slope[i] * u;
        coeff[0][1](j, p) += slope[i] * lap;
        coeff[1][0](j, p) += slope[i] * parity[i] * u;
        coeff[1][1](j, p) += slope[i] * parity[i] * lap;
        coeff[2][0](i, p) += slope[j] * u;
        coeff[2][1](i, p) += slope[j] * lap;
        coeff[3][0](i, p) += slope[j] * parity[j] * u;
        coeff[3][1](i, p) += slope[j] * parity[j] * lap;
        coeff[4][0](i, j) += slope[p] * u;
        coeff[4][1](i, j) += slope[p] * lap;
        coeff[5][0](i, j) += slope[p] * parity[p] * u;
        coeff[5][1](i, j) += slope[p] * parity[p] * lap;
      }

  FaceTraces out;
  out.box = box;
  for (int f = 0; f < 6; ++f) {
    FaceTrace& face = out.faces[f];
    face.axis = f / 2;
    face.side = f % 2;
    face.outward_sign = face.side == 0 ? -1.0 : 1.0;
    face.normal_derivative = face.outward_sign * sine_synthesize_2d(coeff[f][0]);
    face.normal_derivative_laplacian = face.outward_sign * sine_synthesize_2d(coeff[f][1]);
  }
  return out;
}

FaceTraces add_noise(const FaceTraces& traces, const NoiseModel& model) {
  if (!(model.delta >= 0) || !std::isfinite(model.delta)) {
    std::ostringstream os;
    os << "add_noise: delta must be a finite non-negative number (got " << model.delta << ")";
    throw InvalidInput(os.str());
  }
  if (model.delta == 0) return traces;

  std::mt19937_64 rng(model.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FaceTraces noise = traces;
  for (auto& f : noise.faces) {
    for (auto* a : {&f.normal_derivative, &f.normal_derivative_laplacian}) {
      for (Eigen::Index i = 0; i < a->size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        (*a)(i) = cplx(re, im);
      }
    }
  }
  const double clean = traces.l2_norm();
  const double raw = noise.l2_norm();
  const double scale = (raw > 0 && clean > 0) ? model.delta * clean / raw : 0.0;
  FaceTraces out = traces;
  for (int f = 0; f < 6; ++f) {
    out.faces[f].normal_derivative += scale * noise.faces[f].normal_derivative;
    out.faces[f].normal_derivative_laplacian += scale * noise.faces[f].normal_derivative_laplacian;
  }
  return out;
}

namespace {

// (e^z - 1) / z, accurate near z = 0.
cplx expm1_over(cplx z) {
  if (std::abs(z) < 0.5) {
    cplx term(1.0, 0.0);
    cplx sum = term;
    for (int j = 2; j < 30; ++j) {
      term *= z / double(j);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

// int_0^L e^{i mu y} dy
cplx exponential_integral(cplx mu, double length) {
  return length * expm1_over(cplx(0, 1) * mu * length);
}

double face_coordinate(const BoxDomain& box, int side) { return side == 0 ? 0.0 : box.length; }

}  // namespace

Eigen::ArrayXcd sine_exponential_integrals(const BoxDomain& box, cplx beta) {
  const int n = box.nodes;
  Eigen::ArrayXcd out(n);
  for (int m = 1; m <= n; ++m) {
    const double s = std::numbers::pi * m / box.length;
    // sin(s y) = (e^{i s y} - e^{-i s y}) / 2i
    out[m - 1] = (exponential_integral(beta + s, box.length) - exponential_integral(beta - s, box.length)) /
                 cplx(0, 2);
  }
  return out;
}

cplx boundary_pairing(const FaceTraces& traces, const CVec3<double>& zeta2, cplx kappa, FaceQuadrature quadrature) {
  const BoxDomain& box = traces.box;
  const int n = box.nodes;
  const double h = box.spacing();
  const cplx i1(0, 1);
  cplx total = 0;
  for (const FaceTrace& face : traces.faces) {
    const int t1 = face.tangential(0);
    const int t2 = face.tangential(1);
    const cplx normal_phase = std::exp(i1 * zeta2[face.axis] * face_coordinate(box, face.side));
    // Integrand d_nu(Delta u1) v + d_nu u1 (-kappa v).
    const Eigen::ArrayXXcd density = face.normal_derivative_laplacian - kappa * face.normal_derivative;
    if (quadrature == FaceQuadrature::SineExact) {
      const Eigen::ArrayXXcd c = sine_analyze_2d(density);
      const Eigen::VectorXcd a = sine_exponential_integrals(box, zeta2[t1]).matrix();
      const Eigen::VectorXcd b = sine_exponential_integrals(box, zeta2[t2]).matrix();
      total += normal_phase * (a.transpose() * c.matrix() * b).value();
    } else {
      Eigen::VectorXcd a(n), b(n);
      for (int j = 0; j < n; ++j) {
        const double y = box.coordinate(j + 1);
        a[j] = std::exp(i1 * zeta2[t1] * y);
        b[j] = std::exp(i1 * zeta2[t2] * y);
      }
      total += normal_phase * h * h * (a.transpose() * density.matrix() * b).value();
    }
  }
  return total;
}

double pairing_functional_norm(const BoxDomain& box, const CVec3<double>& zeta2, cplx kappa,
                               FaceQuadrature quadrature) {
  const int n = box.nodes;
  const double h = box.spacing();
  const cplx i1(0, 1);
  double total = 0;
  for (int f = 0; f < 6; ++f) {
    const int axis = f / 2;
    const int side = f % 2;
    const int t1 = axis == 0 ? 1 : 0;
    const int t2 = axis == 2 ? 1 : 2;
    const double phase = std::abs(std::exp(i1 * zeta2[axis] * face_coordinate(box, side)));
    Eigen::ArrayXcd a(n), b(n);
    if (quadrature == FaceQuadrature::SineExact) {
      // Analysis is (N+1)^-1 S per axis, with S the symmetric sine matrix; fold it into the weights.
      const Eigen::ArrayXcd ia = sine_exponential_integrals(box, zeta2[t1]);
      const Eigen::ArrayXcd ib = sine_exponential_integrals(box, zeta2[t2]);
      for (int j = 0; j < n; ++j) {
        cplx sa = 0, sb = 0;
        for (int m = 0; m < n; ++m) {
          const double s = 2.0 * std::sin(std::numbers::pi * (m + 1) * (j + 1) / (n + 1)) / (n + 1);
          sa += s * ia[m];
          sb += s * ib[m];
        }
        a[j] = sa;
        b[j] = sb;
      }
    } else {
      for (int j = 0; j < n; ++j) {
        const double y = box.coordinate(j + 1);
        a[j] = h * std::exp(i1 * zeta2[t1] * y);
        b[j] = h * std::exp(i1 * zeta2[t2] * y);
      }
    }
    const double w2 = a.abs2().sum() * b.abs2().sum() * phase * phase;
    total += w2 * (1.0 + std::norm(kappa));
  }
  return std::sqrt(total);
}

}  // namespace bhlab
