#include "bhlab/field_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bhlab/sine_transform.hpp"

namespace bhlab {

ScalarField cgo_field(const CVec3<double>& zeta, const BoxDomain& box) {
  const int side = box.lattice_side();
  std::vector<cplx> ex(side), ey(side), ez(side);
  const cplx i1(0, 1);
  for (int i = 0; i < side; ++i) {
    const double x = box.coordinate(i);
    ex[i] = std::exp(i1 * zeta[0] * x);
    ey[i] = std::exp(i1 * zeta[1] * x);
    ez[i] = std::exp(i1 * zeta[2] * x);
  }
  ScalarField out(box);
  for (int k = 0; k < side; ++k)
    for (int j = 0; j < side; ++j) {
      const cplx yz = ey[j] * ez[k];
      for (int i = 0; i < side; ++i) out(i, j, k) = ex[i] * yz;
    }
  return out;
}

ResonanceMargin resonance_margin(cplx kappa, const BoxDomain& box) {
  const int n = box.nodes;
  std::vector<double> ax(n);
  for (int m = 1; m <= n; ++m) ax[m - 1] = box.axis_eigenvalue(m);
  const cplx k2 = kappa * kappa;
  ResonanceMargin best;
  best.relative_gap = std::numeric_limits<double>::infinity();
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double lam = ax[i] + ax[j] + ax[p];
        const double gap = std::abs(k2 - lam * lam);
        if (gap < best.relative_gap) {
          best.relative_gap = gap;
          best.mode[0] = i + 1;
          best.mode[1] = j + 1;
          best.mode[2] = p + 1;
        }
      }
  best.relative_gap /= std::abs(k2);
  return best;
}

void check_resonance(cplx kappa, const BoxDomain& box, double eps_res) {
  if (kappa.imag() != 0.0) return;
  const ResonanceMargin r = resonance_margin(kappa, box);
  if (r.relative_gap < eps_res) {
    std::ostringstream os;
    os << "resonance: kappa^2 = " << (kappa * kappa).real() << " is within relative gap " << r.relative_gap
       << " < " << eps_res << " of the Navier eigenvalue lambda^2 of mode (" << r.mode[0] << ", " << r.mode[1]
       << ", " << r.mode[2] << ")";
    throw ResonanceError(os.str(), r.mode[0], r.mode[1], r.mode[2], r.relative_gap);
  }
}

double resolution_ratio(double zeta_modulus, const BoxDomain& box) {
  if (zeta_modulus == 0) return std::numeric_limits<double>::infinity();
  return box.max_resolved_wavenumber() / (2.0 * zeta_modulus);
}

void check_resolution(double zeta_modulus, const BoxDomain& box) {
  const double ratio = resolution_ratio(zeta_modulus, box);
  if (!(ratio > 1.0)) {
    std::ostringstream os;
    os << "resolution: |zeta| = " << zeta_modulus << " needs pi N / L > " << 2 * zeta_modulus << " but the box resolves "
       << box.max_resolved_wavenumber();
    throw ResolutionError(os.str());
  }
}

SineSpectrum green_apply_spectral(cplx kappa, const SineSpectrum& source, double eps_res) {
  check_resonance(kappa, source.box, eps_res);
  const int n = source.box.nodes;
  const cplx k2 = kappa * kappa;
  std::vector<double> ax(n);
  for (int m = 1; m <= n; ++m) ax[m - 1] = source.box.axis_eigenvalue(m);
  SineSpectrum out(source.box);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double lam = ax[i] + ax[j] + ax[p];
        out.coeffs(i, j, p) = source.coeffs(i, j, p) / (k2 - lam * lam);
      }
  return out;
}

ScalarField green_apply(cplx kappa, const ScalarField& source, double eps_res) {
  return inverse_sine_transform(green_apply_spectral(kappa, sine_transform(source), eps_res));
}

SineSpectrum green_apply_factored_spectral(cplx kappa, const SineSpectrum& source) {
  const int n = source.box.nodes;
  SineSpectrum out(source.box);
  for (int p = 1; p <= n; ++p)
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n; ++i) {
        const double lam = source.lambda(i, j, p);
        const cplx w = -source(i, j, p) / (kappa - lam);  // (Delta + kappa) w = -F
        out(i, j, p) = w / (-lam - kappa);                 // (Delta - kappa) u = w
      }
  return out;
}

ScalarField green_apply_factored(cplx kappa, const ScalarField& source) {
  return inverse_sine_transform(green_apply_factored_spectral(kappa, sine_transform(source)));
}

double green_operator_norm(cplx kappa, const BoxDomain& box) {
  const ResonanceMargin r = resonance_margin(kappa, box);
  return 1.0 / (r.relative_gap * std::abs(kappa * kappa));
}

SineSpectrum apply_biharmonic_spectral(cplx kappa, const SineSpectrum& u) {
  const int n = u.box.nodes;
  const cplx k2 = kappa * kappa;
  SineSpectrum out(u.box);
  for (int p = 1; p <= n; ++p)
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n; ++i) {
        const double lam = u.lambda(i, j, p);
        out(i, j, p) = (lam * lam - k2) * u(i, j, p);
      }
  return out;
}

FixedPointResult full_solve_fixed_point(const ScalarField& q, const ScalarField& u0, cplx kappa, double tol,
                                        int max_iter, double eps_res) {
  if (!(q.box == u0.box)) throw InvalidInput("full_solve_fixed_point: q and u0 live on different boxes");
  if (max_iter < 1) throw InvalidInput("full_solve_fixed_point: max_iter must be >= 1");
  check_resonance(kappa, q.box, eps_res);
  const double base = l2_norm(u0);
  if (base == 0) return {u0, 1, 0.0};

  ScalarField u = u0;
  double first_step = -1;
  double last_step = 0;
  double growth = 1;
  for (int it = 1; it <= max_iter; ++it) {
    ScalarField next = u0 + green_apply(kappa, pointwise_product(q, u), eps_res);
    const double step = l2_norm(next - u) / base;
    if (first_step < 0) first_step = step;
    growth = last_step > 0 ? step / last_step : 1.0;
    last_step = step;
    u = std::move(next);
    if (!std::isfinite(step)) break;
    if (step <= tol) return {std::move(u), it, step};
    // Clearly expanding: stop before the iterates overflow.
    if (l2_norm(u) > 1e12 * base) break;
  }
  std::ostringstream os;
  os << "fixed point did not contract: step ratio " << growth << ", ||u_n|| / ||u0|| = " << l2_norm(u) / base
     << ", last relative step " << last_step << " (tol " << tol << ")";
  throw DivergenceError(os.str(), growth);
}

}  // namespace bhlab
