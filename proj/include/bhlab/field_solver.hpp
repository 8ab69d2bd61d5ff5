#pragma once

#include "bhlab/grid.hpp"
#include "bhlab/probes.hpp"

namespace bhlab {

inline constexpr double kDefaultResonanceEps = 1e-6;

/// e^{i zeta . x} at every node of the lattice.
ScalarField cgo_field(const CVec3<double>& zeta, const BoxDomain& box);

/// Smallest relative spectral gap min |kappa^2 - lambda^2| / |kappa^2| over sine modes.
struct ResonanceMargin {
  double relative_gap = 0;
  int mode[3] = {0, 0, 0};
};
ResonanceMargin resonance_margin(cplx kappa, const BoxDomain& box);

/// Throws ResonanceError naming the offending mode when the gap drops below eps_res.
/// The guard is vacuous for Im kappa != 0 (attenuated problems have no real resonances).
void check_resonance(cplx kappa, const BoxDomain& box, double eps_res = kDefaultResonanceEps);

/// Ratio (pi N / L) / (2 |zeta|); must exceed one.
double resolution_ratio(double zeta_modulus, const BoxDomain& box);
void check_resolution(double zeta_modulus, const BoxDomain& box);

/// Mode-wise solve of Delta^2 u - kappa^2 u = -F with Navier conditions:
/// u_hat = F_hat / (kappa^2 - lambda^2).
SineSpectrum green_apply_spectral(cplx kappa, const SineSpectrum& source,
                                  double eps_res = kDefaultResonanceEps);
ScalarField green_apply(cplx kappa, const ScalarField& source, double eps_res = kDefaultResonanceEps);

/// Same operator through the factorisation Delta^2 - kappa^2 = (Delta + kappa)(Delta - kappa):
/// (Delta + kappa) w = -F, then (Delta - kappa) u = w.
SineSpectrum green_apply_factored_spectral(cplx kappa, const SineSpectrum& source);
ScalarField green_apply_factored(cplx kappa, const ScalarField& source);

/// max over modes of 1 / |kappa^2 - lambda^2|: the discrete L2 operator norm of the Green operator.
double green_operator_norm(cplx kappa, const BoxDomain& box);

/// Applies Delta^2 - kappa^2 mode-wise (used for residual checks).
SineSpectrum apply_biharmonic_spectral(cplx kappa, const SineSpectrum& u);

struct FixedPointResult {
  ScalarField u;
  int iterations = 0;
  double residual = 0;  // ||u_n - u_{n-1}|| / ||u0|| at exit
};

/// Solves u = u0 + G_kappa(q u) by successive substitution. The first iterate is the
/// Born solution u0 + u1. Throws DivergenceError when tol is not reached in max_iter steps.
FixedPointResult full_solve_fixed_point(const ScalarField& q, const ScalarField& u0, cplx kappa,
                                        double tol = 1e-10, int max_iter = 50,
                                        double eps_res = kDefaultResonanceEps);

}  // namespace bhlab
