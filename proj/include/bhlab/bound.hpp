#pragma once

#include <span>

namespace bhlab {

/// Two-term stability bound with the data-error proxy delta in place of ||N^1_q||:
///   b = 0:  C k^7 delta + C (k + log(1/delta^2))^{-m}
///   b > 0:  C (k + sqrt(kb))^7 e^{C sqrt(kb)} delta + C (k + sqrt(kb) + log(1/delta^2))^{-m}
/// with m = 2s - n. Requires 0 < delta <= 1/e; throws std::domain_error otherwise.
double theoretical_bound(double k, double b, double delta, double s, int n, double C);

/// Least-squares fit of C on log scale against measured errors at the given k.
double fit_bound_constant(std::span<const double> ks, std::span<const double> errors, double b, double delta,
                          double s, int n);

/// k* where the b = 0 bound (C = 1) stops decreasing: 7 k^6 delta = m (k + log(1/delta^2))^{-m-1}.
/// Returns 1 when the bound already increases at k = 1.
double bound_crossover(double delta, double s, int n);

/// Slope of log(error) against log(k), the empirical counterpart of the k^7 factor.
double fit_power_exponent(std::span<const double> ks, std::span<const double> errors);

}  // namespace bhlab
