#include "bhlab/bound.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bhlab/errors.hpp"

namespace bhlab {

double theoretical_bound(double k, double b, double delta, double s, int n, double C) {
  if (!(delta > 0) || delta > std::exp(-1.0)) {
    std::ostringstream os;
    os << "theoretical_bound: data error " << delta << " is outside (0, 1/e]";
    throw std::domain_error(os.str());
  }
  const double m = 2 * s - n;
  const double log_term = std::log(1.0 / (delta * delta));
  const double root = std::sqrt(k * b);
  const double lipschitz = C * std::pow(k + root, 7) * std::exp(C * root) * delta;
  const double logarithmic = C * std::pow(k + root + log_term, -m);
  return lipschitz + logarithmic;
}

double fit_bound_constant(std::span<const double> ks, std::span<const double> errors, double b, double delta,
                          double s, int n) {
  if (ks.size() != errors.size() || ks.empty()) throw InvalidInput("fit_bound_constant: need matching non-empty data");
  auto cost = [&](double log_c) {
    double total = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double d = std::log(theoretical_bound(ks[i], b, delta, s, n, std::exp(log_c))) - std::log(errors[i]);
      total += d * d;
    }
    return total;
  };
  // Golden-section search on log C; the cost is unimodal in practice over this range.
  double lo = std::log(1e-8), hi = std::log(1e3);
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = cost(x1), f2 = cost(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = cost(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = cost(x2);
    }
  }
  return std::exp((lo + hi) / 2);
}

double bound_crossover(double delta, double s, int n) {
  const double m = 2 * s - n;
  const double log_term = std::log(1.0 / (delta * delta));
  auto slope = [&](double k) { return 7 * std::pow(k, 6) * delta - m * std::pow(k + log_term, -m - 1); };
  double lo = 1.0;
  if (slope(lo) >= 0) return lo;
  double hi = 2.0;
  while (slope(hi) < 0) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double fit_power_exponent(std::span<const double> ks, std::span<const double> errors) {
  if (ks.size() != errors.size() || ks.size() < 2) throw InvalidInput("fit_power_exponent: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double x = std::log(ks[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bhlab
