#include "bhlab/sobolev.hpp"

#include <cmath>

namespace bhlab {

double sobolev_norm(const PeriodicSpectrum& spectrum, double s) {
  const int m = spectrum.side();
  std::vector<double> k2(m);
  for (int i = 0; i < m; ++i) {
    const double w = spectrum.wavenumber(i);
    k2[i] = w * w;
  }
  double total = 0;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) {
      double line = 0;
      for (int i = 0; i < m; ++i) {
        const double xi2 = k2[i] + k2[j] + k2[k];
        const double w = s == 0 ? 1.0 : std::pow(1.0 + xi2, s);
        line += std::norm(spectrum.values(i, j, k)) * w;
      }
      total += line;
    }
  const double l = spectrum.box.length;
  return std::sqrt(total / (l * l * l));
}

double sobolev_norm(const ScalarField& field, double s) {
  return sobolev_norm(periodic_fourier_transform(field), s);
}

}  // namespace bhlab
