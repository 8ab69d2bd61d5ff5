#include "bhlab/periodic_fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace bhlab {

namespace {

class DftPlans {
 public:
  fftw_plan get(int m, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(m, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(std::size_t(m) * m * m);
    fftw_plan plan = fftw_plan_dft_3d(m, m, m, scratch.data(), scratch.data(), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

DftPlans& plans() {
  static DftPlans instance;
  return instance;
}

void execute(Grid3<cplx>& g, int sign) {
  fftw_plan plan = plans().get(g.side(), sign);
  auto* raw = reinterpret_cast<fftw_complex*>(g.array().data());
  fftw_execute_dft(plan, raw, raw);
}

}  // namespace

PeriodicSpectrum periodic_fourier_transform(const ScalarField& field) {
  PeriodicSpectrum out(field.box);
  const int m = out.side();
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) out.values(i, j, k) = field(i, j, k);
  execute(out.values, FFTW_FORWARD);
  const double h = field.box.spacing();
  out.values.array() *= h * h * h;
  return out;
}

ScalarField periodic_inverse_transform(const PeriodicSpectrum& spectrum) {
  Grid3<cplx> work = spectrum.values;
  execute(work, FFTW_BACKWARD);
  const double l = spectrum.box.length;
  work.array() /= l * l * l;
  ScalarField out(spectrum.box);
  const int m = spectrum.side();
  const int s = out.box.lattice_side();
  for (int k = 0; k < s; ++k)
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < s; ++i) out(i, j, k) = work(i % m, j % m, k % m);
  return out;
}

}  // namespace bhlab
