#include "bhlab/sine_transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace bhlab {
namespace detail {

namespace {

// FFTW's planner is not re-entrant; plans are created once under a lock and
// executed through the new-array interface, which is thread-safe.
class PlanCache {
 public:
  fftw_plan get(int n, int rank) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, rank);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 2;
    for (int d = 0; d < rank; ++d) total *= std::size_t(n);
    std::vector<double> scratch(total);
    int dims[3] = {n, n, n};
    fftw_r2r_kind kinds[3] = {FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00};
    // Real and imaginary parts are two interleaved transforms (stride 2, distance 1).
    fftw_plan plan = fftw_plan_many_r2r(rank, dims, 2, scratch.data(), nullptr, 2, 1, scratch.data(),
                                        nullptr, 2, 1, kinds, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void rodft00_inplace(cplx* data, int n, int rank) {
  fftw_plan plan = cache().get(n, rank);
  auto* raw = reinterpret_cast<double*>(data);
  fftw_execute_r2r(plan, raw, raw);
}

}  // namespace detail

SineSpectrum sine_transform(const ScalarField& field) {
  const BoxDomain& box = field.box;
  const int n = box.nodes;
  SineSpectrum out(box);
  auto& c = out.coeffs;
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) c(i, j, p) = field(i + 1, j + 1, p + 1);
  detail::rodft00_inplace(c.array().data(), n, 3);
  const double scale = 1.0 / std::pow(double(n + 1), 3);
  c.array() *= scale;
  return out;
}

ScalarField inverse_sine_transform(const SineSpectrum& spectrum) {
  const BoxDomain& box = spectrum.box;
  const int n = box.nodes;
  Grid3<cplx> work = spectrum.coeffs;
  detail::rodft00_inplace(work.array().data(), n, 3);
  ScalarField out(box);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) out(i + 1, j + 1, p + 1) = work(i, j, p) * 0.125;
  return out;
}

double boundary_max_abs(const ScalarField& field) {
  const int s = field.box.lattice_side();
  double worst = 0;
  for (int k = 0; k < s; ++k)
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < s; ++i) {
        if (i == 0 || j == 0 || k == 0 || i == s - 1 || j == s - 1 || k == s - 1)
          worst = std::max(worst, std::abs(field(i, j, k)));
      }
  return worst;
}

Eigen::ArrayXXcd sine_analyze_2d(const Eigen::ArrayXXcd& values) {
  const int n = int(values.rows());
  if (values.cols() != n) throw InvalidInput("sine_analyze_2d: expected a square face array");
  Eigen::ArrayXXcd out = values;
  detail::rodft00_inplace(out.data(), n, 2);
  out /= double(n + 1) * double(n + 1);
  return out;
}

Eigen::ArrayXXcd sine_synthesize_2d(const Eigen::ArrayXXcd& coeffs) {
  const int n = int(coeffs.rows());
  if (coeffs.cols() != n) throw InvalidInput("sine_synthesize_2d: expected a square face array");
  Eigen::ArrayXXcd out = coeffs;
  detail::rodft00_inplace(out.data(), n, 2);
  out *= 0.25;
  return out;
}

}  // namespace bhlab
