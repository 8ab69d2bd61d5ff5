#include "bhlab/recon.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "bhlab/periodic_fft.hpp"
#include "bhlab/sine_transform.hpp"
#include "bhlab/sobolev.hpp"

namespace bhlab {

const char* to_string(Band band) { return band == Band::Low ? "low" : "high"; }

double ReconConfig::band_threshold() const {
  return b > 0 ? k + std::sqrt(k * b) + R_band : k + R_band;
}

void ReconConfig::validate(const BoxDomain& box) const {
  std::ostringstream os;
  if (!(k >= 1)) os << "k must be >= 1 (got " << k << "); ";
  if (!(b >= 0)) os << "b must be >= 0 (got " << b << "); ";
  if (!(R_band > 0)) os << "R_band must be positive; ";
  if (!(s > dimension / 2.0)) os << "s must exceed n/2 = 1.5 (got " << s << "); ";
  if (!(high_band_margin >= 0)) os << "high_band_margin must be >= 0; ";
  if (!(eps_res > 0)) os << "eps_res must be positive; ";
  if (sampling_radius() > box.max_resolved_wavenumber())
    os << "sampling radius " << sampling_radius() << " exceeds the resolved wavenumber "
       << box.max_resolved_wavenumber() << "; ";
  if (os.tellp() != 0) throw InvalidInput("invalid reconstruction config: " + os.str());
}

double a_policy(double r, double k, double b, double R_band) {
  if (!(r >= 0)) throw InvalidInput("a_policy: r must be >= 0");
  if (b > 0) {
    const double lift = std::sqrt(k * b) + R_band;
    return r <= k + lift ? lift : r;
  }
  return r <= k + R_band ? R_band : r;
}

std::vector<Eigen::Vector3i> frequency_lattice(double radius, const BoxDomain& box) {
  const double dxi = 2.0 * std::numbers::pi / box.length;
  const int reach = int(std::floor(radius / dxi));
  const double r2 = radius * radius;
  std::vector<Eigen::Vector3i> out;
  for (int z = -reach; z <= reach; ++z)
    for (int y = -reach; y <= reach; ++y)
      for (int x = -reach; x <= reach; ++x) {
        const double d2 = dxi * dxi * double(x * x + y * y + z * z);
        if (d2 <= r2 * (1 + 1e-14)) out.emplace_back(x, y, z);
      }
  return out;
}

ProbeSetup probe_setup(const Eigen::Vector3i& index, const ReconConfig& config, const BoxDomain& box) {
  ProbeSetup s;
  const double dxi = 2.0 * std::numbers::pi / box.length;
  s.xi = dxi * index.cast<double>();
  s.r = s.xi.norm();
  const Vec3<double> omega = s.r > 0 ? Vec3<double>(s.xi / s.r) : Vec3<double>::UnitX();
  s.frame = orthonormal_frame(omega);
  s.params = {config.k, config.b, a_policy(s.r, config.k, config.b, config.R_band), s.r};
  s.pair = cgo_pair(s.params, s.frame);
  return s;
}

GuardReport check_extraction_guards(const ReconConfig& config, const BoxDomain& box) {
  box.validate();
  config.validate(box);
  GuardReport report;
  const cplx kappa(config.k * config.k, config.k * config.b);
  check_resonance(kappa, box, config.eps_res);
  report.resonance_gap =
      kappa.imag() != 0 ? std::numeric_limits<double>::infinity() : resonance_margin(kappa, box).relative_gap;
  report.resolution_ratio = std::numeric_limits<double>::infinity();
  const auto lattice = frequency_lattice(config.sampling_radius(), box);
  report.sample_count = lattice.size();
  for (const auto& idx : lattice) {
    const ProbeSetup s = probe_setup(idx, config, box);
    const double modulus = std::sqrt(squared_modulus(s.pair.zeta1));
    const double ratio = resolution_ratio(modulus, box);
    if (ratio < report.resolution_ratio) report.resolution_ratio = ratio;
    if (!(ratio > 1.0)) {
      std::ostringstream os;
      os << "at xi = (" << s.xi.transpose() << "): ";
      try {
        check_resolution(modulus, box);
      } catch (const ResolutionError& e) {
        throw ResolutionError(os.str() + e.what());
      }
    }
  }
  return report;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over a combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

cplx volume_fourier_oracle(const ScalarField& q, const Vec3<double>& xi) {
  const BoxDomain& box = q.box;
  const int side = box.lattice_side();
  std::vector<cplx> ex(side), ey(side), ez(side);
  const cplx mi(0, -1);
  for (int i = 0; i < side; ++i) {
    const double x = box.coordinate(i);
    ex[i] = std::exp(mi * xi[0] * x);
    ey[i] = std::exp(mi * xi[1] * x);
    ez[i] = std::exp(mi * xi[2] * x);
  }
  // Interior sums only: endpoint weights of the trapezoid rule multiply values that
  // vanish for a potential supported inside the box, and are kept for generality.
  cplx total = 0;
  for (int k = 0; k < side; ++k) {
    const double wk = (k == 0 || k == side - 1) ? 0.5 : 1.0;
    for (int j = 0; j < side; ++j) {
      const double wj = (j == 0 || j == side - 1) ? 0.5 : 1.0;
      cplx line = 0;
      for (int i = 0; i < side; ++i) {
        const double wi = (i == 0 || i == side - 1) ? 0.5 : 1.0;
        line += wi * q(i, j, k) * ex[i];
      }
      total += wk * wj * line * ey[j] * ez[k];
    }
  }
  const double h = box.spacing();
  return total * (h * h * h);
}

namespace {

// Sine spectrum of q e^{i zeta . x} without materialising the product field.
SineSpectrum probe_source_spectrum(const ScalarField& q, const CVec3<double>& zeta) {
  const BoxDomain& box = q.box;
  const int n = box.nodes;
  std::vector<cplx> ex(n), ey(n), ez(n);
  const cplx i1(0, 1);
  for (int i = 0; i < n; ++i) {
    const double x = box.coordinate(i + 1);
    ex[i] = std::exp(i1 * zeta[0] * x);
    ey[i] = std::exp(i1 * zeta[1] * x);
    ez[i] = std::exp(i1 * zeta[2] * x);
  }
  SineSpectrum out(box);
  auto& c = out.coeffs;
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j) {
      const cplx yz = ey[j] * ez[p];
      for (int i = 0; i < n; ++i) c(i, j, p) = q(i + 1, j + 1, p + 1) * ex[i] * yz;
    }
  detail::rodft00_inplace(c.array().data(), n, 3);
  c.array() /= std::pow(double(n + 1), 3);
  return out;
}

}  // namespace

std::vector<std::vector<FourierSample>> extract_fourier_batch(const ScalarField& q, const ReconConfig& config,
                                                              std::span<const NoiseModel> models, bool with_oracle) {
  const BoxDomain& box = q.box;
  for (const auto& m : models) {
    if (!(m.delta >= 0)) throw InvalidInput("extract_fourier: noise delta must be >= 0");
  }
  check_extraction_guards(config, box);
  const auto lattice = frequency_lattice(config.sampling_radius(), box);
  const std::size_t count = lattice.size();
  const cplx kappa(config.k * config.k, config.k * config.b);
  const double threshold = config.band_threshold();

  std::vector<std::vector<FourierSample>> out(models.size(), std::vector<FourierSample>(count));
  std::vector<std::string> failures(count);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < std::ptrdiff_t(count); ++s) {
    try {
      const ProbeSetup setup = probe_setup(lattice[s], config, box);
      // Delta^2 u1 - kappa^2 u1 = -q u0
      const SineSpectrum source = probe_source_spectrum(q, setup.pair.zeta1);
      const SineSpectrum u1 = green_apply_spectral(kappa, source, config.eps_res);
      const FaceTraces traces = navier_traces(u1);
      std::optional<cplx> oracle;
      if (with_oracle) oracle = volume_fourier_oracle(q, setup.xi);
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const NoiseModel per_sample{models[mi].delta, derive_seed(models[mi].seed, std::uint64_t(s))};
        const FaceTraces measured = add_noise(traces, per_sample);
        FourierSample& fs = out[mi][s];
        fs.index = lattice[s];
        fs.xi = setup.xi;
        fs.r = setup.r;
        fs.omega = setup.frame.omega;
        fs.a_used = setup.params.a;
        fs.band = setup.r <= threshold ? Band::Low : Band::High;
        fs.value = -boundary_pairing(measured, setup.pair.zeta2, kappa, config.quadrature);
        fs.oracle = oracle;
      }
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "extract_fourier at xi index (" << lattice[s].transpose() << "): " << e.what();
      failures[s] = os.str();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw std::runtime_error(f);
  }
  return out;
}

std::vector<FourierSample> extract_fourier(const ScalarField& q, const ReconConfig& config, const NoiseModel& noise,
                                           bool with_oracle) {
  const NoiseModel models[1] = {noise};
  return std::move(extract_fourier_batch(q, config, models, with_oracle).front());
}

Reconstruction truncated_inverse_ft(std::span<const FourierSample> samples, const ReconConfig& config,
                                    const BoxDomain& box) {
  PeriodicSpectrum spectrum(box);
  const int half = spectrum.side() / 2;
  std::map<std::tuple<int, int, int>, const FourierSample*> by_index;
  for (const auto& s : samples) by_index[{s.index[0], s.index[1], s.index[2]}] = &s;

  const auto required = frequency_lattice(config.rho(), box);
  std::size_t missing = 0;
  std::ostringstream first_missing;
  for (const auto& idx : required) {
    if (!by_index.count({idx[0], idx[1], idx[2]})) {
      if (missing++ == 0) first_missing << "(" << idx.transpose() << ")";
    }
  }
  if (missing) {
    std::ostringstream os;
    os << "truncated_inverse_ft: " << missing << " lattice points inside |xi| <= " << config.rho()
       << " have no sample, first " << first_missing.str();
    throw InvalidInput(os.str());
  }

  Reconstruction rec;
  const double rho2 = config.rho() * config.rho() * (1 + 1e-14);
  for (const auto& [key, s] : by_index) {
    const bool inside = s->r * s->r <= rho2;
    if (!inside && !config.include_high_band) continue;
    for (int d = 0; d < 3; ++d) {
      if (s->index[d] <= -half || s->index[d] > half)
        throw InvalidInput("truncated_inverse_ft: sample beyond the grid Nyquist lattice");
    }
    spectrum.values(spectrum.wrapped_index(s->index[0]), spectrum.wrapped_index(s->index[1]),
                    spectrum.wrapped_index(s->index[2])) = s->value;
    ++rec.samples_used;
  }
  const ScalarField full = periodic_inverse_transform(spectrum);
  rec.field = ScalarField(box);
  rec.field.array() = full.array().real().cast<cplx>();
  const double re = full.array().real().matrix().norm();
  const double im = full.array().imag().matrix().norm();
  rec.imag_residue = re > 0 ? im / re : (im > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  rec.imag_warning = rec.imag_residue > 0.01;
  return rec;
}

ReconstructionErrors reconstruction_errors(const ScalarField& truth, const ScalarField& estimate, double s) {
  const ScalarField diff = estimate - truth;
  ReconstructionErrors e;
  const double t2 = sobolev_norm(truth, 0.0);
  const double ts = sobolev_norm(truth, -s);
  e.l2 = t2 > 0 ? sobolev_norm(diff, 0.0) / t2 : sobolev_norm(diff, 0.0);
  e.h_minus_s = ts > 0 ? sobolev_norm(diff, -s) / ts : sobolev_norm(diff, -s);
  return e;
}

}  // namespace bhlab
