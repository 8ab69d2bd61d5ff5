#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bhlab/dtn.hpp"
#include "bhlab/field_solver.hpp"
#include "bhlab/grid.hpp"
#include "bhlab/probes.hpp"

namespace bhlab {

enum class Band { Low, High };
const char* to_string(Band band);

/// One extracted value of Fq at xi = r omega.
struct FourierSample {
  Eigen::Vector3i index = Eigen::Vector3i::Zero();  // lattice index, xi = (2 pi / L) index
  Vec3<double> xi = Vec3<double>::Zero();
  double r = 0;
  Vec3<double> omega = Vec3<double>::UnitX();
  cplx value = 0;
  double a_used = 0;
  Band band = Band::Low;
  std::optional<cplx> oracle;
};

struct ReconConfig {
  double k = 4;
  double b = 0;
  double R_band = 1;               // band offset R
  double s = 2;                    // Sobolev exponent for H^{-s} errors
  bool include_high_band = false;  // use high-band samples in the inversion
  double high_band_margin = 0;     // sample this far beyond rho for diagnostics
  double eps_res = kDefaultResonanceEps;
  FaceQuadrature quadrature = FaceQuadrature::SineExact;

  static constexpr int dimension = 3;
  /// Inversion cutoff k + R.
  double rho() const { return k + R_band; }
  /// m = 2s - n.
  double m() const { return 2 * s - dimension; }
  /// Radius below which a_policy keeps a bounded: k + R, or k + sqrt(kb) + R when attenuated.
  double band_threshold() const;
  double sampling_radius() const { return rho() + high_band_margin; }
  void validate(const BoxDomain& box) const;
};

/// Growth parameter: R (or sqrt(kb) + R) inside the low band, r above it.
double a_policy(double r, double k, double b, double R_band);

/// Lattice indices j with |(2 pi / L) j| <= radius, ordered by z, then y, then x.
std::vector<Eigen::Vector3i> frequency_lattice(double radius, const BoxDomain& box);

struct ProbeSetup {
  Vec3<double> xi;
  double r = 0;
  Frame<double> frame;
  ProbeParams<double> params;
  CgoPair<double> pair;
};
/// Frame and CGO pair for lattice point `index`; xi = 0 uses omega = e_1.
ProbeSetup probe_setup(const Eigen::Vector3i& index, const ReconConfig& config, const BoxDomain& box);

struct GuardReport {
  double resonance_gap = 0;     // relative, +inf when attenuated
  double resolution_ratio = 0;  // worst over sampled lattice points
  std::size_t sample_count = 0;
};
/// Evaluates resonance and resolution guards for every probe the lattice implies.
GuardReport check_extraction_guards(const ReconConfig& config, const BoxDomain& box);

/// Seeds the per-sample noise stream from a model seed and the sample's lattice order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Probe -> solve -> traces -> noise -> pairing for each lattice point; value = -pairing.
std::vector<FourierSample> extract_fourier(const ScalarField& q, const ReconConfig& config,
                                           const NoiseModel& noise = {}, bool with_oracle = false);

/// Shares each forward solve across several noise models; result[model][sample].
std::vector<std::vector<FourierSample>> extract_fourier_batch(const ScalarField& q, const ReconConfig& config,
                                                              std::span<const NoiseModel> models,
                                                              bool with_oracle = false);

/// Trapezoid quadrature of int q(x) e^{-i xi.x} dx over the box.
cplx volume_fourier_oracle(const ScalarField& q, const Vec3<double>& xi);

struct Reconstruction {
  ScalarField field;          // real part of the truncated inverse
  double imag_residue = 0;    // ||Im|| / ||Re||
  bool imag_warning = false;  // imag_residue above 1%
  std::size_t samples_used = 0;
};

/// q_rec(x) = (2 pi)^-3 sum_{|xi| <= rho} value(xi) e^{i xi.x} dxi^3 on the box lattice.
/// High-band samples enter only when config.include_high_band is set.
Reconstruction truncated_inverse_ft(std::span<const FourierSample> samples, const ReconConfig& config,
                                    const BoxDomain& box);

struct ReconstructionErrors {
  double l2 = 0;        // ||q_rec - q||_L2 / ||q||_L2
  double h_minus_s = 0; // same in H^{-s}
};
ReconstructionErrors reconstruction_errors(const ScalarField& truth, const ScalarField& estimate, double s);

}  // namespace bhlab
