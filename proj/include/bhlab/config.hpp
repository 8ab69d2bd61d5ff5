#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/dtn.hpp"
#include "bhlab/field_solver.hpp"
#include "bhlab/grid.hpp"
#include "bhlab/lab.hpp"
#include "bhlab/potential.hpp"
#include "bhlab/recon.hpp"

namespace bhlab {

/// Validated configuration tree. Every field has a default, so an empty file is valid.
struct LabConfig {
  BoxDomain box;
  double eps_res = kDefaultResonanceEps;

  PotentialSpec potential;

  struct Probes {
    double k = 4;
    double b = 0;
    double a = 1;
    double r = 0;
    Vec3<double> omega = Vec3<double>::UnitX();
  } probes;

  struct Recon {
    double R_band = 1;
    bool include_high_band = false;
    double high_band_margin = 0;
    FaceQuadrature quadrature = FaceQuadrature::SineExact;
    double delta = 0;  // noise level for extract / reconstruct
  } recon;

  struct Sweep {
    std::vector<double> ks{2, 4, 8};
    std::vector<double> bs{0};
    std::vector<double> attenuation{0, 0.5, 1, 2};
    std::vector<double> deltas{1e-3};
    int trials = 10;
    std::uint64_t seed = 1;
    std::vector<double> amplitudes{0.05, 0.1, 0.2, 0.4};  // multiples of alpha0
    std::optional<double> C_fit;
  } sweep;

  struct Output {
    std::filesystem::path dir = "runs";
    bool plots = true;
    bool wall_time = false;
  } output;

  /// ReconConfig for the single-probe commands (k and b from the probes section).
  ReconConfig recon_config() const;
  SweepConfig k_sweep_config() const;
  /// Attenuation sweep at k = probes.k over the attenuation list.
  SweepConfig attenuation_sweep_config() const;
  LinearizationConfig linearization_config() const;
};

/// Parses a JSON document. Unknown keys, type mismatches and guard failures are all
/// collected and reported together in one ConfigError.
LabConfig parse_config_text(const std::string& text);
LabConfig parse_config(const std::filesystem::path& path);

/// Runs every guard against the tree; throws ConfigError listing all violations.
void validate_config(const LabConfig& config);

/// Full effective configuration as pretty-printed JSON; re-parses to an equal config.
std::string config_snapshot(const LabConfig& config);

}  // namespace bhlab
