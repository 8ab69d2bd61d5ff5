#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bhlab/grid.hpp"
#include "bhlab/potential.hpp"
#include "bhlab/recon.hpp"

namespace bhlab {

struct SweepConfig {
  std::vector<double> ks{2, 4, 8};
  std::vector<double> bs{0};
  std::vector<double> deltas{1e-3};
  int trials = 10;
  std::uint64_t base_seed = 1;
  PotentialSpec potential;
  BoxDomain box;
  ReconConfig recon;             // template; k and b are set per cell
  bool record_wall_time = false; // off keeps CSV output byte-reproducible
};

struct SweepRow {
  double k = 0, b = 0, delta = 0;
  int trial = 0;
  double err_l2 = 0;
  double err_h_minus_s = 0;
  double imag_residue = 0;
  double wall_time = 0;
};

struct SweepAggregate {
  double k = 0, b = 0, delta = 0;
  int count = 0;
  double mean_l2 = 0, std_l2 = 0;
  double mean_h_minus_s = 0, std_h_minus_s = 0;
};

struct CellDiagnostics {
  double k = 0, b = 0;
  GuardReport guards;
};

struct SweepResult {
  std::vector<SweepRow> rows;             // sorted by (k, b, delta, trial)
  std::vector<SweepAggregate> aggregates; // one per (k, b, delta)
  std::vector<CellDiagnostics> diagnostics;
};

/// Per-cell noise seed from the base seed and the cell tuple.
std::uint64_t cell_seed(std::uint64_t base, double k, double b, double delta, int trial);

/// Checks every (k, b) cell's guards before any work; throws ConfigError listing all failures.
std::vector<CellDiagnostics> validate_sweep(const SweepConfig& config);

/// extract -> reconstruct -> error for every (k, b, delta, trial).
SweepResult k_sweep(const SweepConfig& config);
/// Same pipeline with the attenuation list as the varied axis.
SweepResult attenuation_sweep(const SweepConfig& config);

std::vector<SweepAggregate> aggregate_rows(const std::vector<SweepRow>& rows);

struct LinearizationConfig {
  double k = 4;
  double a = 1;  // probe growth; the probe is zeta1 for r = 0, omega = e_1
  std::vector<double> factors{0.05, 0.1, 0.2, 0.4};  // multiples of alpha0
  PotentialSpec potential;
  BoxDomain box;
  double tol = 1e-13;
  int max_iter = 200;
  double eps_res = kDefaultResonanceEps;
};

struct LinearizationRow {
  double amplitude = 0;       // absolute multiplier on the base potential
  double residual = 0;        // ||u - u0 - u1||_L2
  double residual_ratio = 0;  // residual / ||u0||_L2
  int iterations = 0;
};

struct LinearizationResult {
  std::vector<LinearizationRow> rows;
  double alpha0 = 0;     // 1 / (max|q| ||G||): contraction guaranteed below it
  double fit_slope = 0;  // log-log slope of residual against amplitude
  std::vector<std::string> warnings;
};

/// Compares the full fixed-point solution with the Born term u0 + u1 at each amplitude.
LinearizationResult linearization_experiment(const LinearizationConfig& config);

/// Least-squares slope of log(y) against log(x), skipping non-positive entries.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bhlab
