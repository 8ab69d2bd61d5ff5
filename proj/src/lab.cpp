#include "bhlab/lab.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "bhlab/field_solver.hpp"

namespace bhlab {

std::uint64_t cell_seed(std::uint64_t base, double k, double b, double delta, int trial) {
  std::uint64_t s = derive_seed(base, std::bit_cast<std::uint64_t>(k));
  s = derive_seed(s, std::bit_cast<std::uint64_t>(b));
  s = derive_seed(s, std::bit_cast<std::uint64_t>(delta));
  return derive_seed(s, std::uint64_t(trial));
}

std::vector<CellDiagnostics> validate_sweep(const SweepConfig& config) {
  std::vector<std::string> problems;
  if (config.ks.empty()) problems.push_back("k list is empty");
  if (config.bs.empty()) problems.push_back("b list is empty");
  if (config.deltas.empty()) problems.push_back("delta list is empty");
  if (config.trials < 1) problems.push_back("trials must be >= 1");
  for (double b : config.bs)
    if (!(b >= 0)) problems.push_back("b = " + std::to_string(b) + " is negative");
  for (double d : config.deltas)
    if (!(d >= 0)) problems.push_back("delta = " + std::to_string(d) + " is negative");
  try {
    config.box.validate();
    validate_potential(config.potential, config.box);
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }

  std::vector<CellDiagnostics> diags;
  if (problems.empty()) {
    for (double k : config.ks)
      for (double b : config.bs) {
        ReconConfig cell = config.recon;
        cell.k = k;
        cell.b = b;
        try {
          diags.push_back({k, b, check_extraction_guards(cell, config.box)});
        } catch (const std::exception& e) {
          std::ostringstream os;
          os << "cell (k=" << k << ", b=" << b << "): " << e.what();
          problems.push_back(os.str());
        }
      }
  }
  if (!problems.empty()) {
    std::ostringstream os;
    os << "sweep configuration rejected (" << problems.size() << " problem(s)):";
    for (const auto& p : problems) os << "\n  - " << p;
    throw ConfigError(os.str());
  }
  return diags;
}

std::vector<SweepAggregate> aggregate_rows(const std::vector<SweepRow>& rows) {
  std::vector<SweepAggregate> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].k == rows[i].k && rows[j].b == rows[i].b && rows[j].delta == rows[i].delta) ++j;
    SweepAggregate a{rows[i].k, rows[i].b, rows[i].delta, int(j - i)};
    for (std::size_t t = i; t < j; ++t) {
      a.mean_l2 += rows[t].err_l2;
      a.mean_h_minus_s += rows[t].err_h_minus_s;
    }
    a.mean_l2 /= a.count;
    a.mean_h_minus_s /= a.count;
    if (a.count > 1) {
      for (std::size_t t = i; t < j; ++t) {
        a.std_l2 += std::pow(rows[t].err_l2 - a.mean_l2, 2);
        a.std_h_minus_s += std::pow(rows[t].err_h_minus_s - a.mean_h_minus_s, 2);
      }
      a.std_l2 = std::sqrt(a.std_l2 / (a.count - 1));
      a.std_h_minus_s = std::sqrt(a.std_h_minus_s / (a.count - 1));
    }
    out.push_back(a);
    i = j;
  }
  return out;
}

namespace {

SweepResult run_sweep(const SweepConfig& config) {
  SweepResult result;
  result.diagnostics = validate_sweep(config);
  const ScalarField q = synthesize_potential(config.potential, config.box);

  std::vector<double> ks = config.ks, bs = config.bs, deltas = config.deltas;
  std::sort(ks.begin(), ks.end());
  std::sort(bs.begin(), bs.end());
  std::sort(deltas.begin(), deltas.end());

  for (double k : ks)
    for (double b : bs) {
      ReconConfig cell = config.recon;
      cell.k = k;
      cell.b = b;
      std::vector<NoiseModel> models;
      for (double delta : deltas)
        for (int t = 0; t < config.trials; ++t) models.push_back({delta, cell_seed(config.base_seed, k, b, delta, t)});

      const auto start = std::chrono::steady_clock::now();
      const auto batch = extract_fourier_batch(q, cell, models);
      const double shared = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

      std::size_t mi = 0;
      for (double delta : deltas)
        for (int t = 0; t < config.trials; ++t, ++mi) {
          const auto t0 = std::chrono::steady_clock::now();
          const Reconstruction rec = truncated_inverse_ft(batch[mi], cell, config.box);
          const ReconstructionErrors err = reconstruction_errors(q, rec.field, cell.s);
          const double own = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          SweepRow row{k, b, delta, t, err.l2, err.h_minus_s, rec.imag_residue, 0.0};
          if (config.record_wall_time) row.wall_time = shared / double(models.size()) + own;
          result.rows.push_back(row);
        }
    }
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

}  // namespace

SweepResult k_sweep(const SweepConfig& config) { return run_sweep(config); }

SweepResult attenuation_sweep(const SweepConfig& config) { return run_sweep(config); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nan("");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

LinearizationResult linearization_experiment(const LinearizationConfig& config) {
  if (config.factors.empty()) throw ConfigError("linearization_experiment: amplitude list is empty");
  const ScalarField q = synthesize_potential(config.potential, config.box);
  const ProbeParams<double> params{config.k, 0.0, config.a, 0.0};
  const CgoPair<double> pair = cgo_pair(params, orthonormal_frame<double>(Vec3<double>::UnitX()));
  check_resolution(std::sqrt(squared_modulus(pair.zeta1)), config.box);
  const cplx kappa = pair.kappa;
  check_resonance(kappa, config.box, config.eps_res);

  const ScalarField u0 = cgo_field(pair.zeta1, config.box);
  const double u0_norm = l2_norm(u0);
  const double qmax = q.array().abs().maxCoeff();

  LinearizationResult result;
  result.alpha0 = qmax > 0 ? 1.0 / (qmax * green_operator_norm(kappa, config.box)) : 0.0;

  std::vector<double> factors = config.factors;
  std::sort(factors.begin(), factors.end());
  std::vector<LinearizationRow> rows(factors.size());
  std::vector<bool> keep(factors.size(), true);
  bool converged_above = false;
  for (std::size_t idx = factors.size(); idx-- > 0;) {
    const double amp = factors[idx] * result.alpha0;
    const ScalarField scaled = cplx(amp) * q;
    LinearizationRow row;
    row.amplitude = amp;
    if (amp != 0) {
      try {
        const FixedPointResult full =
            full_solve_fixed_point(scaled, u0, kappa, config.tol, config.max_iter, config.eps_res);
        const ScalarField u1 = green_apply(kappa, pointwise_product(scaled, u0), config.eps_res);
        row.residual = l2_norm(full.u - u0 - u1);
        row.iterations = full.iterations;
      } catch (const DivergenceError& e) {
        if (converged_above) throw;
        std::ostringstream os;
        os << "amplitude " << amp << " dropped: " << e.what();
        result.warnings.push_back(os.str());
        std::cerr << "warning: " << os.str() << '\n';
        keep[idx] = false;
        continue;
      }
    }
    row.residual_ratio = row.residual / u0_norm;
    rows[idx] = row;
    converged_above = true;
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!keep[i]) continue;
    result.rows.push_back(rows[i]);
    xs.push_back(rows[i].amplitude);
    ys.push_back(rows[i].residual);
  }
  result.fit_slope = loglog_slope(xs, ys);
  return result;
}

}  // namespace bhlab
