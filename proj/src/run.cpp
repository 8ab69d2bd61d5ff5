#include "bhlab/run.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bhlab/bound.hpp"
#include "bhlab/csv.hpp"
#include "bhlab/dtn.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/field_io.hpp"
#include "bhlab/field_solver.hpp"
#include "bhlab/sine_transform.hpp"
#include "bhlab/svg_plot.hpp"
#include "json.hpp"

namespace bhlab {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return sha256_hex(buf.str());
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"probe", "forward", "extract", "reconstruct",
                                              "sweep", "attsweep", "linerr", "bound"};
  return names;
}

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw ConfigError(std::string(what) + ": not an unsigned integer: " + text);
  return v;
}

int resolve_threads(const RunOptions& options) {
  if (options.threads) return *options.threads;
  if (auto t = env("BHLAB_THREADS")) return int(parse_u64(*t, "BHLAB_THREADS"));
  return 0;
}

std::string utc_stamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string fmt(cplx z) {
  std::ostringstream os;
  os << std::setprecision(12) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string fmt(const CVec3<double>& v) {
  return "(" + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + ")";
}

// Run directory bookkeeping: tracks write order, checks, guards and warnings for the manifest.
class Run {
 public:
  Run(const std::string& command, const LabConfig& config, std::ostream& out)
      : command_(command), config_(config), out_(out), start_(std::chrono::steady_clock::now()) {
    snapshot_ = config_snapshot(config);
    const std::string base = utc_stamp() + "-" + command + "-" + sha256_hex(command + "\n" + snapshot_).substr(0, 8);
    fs::create_directories(config.output.dir);
    dir_ = config.output.dir / base;
    for (int i = 1; fs::exists(dir_); ++i) dir_ = config.output.dir / (base + "-" + std::to_string(i));
    fs::create_directory(dir_);
    write_text("config_snapshot.json", snapshot_);
  }

  const fs::path& dir() const { return dir_; }
  fs::path path(const std::string& name) const { return dir_ / name; }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream os(path(name), std::ios::binary);
    os << text;
    if (!os) throw std::runtime_error("cannot write " + path(name).string());
    os.close();
    record(name);
  }
  void write_table(const std::string& name, const CsvTable& table) {
    write_csv(path(name), table);
    record(name);
  }
  void record(const std::string& name) { files_.push_back(name); }

  void check(const std::string& name, bool passed, const std::string& detail) {
    checks_.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    if (!passed) failed_ = true;
    out_ << (passed ? "[ok]   " : "[FAIL] ") << name << ": " << detail << "\n";
  }
  void warn(const std::string& message) {
    warnings_.push_back(message);
    out_ << "warning: " << message << "\n";
  }
  void guard(ordered_json entry) { guards_.push_back(std::move(entry)); }
  void info(const std::string& key, ordered_json value) { info_[key] = std::move(value); }
  void plots(const std::vector<std::string>& csvs) {
    if (!config_.output.plots) return;
    std::vector<fs::path> paths;
    for (const auto& c : csvs) paths.push_back(path(c));
    for (const auto& svg : emit_plots(paths, dir_)) record(svg.filename().string());
  }

  bool failed() const { return failed_; }

  void finish(const std::optional<std::string>& error) {
    ordered_json m;
    m["artifact_version"] = kArtifactVersion;
    m["command"] = command_;
    m["config_snapshot"] = ordered_json::parse(snapshot_);
    m["noise_proxy"] = "delta is the relative trace-noise level standing in for the linearised DtN operator norm";
    m["timings"] = {{"command_seconds",
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count()}};
    m["guards"] = guards_;
    m["self_checks"] = checks_;
    m["warnings"] = warnings_;
    if (!info_.empty()) m["results"] = info_;
    if (error) m["error"] = *error;
    ordered_json inventory = ordered_json::array();
    for (const auto& f : files_)
      inventory.push_back({{"name", f}, {"bytes", fs::file_size(path(f))}, {"sha256", sha256_file(path(f))}});
    m["files"] = inventory;
    std::vector<std::string> order = files_;
    order.push_back("manifest.json");
    m["write_order"] = order;
    m["status"] = error ? "error" : failed_ ? "self_check_failed" : "ok";
    std::ofstream os(path("manifest.json"), std::ios::binary);
    os << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  const LabConfig& config_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  std::string snapshot_;
  fs::path dir_;
  std::vector<std::string> files_;
  ordered_json checks_ = ordered_json::array();
  ordered_json guards_ = ordered_json::array();
  std::vector<std::string> warnings_;
  ordered_json info_ = ordered_json::object();
  bool failed_ = false;
};

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

ordered_json guard_entry(const std::string& label, double k, double b, const GuardReport& g) {
  ordered_json e;
  e["cell"] = label;
  e["k"] = k;
  e["b"] = b;
  e["resonance_gap"] = std::isfinite(g.resonance_gap) ? ordered_json(g.resonance_gap) : ordered_json("attenuated");
  e["resolution_ratio"] = g.resolution_ratio;
  e["samples"] = g.sample_count;
  return e;
}

struct ProbeData {
  Frame<double> frame;
  ProbeParams<double> params;
  CgoPair<double> pair;
};

ProbeData configured_probe(const LabConfig& c) {
  ProbeData p;
  p.frame = orthonormal_frame(c.probes.omega);
  p.params = {c.probes.k, c.probes.b, c.probes.a, c.probes.r};
  p.pair = cgo_pair(p.params, p.frame);
  return p;
}

void cmd_probe(Run& run, const LabConfig& c, std::ostream& out) {
  const ProbeData p = configured_probe(c);
  const cplx kappa = p.pair.kappa;
  const double r1 = std::abs(bilinear_dot(p.pair.zeta1, p.pair.zeta1) - kappa) / std::abs(kappa);
  const double r2 = std::abs(bilinear_dot(p.pair.zeta2, p.pair.zeta2) - kappa) / std::abs(kappa);
  const double r3 = (p.pair.zeta1 + p.pair.zeta2 + (c.probes.r * c.probes.omega).cast<cplx>()).norm();
  out << "zeta1 = " << fmt(p.pair.zeta1) << "\n";
  out << "zeta2 = " << fmt(p.pair.zeta2) << "\n";
  out << "kappa = " << fmt(kappa) << "\n";
  out << "residuals: |z1.z1 - kappa|/|kappa| = " << sci(r1) << ", |z2.z2 - kappa|/|kappa| = " << sci(r2)
      << ", |z1 + z2 + r omega| = " << sci(r3) << "\n";

  ordered_json j;
  const auto cv = [](const CVec3<double>& v) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < 3; ++i) a.push_back({v[i].real(), v[i].imag()});
    return a;
  };
  j["zeta1"] = cv(p.pair.zeta1);
  j["zeta2"] = cv(p.pair.zeta2);
  j["kappa"] = {kappa.real(), kappa.imag()};
  j["residuals"] = {{"zeta1_dot", r1}, {"zeta2_dot", r2}, {"sum", r3}};
  run.write_text("probe.json", j.dump(2) + "\n");

  run.check("zeta1.zeta1 = kappa", r1 <= 1e-12, sci(r1));
  run.check("zeta2.zeta2 = kappa", r2 <= 1e-12, sci(r2));
  run.check("zeta1 + zeta2 = -r omega", r3 <= 1e-12, sci(r3));
  if (c.probes.b == 0) {
    const double target = c.probes.k * c.probes.k + 2 * c.probes.a * c.probes.a;
    const double r4 = std::abs(squared_modulus(p.pair.zeta1) - target) / target;
    run.check("|zeta1|^2 = k^2 + 2a^2", r4 <= 1e-12, sci(r4));
  }
}

void cmd_forward(Run& run, const LabConfig& c, std::ostream& out) {
  const ProbeData p = configured_probe(c);
  const cplx kappa = p.pair.kappa;
  const ScalarField q = synthesize_potential(c.potential, c.box);
  check_resonance(kappa, c.box, c.eps_res);
  check_resolution(std::sqrt(squared_modulus(p.pair.zeta1)), c.box);
  run.guard({{"cell", "probe"},
             {"resonance_gap", kappa.imag() != 0 ? ordered_json("attenuated")
                                                 : ordered_json(resonance_margin(kappa, c.box).relative_gap)},
             {"resolution_ratio", resolution_ratio(std::sqrt(squared_modulus(p.pair.zeta1)), c.box)}});

  const ScalarField u0 = cgo_field(p.pair.zeta1, c.box);
  const SineSpectrum source = sine_transform(pointwise_product(q, u0));
  const SineSpectrum u1s = green_apply_spectral(kappa, source, c.eps_res);
  const ScalarField u1 = inverse_sine_transform(u1s);
  write_field(run.path("q.bhf"), q);
  run.record("q.bhf");
  write_field(run.path("u1.bhf"), u1);
  run.record("u1.bhf");

  const SineSpectrum applied = apply_biharmonic_spectral(kappa, u1s);
  const double src_norm = source.coeffs.array().matrix().norm();
  const double pde = src_norm > 0 ? (applied.coeffs.array() + source.coeffs.array()).matrix().norm() / src_norm : 0;
  run.check("spectral PDE residual", pde <= 1e-10, sci(pde));
  const double scale = std::max(1.0, u1.array().abs().maxCoeff());
  const double bnd = boundary_max_abs(u1) / scale;
  run.check("Navier boundary values", bnd <= 1e-12, sci(bnd));

  const FaceTraces traces = navier_traces(u1s);
  const cplx pairing = boundary_pairing(traces, p.pair.zeta2, kappa, c.recon.quadrature);
  const cplx volume = volume_fourier_oracle(q, c.probes.r * c.probes.omega);
  out << "boundary pairing = " << fmt(pairing) << "\nvolume integral  = " << fmt(volume) << "\n";
  run.info("pairing", {pairing.real(), pairing.imag()});
  run.info("volume_integral", {volume.real(), volume.imag()});
  if (std::abs(volume) > 1e-14) {
    const double closure = std::abs(pairing + volume) / std::abs(volume);
    run.check("Green identity closure", closure <= 1e-3, sci(closure));
  } else {
    run.check("Green identity closure", std::abs(pairing) <= 1e-12, "q = 0, |pairing| = " + sci(std::abs(pairing)));
  }
}

std::vector<FourierSample> do_extract(Run& run, const LabConfig& c, const ScalarField& q) {
  const ReconConfig rc = c.recon_config();
  const GuardReport g = check_extraction_guards(rc, c.box);
  run.guard(guard_entry("extract", rc.k, rc.b, g));
  auto samples = extract_fourier(q, rc, NoiseModel{c.recon.delta, c.sweep.seed}, true);
  run.write_table("fourier_samples.csv", samples_table(samples));

  bool finite = true;
  double worst = 0, scale = 0;
  for (const auto& s : samples) {
    finite = finite && std::isfinite(s.value.real()) && std::isfinite(s.value.imag());
    if (s.band != Band::Low) continue;
    worst = std::max(worst, std::abs(s.value - *s.oracle));
    scale = std::max(scale, std::abs(*s.oracle));
  }
  run.check("samples finite", finite, std::to_string(samples.size()) + " samples");
  if (c.recon.delta == 0) {
    const double rel = scale > 0 ? worst / scale : worst;
    run.check("low band matches volume oracle", rel <= 1e-3 || worst <= 1e-12,
              "max |value - oracle| / max |oracle| = " + sci(rel));
  }
  return samples;
}

void cmd_extract(Run& run, const LabConfig& c, std::ostream& out) {
  const ScalarField q = synthesize_potential(c.potential, c.box);
  const auto samples = do_extract(run, c, q);
  out << samples.size() << " samples written to " << run.path("fourier_samples.csv").string() << "\n";
}

void cmd_reconstruct(Run& run, const LabConfig& c, std::ostream& out) {
  const ScalarField q = synthesize_potential(c.potential, c.box);
  const auto samples = do_extract(run, c, q);
  const ReconConfig rc = c.recon_config();
  const Reconstruction rec = truncated_inverse_ft(samples, rc, c.box);
  write_field(run.path("q_rec.bhf"), rec.field);
  run.record("q_rec.bhf");
  const ReconstructionErrors e = reconstruction_errors(q, rec.field, rc.s);
  CsvTable t;
  t.header = {"k", "b", "delta", "err_L2", "err_Hminus_s", "imag_residue", "samples_used"};
  t.rows.push_back({format_number(rc.k), format_number(rc.b), format_number(c.recon.delta), format_number(e.l2),
                    format_number(e.h_minus_s), format_number(rec.imag_residue), std::to_string(rec.samples_used)});
  run.write_table("reconstruction.csv", t);
  out << "err_L2 = " << e.l2 << ", err_Hminus_s = " << e.h_minus_s << ", imag_residue = " << rec.imag_residue
      << "\n";
  if (rec.imag_warning) run.warn("imaginary residue " + sci(rec.imag_residue) + " exceeds 1% of the real part");
  run.check("errors finite", std::isfinite(e.l2) && std::isfinite(e.h_minus_s),
            "L2 " + sci(e.l2) + ", H^-s " + sci(e.h_minus_s));
}

void check_sweep(Run& run, const SweepConfig& sc, const SweepResult& r, const std::string& label) {
  for (const auto& d : r.diagnostics) run.guard(guard_entry(label, d.k, d.b, d.guards));
  const std::size_t expected = sc.ks.size() * sc.bs.size() * sc.deltas.size() * std::size_t(sc.trials);
  run.check("row count", r.rows.size() == expected,
            std::to_string(r.rows.size()) + " rows, expected " + std::to_string(expected));
  bool ok = true;
  for (const auto& row : r.rows)
    ok = ok && std::isfinite(row.err_l2) && row.err_l2 >= 0 && std::isfinite(row.err_h_minus_s) && row.err_h_minus_s >= 0;
  run.check("errors finite and non-negative", ok, "");
}

void print_aggregates(const SweepResult& r, std::ostream& out) {
  out << "k\tb\tdelta\tmean_err_L2\tstd\tmean_err_Hminus_s\tstd\n";
  for (const auto& a : r.aggregates)
    out << a.k << "\t" << a.b << "\t" << a.delta << "\t" << a.mean_l2 << "\t" << a.std_l2 << "\t" << a.mean_h_minus_s
        << "\t" << a.std_h_minus_s << "\n";
}

void cmd_sweep(Run& run, const LabConfig& c, std::ostream& out) {
  const SweepConfig sc = c.k_sweep_config();
  const SweepResult r = k_sweep(sc);
  run.write_table("sweep.csv", sweep_table(r));
  check_sweep(run, sc, r, "sweep");
  print_aggregates(r, out);
  run.plots({"sweep.csv"});
}

void cmd_attsweep(Run& run, const LabConfig& c, std::ostream& out) {
  const SweepConfig sc = c.attenuation_sweep_config();
  const SweepResult r = attenuation_sweep(sc);
  run.write_table("attenuation.csv", sweep_table(r));
  check_sweep(run, sc, r, "attenuation");
  print_aggregates(r, out);
  run.plots({"attenuation.csv"});
}

void cmd_linerr(Run& run, const LabConfig& c, std::ostream& out) {
  const LinearizationResult r = linearization_experiment(c.linearization_config());
  for (const auto& w : r.warnings) run.warn(w);
  run.write_table("linearization.csv", linearization_table(r));
  run.info("alpha0", r.alpha0);
  out << "alpha0 = " << r.alpha0 << "\namplitude\tresidual_ratio\titerations\n";
  for (const auto& row : r.rows) out << row.amplitude << "\t" << row.residual_ratio << "\t" << row.iterations << "\n";
  out << "fitted slope = " << r.fit_slope << "\n";
  run.check("quadratic slope", std::abs(r.fit_slope - 2.0) <= 0.15, "slope " + std::to_string(r.fit_slope));
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const double step = r.rows[i].amplitude / r.rows[i - 1].amplitude;
    if (std::abs(step - 2.0) > 1e-9) continue;
    const double ratio = r.rows[i].residual / r.rows[i - 1].residual;
    run.check("halving ratio " + std::to_string(i), ratio >= 3.5 && ratio <= 4.5, std::to_string(ratio));
  }
  run.plots({"linearization.csv"});
}

void cmd_bound(Run& run, const LabConfig& c, const RunOptions& options, std::ostream& out) {
  double delta = 0;
  for (double d : c.sweep.deltas)
    if (d > 0 && (delta == 0 || d < delta)) delta = d;
  if (delta == 0) throw ConfigError("bound: sweep.delta needs a positive entry");
  const double b = c.probes.b;
  const double s = c.potential.s;
  double C = 1.0;
  if (c.sweep.C_fit) {
    C = *c.sweep.C_fit;
  } else if (options.fit_from) {
    const auto rows = sweep_rows_from(read_csv(*options.fit_from));
    std::map<double, std::pair<double, int>> acc;
    for (const auto& row : rows)
      if (row.delta == delta && row.b == b) {
        acc[row.k].first += row.err_h_minus_s;
        acc[row.k].second += 1;
      }
    if (acc.empty()) throw InvalidInput("bound: " + options.fit_from->string() + " has no rows at the chosen delta and b");
    std::vector<double> ks, errs;
    for (const auto& [k, v] : acc) {
      ks.push_back(k);
      errs.push_back(v.first / v.second);
    }
    C = fit_bound_constant(ks, errs, b, delta, s, PotentialSpec::dimension);
    run.info("fit_points", acc.size());
  } else {
    run.warn("no C_fit or --fit-from given; using C = 1");
  }

  const auto [kmin_it, kmax_it] = std::minmax_element(c.sweep.ks.begin(), c.sweep.ks.end());
  const double kmin = std::max(1.0, *kmin_it), kmax = std::max(kmin, *kmax_it);
  const int points = 33;
  std::vector<double> ks, values;
  bool ok = true;
  for (int i = 0; i < points; ++i) {
    const double k = kmin + (kmax - kmin) * i / (points - 1);
    ks.push_back(k);
    values.push_back(theoretical_bound(k, b, delta, s, PotentialSpec::dimension, C));
    ok = ok && std::isfinite(values.back()) && values.back() > 0;
  }
  run.write_table("bound_overlay.csv", bound_table(ks, values));
  const double kstar = bound_crossover(delta, s, PotentialSpec::dimension);
  run.info("C", C);
  run.info("delta", delta);
  run.info("crossover_k", kstar);
  out << "C = " << C << ", delta = " << delta << ", crossover k* = " << kstar << " (C = 1, b = 0)\n";
  run.check("bound finite and positive", ok, std::to_string(points) + " points");
  run.plots({"bound_overlay.csv"});
}

}  // namespace

LabConfig resolve_config(const RunOptions& options) {
  LabConfig c = options.config_path ? parse_config(*options.config_path) : parse_config_text("{}");
  if (auto s = env("BHLAB_SEED")) c.sweep.seed = parse_u64(*s, "BHLAB_SEED");
  if (auto o = env("BHLAB_OUT")) c.output.dir = *o;
  if (options.seed) c.sweep.seed = *options.seed;
  if (options.out_dir) c.output.dir = *options.out_dir;
  if (options.include_high_band) c.recon.include_high_band = true;
  if (options.wall_time) c.output.wall_time = true;
  validate_config(c);
  return c;
}

int run_command(const std::string& name, const RunOptions& options, std::ostream& out, std::ostream& err) {
  if (std::find(command_names().begin(), command_names().end(), name) == command_names().end()) {
    err << "error: unknown command '" << name << "'\n";
    return 2;
  }
  LabConfig config;
  try {
    config = resolve_config(options);
#ifdef _OPENMP
    if (const int t = resolve_threads(options); t > 0) omp_set_num_threads(t);
#else
    resolve_threads(options);
#endif
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::unique_ptr<Run> run;
  try {
    run = std::make_unique<Run>(name, config, out);
  } catch (const std::exception& e) {
    err << "error: cannot create run directory: " << e.what() << "\n";
    return 2;
  }
  out << "run directory: " << run->dir().string() << "\n";

  std::optional<std::string> error;
  try {
    if (name == "probe") cmd_probe(*run, config, out);
    else if (name == "forward") cmd_forward(*run, config, out);
    else if (name == "extract") cmd_extract(*run, config, out);
    else if (name == "reconstruct") cmd_reconstruct(*run, config, out);
    else if (name == "sweep") cmd_sweep(*run, config, out);
    else if (name == "attsweep") cmd_attsweep(*run, config, out);
    else if (name == "linerr") cmd_linerr(*run, config, out);
    else if (name == "bound") cmd_bound(*run, config, options, out);
  } catch (const std::exception& e) {
    error = e.what();
    err << "error: " << e.what() << "\n";
  }
  try {
    run->finish(error);
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << "\n";
    return 2;
  }
  if (error) return 2;
  return run->failed() ? 1 : 0;
}

int plot_command(const std::vector<fs::path>& csv_files, const fs::path& out_dir, std::ostream& out,
                 std::ostream& err) {
  try {
    fs::create_directories(out_dir);
    for (const auto& p : emit_plots(csv_files, out_dir)) out << p.string() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace bhlab
