#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "bhlab/config.hpp"
#include "bhlab/csv.hpp"
#include "bhlab/errors.hpp"
#include "bhlab/run.hpp"
#include "bhlab/svg_plot.hpp"
#include "json.hpp"

using namespace bhlab;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "bhlab_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

// Small, fast configuration for end-to-end command runs.
const char* kSmallConfig = R"({
  "domain": {"length": 6.0, "nodes": 23},
  "potential": {"bumps": [{"center": [3, 3, 3], "width": 0.6}]},
  "probes": {"k": 2, "a": 1, "r": 2},
  "sweep": {"k": [2, 2.5], "delta": [0.01], "trials": 2, "attenuation": [0, 1]},
  "output": {"plots": true}
})";

struct Outcome {
  int status;
  std::string out, err;
  fs::path run_dir;
};

Outcome run(const std::string& command, RunOptions options) {
  std::ostringstream out, err;
  Outcome o;
  o.status = run_command(command, options, out, err);
  o.out = out.str();
  o.err = err.str();
  std::smatch m;
  if (std::regex_search(o.out, m, std::regex("run directory: (.*)\n"))) o.run_dir = m[1].str();
  return o;
}

RunOptions small_options(const fs::path& dir) {
  RunOptions o;
  o.config_path = write_file(dir / "config.json", kSmallConfig);
  o.out_dir = dir / "runs";
  return o;
}

}  // namespace

TEST_CASE("minimal config fills and echoes every default") {
  const LabConfig c = parse_config_text(R"({"probes": {"k": 4}})");
  CHECK(c.probes.k == 4);
  CHECK(c.box.length == 6.0);
  CHECK(c.box.nodes == 63);
  const json snap = json::parse(config_snapshot(c));
  for (const char* section : {"domain", "potential", "probes", "recon", "sweep", "output"}) CHECK(snap.contains(section));
  CHECK(snap["domain"]["eps_res"] == 1e-6);
  CHECK(snap["potential"]["s"] == 2.0);
  CHECK(snap["potential"]["bumps"][0].contains("support_radius"));
  CHECK(snap["recon"]["R_band"] == 1.0);
  CHECK(snap["recon"]["quadrature"] == "sine_exact");
  CHECK(snap["sweep"]["attenuation"].size() == 4);
  CHECK(snap["sweep"]["trials"] == 10);
  CHECK(snap["output"]["wall_time"] == false);
  // the snapshot is itself a valid config that reproduces itself
  CHECK(config_snapshot(parse_config_text(config_snapshot(c))) == config_snapshot(c));
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"potential": {"s": 1.0}})"),
                       doctest::Contains("s must exceed n/2 = 1.5"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"potential": {"smoothness": 3}})"),
                       doctest::Contains("potential.smoothness"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"extras": {}})"), doctest::Contains("'extras'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"probes": {"k": "four"}})"), doctest::Contains("probes.k"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);

  // every violation is listed at once
  try {
    parse_config_text(R"({"potential": {"s": 1.0}, "probes": {"k": 0.5}, "sweep": {"trials": 0, "typo": 1}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("s must exceed") != std::string::npos);
    CHECK(what.find("k must be >= 1") != std::string::npos);
    CHECK(what.find("trials") != std::string::npos);
    CHECK(what.find("sweep.typo") != std::string::npos);
  }

  // resonance guards run eagerly for every sweep cell
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"domain": {"length": 6.283185307179586}, "sweep": {"k": [6]}})"),
                       doctest::Contains("resonan"), ConfigError);
}

TEST_CASE("override precedence: flag over environment over file") {
  const fs::path dir = fresh_dir("precedence");
  RunOptions o;
  o.config_path = write_file(dir / "c.json", R"({"sweep": {"seed": 3}, "output": {"dir": "from_file"}})");
  CHECK(resolve_config(o).sweep.seed == 3);
  ::setenv("BHLAB_SEED", "5", 1);
  ::setenv("BHLAB_OUT", "from_env", 1);
  CHECK(resolve_config(o).sweep.seed == 5);
  CHECK(resolve_config(o).output.dir == "from_env");
  o.seed = 7;
  o.out_dir = "from_flag";
  CHECK(resolve_config(o).sweep.seed == 7);
  CHECK(resolve_config(o).output.dir == "from_flag");
  ::setenv("BHLAB_SEED", "x", 1);
  o.seed.reset();
  CHECK_THROWS_AS(resolve_config(o), ConfigError);
  ::unsetenv("BHLAB_SEED");
  ::unsetenv("BHLAB_OUT");
}

TEST_CASE("probe command prints the pair and its residuals") {
  const fs::path dir = fresh_dir("probe");
  const Outcome o = run("probe", small_options(dir));
  CHECK(o.status == 0);
  CHECK(o.out.find("zeta1 = (-1 + 0i, 2 + 0i, 0 + 1i)") != std::string::npos);
  CHECK(o.out.find("[FAIL]") == std::string::npos);
  CHECK(fs::exists(o.run_dir / "probe.json"));
}

TEST_CASE("run directory: snapshot first, manifest last, checksums valid") {
  const fs::path dir = fresh_dir("manifest");
  const Outcome o = run("extract", small_options(dir));
  REQUIRE(o.status == 0);
  const json m = json::parse(read_file(o.run_dir / "manifest.json"));
  const auto order = m["write_order"].get<std::vector<std::string>>();
  REQUIRE(order.size() >= 3);
  CHECK(order.front() == "config_snapshot.json");
  CHECK(order.back() == "manifest.json");
  CHECK(fs::last_write_time(o.run_dir / "config_snapshot.json") <= fs::last_write_time(o.run_dir / "fourier_samples.csv"));
  CHECK(fs::last_write_time(o.run_dir / "fourier_samples.csv") <= fs::last_write_time(o.run_dir / "manifest.json"));
  for (const auto& f : m["files"]) CHECK(f["sha256"] == sha256_file(o.run_dir / f["name"].get<std::string>()));
  CHECK(m["config_snapshot"] == json::parse(read_file(o.run_dir / "config_snapshot.json")));
  CHECK(m["artifact_version"] == kArtifactVersion);
  CHECK(!m["guards"].empty());
  CHECK(m["status"] == "ok");
  // directory name: UTC timestamp, command, short hash
  CHECK(std::regex_match(o.run_dir.filename().string(), std::regex(R"(\d{8}T\d{6}Z-extract-[0-9a-f]{8}(-\d+)?)")));
}

TEST_CASE("extract on a zero potential writes zero samples") {
  const fs::path dir = fresh_dir("zero");
  RunOptions opts = small_options(dir);
  write_file(*opts.config_path, R"({
    "domain": {"nodes": 23},
    "potential": {"bumps": [{"amplitude": 0, "width": 0.6}]},
    "probes": {"k": 2},
    "sweep": {"k": [2], "attenuation": [0]}
  })");
  const Outcome o = run("extract", opts);
  CHECK(o.status == 0);
  const CsvTable t = read_csv(o.run_dir / "fourier_samples.csv");
  CHECK(t.header == kSamplesHeader);
  CHECK(!t.rows.empty());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(std::abs(t.number(i, t.column("re"))) <= 1e-12);
    CHECK(std::abs(t.number(i, t.column("im"))) <= 1e-12);
  }
}

TEST_CASE("forward and reconstruct commands") {
  const fs::path dir = fresh_dir("forward");
  const Outcome f = run("forward", small_options(dir));
  CHECK(f.status == 0);
  CHECK(fs::exists(f.run_dir / "u1.bhf"));
  const Outcome r = run("reconstruct", small_options(dir));
  CHECK(r.status == 0);
  CHECK(read_csv(r.run_dir / "reconstruction.csv").rows.size() == 1);
  CHECK(fs::exists(r.run_dir / "q_rec.bhf"));
}

TEST_CASE("sweep is reproducible byte for byte") {
  const fs::path dir = fresh_dir("determinism");
  const Outcome a = run("sweep", small_options(dir));
  const Outcome b = run("sweep", small_options(dir));
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(a.run_dir != b.run_dir);
  CHECK(sha256_file(a.run_dir / "sweep.csv") == sha256_file(b.run_dir / "sweep.csv"));
  CHECK(fs::exists(a.run_dir / "sweep.svg"));

  // rerunning from the snapshot reproduces the outputs
  RunOptions from_snapshot;
  from_snapshot.config_path = a.run_dir / "config_snapshot.json";
  from_snapshot.out_dir = dir / "runs";
  const Outcome c = run("sweep", from_snapshot);
  REQUIRE(c.status == 0);
  CHECK(read_file(c.run_dir / "sweep.csv") == read_file(a.run_dir / "sweep.csv"));

  RunOptions other = small_options(dir);
  other.seed = 99;
  const Outcome d = run("sweep", other);
  CHECK(read_file(d.run_dir / "sweep.csv") != read_file(a.run_dir / "sweep.csv"));

  // bound fitted against the sweep
  RunOptions bound = small_options(dir);
  bound.fit_from = a.run_dir / "sweep.csv";
  const Outcome e = run("bound", bound);
  CHECK(e.status == 0);
  CHECK(read_csv(e.run_dir / "bound_overlay.csv").header == kBoundHeader);
  CHECK(fs::exists(e.run_dir / "bound_overlay.svg"));
}

TEST_CASE("attenuation sweep and linearization commands") {
  const fs::path dir = fresh_dir("att");
  const Outcome a = run("attsweep", small_options(dir));
  CHECK(a.status == 0);
  CHECK(read_csv(a.run_dir / "attenuation.csv").rows.size() == 2 * 2);
  const Outcome l = run("linerr", small_options(dir));
  CHECK(l.status == 0);
  CHECK(read_csv(l.run_dir / "linearization.csv").header == kLinearizationHeader);
}

TEST_CASE("module errors give a nonzero exit and a message") {
  const fs::path dir = fresh_dir("errors");
  RunOptions o = small_options(dir);
  CHECK(run("nonsense", o).status == 2);
  write_file(*o.config_path, R"({"probes": {"k": 2, "r": 10}})");
  const Outcome bad = run("probe", o);
  CHECK(bad.status == 2);
  CHECK(bad.err.find("existence condition") != std::string::npos);
}

TEST_CASE("svg plots") {
  const fs::path dir = fresh_dir("plots");
  CHECK(wants_log_axis({1e-3, 0.5}));
  CHECK(!wants_log_axis({0.1, 0.5}));

  write_file(dir / "sweep.csv", "k,b,delta,trial,err_L2,err_Hminus_s,imag_residue,wall_time\n"
                                "2,0,0,0,0.9,0.4,0,0\n4,0,0,0,0.7,0.2,0,0\n8,0,0,0,0.3,0.05,0,0\n"
                                "2,0,0.001,0,0.9,0.41,0,0\n4,0,0.001,0,0.7,0.21,0,0\n8,0,0.001,0,0.3,0.06,0,0\n");
  const auto svg = emit_plots({dir / "sweep.csv"}, dir);
  REQUIRE(svg.size() == 1);
  const std::string text = read_file(svg[0]);
  std::smatch m;
  std::string rest = text;
  int polylines = 0;
  while (std::regex_search(rest, m, std::regex(R"re(<polyline class="series"[^>]*points="([^"]*)")re"))) {
    ++polylines;
    const std::string pts = m[1].str();
    CHECK(std::count(pts.begin(), pts.end(), ',') == 3);
    rest = m.suffix();
  }
  CHECK(polylines == 2);

  write_file(dir / "linearization.csv", "amplitude,residual_ratio,fit_slope\n0.1,1e-4,2.0012345\n0.2,4e-4,2.0012345\n");
  const std::string lin = read_file(emit_plots({dir / "linearization.csv"}, dir)[0]);
  CHECK(lin.find("fitted slope = 2.0012345") != std::string::npos);

  write_file(dir / "empty.csv", "k,bound_value\n");
  CHECK_THROWS_WITH(emit_plots({dir / "empty.csv"}, dir), doctest::Contains("no data rows"));
  write_file(dir / "broken.csv", "amplitude,residual_ratio,fit_slope\n0.1,oops,2\n");
  CHECK_THROWS_WITH(emit_plots({dir / "broken.csv"}, dir), doctest::Contains("row 1, column 'residual_ratio'"));
  write_file(dir / "other.csv", "a,b\n1,2\n");
  CHECK_THROWS(emit_plots({dir / "other.csv"}, dir));

  std::ostringstream out, err;
  CHECK(plot_command({dir / "sweep.csv"}, dir / "svg", out, err) == 0);
  CHECK(fs::exists(dir / "svg" / "sweep.svg"));
}
