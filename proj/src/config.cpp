#include "bhlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bhlab/errors.hpp"
#include "json.hpp"

namespace bhlab {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

const char* quadrature_name(FaceQuadrature q) { return q == FaceQuadrature::SineExact ? "sine_exact" : "trapezoid"; }

// Reads typed values out of one JSON object, remembering which keys were used so
// that leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path, std::vector<std::string>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {
    if (!node_.is_object()) errors_.push_back(path_ + ": expected an object");
  }

  ~Section() {
    if (!node_.is_object()) return;
    for (const auto& [key, value] : node_.items())
      if (!seen_.count(key)) errors_.push_back("unknown key '" + where(key) + "'");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    if (!node_.is_object()) return nullptr;
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_number()) out = v->get<double>();
      else type_error(key, "a number");
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) out.reset();
      else if (v->is_number()) out = v->get<double>();
      else type_error(key, "a number or null");
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (v->is_number_integer()) out = v->get<int>();
      else type_error(key, "an integer");
    }
  }

  void unsigned64(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (v->is_number_unsigned()) out = v->get<std::uint64_t>();
      else type_error(key, "a non-negative integer");
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else type_error(key, "true or false");
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else type_error(key, "a string");
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) return type_error(key, "an array of numbers");
      std::vector<double> values;
      for (const auto& e : *v) {
        if (!e.is_number()) return type_error(key, "an array of numbers");
        values.push_back(e.get<double>());
      }
      out = std::move(values);
    }
  }

  void vec3(const std::string& key, Vec3<double>& out) {
    std::vector<double> values;
    numbers(key, values);
    if (values.empty()) return;
    if (values.size() != 3) return type_error(key, "an array of 3 numbers");
    out = Vec3<double>(values[0], values[1], values[2]);
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  void type_error(const std::string& key, const char* expected) {
    errors_.push_back(where(key) + ": expected " + expected);
  }

  const json& node_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

const json& child(Section& parent, const std::string& key) {
  static const json empty = json::object();
  const json* v = parent.find(key);
  return v ? *v : empty;
}

void read_tree(const json& root, LabConfig& c, std::vector<std::string>& errors) {
  Section top(root, "", errors);
  {
    Section s(child(top, "domain"), "domain", errors);
    s.number("length", c.box.length);
    s.integer("nodes", c.box.nodes);
    s.number("eps_res", c.eps_res);
  }
  {
    Section s(child(top, "potential"), "potential", errors);
    std::string kind = to_string(c.potential.kind);
    s.string("kind", kind);
    try {
      c.potential.kind = potential_kind_from_string(kind);
    } catch (const std::exception& e) {
      errors.push_back(std::string("potential.kind: ") + e.what());
    }
    if (const json* bumps = s.find("bumps")) {
      if (!bumps->is_array()) {
        errors.push_back("potential.bumps: expected an array of objects");
      } else {
        c.potential.bumps.clear();
        for (std::size_t i = 0; i < bumps->size(); ++i) {
          Bump b;
          Section bs((*bumps)[i], "potential.bumps[" + std::to_string(i) + "]", errors);
          bs.vec3("center", b.center);
          bs.number("width", b.width);
          bs.number("amplitude", b.amplitude);
          bs.optional_number("support_radius", b.support_radius);
          c.potential.bumps.push_back(b);
        }
      }
    }
    s.number("margin", c.potential.margin);
    s.number("s", c.potential.s);
    s.optional_number("M", c.potential.bound_M);
    s.vec3("wavevector", c.potential.wavevector);
  }
  {
    Section s(child(top, "probes"), "probes", errors);
    s.number("k", c.probes.k);
    s.number("b", c.probes.b);
    s.number("a", c.probes.a);
    s.number("r", c.probes.r);
    s.vec3("omega", c.probes.omega);
  }
  {
    Section s(child(top, "recon"), "recon", errors);
    s.number("R_band", c.recon.R_band);
    s.boolean("include_high_band", c.recon.include_high_band);
    s.number("high_band_margin", c.recon.high_band_margin);
    std::string quad = quadrature_name(c.recon.quadrature);
    s.string("quadrature", quad);
    if (quad == "sine_exact") c.recon.quadrature = FaceQuadrature::SineExact;
    else if (quad == "trapezoid") c.recon.quadrature = FaceQuadrature::Trapezoid;
    else errors.push_back("recon.quadrature: expected \"sine_exact\" or \"trapezoid\", got \"" + quad + "\"");
    s.number("delta", c.recon.delta);
  }
  {
    Section s(child(top, "sweep"), "sweep", errors);
    s.numbers("k", c.sweep.ks);
    s.numbers("b", c.sweep.bs);
    s.numbers("attenuation", c.sweep.attenuation);
    s.numbers("delta", c.sweep.deltas);
    s.integer("trials", c.sweep.trials);
    s.unsigned64("seed", c.sweep.seed);
    s.numbers("amplitudes", c.sweep.amplitudes);
    s.optional_number("C_fit", c.sweep.C_fit);
  }
  {
    Section s(child(top, "output"), "output", errors);
    std::string dir = c.output.dir.string();
    s.string("dir", dir);
    c.output.dir = dir;
    s.boolean("plots", c.output.plots);
    s.boolean("wall_time", c.output.wall_time);
  }
}

template <typename F>
void guard(std::vector<std::string>& errors, const std::string& context, F&& check) {
  try {
    check();
  } catch (const std::exception& e) {
    errors.push_back(context + e.what());
  }
}

}  // namespace

ReconConfig LabConfig::recon_config() const {
  ReconConfig r;
  r.k = probes.k;
  r.b = probes.b;
  r.R_band = recon.R_band;
  r.s = potential.s;
  r.include_high_band = recon.include_high_band;
  r.high_band_margin = recon.high_band_margin;
  r.eps_res = eps_res;
  r.quadrature = recon.quadrature;
  return r;
}

SweepConfig LabConfig::k_sweep_config() const {
  SweepConfig s;
  s.ks = sweep.ks;
  s.bs = sweep.bs;
  s.deltas = sweep.deltas;
  s.trials = sweep.trials;
  s.base_seed = sweep.seed;
  s.potential = potential;
  s.box = box;
  s.recon = recon_config();
  s.record_wall_time = output.wall_time;
  return s;
}

SweepConfig LabConfig::attenuation_sweep_config() const {
  SweepConfig s = k_sweep_config();
  s.ks = {probes.k};
  s.bs = sweep.attenuation;
  return s;
}

LinearizationConfig LabConfig::linearization_config() const {
  LinearizationConfig l;
  l.k = probes.k;
  l.a = probes.a;
  l.factors = sweep.amplitudes;
  l.potential = potential;
  l.box = box;
  l.eps_res = eps_res;
  return l;
}

namespace {

void collect_violations(const LabConfig& c, std::vector<std::string>& errors) {
  const std::size_t before = errors.size();
  guard(errors, "domain: ", [&] { c.box.validate(); });
  if (!(c.eps_res > 0)) errors.push_back("domain.eps_res must be positive");
  guard(errors, "potential: ", [&] { validate_potential(c.potential, c.box); });
  guard(errors, "probes: ", [&] { validate_probe_params(ProbeParams<double>{c.probes.k, c.probes.b, c.probes.a, c.probes.r}); });
  if (std::abs(c.probes.omega.norm() - 1.0) > 1e-12) errors.push_back("probes.omega must be a unit vector");
  if (!(c.recon.delta >= 0 && c.recon.delta < 1)) errors.push_back("recon.delta must lie in [0, 1)");

  if (c.sweep.ks.empty()) errors.push_back("sweep.k is empty");
  if (c.sweep.bs.empty()) errors.push_back("sweep.b is empty");
  if (c.sweep.attenuation.empty()) errors.push_back("sweep.attenuation is empty");
  if (c.sweep.deltas.empty()) errors.push_back("sweep.delta is empty");
  for (double d : c.sweep.deltas)
    if (!(d >= 0 && d < 1)) errors.push_back("sweep.delta entries must lie in [0, 1)");
  if (c.sweep.trials < 1) errors.push_back("sweep.trials must be >= 1");
  if (c.sweep.amplitudes.empty()) errors.push_back("sweep.amplitudes is empty");
  for (double a : c.sweep.amplitudes)
    if (!(a > 0)) errors.push_back("sweep.amplitudes entries must be positive");
  if (c.sweep.C_fit && !(*c.sweep.C_fit > 0)) errors.push_back("sweep.C_fit must be positive");

  // Resonance and resolution guards for every probe any command could issue. Only
  // meaningful once the basic fields are sane.
  if (errors.size() == before) {
    guard(errors, "probes: ", [&] { check_extraction_guards(c.recon_config(), c.box); });
    guard(errors, "sweep: ", [&] { validate_sweep(c.k_sweep_config()); });
    guard(errors, "sweep.attenuation: ", [&] { validate_sweep(c.attenuation_sweep_config()); });
  }
}

void reject_if_any(const std::vector<std::string>& errors) {
  if (errors.empty()) return;
  std::ostringstream os;
  os << "configuration rejected (" << errors.size() << " problem(s)):";
  for (const auto& e : errors) os << "\n  - " << e;
  throw ConfigError(os.str());
}

}  // namespace

void validate_config(const LabConfig& c) {
  std::vector<std::string> errors;
  collect_violations(c, errors);
  reject_if_any(errors);
}

LabConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  LabConfig c;
  std::vector<std::string> errors;
  read_tree(root, c, errors);
  collect_violations(c, errors);
  reject_if_any(errors);
  return c;
}

LabConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_snapshot(const LabConfig& c) {
  const auto vec = [](const Vec3<double>& v) { return ordered_json::array({v[0], v[1], v[2]}); };
  const auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };

  ordered_json bumps = ordered_json::array();
  for (const Bump& b : c.potential.bumps) {
    ordered_json o;
    o["center"] = vec(b.center);
    o["width"] = b.width;
    o["amplitude"] = b.amplitude;
    o["support_radius"] = effective_support_radius(c.potential, b, c.box);
    bumps.push_back(o);
  }

  ordered_json root;
  root["domain"] = {{"length", c.box.length}, {"nodes", c.box.nodes}, {"eps_res", c.eps_res}};
  root["potential"] = {{"kind", to_string(c.potential.kind)},
                       {"bumps", bumps},
                       {"margin", c.potential.margin},
                       {"s", c.potential.s},
                       {"M", opt(c.potential.bound_M)},
                       {"wavevector", vec(c.potential.wavevector)}};
  root["probes"] = {{"k", c.probes.k}, {"b", c.probes.b}, {"a", c.probes.a}, {"r", c.probes.r},
                    {"omega", vec(c.probes.omega)}};
  root["recon"] = {{"R_band", c.recon.R_band},
                   {"include_high_band", c.recon.include_high_band},
                   {"high_band_margin", c.recon.high_band_margin},
                   {"quadrature", quadrature_name(c.recon.quadrature)},
                   {"delta", c.recon.delta}};
  root["sweep"] = {{"k", c.sweep.ks},
                   {"b", c.sweep.bs},
                   {"attenuation", c.sweep.attenuation},
                   {"delta", c.sweep.deltas},
                   {"trials", c.sweep.trials},
                   {"seed", c.sweep.seed},
                   {"amplitudes", c.sweep.amplitudes},
                   {"C_fit", opt(c.sweep.C_fit)}};
  root["output"] = {{"dir", c.output.dir.string()}, {"plots", c.output.plots}, {"wall_time", c.output.wall_time}};
  return root.dump(2) + "\n";
}

}  // namespace bhlab
