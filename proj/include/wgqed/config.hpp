#ifndef WGQED_CONFIG_HPP
#define WGQED_CONFIG_HPP

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "io.hpp"

namespace wgqed {

enum class Experiment { spectrum, burst, transmission, power_spectrum, pulsed_spec, steady_state };

inline std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::spectrum: return "spectrum";
    case Experiment::burst: return "burst";
    case Experiment::transmission: return "transmission";
    case Experiment::power_spectrum: return "power-spectrum";
    case Experiment::pulsed_spec: return "pulsed-spec";
    case Experiment::steady_state: return "steady-state";
  }
  return "?";
}

inline Experiment experiment_from_string(std::string s) {
  for (auto& c : s)
    if (c == '_') c = '-';
  for (auto e : {Experiment::spectrum, Experiment::burst, Experiment::transmission, Experiment::power_spectrum,
                 Experiment::pulsed_spec, Experiment::steady_state})
    if (to_string(e) == s) return e;
  throw ConfigError("unknown experiment '" + s + "'");
}

struct AxisSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 2;

  std::vector<double> values() const {
    if (points == 1) return {start};
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = start + (stop - start) * i / (points - 1);
    return v;
  }
};

struct SystemSpec {
  SiteKind model = SiteKind::transmon;
  std::string layout = "two_pair";  // two_pair | array
  int sites = 4;                    // array only
  double spacing = 1.0;             // array only, wavelengths of omega0
  double omega0 = hz_to_angular(TableOne::omega0_hz);
  double anharmonicity = hz_to_angular(TableOne::anharmonicity_hz);
  double capacitive = hz_to_angular(TableOne::capacitive_hz);
  double gamma = hz_to_angular(TableOne::gamma_hz);
  double kappa = hz_to_angular(TableOne::kappa_hz);
  double detuning = 0.0;
  int levels = 3;
  std::optional<int> max_excitations;
  PhaseModel phase = PhaseModel::common;
  CouplingRegime regime = CouplingRegime::simplified;
  double cutoff = 0.0;  // rad/s

  int effective_levels() const { return model == SiteKind::qubit ? 2 : levels; }

  TwoPairParams two_pair() const {
    TwoPairParams p;
    p.kind = model;
    p.omega0 = omega0;
    p.anharmonicity = anharmonicity;
    p.capacitive = capacitive;
    p.gamma = gamma;
    p.kappa = kappa;
    p.detuning = detuning;
    p.levels = levels;
    p.max_total = max_excitations;
    p.phase = phase;
    return p;
  }
};

struct RunConfig {
  Experiment experiment = Experiment::spectrum;
  SystemSpec system;
  std::string output = "out";
  unsigned threads = 0;  // 0: all cores

  // spectrum
  int manifold_min = 0;
  int manifold_max = 2;
  BrightnessBands bands;

  // burst
  std::optional<std::vector<int>> initial;
  double burst_duration = 0.0;  // s, 0: 3/gamma
  int burst_samples = 301;

  // drive and sweeps
  double flux_hz = 700.0;              // P/2pi
  std::optional<double> drive_offset;  // omega_d - omega_bar; steady-state and power spectrum
  AxisSpec detuning_axis;
  AxisSpec drive_axis;
  AxisSpec phase_axis;
  AxisSpec probe_axis;

  PowerSpectrumConfig power_spectrum;
  double span_gamma = 10.0;  // |omega - omega_d| written to the CSV
  PulsedConfig pulsed;

  KrylovConfig krylov;
  IterativeSteadyConfig steady;
  std::size_t max_dimension = default_max_dimension;

  unsigned worker_threads() const { return threads ? threads : default_threads(); }
};

// ---- quantities with units

namespace units {

struct Parsed {
  double value = 0.0;
  std::string unit;
};

inline Parsed split(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s.substr(i), &pos);
  } catch (const std::exception&) {
    throw ConfigError("expected '<number> <unit>', got '" + s + "'");
  }
  std::string u = s.substr(i + pos);
  std::size_t a = u.find_first_not_of(" \t"), b = u.find_last_not_of(" \t");
  u = a == std::string::npos ? "" : u.substr(a, b - a + 1);
  return {v, u};
}

inline std::optional<double> hz_scale(const std::string& u) {
  static const std::map<std::string, double> m{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
  auto it = m.find(u);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

}  // namespace units

// Walks a JSON document while remembering the field path and which keys were read.
class ConfigNode {
 public:
  ConfigNode(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  [[noreturn]] void fail(const std::string& what, const std::string& key = "") const {
    throw ConfigError("config " + (key.empty() ? path_ : path_ + "/" + key) + ": " + what);
  }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  ConfigNode child(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return ConfigNode(empty(), path_ + "/" + key);
    if (!j_.at(key).is_object()) fail("expected an object", key);
    return ConfigNode(j_.at(key), path_ + "/" + key);
  }

  // every key must have been consumed
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail("unknown field", it.key());
  }

  std::string string(const std::string& key, std::string fallback) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (!v.is_string()) fail("expected a string", key);
    return v.get<std::string>();
  }

  int integer(const std::string& key, int fallback, int lo = std::numeric_limits<int>::min()) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (!v.is_number_integer()) fail("expected an integer", key);
    int x = v.get<int>();
    if (x < lo) fail("must be >= " + std::to_string(lo), key);
    return x;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (!v.is_number()) fail("expected a number", key);
    return v.get<double>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (!v.is_boolean()) fail("expected true or false", key);
    return v.get<bool>();
  }

  // plain numbers are Hz; strings carry Hz|kHz|MHz|GHz|rad/s|gamma
  double frequency(const std::string& key, double fallback, double gamma = 0.0) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (v.is_number()) return hz_to_angular(v.get<double>());
    if (!v.is_string()) fail("expected a frequency such as \"25 MHz\"", key);
    units::Parsed p;
    try {
      p = units::split(v.get<std::string>());
    } catch (const ConfigError& e) {
      fail(e.what(), key);
    }
    if (auto s = units::hz_scale(p.unit)) return hz_to_angular(p.value * *s);
    if (p.unit == "rad/s") return p.value;
    if (p.unit == "gamma") {
      if (!(gamma > 0.0)) fail("'gamma' units need a positive system gamma", key);
      return p.value * gamma;
    }
    fail("unknown frequency unit '" + p.unit + "' (Hz, kHz, MHz, GHz, rad/s, gamma)", key);
  }

  // P/2pi in Hz; only Hz-family units
  double flux(const std::string& key, double fallback) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) fail("expected a power such as \"0.7 kHz\"", key);
    units::Parsed p;
    try {
      p = units::split(v.get<std::string>());
    } catch (const ConfigError& e) {
      fail(e.what(), key);
    }
    if (auto s = units::hz_scale(p.unit)) return p.value * *s;
    fail("power is given as P/2pi in Hz, kHz, MHz or GHz; got unit '" + p.unit + "'", key);
  }

  // plain numbers are seconds; strings carry s|ms|us|ns|/gamma
  double time(const std::string& key, double fallback, double gamma = 0.0) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) fail("expected a time such as \"240 ns\"", key);
    units::Parsed p;
    try {
      p = units::split(v.get<std::string>());
    } catch (const ConfigError& e) {
      fail(e.what(), key);
    }
    static const std::map<std::string, double> m{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
    if (auto it = m.find(p.unit); it != m.end()) return p.value * it->second;
    if (p.unit == "/gamma") {
      if (!(gamma > 0.0)) fail("'/gamma' units need a positive system gamma", key);
      return p.value / gamma;
    }
    fail("unknown time unit '" + p.unit + "' (s, ms, us, ns, /gamma)", key);
  }

  // plain numbers are radians; strings carry rad|deg|pi
  double angle(const std::string& key, double fallback) {
    if (!has(key)) return note(key, fallback);
    const auto& v = raw(key);
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) fail("expected an angle such as \"0.5 pi\"", key);
    units::Parsed p;
    try {
      p = units::split(v.get<std::string>());
    } catch (const ConfigError& e) {
      fail(e.what(), key);
    }
    if (p.unit == "rad") return p.value;
    if (p.unit == "pi") return p.value * pi;
    if (p.unit == "deg") return p.value * pi / 180.0;
    fail("unknown angle unit '" + p.unit + "' (rad, pi, deg)", key);
  }

 private:
  template <class T>
  T note(const std::string& key, T fallback) {
    used_.insert(key);
    return fallback;
  }

  static const Json& empty() {
    static const Json e = Json::object();
    return e;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// "a..b" or a single integer
inline std::pair<int, int> parse_manifold_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    std::size_t pos = 0;
    if (dots == std::string::npos) {
      int n = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return {n, n};
    }
    int a = std::stoi(s.substr(0, dots), &pos);
    if (pos != dots) throw std::invalid_argument(s);
    std::string rest = s.substr(dots + 2);
    int b = std::stoi(rest, &pos);
    if (pos != rest.size()) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::exception&) {
    throw ConfigError("manifold range must look like '0..2', got '" + s + "'");
  }
}

namespace detail {

inline AxisSpec read_axis(ConfigNode& parent, const std::string& key, const AxisSpec& fallback, double gamma,
                          bool angular) {
  auto n = parent.child(key);
  AxisSpec a;
  if (angular) {
    a.start = n.angle("start", fallback.start);
    a.stop = n.angle("stop", fallback.stop);
  } else {
    a.start = n.frequency("start", fallback.start, gamma);
    a.stop = n.frequency("stop", fallback.stop, gamma);
  }
  a.points = n.integer("points", fallback.points, 1);
  if (a.points >= 2 && !(a.stop > a.start)) n.fail("axis must be increasing (stop > start)");
  n.finish();
  return a;
}

inline std::string rad_s(double w) { return format_number(w) + " rad/s"; }

inline Json axis_json(const AxisSpec& a, bool angular) {
  if (angular) return Json{{"start", a.start}, {"stop", a.stop}, {"points", a.points}};
  return Json{{"start", rad_s(a.start)}, {"stop", rad_s(a.stop)}, {"points", a.points}};
}

}  // namespace detail

inline RunConfig parse_run_config(const Json& doc) {
  RunConfig c;
  ConfigNode root(doc, "");
  c.experiment = experiment_from_string(root.string("experiment", "spectrum"));
  c.output = root.string("output", "out/" + to_string(c.experiment));
  c.threads = static_cast<unsigned>(root.integer("threads", 0, 0));

  {
    auto s = root.child("system");
    auto& sys = c.system;
    try {
      sys.model = site_kind_from_string(s.string("model", to_string(sys.model)));
      sys.phase = phase_model_from_string(s.string("phase_model", "common"));
      sys.regime = regime_from_string(s.string("regime", to_string(sys.regime)));
    } catch (const ConfigError& e) {
      s.fail(e.what());
    }
    sys.layout = s.string("layout", sys.layout);
    if (sys.layout != "two_pair" && sys.layout != "array") s.fail("layout must be two_pair or array", "layout");
    sys.sites = s.integer("sites", sys.sites, 1);
    sys.spacing = s.number("spacing", sys.spacing);
    sys.gamma = s.frequency("gamma", sys.gamma);
    if (!(sys.gamma > 0.0)) s.fail("must be positive", "gamma");
    sys.omega0 = s.frequency("omega0", sys.omega0, sys.gamma);
    sys.anharmonicity = s.frequency("anharmonicity", sys.anharmonicity, sys.gamma);
    sys.capacitive = s.frequency("capacitive", sys.capacitive, sys.gamma);
    sys.kappa = s.frequency("kappa", sys.kappa, sys.gamma);
    sys.detuning = s.frequency("detuning", sys.detuning, sys.gamma);
    sys.cutoff = s.frequency("cutoff", sys.cutoff, sys.gamma);
    sys.levels = s.integer("levels", sys.levels, 2);
    if (s.has("max_excitations")) sys.max_excitations = s.integer("max_excitations", 0, 0);
    else s.integer("max_excitations", 0);
    if (!(sys.omega0 > 0.0)) s.fail("must be positive", "omega0");
    if (sys.kappa < 0.0) s.fail("must be >= 0", "kappa");
    if (sys.layout == "two_pair" && sys.regime != CouplingRegime::simplified)
      s.fail("the two-pair layout uses the simplified coupling regime", "regime");
    if (sys.layout == "two_pair" && sys.sites != 4) s.fail("the two-pair layout has exactly 4 sites", "sites");
    if (sys.model == SiteKind::qubit && s.has("levels") && sys.levels != 2)
      s.fail("qubit sites have exactly 2 levels", "levels");
    s.finish();
  }
  const double g = c.system.gamma;

  {
    auto s = root.child("spectrum");
    if (s.has("manifolds")) {
      const auto& m = s.raw("manifolds");
      if (m.is_string()) {
        try {
          std::tie(c.manifold_min, c.manifold_max) = parse_manifold_range(m.get<std::string>());
        } catch (const ConfigError& e) {
          s.fail(e.what(), "manifolds");
        }
      } else if (m.is_array() && m.size() == 2 && m[0].is_number_integer() && m[1].is_number_integer()) {
        c.manifold_min = m[0].get<int>();
        c.manifold_max = m[1].get<int>();
      } else {
        s.fail("expected \"lo..hi\" or [lo, hi]", "manifolds");
      }
    } else {
      s.integer("manifolds", 0);
    }
    if (c.manifold_min < 0 || c.manifold_max < c.manifold_min) s.fail("need 0 <= lo <= hi", "manifolds");
    auto b = s.child("bands");
    c.bands.dark = b.number("dark", c.bands.dark);
    c.bands.weak = b.number("weak", c.bands.weak);
    c.bands.faint = b.number("faint", c.bands.faint);
    if (!(0.0 < c.bands.dark && c.bands.dark < c.bands.weak && c.bands.weak < c.bands.faint))
      b.fail("bands must satisfy 0 < dark < weak < faint");
    b.finish();
    s.finish();
  }

  {
    auto s = root.child("burst");
    if (s.has("initial")) {
      const auto& v = s.raw("initial");
      if (!v.is_array()) s.fail("expected an occupation list such as [1,1,1,1]", "initial");
      std::vector<int> occ;
      for (const auto& x : v) {
        if (!x.is_number_integer() || x.get<int>() < 0) s.fail("occupations must be integers >= 0", "initial");
        occ.push_back(x.get<int>());
      }
      c.initial = occ;
    } else {
      s.integer("initial", 0);
    }
    c.burst_duration = s.time("duration", 3.0 / g, g);
    c.burst_samples = s.integer("samples", c.burst_samples, 3);
    if (!(c.burst_duration > 0.0)) s.fail("must be positive", "duration");
    s.finish();
  }

  {
    auto s = root.child("drive");
    c.flux_hz = s.flux("power", c.flux_hz);
    if (c.flux_hz < 0.0) s.fail("must be >= 0", "power");
    if (s.has("offset")) c.drive_offset = s.frequency("offset", 0.0, g);
    else s.integer("offset", 0);
    s.finish();
  }

  {
    auto s = root.child("sweep");
    double u = hz_to_angular(1e6);
    c.detuning_axis = detail::read_axis(s, "detuning", {-10 * g, 10 * g, 41}, g, false);
    c.drive_axis = detail::read_axis(s, "drive_offset", {-10 * g, 10 * g, 41}, g, false);
    c.phase_axis = detail::read_axis(s, "phase", {0.0, pi, 2}, g, true);
    c.probe_axis = detail::read_axis(s, "probe_offset", {-350 * u, 100 * u, 91}, g, false);
    s.finish();
  }

  {
    auto s = root.child("power_spectrum");
    auto& p = c.power_spectrum;
    p.window_gamma = s.number("window_gamma", p.window_gamma);
    if (!(p.window_gamma > 0.0)) s.fail("must be positive", "window_gamma");
    c.span_gamma = s.number("span_gamma", c.span_gamma);
    if (!(c.span_gamma > 0.0)) s.fail("must be positive", "span_gamma");
    p.samples = s.integer("samples", p.samples, 8);
    p.zero_pad = s.integer("zero_pad", p.zero_pad, 1);
    s.finish();
  }

  {
    auto s = root.child("pulsed");
    auto& p = c.pulsed;
    auto r = s.child("rabi");
    p.rabi_duration = r.time("duration", p.rabi_duration, g);
    p.rabi_amplitude = r.frequency("amplitude", p.rabi_amplitude, g);
    r.finish();
    auto q = s.child("probe");
    p.spec_duration = q.time("duration", p.spec_duration, g);
    p.spec_amplitude = q.frequency("amplitude", p.spec_amplitude, g);
    q.finish();
    p.steps_per_sigma = s.number("steps_per_sigma", p.steps_per_sigma);
    std::string quad = s.string("quadrature", "midpoint");
    if (quad == "midpoint") p.magnus.quadrature = Quadrature::midpoint;
    else if (quad == "gauss2") p.magnus.quadrature = Quadrature::gauss2;
    else s.fail("expected midpoint or gauss2", "quadrature");
    p.magnus.commutator = s.boolean("commutator", p.magnus.commutator);
    if (p.magnus.commutator && p.magnus.quadrature != Quadrature::gauss2)
      s.fail("the commutator term needs gauss2 quadrature", "commutator");
    if (!(p.rabi_duration > 0.0 && p.spec_duration > 0.0)) s.fail("pulse durations must be positive");
    if (!(p.steps_per_sigma > 0.0)) s.fail("must be positive", "steps_per_sigma");
    s.finish();
  }

  {
    auto s = root.child("solver");
    c.krylov.dimension = s.integer("krylov_dimension", c.krylov.dimension, 2);
    c.krylov.tolerance = s.number("krylov_tolerance", c.krylov.tolerance);
    c.steady.tolerance = s.number("steady_tolerance", c.steady.tolerance);
    c.steady.max_iterations = s.integer("steady_max_iterations", c.steady.max_iterations, 1);
    c.max_dimension = static_cast<std::size_t>(s.integer("max_dimension", int(c.max_dimension), 1));
    if (!(c.krylov.tolerance > 0.0)) s.fail("must be positive", "krylov_tolerance");
    if (!(c.steady.tolerance > 0.0)) s.fail("must be positive", "steady_tolerance");
    s.finish();
  }
  c.power_spectrum.krylov = c.krylov;
  c.pulsed.magnus.krylov = c.krylov;
  c.pulsed.threads = c.worker_threads();
  c.pulsed.phases = c.phase_axis.values();
  c.pulsed.probe_offsets = c.probe_axis.values();
  root.finish();
  return c;
}

// Fully resolved form; parse_run_config(to_json(c)) reproduces c exactly.
inline Json to_json(const RunConfig& c) {
  using detail::rad_s;
  const auto& s = c.system;
  Json sys{{"model", to_string(s.model)},
           {"layout", s.layout},
           {"sites", s.sites},
           {"spacing", s.spacing},
           {"omega0", rad_s(s.omega0)},
           {"anharmonicity", rad_s(s.anharmonicity)},
           {"capacitive", rad_s(s.capacitive)},
           {"gamma", rad_s(s.gamma)},
           {"kappa", rad_s(s.kappa)},
           {"detuning", rad_s(s.detuning)},
           {"levels", s.levels},
           {"max_excitations", s.max_excitations ? Json(*s.max_excitations) : Json(nullptr)},
           {"phase_model", to_string(s.phase)},
           {"regime", to_string(s.regime)},
           {"cutoff", rad_s(s.cutoff)}};
  Json j;
  j["experiment"] = to_string(c.experiment);
  j["output"] = c.output;
  j["threads"] = c.threads;
  j["system"] = sys;
  j["spectrum"] = {{"manifolds", std::to_string(c.manifold_min) + ".." + std::to_string(c.manifold_max)},
                   {"bands", {{"dark", c.bands.dark}, {"weak", c.bands.weak}, {"faint", c.bands.faint}}}};
  j["burst"] = {{"initial", c.initial ? Json(*c.initial) : Json(nullptr)},
                {"duration", c.burst_duration},
                {"samples", c.burst_samples}};
  j["drive"] = {{"power", format_number(c.flux_hz) + " Hz"},
                {"offset", c.drive_offset ? Json(rad_s(*c.drive_offset)) : Json(nullptr)}};
  j["sweep"] = {{"detuning", detail::axis_json(c.detuning_axis, false)},
                {"drive_offset", detail::axis_json(c.drive_axis, false)},
                {"phase", detail::axis_json(c.phase_axis, true)},
                {"probe_offset", detail::axis_json(c.probe_axis, false)}};
  j["power_spectrum"] = {{"window_gamma", c.power_spectrum.window_gamma},
                         {"span_gamma", c.span_gamma},
                         {"samples", c.power_spectrum.samples},
                         {"zero_pad", c.power_spectrum.zero_pad}};
  j["pulsed"] = {{"rabi", {{"duration", c.pulsed.rabi_duration}, {"amplitude", rad_s(c.pulsed.rabi_amplitude)}}},
                 {"probe", {{"duration", c.pulsed.spec_duration}, {"amplitude", rad_s(c.pulsed.spec_amplitude)}}},
                 {"steps_per_sigma", c.pulsed.steps_per_sigma},
                 {"quadrature", c.pulsed.magnus.quadrature == Quadrature::midpoint ? "midpoint" : "gauss2"},
                 {"commutator", c.pulsed.magnus.commutator}};
  j["solver"] = {{"krylov_dimension", c.krylov.dimension},
                 {"krylov_tolerance", c.krylov.tolerance},
                 {"steady_tolerance", c.steady.tolerance},
                 {"steady_max_iterations", c.steady.max_iterations},
                 {"max_dimension", c.max_dimension}};
  return j;
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // the message carries line and column
    throw ConfigError(source + ": " + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_json_text(os.str(), path);
}

// "system.gamma=30 MHz" -> {"system": {"gamma": "30 MHz"}}; JSON values are kept, bare text becomes a string
inline Json override_patch(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
  std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json patch = value;
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) throw ConfigError("override has an empty key segment: " + assignment);
    parts.push_back(p);
  }
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = Json{{*it, patch}};
  return patch;
}

}  // namespace wgqed

#endif  // WGQED_CONFIG_HPP
