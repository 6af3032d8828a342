#ifndef WGQED_EXPERIMENTS_HPP
#define WGQED_EXPERIMENTS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "core.hpp"
#include "coupling.hpp"
#include "fock.hpp"
#include "liouville.hpp"
#include "parallel.hpp"
#include "spectra.hpp"

namespace wgqed {

// ---- grids

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int points = 2;

  std::vector<double> values() const {
    if (points < 2) throw ConfigError("axis '" + name + "': need at least 2 points");
    if (!(stop > start)) throw ConfigError("axis '" + name + "': stop must exceed start");
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = start + (stop - start) * i / (points - 1);
    return v;
  }
};

struct SweepGrid {
  std::vector<Axis> axes;
  const Axis& axis(const std::string& n) const {
    for (const auto& a : axes)
      if (a.name == n) return a;
    throw ConfigError("sweep grid has no axis '" + n + "'");
  }
};

// Values on a (rows x cols) grid stored row-major, NaN marks a failed point.
struct ObservableMap {
  std::string observable;
  std::string row_name, col_name;
  std::vector<double> rows, cols;
  std::vector<double> values;
  std::map<std::string, std::string> metadata;
  int missing = 0;

  double at(std::size_t r, std::size_t c) const { return values[r * cols.size() + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols.size() + c]; }
};

// ---- two-pair system

enum class PhaseModel { common, physical };

inline std::string to_string(PhaseModel p) { return p == PhaseModel::common ? "common" : "physical"; }

inline PhaseModel phase_model_from_string(const std::string& s) {
  if (s == "common") return PhaseModel::common;
  if (s == "physical") return PhaseModel::physical;
  throw ConfigError("unknown phase model '" + s + "' (expected common|physical)");
}

struct TwoPairParams {
  SiteKind kind = SiteKind::transmon;
  double omega0 = hz_to_angular(TableOne::omega0_hz);
  double anharmonicity = hz_to_angular(TableOne::anharmonicity_hz);
  double capacitive = hz_to_angular(TableOne::capacitive_hz);
  double gamma = hz_to_angular(TableOne::gamma_hz);
  double kappa = hz_to_angular(TableOne::kappa_hz);
  double detuning = 0.0;  // Delta = omega_1 - omega_2
  int levels = 3;
  std::optional<int> max_total;
  PhaseModel phase = PhaseModel::common;
  std::size_t max_dimension = default_max_dimension;
  IterativeSteadyConfig steady;

  int effective_levels() const { return kind == SiteKind::qubit ? 2 : levels; }
};

// Sites 0,1 form pair 1 at z = 0 with frequency omega0 + Delta/2; sites 2,3
// form pair 2 at half a wavelength (of omega0) with omega0 - Delta/2. Pair
// partners share a location and hop capacitively with J.
class TwoPairSystem {
 public:
  explicit TwoPairSystem(const TwoPairParams& p) : p_(p) {
    if (p.gamma <= 0.0) throw ConfigError("two-pair: gamma must be positive");
    if (p.kappa < 0.0) throw ConfigError("two-pair: kappa must be >= 0");
    int d = p.effective_levels();
    if (d < 2) throw ConfigError("two-pair: level cap must be >= 2");
    basis_ = p.max_total ? FockBasis::truncated(4, d, *p.max_total, p.max_dimension)
                         : FockBasis::enumerate(4, d, std::nullopt, p.max_dimension);

    double w1 = p.omega0 + p.detuning / 2, w2 = p.omega0 - p.detuning / 2;
    double u = p.kind == SiteKind::transmon ? p.anharmonicity : 0.0;
    auto make = [&](double w) { return SiteModel{p.kind, w, u}; };
    models_ = {make(w1), make(w1), make(w2), make(w2)};

    double half = pi * speed_of_light / p.omega0;
    layout_.c = speed_of_light;
    for (int j = 0; j < 4; ++j) layout_.emitters.push_back({0.0, j < 2 ? 0.0 : half, p.gamma, models_[j]});

    geometry_ = WaveguideGeometry::from_cutoff(0.0);
    CouplingOptions opt;
    opt.regime = CouplingRegime::simplified;
    opt.phase_frequency = p.omega0;
    tables_ = build_coupling_tables(geometry_, layout_, d, opt);

    capacitive_ = Matrix::Zero(4, 4);
    capacitive_(0, 1) = capacitive_(1, 0) = p.capacitive;
    capacitive_(2, 3) = capacitive_(3, 2) = p.capacitive;

    for (int q = 0; q < tables_.size(); ++q)
      sigma_.push_back(sigma_minus(basis_, tables_.level_of(q), tables_.site_of(q)));
    jumps_ = collective_jumps(basis_, tables_);
    dissipator_ = SparseMatrix(basis_.size() * basis_.size(), basis_.size() * basis_.size());
    for (const auto& j : jumps_) dissipator_ += super::dissipator(j.op, j.rate);
    if (p.kappa > 0.0)
      for (int j = 0; j < 4; ++j) dissipator_ += super::dissipator(annihilation(basis_, j), p.kappa);
    dissipator_.prune(Complex(0.0));
    decay_ = build_hamiltonian_parts(basis_, models_, tables_, capacitive_, 0.0).decay;
    if (p.kappa > 0.0) decay_ += p.kappa * total_number(basis_);
  }

  const TwoPairParams& params() const { return p_; }
  const FockBasis& basis() const { return basis_; }
  const std::vector<SiteModel>& models() const { return models_; }
  const EmitterLayout& layout() const { return layout_; }
  const CouplingTables& tables() const { return tables_; }
  const Matrix& capacitive() const { return capacitive_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }
  double omega_bar() const { return p_.omega0; }
  double pair_frequency(int pair) const { return pair == 0 ? models_[0].omega : models_[2].omega; }
  double dark_state_frequency() const { return p_.omega0 + p_.capacitive; }

  // Hermitian part in a frame rotating at `frame`
  SparseMatrix hamiltonian(double frame) const {
    return build_hamiltonian_parts(basis_, models_, tables_, capacitive_, frame).hermitian;
  }

  EffectiveHamiltonian effective_hamiltonian(double frame = 0.0) const {
    return build_h_eff(basis_, models_, tables_, capacitive_, frame);
  }

  // sum_p (dtilde_p sigma_-^p + h.c.) for a left-incident drive of `power` watts
  SparseMatrix probe_drive(double power, double omega_d) const {
    double ref = p_.phase == PhaseModel::common ? p_.omega0 : omega_d;
    SparseMatrix h(basis_.size(), basis_.size());
    for (int q = 0; q < tables_.size(); ++q) {
      auto a = rotating_drive_amplitude(geometry_, tables_, layout_, power, omega_d, tables_.level_of(q),
                                        tables_.site_of(q), ref);
      h += a.value * sigma_[q];
    }
    SparseMatrix hd = h.adjoint();
    return h + hd;
  }

  // coefficient of sigma_-^p in a_out - a_in
  Complex output_coefficient(int q) const {
    int m = tables_.level_of(q), j = tables_.site_of(q);
    double w = p_.phase == PhaseModel::common ? p_.omega0 : models_[j].transition_frequency(m);
    return std::polar(std::sqrt(tables_.gamma(q, q).real() / 2.0), layout_.arrival_time(j) * w);
  }

  SparseMatrix output_operator() const {
    SparseMatrix a(basis_.size(), basis_.size());
    for (int q = 0; q < tables_.size(); ++q) a += output_coefficient(q) * sigma_[q];
    return a;
  }

  // sum_j (e^{i phi_j} a_j + h.c.)
  SparseMatrix site_drive(const std::array<double, 4>& phases) const {
    SparseMatrix h(basis_.size(), basis_.size());
    for (int j = 0; j < 4; ++j) h += std::polar(1.0, phases[j]) * annihilation(basis_, j);
    SparseMatrix hd = h.adjoint();
    return h + hd;
  }

  Liouvillian liouvillian(double frame, const SparseMatrix* drive = nullptr) const {
    SparseMatrix h = hamiltonian(frame);
    if (drive) h += *drive;
    SparseMatrix l = super::commutator(h) + dissipator_;
    return Liouvillian(std::move(l), basis_.size());
  }

  // H + drive - (i/2)(decay + kappa N), the no-jump generator
  Matrix nonhermitian(double frame, const SparseMatrix* drive = nullptr) const {
    Matrix h = Matrix(hamiltonian(frame)) - Complex(0.0, 0.5) * Matrix(decay_);
    if (drive) h += Matrix(*drive);
    return h;
  }

  // preconditioned GMRES first, sparse LU if that fails
  SteadyState steady_state(double frame, const SparseMatrix* drive = nullptr) const {
    auto lv = liouvillian(frame, drive);
    try {
      return steady_state_iterative(lv, nonhermitian(frame, drive), p_.steady);
    } catch (const SolverError&) {
      return wgqed::steady_state(lv);
    }
  }

  std::size_t ground_index() const { return basis_.index(FockState{{0, 0, 0, 0}}); }

 private:
  TwoPairParams p_;
  FockBasis basis_;
  std::vector<SiteModel> models_;
  EmitterLayout layout_;
  WaveguideGeometry geometry_;
  CouplingTables tables_;
  Matrix capacitive_;
  std::vector<SparseMatrix> sigma_;
  std::vector<JumpOperator> jumps_;
  SparseMatrix dissipator_;
  SparseMatrix decay_;
};

// photon flux 2 pi p (p in Hz, as in "P/2pi") -> power in watts at omega_d
inline double power_from_flux_hz(double p_hz, double omega_d) { return hbar * omega_d * two_pi * p_hz; }

// ---- analytic oracles

// delta = omega_bar - omega_d, Delta = omega_1 - omega_2
inline double analytic_transmission(double delta, double pair_detuning, double j, double gamma) {
  double x = delta + j;
  double a = x * x - pair_detuning * pair_detuning / 4;
  double den = a * a + 4 * gamma * gamma * x * x;
  if (den == 0.0) return 0.0;
  return a * a / den;
}

// x = omega - omega_bar - J (emission frequency relative to the collective line)
inline double analytic_spectral_density(double x, double pair_detuning, double gamma, double ain) {
  double a = x * x - pair_detuning * pair_detuning / 4;
  return 4 * gamma * gamma * std::pow(ain, 4) / (a * a + 4 * x * x * gamma * gamma);
}

// stationary points of the analytic |S|^2 in x; two symmetric peaks exist only above 2 sqrt(2) gamma
inline std::vector<double> analytic_spectral_peaks(double pair_detuning, double gamma) {
  double x2 = pair_detuning * pair_detuning / 4 - 2 * gamma * gamma;
  if (x2 <= 0.0) return {0.0};
  return {-std::sqrt(x2), std::sqrt(x2)};
}

// ---- linear arrays

struct ArrayParams {
  SiteKind kind = SiteKind::qubit;
  int sites = 4;
  double omega0 = hz_to_angular(TableOne::omega0_hz);
  double anharmonicity = 0.0;
  double gamma = hz_to_angular(TableOne::gamma_hz);
  double spacing = 1.0;  // wavelengths of omega0; integers give the in-phase array
  int levels = 2;
  int max_total = 2;
  CouplingRegime regime = CouplingRegime::simplified;
  double cutoff = 0.0;
  std::size_t max_dimension = default_max_dimension;
};

// identical sites at z_j = j * spacing * 2 pi c / omega0 on the guide centre line
struct ArraySystem {
  FockBasis basis;
  std::vector<SiteModel> models;
  WaveguideGeometry geometry;
  EmitterLayout layout;
  CouplingTables tables;

  EffectiveHamiltonian effective_hamiltonian() const { return build_h_eff(basis, models, tables); }
  std::vector<JumpOperator> jumps() const { return collective_jumps(basis, tables); }
};

inline ArraySystem linear_array(const ArrayParams& p) {
  if (p.sites < 1) throw ConfigError("array: need at least one site");
  if (p.regime != CouplingRegime::simplified && !(p.cutoff > 0.0))
    throw ConfigError("array: the full and below-cutoff regimes need a positive cutoff");
  int d = p.kind == SiteKind::qubit ? 2 : p.levels;
  ArraySystem a;
  a.models.assign(p.sites, SiteModel{p.kind, p.omega0, p.kind == SiteKind::transmon ? p.anharmonicity : 0.0});
  a.geometry = WaveguideGeometry::from_cutoff(p.regime == CouplingRegime::simplified ? 0.0 : p.cutoff);
  double lambda = two_pi * speed_of_light / p.omega0;
  double x = std::isinf(a.geometry.width) ? 0.0 : a.geometry.width / 2;
  for (int j = 0; j < p.sites; ++j) a.layout.emitters.push_back({x, j * p.spacing * lambda, p.gamma, a.models[j]});
  CouplingOptions opt;
  opt.regime = p.regime;
  opt.phase_frequency = p.omega0;
  a.tables = build_coupling_tables(a.geometry, a.layout, d, opt);
  a.basis = FockBasis::truncated(p.sites, d, p.max_total, p.max_dimension);
  return a;
}

// ---- transmission

inline Complex transmission_amplitude(const TwoPairSystem& sys, double power, double omega_d,
                                      SteadyState* out = nullptr) {
  SparseMatrix hd = sys.probe_drive(power, omega_d);
  auto ss = sys.steady_state(omega_d, &hd);
  Vector row = expectation_row(sys.output_operator());
  double ain = input_amplitude(power, omega_d);
  Complex t = 1.0 + expectation(row, ss.r) / ain;
  if (out) *out = std::move(ss);
  return t;
}

struct TransmissionConfig {
  std::vector<double> detunings;       // Delta, rad/s
  std::vector<double> drive_offsets;   // omega_d - omega_bar, rad/s
  double flux_hz = 700.0;              // P/2pi
  unsigned threads = 1;
};

inline ObservableMap transmission_sweep(const TwoPairParams& base, const TransmissionConfig& cfg) {
  ObservableMap m;
  m.observable = "t2";
  m.row_name = "Delta_rad_s";
  m.col_name = "omega_d_minus_omega_bar_rad_s";
  m.rows = cfg.detunings;
  m.cols = cfg.drive_offsets;
  m.values.assign(m.rows.size() * m.cols.size(), std::numeric_limits<double>::quiet_NaN());
  const std::size_t nc = m.cols.size();
  std::vector<int> failed(m.rows.size(), 0);
  // one system per row; workers own their solver
  parallel_for(m.rows.size(), cfg.threads, [&](std::size_t r, unsigned) {
    TwoPairParams p = base;
    p.detuning = m.rows[r];
    TwoPairSystem sys(p);
    for (std::size_t c = 0; c < nc; ++c) {
      double wd = sys.omega_bar() + m.cols[c];
      try {
        double power = power_from_flux_hz(cfg.flux_hz, wd);
        m.values[r * nc + c] = std::norm(transmission_amplitude(sys, power, wd));
      } catch (const SolverError&) {
        ++failed[r];
      }
    }
  });
  for (int f : failed) m.missing += f;
  return m;
}

// ---- power spectrum

struct PowerSpectrumConfig {
  double flux_hz = 700.0;
  std::optional<double> drive_offset;  // omega_d - omega_bar; default +J
  double window_gamma = 40.0;          // ring-down length in 1/gamma
  int samples = 1024;
  int zero_pad = 8;
  KrylovConfig krylov{16, 1e-12, 100000};
  Eigen::Index dense_limit = 1600;  // superoperator size up to which e^{L dt} is formed densely
};

struct PowerSpectrum {
  double detuning = 0.0;
  double drive_frequency = 0.0;           // absolute, rad/s
  std::vector<double> frequencies;        // omega - omega_d, rad/s, ascending
  std::vector<Complex> spectrum;          // S(omega)
  std::vector<Complex> correlation;       // g(tau) samples
  double dt = 0.0;
  double resolution = 0.0;                // 2 pi / T

  std::vector<double> magnitude() const {
    std::vector<double> v(spectrum.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(spectrum[i]);
    return v;
  }
  std::vector<double> power() const {
    std::vector<double> v(spectrum.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::norm(spectrum[i]);
    return v;
  }
};

// Drive to steady state, switch the drive off and Fourier transform
// g(tau) = tr(A^dag e^{L0 tau}(A rho_ss)) on [0, T] with S = int e^{-i w tau} g.
inline PowerSpectrum power_spectrum(const TwoPairSystem& sys, const PowerSpectrumConfig& cfg) {
  const double g = sys.params().gamma;
  if (cfg.samples < 8) throw ConfigError("power spectrum: need at least 8 samples");
  if (cfg.zero_pad < 1) throw ConfigError("power spectrum: zero padding factor must be >= 1");
  double T = cfg.window_gamma / g;
  double wd = sys.omega_bar() + cfg.drive_offset.value_or(sys.params().capacitive);
  PowerSpectrum out;
  out.detuning = sys.params().detuning;
  out.drive_frequency = wd;
  out.dt = T / cfg.samples;
  out.resolution = two_pi / T;
  // slowest relevant decay must fit in the window
  if (cfg.window_gamma < 4.0) throw SolverError("power spectrum: window too short for the requested resolution");

  double power = power_from_flux_hz(cfg.flux_hz, wd);
  SparseMatrix hd = sys.probe_drive(power, wd);
  auto ss = sys.steady_state(wd, &hd);
  auto free = sys.liouvillian(wd);

  SparseMatrix a = sys.output_operator();
  Vector x = super::left(a) * ss.r;
  SparseMatrix ad = a.adjoint();
  Vector row = expectation_row(ad);
  out.correlation.resize(cfg.samples);
  if (free.dimension() <= cfg.dense_limit) {
    // one dense step propagator, then only matrix-vector products
    Matrix step = (Matrix(free.constant()) * out.dt).exp();
    for (int k = 0; k < cfg.samples; ++k) {
      out.correlation[k] = expectation(row, x);
      x = step * x;
    }
  } else {
    for (int k = 0; k < cfg.samples; ++k) {
      out.correlation[k] = expectation(row, x);
      x = krylov_step(free.constant(), x, out.dt, cfg.krylov);
    }
  }

  const int n = cfg.samples * cfg.zero_pad;
  std::vector<Complex> buf(n, Complex(0.0)), spec;
  for (int k = 0; k < cfg.samples; ++k) buf[k] = out.correlation[k];
  buf[0] *= 0.5;  // trapezoid at tau = 0
  Eigen::FFT<double> fft;
  fft.fwd(spec, buf);
  double dw = two_pi / (n * out.dt);
  out.frequencies.resize(n);
  out.spectrum.resize(n);
  for (int i = 0; i < n; ++i) {
    int k = (i + n / 2) % n;  // reorder to ascending frequency
    int kk = k < n / 2 ? k : k - n;
    out.frequencies[i] = kk * dw;
    out.spectrum[i] = out.dt * spec[k];
  }
  return out;
}

// indices of local maxima whose drop to both neighbouring minima exceeds
// `prominence` times the global maximum
inline std::vector<std::size_t> find_peaks(const std::vector<double>& y, double prominence = 1e-6) {
  std::vector<std::size_t> out;
  if (y.size() < 3) return out;
  double top = *std::max_element(y.begin(), y.end());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    double lmin = y[i], rmin = y[i];
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] > y[i]) break;
      lmin = std::min(lmin, y[k]);
    }
    for (std::size_t k = i + 1; k < y.size(); ++k) {
      if (y[k] > y[i]) break;
      rmin = std::min(rmin, y[k]);
    }
    if (y[i] - std::max(lmin, rmin) >= prominence * top) out.push_back(i);
  }
  return out;
}

// full width at half maximum of the highest peak, linear interpolation
inline double full_width_half_max(const std::vector<double>& x, const std::vector<double>& y) {
  auto it = std::max_element(y.begin(), y.end());
  std::size_t i = it - y.begin();
  double half = *it / 2;
  std::size_t l = i, r = i;
  while (l > 0 && y[l] > half) --l;
  while (r + 1 < y.size() && y[r] > half) ++r;
  if (y[l] > half || y[r] > half) throw SolverError("fwhm: peak not resolved inside the frequency window");
  double xl = x[l] + (half - y[l]) * (x[l + 1] - x[l]) / (y[l + 1] - y[l]);
  double xr = x[r - 1] + (half - y[r - 1]) * (x[r] - x[r - 1]) / (y[r] - y[r - 1]);
  return xr - xl;
}

// contiguous runs where |y - baseline| exceeds `threshold`
struct Feature {
  std::size_t begin = 0, end = 0;  // inclusive index range
  std::size_t extremum = 0;        // largest deviation inside the run
  double deviation = 0.0;          // signed y - baseline at the extremum
};

inline std::vector<Feature> find_features(const std::vector<double>& y, double baseline, double threshold) {
  std::vector<Feature> out;
  for (std::size_t i = 0; i < y.size();) {
    if (!(std::abs(y[i] - baseline) > threshold)) {
      ++i;
      continue;
    }
    Feature f;
    f.begin = f.extremum = i;
    while (i < y.size() && std::abs(y[i] - baseline) > threshold) {
      if (std::abs(y[i] - baseline) > std::abs(y[f.extremum] - baseline)) f.extremum = i;
      ++i;
    }
    f.end = i - 1;
    f.deviation = y[f.extremum] - baseline;
    out.push_back(f);
  }
  return out;
}

// ---- superradiant burst

struct BurstConfig {
  SiteKind kind = SiteKind::qubit;
  int sites = 4;
  double omega0 = hz_to_angular(TableOne::omega0_hz);
  double gamma = hz_to_angular(TableOne::gamma_hz);
  double anharmonicity = 8.72 * hz_to_angular(TableOne::gamma_hz);
  std::optional<FockState> initial;  // default all sites singly excited
  double duration_gamma = 3.0;
  int samples = 301;
  KrylovConfig krylov;
  std::size_t max_dimension = default_max_dimension;
};

struct BurstResult {
  std::vector<double> times;
  std::vector<double> occupation;        // <N>
  std::vector<double> intensity;         // -hbar w0 d<N>/dt by finite differences, W
  std::vector<double> intensity_exact;   // -hbar w0 tr(N L rho), W
  double peak_time = 0.0;
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
};

// centred differences, one-sided at the ends
inline std::vector<double> finite_difference(const std::vector<double>& t, const std::vector<double>& y) {
  std::size_t n = y.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (y[1] - y[0]) / (t[1] - t[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  return d;
}

inline BurstResult superradiant_burst(const BurstConfig& cfg) {
  if (cfg.sites < 1) throw ConfigError("burst: need at least one site");
  FockState init = cfg.initial.value_or(FockState{std::vector<int>(cfg.sites, 1)});
  if (static_cast<int>(init.sites()) != cfg.sites) throw ConfigError("burst: initial state has wrong length");
  int n0 = init.total();
  int maxocc = *std::max_element(init.occupations.begin(), init.occupations.end());
  int d = cfg.kind == SiteKind::qubit ? 2 : std::max(n0, 1) + 1;
  if (cfg.kind == SiteKind::qubit && maxocc > 1) throw ConfigError("burst: qubit occupations must be 0 or 1");
  auto basis = FockBasis::truncated(cfg.sites, d, n0, cfg.max_dimension);

  double u = cfg.kind == SiteKind::transmon ? cfg.anharmonicity : 0.0;
  std::vector<SiteModel> models(cfg.sites, SiteModel{cfg.kind, cfg.omega0, u});
  EmitterLayout lay;
  for (int j = 0; j < cfg.sites; ++j) lay.emitters.push_back({0.0, 0.0, cfg.gamma, models[j]});
  CouplingOptions opt;
  opt.phase_frequency = cfg.omega0;
  auto tab = build_coupling_tables(WaveguideGeometry::from_cutoff(0.0), lay, d, opt);
  auto parts = build_hamiltonian_parts(basis, models, tab, Matrix(), cfg.omega0);
  auto lv = build_liouvillian(basis, parts.hermitian, tab, 0.0);

  std::vector<double> grid(cfg.samples);
  double T = cfg.duration_gamma / cfg.gamma;
  for (int i = 0; i < cfg.samples; ++i) grid[i] = T * i / (cfg.samples - 1);
  SparseMatrix num = total_number(basis);
  EvolveConfig ec;
  ec.magnus.krylov = cfg.krylov;

  Vector r0 = pure_state(basis.size(), basis.index(init));
  Vector nrow = expectation_row(num);
  BurstResult out;
  Vector r = r0;
  double t = 0.0;
  Complex tr0 = vector_trace(r0);
  for (double g : grid) {
    r = propagate(lv, r, t, g, ec);
    t = g;
    out.times.push_back(g);
    out.occupation.push_back(expectation(nrow, r).real());
    out.intensity_exact.push_back(-hbar * cfg.omega0 * expectation(nrow, lv.constant() * r).real());
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(vector_trace(r) - tr0));
    Matrix rho = devectorize(r);
    out.max_hermiticity_error = std::max(out.max_hermiticity_error, (rho - rho.adjoint()).norm());
  }
  auto dn = finite_difference(out.times, out.occupation);
  out.intensity.resize(dn.size());
  for (std::size_t i = 0; i < dn.size(); ++i) out.intensity[i] = -hbar * cfg.omega0 * dn[i];

  // highest interior local maximum; t = 0 when the intensity only falls
  double best = out.intensity_exact.front();
  out.peak_time = 0.0;
  for (std::size_t i = 1; i + 1 < out.intensity_exact.size(); ++i) {
    const auto& y = out.intensity_exact;
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > best) {
      best = y[i];
      out.peak_time = out.times[i];
    }
  }
  return out;
}

// ---- pulsed spectroscopy

struct PulseSpec {
  double amplitude = 0.0;  // rad/s
  double center = 0.0;     // s
  double width = 1.0;      // sigma, s
  double carrier = 0.0;    // rad/s
  std::array<double, 4> phases{0.0, 0.0, 0.0, 0.0};

  double envelope(double t) const {
    double x = (t - center) / width;
    return amplitude * std::exp(-0.5 * x * x);
  }
  void validate() const {
    if (!(width > 0.0)) throw ConfigError("pulse: width must be positive");
  }
};

struct PulsedConfig {
  double rabi_duration = 240e-9;
  double spec_duration = 1200e-9;
  double rabi_amplitude = hz_to_angular(4e6);
  double spec_amplitude = hz_to_angular(1e6);
  std::vector<double> phases;         // phi between pairs
  std::vector<double> probe_offsets;  // omega_p - omega_bar, rad/s
  double steps_per_sigma = 20.0;
  MagnusConfig magnus{Quadrature::midpoint, false, KrylovConfig{20, 1e-11, 100000}};
  unsigned threads = 1;
};

struct PulsedResult {
  ObservableMap population;      // rows: phi, cols: probe offset
  double ground_after_rabi = 0.0;
  double ground_without_probe = 0.0;
  double dark_after_rabi = 0.0;
};

inline PulseSpec rabi_pulse(const TwoPairSystem& sys, const PulsedConfig& c) {
  return {c.rabi_amplitude, c.rabi_duration / 2, c.rabi_duration / 6, sys.dark_state_frequency(), {0, 0, 0, 0}};
}

inline PulseSpec probe_pulse(const PulsedConfig& c, double carrier, double phi) {
  return {c.spec_amplitude, c.rabi_duration + c.spec_duration / 2, c.spec_duration / 6, carrier, {phi, phi, 0, 0}};
}

// rho in the frame rotating at w_from -> frame at w_to, at time t
inline Vector switch_frame(const FockBasis& b, const Vector& r, double w_from, double w_to, double t) {
  const std::size_t d = b.size();
  Vector out = r;
  double w = (w_to - w_from) * t;
  for (std::size_t col = 0; col < d; ++col)
    for (std::size_t row = 0; row < d; ++row) {
      int dn = b.state(row).total() - b.state(col).total();
      if (dn) out(col * d + row) *= std::polar(1.0, w * dn);
    }
  return out;
}

inline Vector run_pulse(const TwoPairSystem& sys, const PulseSpec& pulse, const Vector& r0, double t0, double t1,
                        const PulsedConfig& c) {
  pulse.validate();
  auto lv = sys.liouvillian(pulse.carrier);
  lv.add_hamiltonian_drive("pulse", [pulse](double t) { return pulse.envelope(t); }, sys.site_drive(pulse.phases));
  EvolveConfig ec;
  ec.max_step = pulse.width / c.steps_per_sigma;
  ec.magnus = c.magnus;
  return propagate(lv, r0, t0, t1, ec);
}

inline PulsedResult pulsed_spectroscopy(const TwoPairParams& params, const PulsedConfig& c) {
  TwoPairSystem sys(params);
  auto g = sys.ground_index();
  const std::size_t d = sys.basis().size();
  auto rabi = rabi_pulse(sys, c);
  Vector r0 = pure_state(d, g);
  Vector r1 = run_pulse(sys, rabi, r0, 0.0, c.rabi_duration, c);

  PulsedResult res;
  res.ground_after_rabi = r1(g * d + g).real();
  {
    // population on D3 = (1/2) sum_j |1_j>
    Vector v = Vector::Zero(d);
    for (int j = 0; j < 4; ++j) {
      std::vector<int> o(4, 0);
      o[j] = 1;
      v(sys.basis().index(FockState{o})) = 0.5;
    }
    Matrix rho = devectorize(r1);
    res.dark_after_rabi = (v.adjoint() * rho * v)(0, 0).real();
  }
  {
    auto idle = sys.liouvillian(rabi.carrier);
    Vector r = krylov_step(idle.constant(), r1, c.spec_duration, c.magnus.krylov);
    res.ground_without_probe = r(g * d + g).real();
  }

  auto& m = res.population;
  m.observable = "ground_population";
  m.row_name = "phi_rad";
  m.col_name = "omega_p_minus_omega_bar_rad_s";
  m.rows = c.phases;
  m.cols = c.probe_offsets;
  m.values.assign(m.rows.size() * m.cols.size(), std::numeric_limits<double>::quiet_NaN());
  const std::size_t nc = m.cols.size();
  std::vector<int> failed(m.values.size(), 0);
  parallel_for(m.values.size(), c.threads, [&](std::size_t i, unsigned) {
    double phi = m.rows[i / nc];
    double wp = sys.omega_bar() + m.cols[i % nc];
    try {
      Vector r = switch_frame(sys.basis(), r1, rabi.carrier, wp, c.rabi_duration);
      auto probe = probe_pulse(c, wp, phi);
      r = run_pulse(sys, probe, r, c.rabi_duration, c.rabi_duration + c.spec_duration, c);
      m.values[i] = r(g * d + g).real();
    } catch (const SolverError&) {
      failed[i] = 1;
    }
  });
  for (int f : failed) m.missing += f;
  return res;
}

}  // namespace wgqed

#endif  // WGQED_EXPERIMENTS_HPP
