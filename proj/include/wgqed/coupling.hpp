#ifndef WGQED_COUPLING_HPP
#define WGQED_COUPLING_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "core.hpp"
#include "fock.hpp"

namespace wgqed {

// TE10 rectangular guide; a is the wide side.
struct WaveguideGeometry {
  double width = 0.0;   // a, m
  double height = 0.0;  // b, m
  double c = speed_of_light;

  WaveguideGeometry() = default;
  WaveguideGeometry(double a, double b, double light = speed_of_light) : width(a), height(b), c(light) {
    if (!(a > b && b > 0.0)) throw ConfigError("waveguide: need a > b > 0");
    if (!(light > 0.0)) throw ConfigError("waveguide: speed of light must be positive");
  }

  // a = c pi / cutoff, b = a/2. cutoff 0 gives the dispersionless limit.
  static WaveguideGeometry from_cutoff(double cutoff, double light = speed_of_light) {
    if (cutoff < 0.0) throw ConfigError("waveguide: cutoff must be >= 0");
    WaveguideGeometry g;
    g.c = light;
    g.width = cutoff > 0.0 ? light * pi / cutoff : std::numeric_limits<double>::infinity();
    g.height = g.width / 2;
    return g;
  }

  double cutoff() const { return std::isinf(width) ? 0.0 : c * pi / width; }

  double dispersion(double kz) const {
    double w = cutoff();
    return std::sqrt(c * c * kz * kz + w * w);
  }

  double wavenumber(double omega) const {
    double w = cutoff();
    if (omega < w) throw Error("waveguide: frequency below cutoff has no real wavenumber");
    return std::sqrt(omega * omega - w * w) / c;
  }

  double group_velocity(double omega) const {
    check_propagating(omega);
    double r = cutoff() / omega;
    return c * std::sqrt(1.0 - r * r);
  }

  double phase_velocity(double omega) const {
    check_propagating(omega);
    double r = cutoff() / omega;
    return c / std::sqrt(1.0 - r * r);
  }

  // sin(pi x / a); the centre line gives 1
  double mode_profile(double x) const {
    if (std::isinf(width)) return 1.0;
    return std::sin(pi * x / width);
  }

 private:
  void check_propagating(double omega) const {
    if (!(omega > cutoff()))
      throw Error("waveguide: velocities are defined only above the cutoff frequency");
  }
};

struct Emitter {
  double x = 0.0;      // transverse position, m
  double z = 0.0;      // along the guide, m
  double gamma = 0.0;  // single-site decay, rad/s
  SiteModel model;
};

struct EmitterLayout {
  std::vector<Emitter> emitters;
  double c = speed_of_light;

  int sites() const { return static_cast<int>(emitters.size()); }
  const Emitter& operator[](int j) const { return emitters[j]; }
  double arrival_time(int j) const { return emitters[j].z / c; }
  double propagation_time(int j, int k) const { return std::abs(emitters[j].z - emitters[k].z) / c; }

  void validate(const WaveguideGeometry* geom = nullptr) const {
    for (const auto& e : emitters) {
      if (e.gamma < 0.0) throw ConfigError("layout: negative single-site decay rate");
      if (geom && !std::isinf(geom->width) && (e.x < 0.0 || e.x > geom->width))
        throw ConfigError("layout: transverse coordinate outside the waveguide");
    }
  }
};

struct CouplingPair {
  Complex gamma;
  Complex exchange;
};

namespace detail {

inline double prefactor(const WaveguideGeometry& g, const EmitterLayout& lay, int m, int j, int n, int k) {
  const auto& ej = lay[j];
  const auto& ek = lay[k];
  double wj = ej.model.omega, wk = ek.model.omega;
  return 0.5 * std::sqrt(ej.gamma * ek.gamma / (wj * wk)) * std::sqrt(double((m + 1) * (n + 1))) *
         g.mode_profile(ej.x) * g.mode_profile(ek.x);
}

inline Complex chi(double w, double cutoff, double t) {
  double q = std::sqrt(w * w - cutoff * cutoff);
  return std::polar(w * w / q, t * q);
}

inline double zeta(double w, double cutoff, double t) {
  double q = std::sqrt(cutoff * cutoff - w * w);
  return w * w / q * std::exp(-t * q);
}

}  // namespace detail

inline CouplingPair coupling_full_above(const WaveguideGeometry& g, const EmitterLayout& lay, int m, int j,
                                        int n, int k) {
  double cut = g.cutoff();
  double wm = lay[j].model.transition_frequency(m);
  double wn = lay[k].model.transition_frequency(n);
  if (!(wm > cut && wn > cut))
    throw ConfigError("coupling: above-cutoff form needs both transitions above the cutoff");
  double t = lay.propagation_time(j, k);
  double p = detail::prefactor(g, lay, m, j, n, k);
  Complex a = detail::chi(wm, cut, t);
  Complex b = std::conj(detail::chi(wn, cut, t));
  return {p * (a + b), -0.5 * I * p * (a - b)};
}

// homogeneous-frequency, far-above-cutoff form; the phase is taken at phase_frequency
inline CouplingPair coupling_simplified(const EmitterLayout& lay, int m, int j, int n, int k,
                                       double phase_frequency) {
  double s = std::sqrt(lay[j].gamma * lay[k].gamma) * std::sqrt(double((m + 1) * (n + 1)));
  double ph = phase_frequency * lay.propagation_time(j, k);
  return {s * std::cos(ph), 0.5 * s * std::sin(ph)};
}

inline CouplingPair coupling_below(const WaveguideGeometry& g, const EmitterLayout& lay, int m, int j,
                                   int n, int k) {
  double cut = g.cutoff();
  double wm = lay[j].model.transition_frequency(m);
  double wn = lay[k].model.transition_frequency(n);
  if (!(wm < cut && wn < cut))
    throw ConfigError("coupling: below-cutoff form needs both transitions below the cutoff");
  double t = lay.propagation_time(j, k);
  double p = detail::prefactor(g, lay, m, j, n, k);
  double a = detail::zeta(wm, cut, t);
  double b = wn == wm ? a : detail::zeta(wn, cut, t);  // FMA contraction may differ between two calls
  return {-I * p * (a - b), Complex(-0.5 * p * (a + b), 0.0)};
}

enum class CouplingRegime { full_above_cutoff, simplified, below_cutoff };

inline std::string to_string(CouplingRegime r) {
  switch (r) {
    case CouplingRegime::full_above_cutoff: return "full_above_cutoff";
    case CouplingRegime::simplified: return "simplified";
    case CouplingRegime::below_cutoff: return "below_cutoff";
  }
  return "?";
}

inline CouplingRegime regime_from_string(const std::string& s) {
  if (s == "full_above_cutoff" || s == "full") return CouplingRegime::full_above_cutoff;
  if (s == "simplified") return CouplingRegime::simplified;
  if (s == "below_cutoff" || s == "below") return CouplingRegime::below_cutoff;
  throw ConfigError("unknown coupling regime '" + s + "'");
}

// Flattened transition index p = j (d-1) + m.
struct CouplingTables {
  int sites = 0;
  int levels = 0;
  CouplingRegime regime = CouplingRegime::simplified;
  Matrix gamma;
  Matrix exchange;
  std::vector<std::string> warnings;

  int transitions_per_site() const { return levels - 1; }
  int size() const { return sites * (levels - 1); }
  int index(int m, int j) const { return j * (levels - 1) + m; }
  int level_of(int p) const { return p % (levels - 1); }
  int site_of(int p) const { return p / (levels - 1); }

  Complex gamma_at(int m, int j, int n, int k) const { return gamma(index(m, j), index(n, k)); }
  Complex exchange_at(int m, int j, int n, int k) const { return exchange(index(m, j), index(n, k)); }
};

struct CouplingOptions {
  CouplingRegime regime = CouplingRegime::simplified;
  double phase_frequency = 0.0;   // simplified form only; 0 -> mean site frequency
  double guard_band = 1e-6;       // relative distance to the cutoff that is refused
  double residual_tolerance = 0;  // below cutoff: |gamma| above this is reported before zeroing
};

inline double mean_site_frequency(const EmitterLayout& lay) {
  double s = 0.0;
  for (const auto& e : lay.emitters) s += e.model.omega;
  return lay.emitters.empty() ? 0.0 : s / lay.emitters.size();
}

inline CouplingTables build_coupling_tables(const WaveguideGeometry& g, const EmitterLayout& lay, int levels,
                                            const CouplingOptions& opt = {}) {
  lay.validate(&g);
  if (levels < 2) throw ConfigError("coupling: level cap must be >= 2");
  for (const auto& e : lay.emitters)
    if (!e.model.compatible(levels)) throw ConfigError("coupling: qubit sites require level cap d = 2");

  CouplingTables t;
  t.sites = lay.sites();
  t.levels = levels;
  t.regime = opt.regime;
  int P = t.size();
  t.gamma = Matrix::Zero(P, P);
  t.exchange = Matrix::Zero(P, P);

  double cut = g.cutoff();
  if (opt.regime != CouplingRegime::simplified) {
    for (int j = 0; j < t.sites; ++j)
      for (int m = 0; m < levels - 1; ++m) {
        double w = lay[j].model.transition_frequency(m);
        if (std::abs(w - cut) <= opt.guard_band * cut)
          throw ConfigError("coupling: transition frequency inside the cutoff guard band");
        bool above = w > cut;
        if (above != (opt.regime == CouplingRegime::full_above_cutoff))
          throw ConfigError("coupling: transition " + std::to_string(m) + " of site " + std::to_string(j) +
                            " lies on the wrong side of the cutoff for regime " + to_string(opt.regime));
      }
  }

  double wref = opt.phase_frequency > 0.0 ? opt.phase_frequency : mean_site_frequency(lay);
  double residual = 0.0;
  for (int j = 0; j < t.sites; ++j)
    for (int m = 0; m < levels - 1; ++m)
      for (int k = 0; k < t.sites; ++k)
        for (int n = 0; n < levels - 1; ++n) {
          CouplingPair c;
          switch (opt.regime) {
            case CouplingRegime::full_above_cutoff: c = coupling_full_above(g, lay, m, j, n, k); break;
            case CouplingRegime::simplified: c = coupling_simplified(lay, m, j, n, k, wref); break;
            case CouplingRegime::below_cutoff:
              c = coupling_below(g, lay, m, j, n, k);
              residual = std::max(residual, std::abs(c.gamma));
              c.gamma = 0.0;
              break;
          }
          t.gamma(t.index(m, j), t.index(n, k)) = c.gamma;
          t.exchange(t.index(m, j), t.index(n, k)) = c.exchange;
        }
  if (residual > opt.residual_tolerance)
    t.warnings.push_back("below-cutoff decay residuals up to " + std::to_string(residual) +
                         " rad/s were set to zero");
  return t;
}

struct DriveAmplitude {
  Complex value{0.0, 0.0};
  bool propagating = true;
};

// H_d(t)/hbar coefficient of sigma_x^{mj}, rad/s
inline DriveAmplitude drive_amplitude(const WaveguideGeometry& g, const CouplingTables& tab,
                                      const EmitterLayout& lay, double power, double omega_d, int m, int j,
                                      double t) {
  if (power < 0.0) throw ConfigError("drive: power must be >= 0");
  if (!(omega_d > g.cutoff())) return {0.0, false};
  double gm = tab.gamma_at(m, j, m, j).real();
  double w = lay[j].model.transition_frequency(m);
  double a = -std::sqrt(2.0 * gm * power / (hbar * w)) * std::sin(omega_d * (t + lay.arrival_time(j)));
  return {a, true};
}

// rotating-frame amplitude dtilde_{mj}; the phase is evaluated at phase_frequency
// (the drive frequency unless the caller chooses a common reference)
inline DriveAmplitude rotating_drive_amplitude(const WaveguideGeometry& g, const CouplingTables& tab,
                                               const EmitterLayout& lay, double power, double omega_d, int m,
                                               int j, double phase_frequency = 0.0) {
  if (power < 0.0) throw ConfigError("drive: power must be >= 0");
  if (!(omega_d > g.cutoff())) return {0.0, false};
  double gm = tab.gamma_at(m, j, m, j).real();
  double w = lay[j].model.transition_frequency(m);
  double ph = (phase_frequency > 0.0 ? phase_frequency : omega_d) * lay.arrival_time(j);
  return {I * std::sqrt(power * gm / (2.0 * hbar * w)) * std::polar(1.0, ph), true};
}

// <a_in> for a left-incident drive, sqrt(photons / s)
inline double input_amplitude(double power, double omega_d) { return std::sqrt(power / (hbar * omega_d)); }

// Table I, ordinary frequencies in Hz
struct TableOne {
  static constexpr double omega0_hz = 7.28e9;
  static constexpr double anharmonicity_hz = 218e6;
  static constexpr double capacitive_hz = 45e6;
  static constexpr double gamma_hz = 25e6;
  static constexpr double cutoff_hz = 6.55e9;
  static constexpr double kappa_hz = 15e3;
};

}  // namespace wgqed

#endif  // WGQED_COUPLING_HPP
