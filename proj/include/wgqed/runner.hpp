#ifndef WGQED_RUNNER_HPP
#define WGQED_RUNNER_HPP

#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "experiments.hpp"
#include "io.hpp"

namespace wgqed {

struct RunResult {
  Artifact artifact;
  Json summary;
};

namespace detail {

inline std::string num(double x) { return format_number(x); }

inline Json metadata(const RunConfig& c, const std::vector<std::string>& columns, Json summary) {
  Json m;
  m["toolkit"] = {{"name", "wgqed"}, {"version", version}};
  m["experiment"] = to_string(c.experiment);
  m["columns"] = columns;
  m["config"] = to_json(c);
  m["results"] = std::move(summary);
  return m;
}

inline RunResult run_spectrum(const RunConfig& c, std::ostream& log) {
  const auto& s = c.system;
  FockBasis basis;
  EffectiveHamiltonian h;
  std::vector<JumpOperator> jumps;
  std::vector<std::string> warnings;
  std::optional<SparseMatrix> exchange;
  if (s.layout == "two_pair") {
    auto p = s.two_pair();
    p.max_total = c.manifold_max;  // H_eff conserves N, so the cap is exact
    p.max_dimension = c.max_dimension;
    TwoPairSystem sys(p);
    basis = sys.basis();
    h = sys.effective_hamiltonian(0.0);
    jumps = sys.jumps();
    exchange = pair_exchange(basis);
    warnings = sys.tables().warnings;
  } else {
    ArrayParams ap;
    ap.kind = s.model;
    ap.sites = s.sites;
    ap.omega0 = s.omega0;
    ap.anharmonicity = s.anharmonicity;
    ap.gamma = s.gamma;
    ap.spacing = s.spacing;
    ap.levels = s.levels;
    ap.max_total = c.manifold_max;
    ap.regime = s.regime;
    ap.cutoff = s.cutoff;
    ap.max_dimension = c.max_dimension;
    auto a = linear_array(ap);
    basis = a.basis;
    h = a.effective_hamiltonian();
    jumps = a.jumps();
    warnings = a.tables.warnings;
  }
  for (const auto& w : warnings) log << "warning: " << w << '\n';
  auto spec = diagonalize(h);
  auto labels = classify(spec, exchange ? &*exchange : nullptr, s.gamma, c.bands);
  auto channels = decay_channels(spec, jumps);

  std::vector<std::string> cols{"manifold_N", "index",       "E_rad_s",  "E_minus_N_omega0_rad_s",
                                "Gamma_rad_s", "Gamma_over_gamma", "symmetry", "brightness"};
  CsvTable t(cols);
  std::vector<int> counter(c.manifold_max + 1, 0);
  double completeness = 0.0, bio = spec.biorthogonality_error(), ident = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    int n = spec[i].manifold;
    if (n < c.manifold_min || n > c.manifold_max) continue;
    const auto& e = spec[i];
    t.add({std::to_string(n), std::to_string(counter[n]++), num(e.energy()), num(e.energy() - n * s.omega0),
           num(e.decay_rate()), num(e.decay_rate() / s.gamma), to_string(labels[i].symmetry),
           to_string(labels[i].brightness)});
    if (n > 0) completeness = std::max(completeness, std::abs(channels.totals[i] - e.decay_rate()));
  }
  for (int n = c.manifold_min; n <= c.manifold_max; ++n) ident = std::max(ident, spec.identity_residual(n, &basis));
  Json summary{{"states", t.rows()},
               {"basis_size", basis.size()},
               {"biorthogonality_error", bio},
               {"identity_residual", ident},
               {"channel_completeness_rad_s", completeness},
               {"channel_max_imaginary_rad_s", channels.max_imaginary},
               {"warnings", warnings}};
  return {write_artifact(c.output, "spectrum", t, metadata(c, cols, summary)), summary};
}

inline RunResult run_burst(const RunConfig& c, std::ostream&) {
  const auto& s = c.system;
  BurstConfig b;
  b.kind = s.model;
  b.sites = s.sites;
  b.omega0 = s.omega0;
  b.gamma = s.gamma;
  b.anharmonicity = s.anharmonicity;
  if (c.initial) b.initial = FockState{*c.initial};
  b.duration_gamma = c.burst_duration * s.gamma;
  b.samples = c.burst_samples;
  b.krylov = c.krylov;
  b.max_dimension = c.max_dimension;
  auto r = superradiant_burst(b);

  std::vector<std::string> cols{"t_s", "N", "intensity_W", "intensity_dissipator_W"};
  CsvTable t(cols);
  double emitted = 0.0;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    t.add({num(r.times[i]), num(r.occupation[i]), num(r.intensity[i]), num(r.intensity_exact[i])});
    if (i) emitted += 0.5 * (r.intensity_exact[i] + r.intensity_exact[i - 1]) * (r.times[i] - r.times[i - 1]);
  }
  double lost = hbar * s.omega0 * (r.occupation.front() - r.occupation.back());
  Json summary{{"peak_time_s", r.peak_time},
               {"peak_time_gamma", r.peak_time * s.gamma},
               {"final_occupation", r.occupation.back()},
               {"emitted_energy_J", emitted},
               {"occupation_energy_J", lost},
               {"max_trace_drift", r.max_trace_drift},
               {"max_hermiticity_error", r.max_hermiticity_error}};
  return {write_artifact(c.output, "burst", t, metadata(c, cols, summary)), summary};
}

inline TwoPairParams two_pair_params(const RunConfig& c) {
  auto p = c.system.two_pair();
  p.max_dimension = c.max_dimension;
  p.steady = c.steady;
  return p;
}

inline void require_two_pair(const RunConfig& c) {
  if (c.system.layout != "two_pair")
    throw ConfigError("config /system/layout: " + to_string(c.experiment) + " runs on the two_pair layout");
}

inline RunResult run_transmission(const RunConfig& c, std::ostream&) {
  require_two_pair(c);
  TransmissionConfig tc;
  tc.detunings = c.detuning_axis.values();
  tc.drive_offsets = c.drive_axis.values();
  tc.flux_hz = c.flux_hz;
  tc.threads = c.worker_threads();
  auto base = two_pair_params(c);
  auto m = transmission_sweep(base, tc);

  std::vector<std::string> cols{"Delta_rad_s", "omega_d_minus_omega_bar_rad_s", "t2", "t2_analytic"};
  CsvTable t(cols);
  double dev = 0.0;
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    for (std::size_t k = 0; k < m.cols.size(); ++k) {
      double v = m.values[r * m.cols.size() + k];
      double a = analytic_transmission(-m.cols[k], m.rows[r], base.capacitive, base.gamma);
      if (std::isfinite(v)) dev = std::max(dev, std::abs(v - a));
      t.add({num(m.rows[r]), num(m.cols[k]), num(v), num(a)});
    }
  Json summary{{"points", m.values.size()}, {"missing", m.missing}, {"max_abs_deviation_from_analytic", dev}};
  return {write_artifact(c.output, "transmission", t, metadata(c, cols, summary)), summary};
}

inline RunResult run_power_spectrum(const RunConfig& c, std::ostream&) {
  require_two_pair(c);
  auto base = two_pair_params(c);
  auto deltas = c.detuning_axis.values();
  PowerSpectrumConfig pc = c.power_spectrum;
  pc.flux_hz = c.flux_hz;
  pc.drive_offset = c.drive_offset;
  std::vector<PowerSpectrum> out(deltas.size());
  parallel_for(deltas.size(), c.worker_threads(), [&](std::size_t i, unsigned) {
    auto p = base;
    p.detuning = deltas[i];
    TwoPairSystem sys(p);
    out[i] = power_spectrum(sys, pc);
  });

  std::vector<std::string> cols{"Delta_rad_s", "omega_minus_omega_d_rad_s", "S_abs", "S_abs_normalized",
                                "S2_analytic_normalized"};
  CsvTable t(cols);
  Json peaks = Json::array();
  const double span = c.span_gamma * base.gamma;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto& ps = out[i];
    auto mag = ps.magnitude();
    double top = 0.0, atop = 0.0;
    std::vector<double> an(mag.size(), 0.0);
    double shift = ps.drive_frequency - base.omega0 - base.capacitive;  // x = omega - omega_bar - J
    for (std::size_t k = 0; k < mag.size(); ++k) {
      if (std::abs(ps.frequencies[k]) > span) continue;
      top = std::max(top, mag[k]);
      an[k] = analytic_spectral_density(ps.frequencies[k] + shift, deltas[i], base.gamma, 1.0);
      if (std::isfinite(an[k])) atop = std::max(atop, an[k]);
    }
    for (std::size_t k = 0; k < mag.size(); ++k) {
      if (std::abs(ps.frequencies[k]) > span) continue;
      double a = atop > 0.0 && std::isfinite(an[k]) ? an[k] / atop : std::numeric_limits<double>::quiet_NaN();
      t.add({num(deltas[i]), num(ps.frequencies[k]), num(mag[k]), num(top > 0.0 ? mag[k] / top : 0.0), num(a)});
    }
    auto pw = ps.power();
    Json pk = Json::array();
    for (auto k : find_peaks(pw)) pk.push_back(ps.frequencies[k]);
    peaks.push_back({{"Delta_rad_s", deltas[i]}, {"peaks_rad_s", pk}});
  }
  Json summary{{"detunings", deltas.size()},
               {"drive_offset_rad_s", out.empty() ? 0.0 : out[0].drive_frequency - base.omega0},
               {"resolution_rad_s", out.empty() ? 0.0 : out[0].resolution},
               {"peaks", peaks}};
  return {write_artifact(c.output, "power-spectrum", t, metadata(c, cols, summary)), summary};
}

inline RunResult run_pulsed(const RunConfig& c, std::ostream&) {
  require_two_pair(c);
  auto r = pulsed_spectroscopy(two_pair_params(c), c.pulsed);
  const auto& m = r.population;
  std::vector<std::string> cols{"phi_rad", "omega_p_minus_omega_bar_rad_s", "ground_population",
                                "change_vs_no_probe"};
  CsvTable t(cols);
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t k = 0; k < m.cols.size(); ++k) {
      double v = m.values[i * m.cols.size() + k];
      t.add({num(m.rows[i]), num(m.cols[k]), num(v), num(v - r.ground_without_probe)});
    }
  Json summary{{"ground_after_rabi", r.ground_after_rabi},
               {"dark_after_rabi", r.dark_after_rabi},
               {"ground_without_probe", r.ground_without_probe},
               {"missing", m.missing}};
  return {write_artifact(c.output, "pulsed-spec", t, metadata(c, cols, summary)), summary};
}

inline RunResult run_steady_state(const RunConfig& c, std::ostream&) {
  require_two_pair(c);
  TwoPairSystem sys(two_pair_params(c));
  double wd = sys.omega_bar() + c.drive_offset.value_or(sys.params().capacitive);
  double power = power_from_flux_hz(c.flux_hz, wd);
  SteadyState ss;
  Complex tr = transmission_amplitude(sys, power, wd, &ss);
  Matrix rho = devectorize(ss.r);
  std::vector<std::string> cols{"index", "state", "population"};
  CsvTable t(cols);
  for (std::size_t i = 0; i < sys.basis().size(); ++i)
    t.add({std::to_string(i), sys.basis().state(i).label(), num(rho(i, i).real())});
  double n = expectation(expectation_row(total_number(sys.basis())), ss.r).real();
  Json summary{{"drive_frequency_rad_s", wd},
               {"power_W", power},
               {"t_real", tr.real()},
               {"t_imag", tr.imag()},
               {"t2", std::norm(tr)},
               {"occupation", n},
               {"residual", ss.residual},
               {"hermiticity_correction", ss.hermiticity_correction}};
  return {write_artifact(c.output, "steady-state", t, metadata(c, cols, summary)), summary};
}

}  // namespace detail

// 0 ok, 2 bad configuration or a basis over the dimension cap, 3 solver failure, 1 anything else
inline int exit_status(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const CapacityError*>(&e)) return 2;
  if (dynamic_cast<const SolverError*>(&e)) return 3;
  return 1;
}

inline RunResult run(const RunConfig& c, std::ostream& log) {
  switch (c.experiment) {
    case Experiment::spectrum: return detail::run_spectrum(c, log);
    case Experiment::burst: return detail::run_burst(c, log);
    case Experiment::transmission: return detail::run_transmission(c, log);
    case Experiment::power_spectrum: return detail::run_power_spectrum(c, log);
    case Experiment::pulsed_spec: return detail::run_pulsed(c, log);
    case Experiment::steady_state: return detail::run_steady_state(c, log);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace wgqed

#endif  // WGQED_RUNNER_HPP
