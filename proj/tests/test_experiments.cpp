#include <gtest/gtest.h>

#include "wgqed/experiments.hpp"

using namespace wgqed;

TEST(AnalyticTransmission, FrozenValues) {
  const double g = 1.0, j = 1.8;
  // delta + J = gamma on resonance of the pairs: |t|^2 = 1/5
  EXPECT_DOUBLE_EQ(analytic_transmission(g - j, 0.0, j, g), 0.2);
  // zeros at Delta = +-2 (delta + J)
  EXPECT_NEAR(analytic_transmission(0.5 - j, 1.0, j, g), 0.0, 1e-28);
  EXPECT_NEAR(analytic_transmission(-0.5 - j, 1.0, j, g), 0.0, 1e-28);
  // far detuned: transparent
  EXPECT_NEAR(analytic_transmission(1e4, 0.0, j, g), 1.0, 1e-7);
  for (double d : {-3.0, 0.2, 5.0}) EXPECT_DOUBLE_EQ(analytic_transmission(d, 2.0, j, g), analytic_transmission(d, -2.0, j, g));
}

TEST(AnalyticSpectrum, PeaksSplitAboveTwoRootTwoGamma) {
  EXPECT_EQ(analytic_spectral_peaks(2.8, 1.0).size(), 1u);
  auto p = analytic_spectral_peaks(4.0, 1.0);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[1], std::sqrt(2.0), 1e-15);
  // the closed form is stationary there
  double h = 1e-6, x = p[1];
  double dl = analytic_spectral_density(x + h, 4.0, 1.0, 1.0) - analytic_spectral_density(x - h, 4.0, 1.0, 1.0);
  EXPECT_NEAR(dl / (2 * h), 0.0, 1e-6);
}

TEST(Transmission, WeakDriveMatchesClosedForm) {
  TwoPairParams p;
  const double g = p.gamma;
  TwoPairSystem sys(p);
  // delta + J = gamma: omega_d = omega_bar - gamma + 2J... delta = omega_bar - omega_d
  double wd = sys.omega_bar() + p.capacitive - g;
  double t2 = std::norm(transmission_amplitude(sys, power_from_flux_hz(700.0, wd), wd));
  EXPECT_NEAR(t2, 0.2, 2e-3);
}

TEST(Transmission, SymmetricInPairDetuning) {
  TwoPairParams p;
  TransmissionConfig c;
  c.detunings = {-3 * p.gamma, 3 * p.gamma};
  c.drive_offsets = {-p.gamma, 0.5 * p.gamma, 2.5 * p.gamma};
  auto m = transmission_sweep(p, c);
  EXPECT_EQ(m.missing, 0);
  for (std::size_t k = 0; k < c.drive_offsets.size(); ++k) EXPECT_NEAR(m.at(0, k), m.at(1, k), 1e-6);
}

TEST(Transmission, ThreadCountDoesNotChangeResults) {
  TwoPairParams p;
  p.max_total = 2;
  TransmissionConfig c;
  c.detunings = {0.0, p.gamma, 2 * p.gamma};
  c.drive_offsets = {0.0, p.gamma};
  auto a = transmission_sweep(p, c);
  c.threads = 3;
  auto b = transmission_sweep(p, c);
  EXPECT_EQ(a.values, b.values);
}

TEST(PowerSpectrum, NormalizedMagnitudeMatchesOracle) {
  // |Delta| >= gamma; closer to resonance the slow mode Delta^2/8gamma outlives the ring-down window
  TwoPairParams p;
  p.max_total = 2;
  const double g = p.gamma;
  for (double dg : {-8.0, -3.0, -1.0, 1.0, 2.0, 4.0, 6.0}) {
    p.detuning = dg * g;
    TwoPairSystem sys(p);
    auto ps = power_spectrum(sys, PowerSpectrumConfig{});
    auto mag = ps.magnitude();
    double top = 0.0, atop = 0.0;
    std::vector<double> an(mag.size(), 0.0);
    for (std::size_t i = 0; i < mag.size(); ++i) {
      if (std::abs(ps.frequencies[i]) > 10 * g) continue;
      an[i] = std::sqrt(analytic_spectral_density(ps.frequencies[i], p.detuning, g, 1.0));
      top = std::max(top, mag[i]);
      atop = std::max(atop, an[i]);
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < mag.size(); ++i)
      if (std::abs(ps.frequencies[i]) <= 10 * g) dev = std::max(dev, std::abs(mag[i] / top - an[i] / atop));
    EXPECT_LE(dev, 0.02) << dg;
  }
}

TEST(PowerSpectrum, ConfigValidation) {
  TwoPairParams p;
  p.max_total = 1;
  TwoPairSystem sys(p);
  PowerSpectrumConfig c;
  c.samples = 4;
  EXPECT_THROW(power_spectrum(sys, c), ConfigError);
  c.samples = 64;
  c.zero_pad = 0;
  EXPECT_THROW(power_spectrum(sys, c), ConfigError);
}

TEST(Helpers, PeaksWidthsAndFeatures) {
  std::vector<double> x, y;
  for (int i = -200; i <= 200; ++i) {
    double t = i * 0.05;
    x.push_back(t);
    y.push_back(1.0 / (1.0 + t * t));  // Lorentzian, FWHM 2
  }
  EXPECT_EQ(find_peaks(y).size(), 1u);
  EXPECT_NEAR(full_width_half_max(x, y), 2.0, 1e-3);
  std::vector<double> two = {0, 1, 3, 1, 0, 2, 0};
  EXPECT_EQ(find_peaks(two).size(), 2u);

  std::vector<double> row = {0.5, 0.5, 0.6, 0.7, 0.5, 0.5, 0.3, 0.5};
  auto f = find_features(row, 0.5, 0.05);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].begin, 2u);
  EXPECT_EQ(f[0].end, 3u);
  EXPECT_EQ(f[0].extremum, 3u);
  EXPECT_NEAR(f[0].deviation, 0.2, 1e-15);
  EXPECT_EQ(f[1].extremum, 6u);
  EXPECT_NEAR(f[1].deviation, -0.2, 1e-15);
}

TEST(Burst, HarmonicOccupationIsExponential) {
  // four in-phase oscillators from |1111>: <N> = 3 + exp(-4 gamma t)
  BurstConfig c;
  c.kind = SiteKind::harmonic;
  c.samples = 61;
  auto r = superradiant_burst(c);
  for (std::size_t i = 0; i < r.times.size(); ++i)
    EXPECT_NEAR(r.occupation[i], 3.0 + std::exp(-4 * c.gamma * r.times[i]), 1e-9);
  EXPECT_EQ(r.peak_time, 0.0);
}

TEST(Burst, EnergyBookkeeping) {
  // integrated intensity equals hbar omega0 times the occupation lost
  for (auto k : {SiteKind::qubit, SiteKind::transmon}) {
    BurstConfig c;
    c.kind = k;
    auto r = superradiant_burst(c);
    double e = 0.0;
    for (std::size_t i = 1; i < r.times.size(); ++i)
      e += 0.5 * (r.intensity_exact[i] + r.intensity_exact[i - 1]) * (r.times[i] - r.times[i - 1]);
    double lost = hbar * c.omega0 * (r.occupation.front() - r.occupation.back());
    EXPECT_NEAR(e / lost, 1.0, 1e-2);
    // finite-difference and dissipator intensities agree in the interior
    for (std::size_t i = 5; i + 5 < r.times.size(); ++i)
      EXPECT_NEAR(r.intensity[i], r.intensity_exact[i], 2e-3 * r.intensity_exact[0] + 1e-2 * r.intensity_exact[i]);
    EXPECT_LT(r.max_trace_drift, 1e-8);
  }
}

TEST(Burst, TransmonBurstIsDelayed) {
  BurstConfig c;
  c.kind = SiteKind::qubit;
  auto q = superradiant_burst(c);
  c.kind = SiteKind::transmon;
  auto t = superradiant_burst(c);
  EXPECT_GT(q.peak_time, 0.0);
  EXPECT_GT(t.peak_time, q.peak_time);  // harmonic-like early decay delays the transmon burst
  EXPECT_NEAR(q.occupation.front(), 4.0, 1e-12);
}

TEST(Burst, Validation) {
  BurstConfig c;
  c.initial = FockState{{1, 1, 1}};
  EXPECT_THROW(superradiant_burst(c), ConfigError);
  c.initial = FockState{{2, 0, 0, 0}};
  EXPECT_THROW(superradiant_burst(c), ConfigError);  // qubits hold one excitation
}

TEST(Pulsed, DarkStateDipDependsOnPhase) {
  TwoPairParams p;
  p.max_total = 3;
  PulsedConfig c;
  c.phases = {0.0, pi};
  c.probe_offsets = {p.capacitive};
  auto r = pulsed_spectroscopy(p, c);
  double dip = r.ground_without_probe - r.population.at(0, 0);
  double rest = std::abs(r.population.at(1, 0) - r.ground_without_probe);
  EXPECT_GT(dip, 1e-3);
  EXPECT_LT(rest, 0.1 * dip);
  EXPECT_NEAR(r.ground_after_rabi + r.dark_after_rabi, 1.0, 1e-2);
}

TEST(Pulsed, Validation) {
  PulseSpec bad{1.0, 0.0, 0.0, 1.0, {0, 0, 0, 0}};
  EXPECT_THROW(bad.validate(), ConfigError);
  PulseSpec ok{2.0, 1.0, 0.5, 1.0, {0, 0, 0, 0}};
  EXPECT_DOUBLE_EQ(ok.envelope(1.0), 2.0);
}

TEST(LinearArray, Validation) {
  ArrayParams p;
  p.regime = CouplingRegime::full_above_cutoff;
  EXPECT_THROW(linear_array(p), ConfigError);
  p.cutoff = 0.5 * p.omega0;
  p.sites = 3;
  auto a = linear_array(p);
  EXPECT_EQ(a.basis.size(), 7u);  // N <= 2 on three qubits
  EXPECT_TRUE(std::isfinite(a.geometry.width));
}
