#include <gtest/gtest.h>

#include <random>

#include "wgqed/experiments.hpp"

using namespace wgqed;

namespace {

ArraySystem array(SiteKind k, int sites, int levels, int max_total, double u_over_gamma = 0.0,
                  double spacing = 1.0) {
  ArrayParams p;
  p.kind = k;
  p.sites = sites;
  p.levels = levels;
  p.max_total = max_total;
  p.anharmonicity = u_over_gamma * p.gamma;
  p.spacing = spacing;
  return linear_array(p);
}

std::vector<double> decays(const BiorthogonalSpectrum& s, int n, double g) {
  std::vector<double> v;
  for (auto i : s.in_manifold(n)) v.push_back(s[i].decay_rate() / g);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(EffectiveHamiltonian, ConservesExcitationNumber) {
  auto a = array(SiteKind::transmon, 3, 3, 4, 8.72, 0.3);
  auto h = a.effective_hamiltonian();
  EXPECT_TRUE(h.conserves_number());
  // anti-Hermitian part is -i/2 of a positive semidefinite matrix
  Matrix d = h.dense();
  Matrix decay = Complex(0, 2.0) * (d - d.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(decay);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-6 * a.layout[0].gamma);
}

TEST(EffectiveHamiltonian, RotatingFrameShiftsByNOmega) {
  TwoPairParams p;
  p.max_total = 2;
  TwoPairSystem sys(p);
  auto lab = diagonalize(sys.effective_hamiltonian(0.0));
  auto rot = diagonalize(sys.effective_hamiltonian(sys.omega_bar()));
  for (int n = 0; n <= 2; ++n) {
    auto a = lab.in_manifold(n), b = rot.in_manifold(n);
    ASSERT_EQ(a.size(), b.size());
    std::vector<double> ea, eb;
    for (auto i : a) ea.push_back(lab[i].energy() - n * sys.omega_bar());
    for (auto i : b) eb.push_back(rot[i].energy());
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_NEAR(ea[i], eb[i], 1e-3);
  }
}

TEST(Spectrum, TwoQubitsInPhase) {
  // bright (Gamma = 2 gamma) and dark (0) one-excitation states
  auto a = array(SiteKind::qubit, 2, 2, 2);
  auto s = diagonalize(a.effective_hamiltonian());
  auto v = decays(s, 1, a.layout[0].gamma);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], 0.0, 1e-12);
  EXPECT_NEAR(v[1], 2.0, 1e-12);
  EXPECT_NEAR(decays(s, 2, a.layout[0].gamma)[0], 2.0, 1e-12);
}

TEST(Spectrum, QuarterWaveSpacingSplitsEnergies) {
  // d = lambda/4: no collective decay, exchange +- gamma/2
  auto a = array(SiteKind::qubit, 2, 2, 1, 0.0, 0.25);
  auto s = diagonalize(a.effective_hamiltonian());
  const double g = a.layout[0].gamma, w = a.models[0].omega;
  std::vector<double> e;
  for (auto i : s.in_manifold(1)) {
    EXPECT_NEAR(s[i].decay_rate() / g, 1.0, 1e-9);
    e.push_back((s[i].energy() - w) / g);
  }
  std::sort(e.begin(), e.end());
  EXPECT_NEAR(e[0], -0.5, 1e-6);
  EXPECT_NEAR(e[1], 0.5, 1e-6);
}

TEST(Spectrum, DickeLadderThreeQubits) {
  auto a = array(SiteKind::qubit, 3, 2, 3);
  auto s = diagonalize(a.effective_hamiltonian());
  const double g = a.layout[0].gamma;
  for (int n = 0; n <= 3; ++n) {
    std::vector<double> ref;
    for (int sp : {1, 3}) {
      int mz = 2 * n - 3;
      if (std::abs(mz) > sp) continue;
      for (std::uint64_t k = 0; k < dicke_multiplicity(3, sp); ++k)
        ref.push_back(qubit_dicke_oracle(3, sp, mz, 1.0, 1.0).decay);
    }
    std::sort(ref.begin(), ref.end());
    auto v = decays(s, n, g);
    ASSERT_EQ(v.size(), ref.size()) << n;
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], ref[i], 1e-10);
  }
  EXPECT_EQ(dicke_multiplicity(8, 0), 14u);
  EXPECT_EQ(dicke_multiplicity(8, 8), 1u);
  EXPECT_THROW(qubit_dicke_oracle(4, 3, 1, 1.0, 1.0), ConfigError);
}

TEST(Spectrum, HarmonicDecayMultiplicities) {
  auto a = array(SiteKind::harmonic, 3, 4, 3);
  auto s = diagonalize(a.effective_hamiltonian());
  const double g = a.layout[0].gamma;
  for (int n = 1; n <= 3; ++n) {
    std::map<long, std::uint64_t> count;
    for (double v : decays(s, n, g)) ++count[std::lround(v / 3.0)];
    for (int m = 0; m <= n; ++m) EXPECT_EQ(count[m], harmonic_decay_multiplicity(n, m, 3)) << n << " " << m;
  }
}

TEST(Spectrum, TransmonInterpolatesToHarmonic) {
  auto h = diagonalize(array(SiteKind::harmonic, 3, 3, 2).effective_hamiltonian());
  double prev = std::numeric_limits<double>::infinity();
  for (double u : {1.0, 0.1, 1e-3}) {
    auto t = diagonalize(array(SiteKind::transmon, 3, 3, 2, u).effective_hamiltonian());
    auto a = decays(t, 2, 1.0), b = decays(h, 2, 1.0);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
    EXPECT_LT(dev, prev);
    prev = dev;
  }
  EXPECT_LT(prev, 1e-2 * hz_to_angular(TableOne::gamma_hz));
}

TEST(Spectrum, TwoPairOneExcitationOracle) {
  TwoPairParams p;
  p.max_total = 1;
  for (double dg : {0.0, 1.0, 3.0, 7.5}) {
    p.detuning = dg * p.gamma;
    TwoPairSystem sys(p);
    auto s = diagonalize(sys.effective_hamiltonian(0.0));
    for (auto lam : two_pair_oracle(sys.pair_frequency(0), sys.pair_frequency(1), p.capacitive, p.gamma)) {
      double best = std::numeric_limits<double>::infinity();
      for (auto i : s.in_manifold(1)) best = std::min(best, std::abs(s[i].value - lam));
      EXPECT_LT(best / std::abs(lam), 1e-12) << dg;
    }
  }
  // local dark states at omega_i - J
  p.detuning = 0.0;
  TwoPairSystem sys(p);
  auto s = diagonalize(sys.effective_hamiltonian(0.0));
  int dark = 0;
  for (auto i : s.in_manifold(1))
    if (s[i].decay_rate() < 1e-9 * p.gamma && std::abs(s[i].energy() - p.omega0 + p.capacitive) < 1.0) ++dark;
  EXPECT_EQ(dark, 2);
}

TEST(Spectrum, BiorthogonalityAndResolutionOfIdentity) {
  TwoPairParams p;
  p.max_total = 2;
  p.detuning = 2.0 * p.gamma;  // exceptional point in N = 1
  p.detuning *= 1.0 + 1e-3;
  TwoPairSystem sys(p);
  auto s = diagonalize(sys.effective_hamiltonian(0.0));
  EXPECT_LT(s.biorthogonality_error(), 1e-8);
  for (int n = 0; n <= 2; ++n) EXPECT_LT(s.identity_residual(n, &sys.basis()), 1e-6) << n;
}

TEST(Spectrum, DegenerateManifoldIsBiorthogonalized) {
  // eight in-phase qubits: N = 4 has 70 states on five decay values
  auto a = array(SiteKind::qubit, 8, 2, 4);
  auto s = diagonalize(a.effective_hamiltonian());
  EXPECT_LT(s.biorthogonality_error(), 1e-10);
  EXPECT_LT(s.identity_residual(4, &a.basis), 1e-9);
}

TEST(Spectrum, RandomNonNormalMatrix) {
  std::mt19937 rng(7);
  std::normal_distribution<double> n01;
  Matrix h(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) h(i, j) = Complex(n01(rng), n01(rng));
  auto s = diagonalize(h);
  EXPECT_LT(s.biorthogonality_error(), 1e-10);
  for (const auto& e : s.pairs) {
    EXPECT_LT((h * e.right - e.value * e.right).norm(), 1e-10);
    EXPECT_LT((h.adjoint() * e.left - std::conj(e.value) * e.left).norm(), 1e-10);
    EXPECT_GT(e.bilinear.real(), 0.0);
  }
  EXPECT_LT(s.identity_residual(-1), 1e-9);
}

TEST(Channels, SumToTheDecayRate) {
  for (auto k : {SiteKind::transmon, SiteKind::qubit, SiteKind::harmonic}) {
    TwoPairParams p;
    p.kind = k;
    p.max_total = 2;
    TwoPairSystem sys(p);
    auto s = diagonalize(sys.effective_hamiltonian(0.0));
    auto t = decay_channels(s, sys.jumps());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i].manifold > 0) EXPECT_NEAR(t.totals[i] / p.gamma, s[i].decay_rate() / p.gamma, 1e-9);
  }
}

TEST(Channels, BrightStateDecaysToGround) {
  auto a = array(SiteKind::qubit, 2, 2, 1);
  auto s = diagonalize(a.effective_hamiltonian());
  auto t = decay_channels(s, a.jumps());
  std::size_t ground = s.in_manifold(0)[0];
  for (auto i : s.in_manifold(1)) EXPECT_NEAR(t.rate(i, ground), s[i].decay_rate(), 1e-6);
}

TEST(Jumps, ReproduceTheDecayMatrix) {
  auto a = array(SiteKind::transmon, 3, 3, 2, 8.72, 0.37);
  auto jumps = a.jumps();
  Matrix rebuilt = Matrix::Zero(a.tables.size(), a.tables.size());
  for (const auto& j : jumps) rebuilt += j.rate * j.weights * j.weights.adjoint();
  EXPECT_LT((rebuilt - a.tables.gamma).norm(), 1e-9 * a.tables.gamma.norm());
}

TEST(Classification, SymmetryAndBrightness) {
  TwoPairParams p;
  p.max_total = 2;
  TwoPairSystem sys(p);
  auto s = diagonalize(sys.effective_hamiltonian(0.0));
  auto ex = pair_exchange(sys.basis());
  auto labels = classify(s, &ex, p.gamma);
  // the collective bright state c4 is antisymmetric under pair exchange at half-wavelength spacing
  double best = 0.0;
  std::size_t bright = 0;
  for (auto i : s.in_manifold(1))
    if (s[i].decay_rate() > best) best = s[i].decay_rate(), bright = i;
  EXPECT_NEAR(best / p.gamma, 4.0, 1e-9);
  EXPECT_EQ(labels[bright].symmetry, Symmetry::antisymmetric);
  EXPECT_EQ(labels[bright].brightness, Brightness::bright);
  EXPECT_EQ(labels[s.in_manifold(0)[0]].symmetry, Symmetry::symmetric);
  EXPECT_EQ(brightness_of(0.01, 1.0), Brightness::dark);
  EXPECT_EQ(brightness_of(0.2, 1.0), Brightness::weak);
  EXPECT_EQ(brightness_of(1.5, 1.0), Brightness::faint);
  EXPECT_EQ(brightness_of(2.5, 1.0), Brightness::bright);
}

TEST(Counting, Binomials) {
  EXPECT_EQ(binomial(8, 4), 70u);
  EXPECT_EQ(binomial(4, 5), 0u);
  EXPECT_EQ(harmonic_decay_multiplicity(4, 0, 4), 15u);  // N - m quanta over L - 1 dark modes
  EXPECT_EQ(harmonic_decay_multiplicity(4, 4, 4), 1u);
  EXPECT_EQ(harmonic_decay_multiplicity(2, 3, 4), 0u);
}
