#include <gtest/gtest.h>

#include <random>

#include "wgqed/experiments.hpp"

using namespace wgqed;

namespace {

// driven, damped two-level system: H = delta/2 sz... written on |0>, |1>
struct TwoLevel {
  double detuning, rabi, gamma;

  Liouvillian liouvillian() const {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = -detuning;
    h(0, 1) = h(1, 0) = rabi / 2;
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    return build_liouvillian(SparseMatrix(h.sparseView()), {JumpOperator{gamma, Vector(), a.sparseView()}});
  }

  // textbook resonance fluorescence
  double excited() const {
    double s = rabi * rabi / 2;
    return 0.5 * s / (detuning * detuning + gamma * gamma / 4 + s);
  }
};

Liouvillian random_liouvillian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n01;
  Matrix h(d, d), a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      h(i, j) = Complex(n01(rng), n01(rng));
      a(i, j) = Complex(n01(rng), n01(rng));
    }
  h = (h + h.adjoint()).eval() / 2;
  return build_liouvillian(SparseMatrix(h.sparseView()), {JumpOperator{0.7, Vector(), a.sparseView()}});
}

Vector random_state(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n01;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n01(rng), n01(rng));
  Matrix rho = m * m.adjoint();
  return vectorize(rho / rho.trace());
}

}  // namespace

TEST(Vectorization, ColumnStackingConventions) {
  Matrix rho(2, 2);
  rho << 1.0, 2.0, 3.0, 4.0;
  Vector r = vectorize(rho);
  EXPECT_EQ(r(1), Complex(3.0));  // column-major: (1,0) second
  EXPECT_EQ(devectorize(r), rho);
  EXPECT_EQ(vector_trace(r), Complex(5.0));
  Matrix o(2, 2);
  o << 0.5, 1.0, -2.0, 0.25;
  EXPECT_NEAR(std::abs(expectation(expectation_row(o.sparseView()), r) - (o * rho).trace()), 0.0, 1e-14);
  EXPECT_THROW(devectorize(Vector::Zero(3)), ConfigError);
}

TEST(Superoperators, MatchMatrixProducts) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  Matrix a(3, 3), b(3, 3), x(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      a(i, j) = Complex(n01(rng), n01(rng));
      b(i, j) = Complex(n01(rng), n01(rng));
      x(i, j) = Complex(n01(rng), n01(rng));
    }
  SparseMatrix as = a.sparseView(), bs = b.sparseView();
  EXPECT_LT((devectorize(super::left(as) * vectorize(x)) - a * x).norm(), 1e-12);
  EXPECT_LT((devectorize(super::right(as) * vectorize(x)) - x * a).norm(), 1e-12);
  EXPECT_LT((devectorize(super::sandwich(as, bs) * vectorize(x)) - a * x * b.adjoint()).norm(), 1e-12);
  Matrix comm = -I * (a * x - x * a);
  EXPECT_LT((devectorize(super::commutator(as) * vectorize(x)) - comm).norm(), 1e-12);
  Matrix diss = a * x * a.adjoint() - 0.5 * (a.adjoint() * a * x + x * a.adjoint() * a);
  EXPECT_LT((devectorize(super::dissipator(as, 1.0) * vectorize(x)) - diss).norm(), 1e-12);
}

TEST(Liouvillian, PreservesTrace) {
  TwoPairParams p;
  p.max_total = 2;
  TwoPairSystem sys(p);
  auto lv = sys.liouvillian(sys.omega_bar());
  EXPECT_LT(lv.trace_defect(), 1e-6 * p.gamma);
  EXPECT_THROW(Liouvillian(SparseMatrix(3, 3), 2), ConfigError);
  Matrix notherm = Matrix::Zero(2, 2);
  notherm(0, 1) = 1.0;
  EXPECT_THROW(build_liouvillian(SparseMatrix(notherm.sparseView()), {}), ConfigError);
}

TEST(SteadyState, ResonanceFluorescence) {
  for (double det : {0.0, 0.7, -2.0})
    for (double rabi : {0.1, 1.0, 5.0}) {
      TwoLevel s{det, rabi, 1.0};
      auto ss = steady_state(s.liouvillian());
      EXPECT_NEAR(devectorize(ss.r)(1, 1).real(), s.excited(), 1e-12) << det << " " << rabi;
      EXPECT_NEAR(vector_trace(ss.r).real(), 1.0, 1e-14);
      EXPECT_LT(ss.residual, 1e-12);
    }
}

TEST(SteadyState, IterativeAgreesWithDirect) {
  TwoPairParams p;
  p.detuning = 1.3 * p.gamma;
  TwoPairSystem sys(p);
  double wd = sys.omega_bar() + p.capacitive;
  SparseMatrix hd = sys.probe_drive(power_from_flux_hz(700.0, wd), wd);
  auto lv = sys.liouvillian(wd, &hd);
  auto direct = steady_state(lv);
  auto iter = steady_state_iterative(lv, sys.nonhermitian(wd, &hd));
  EXPECT_LT((direct.r - iter.r).norm(), 1e-9);
  EXPECT_LT(iter.residual, 1e-11);
  Matrix rho = devectorize(iter.r);
  EXPECT_LT((rho - rho.adjoint()).norm(), 1e-14);
}

TEST(SteadyState, RejectsDegenerateInput) {
  Liouvillian zero(SparseMatrix(4, 4), 2);
  EXPECT_THROW(steady_state(zero), SolverError);
  TwoLevel s{0.0, 1.0, 1.0};
  auto lv = s.liouvillian();
  lv.add_hamiltonian_drive("x", [](double) { return 1.0; }, SparseMatrix(Matrix::Identity(2, 2).sparseView()));
  EXPECT_THROW(steady_state(lv), ConfigError);
}

TEST(Krylov, MatchesDenseExponential) {
  std::mt19937_64 rng(11);
  for (int d : {2, 4, 7, 10}) {
    auto lv = random_liouvillian(rng, d);
    Vector r0 = random_state(rng, d);
    Matrix l = lv.constant();
    for (double t : {0.01, 0.5, 3.0}) {
      Vector exact = (t * l).exp() * r0;
      KrylovStats st;
      Vector k = krylov_step(lv.constant(), r0, t, {}, &st);
      EXPECT_LT((k - exact).norm() / exact.norm(), 1e-10) << d << " " << t;
      EXPECT_GE(st.substeps, 1);
    }
  }
}

TEST(Krylov, HappyBreakdownAndEdgeCases) {
  Matrix z = Matrix::Zero(3, 3);
  z(0, 0) = -1.0;
  Vector v = Vector::Zero(3);
  v(0) = 1.0;
  Vector out = krylov_step(SparseMatrix(z.sparseView()), v, 2.0);
  EXPECT_NEAR(std::abs(out(0) - std::exp(-2.0)), 0.0, 1e-14);
  EXPECT_EQ(krylov_step(SparseMatrix(z.sparseView()), v, 0.0), v);
  KrylovConfig bad;
  bad.dimension = 1;
  EXPECT_THROW(krylov_step(SparseMatrix(z.sparseView()), v, 1.0, bad), ConfigError);
}

TEST(Magnus, ConstantDriveMatchesExactPropagator) {
  TwoLevel s{0.3, 0.0, 1.0};
  auto lv = s.liouvillian();
  Matrix hx = Matrix::Zero(2, 2);
  hx(0, 1) = hx(1, 0) = 0.5;
  lv.add_hamiltonian_drive("x", [](double) { return 1.2; }, SparseMatrix(hx.sparseView()));
  Vector r0 = pure_state(2, 0);
  EvolveConfig ec;
  ec.max_step = 0.5;
  Vector r = propagate(lv, r0, 0.0, 3.0, ec);
  Matrix full = lv.at(0.0);
  Vector exact = (3.0 * full).exp() * r0;
  EXPECT_LT((r - exact).norm(), 1e-10);
}

TEST(Magnus, SecondOrderConvergenceOnAGaussianPulse) {
  TwoLevel s{0.0, 0.0, 0.2};
  Matrix hx = Matrix::Zero(2, 2);
  hx(0, 1) = hx(1, 0) = 0.5;
  auto run = [&](double step, Quadrature q, bool comm) {
    auto lv = s.liouvillian();
    lv.add_hamiltonian_drive("pulse", [](double t) { return 3.0 * std::exp(-0.5 * (t - 2) * (t - 2)); },
                             SparseMatrix(hx.sparseView()));
    EvolveConfig ec;
    ec.max_step = step;
    ec.magnus.quadrature = q;
    ec.magnus.commutator = comm;
    return propagate(lv, pure_state(2, 0), 0.0, 4.0, ec);
  };
  Vector ref = run(0.0025, Quadrature::gauss2, true);
  double e1 = (run(0.1, Quadrature::midpoint, false) - ref).norm();
  double e2 = (run(0.05, Quadrature::midpoint, false) - ref).norm();
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);
  double c1 = (run(0.1, Quadrature::gauss2, true) - ref).norm();
  EXPECT_LT(c1, e1);
}

TEST(Magnus, PulsedSelfConvergence) {
  // halving the step changes the final ground population by <= 1e-4
  TwoPairParams p;
  p.max_total = 3;
  PulsedConfig c;
  c.phases = {0.0};
  c.probe_offsets = {p.capacitive};
  auto coarse = pulsed_spectroscopy(p, c);
  c.steps_per_sigma *= 2;
  auto fine = pulsed_spectroscopy(p, c);
  EXPECT_LE(std::abs(coarse.population.values[0] - fine.population.values[0]), 1e-4);
  EXPECT_LE(std::abs(coarse.ground_after_rabi - fine.ground_after_rabi), 1e-4);
}

TEST(Evolve, TraceAndHermiticityAlongTrajectories) {
  std::mt19937_64 rng(5);
  auto lv = random_liouvillian(rng, 6);
  Vector r0 = random_state(rng, 6);
  Matrix o = Matrix::Identity(6, 6);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.1 * i);
  auto tr = evolve(lv, r0, grid, {{"one", SparseMatrix(o.sparseView())}});
  EXPECT_LT(tr.max_trace_drift(), 1e-10);
  EXPECT_LT(tr.max_hermiticity_error(), 1e-10);
  for (auto v : tr.values[0]) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-10);
  EXPECT_THROW(evolve(lv, r0, {1.0, 0.5}, {}), ConfigError);
  lv.add_hamiltonian_drive("x", [](double) { return 1.0; }, SparseMatrix(o.sparseView()));
  EXPECT_THROW(propagate(lv, r0, 0.0, 1.0, EvolveConfig{}), ConfigError);
}
