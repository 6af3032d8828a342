#include <gtest/gtest.h>

#include "wgqed/fock.hpp"

using namespace wgqed;

TEST(FockBasis, ManifoldDimensionIsBinomial) {
  EXPECT_EQ(manifold_dimension(0, 4), 1u);
  EXPECT_EQ(manifold_dimension(2, 4), 10u);
  EXPECT_EQ(manifold_dimension(4, 4), 35u);
  EXPECT_EQ(manifold_dimension(4, 8), 330u);
  EXPECT_EQ(manifold_dimension(3, 1), 1u);
}

TEST(FockBasis, EnumeratesLexicographically) {
  auto b = FockBasis::enumerate(3, 3);
  ASSERT_EQ(b.size(), 27u);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b.state(i - 1), b.state(i));
  EXPECT_EQ(b.state(0).label(), "|000>");
  EXPECT_EQ(b.state(1).label(), "|001>");
  EXPECT_EQ(b.state(26).label(), "|222>");
}

TEST(FockBasis, ManifoldAndTruncatedSizes) {
  // level cap d = N + 1 makes every manifold bosonic-complete
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(FockBasis::enumerate(4, 5, n).size(), manifold_dimension(n, 4));
  // d = 2: binomial(L, N)
  EXPECT_EQ(FockBasis::enumerate(8, 2, 4).size(), 70u);
  // d = 3, L = 4, N <= 2: 1 + 4 + 10
  EXPECT_EQ(FockBasis::truncated(4, 3, 2).size(), 15u);
  EXPECT_EQ(FockBasis::truncated(4, 3, 8).size(), 81u);
  EXPECT_EQ(FockBasis::truncated(4, 3, 3).max_excitation(), 3);
}

TEST(FockBasis, IndexRoundTrip) {
  auto b = FockBasis::truncated(4, 3, 3);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.index(b.state(i)), i);
  EXPECT_FALSE(b.contains(FockState{{2, 2, 0, 0}}));
  EXPECT_THROW(b.index({2, 2, 0, 0}), Error);
}

TEST(FockBasis, DimensionCapIsEnforcedBeforeAllocation) {
  EXPECT_THROW(FockBasis::enumerate(12, 3, std::nullopt, 1000), CapacityError);
  EXPECT_NO_THROW(FockBasis::enumerate(4, 3, std::nullopt, 81));
  EXPECT_THROW(FockBasis::enumerate(4, 3, std::nullopt, 80), CapacityError);
}

TEST(FockBasis, RejectsBadArguments) {
  EXPECT_THROW(FockBasis::enumerate(0, 3), ConfigError);
  EXPECT_THROW(FockBasis::enumerate(2, 1), ConfigError);
  EXPECT_THROW(FockBasis::enumerate(2, 3, -1), ConfigError);
  EXPECT_THROW(FockBasis::truncated(2, 3, -1), ConfigError);
}

TEST(Operators, AnnihilationMatrixElements) {
  auto b = FockBasis::enumerate(2, 4);
  auto a0 = annihilation(b, 0);
  Matrix d(a0);
  EXPECT_NEAR(std::abs(d(b.index({2, 1}), b.index({3, 1}))), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(std::abs(d(b.index({0, 2}), b.index({1, 2}))), 1.0, 1e-15);
  EXPECT_EQ(a0.nonZeros(), 12);
}

TEST(Operators, CanonicalCommutatorBelowTheCap) {
  auto b = FockBasis::enumerate(2, 5);
  Matrix a(annihilation(b, 1)), ad(creation(b, 1));
  Matrix c = a * ad - ad * a;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.state(i)[1] == 4) continue;  // truncation edge
    EXPECT_NEAR(std::abs(c(i, i) - 1.0), 0.0, 1e-14);
  }
  Matrix other(annihilation(b, 0));
  EXPECT_LT((other * ad - ad * other).norm(), 1e-14);
}

TEST(Operators, SigmaMinusActsOnOneTransition) {
  auto b = FockBasis::enumerate(2, 3);
  Matrix s1(sigma_minus(b, 1, 0));  // |1><2| on site 0
  EXPECT_EQ(s1(b.index({1, 0}), b.index({2, 0})), Complex(1.0));
  EXPECT_EQ(s1(b.index({1, 2}), b.index({2, 2})), Complex(1.0));
  EXPECT_EQ(Matrix(sigma_minus(b, 1, 0)).cwiseAbs().sum(), 3.0);
  EXPECT_THROW(sigma_minus(b, 2, 0), ConfigError);
  // a = sum_m sqrt(m+1) sigma_-^m
  Matrix a(annihilation(b, 1));
  Matrix s = Matrix(sigma_minus(b, 0, 1)) + std::sqrt(2.0) * Matrix(sigma_minus(b, 1, 1));
  EXPECT_LT((a - s).norm(), 1e-15);
}

TEST(Operators, NumberOperators) {
  auto b = FockBasis::truncated(3, 3, 3);
  Matrix n(total_number(b));
  Matrix sum = Matrix(number(b, 0)) + Matrix(number(b, 1)) + Matrix(number(b, 2));
  EXPECT_LT((n - sum).norm(), 1e-15);
  Matrix a(annihilation(b, 2)), ad(creation(b, 2));
  EXPECT_LT((ad * a - Matrix(number(b, 2))).norm(), 1e-14);
  EXPECT_EQ(Matrix(identity(b)).trace(), Complex(double(b.size())));
}

TEST(Operators, RectangularLoweringBetweenManifolds) {
  auto b2 = FockBasis::enumerate(3, 3, 2), b1 = FockBasis::enumerate(3, 3, 1);
  auto a = annihilation(b2, b1, 0);
  EXPECT_EQ(a.rows(), Eigen::Index(b1.size()));
  EXPECT_EQ(a.cols(), Eigen::Index(b2.size()));
  // restriction of the full-space operator
  auto full = FockBasis::truncated(3, 3, 2);
  Matrix af(annihilation(full, 0));
  for (std::size_t c = 0; c < b2.size(); ++c)
    for (std::size_t r = 0; r < b1.size(); ++r)
      EXPECT_EQ(Matrix(a)(r, c), af(full.index(b1.state(r)), full.index(b2.state(c))));
}

TEST(Operators, CollectiveModesAreOrthonormal) {
  auto b = FockBasis::enumerate(4, 3, std::nullopt);
  for (int k = 1; k <= 4; ++k)
    for (int q = 1; q <= 4; ++q) {
      Matrix ck(collective_mode(b, k)), cq(collective_mode(b, q));
      // on the vacuum: c_k c_q^dag |0> = delta_kq |0>
      Vector vac = Vector::Zero(b.size());
      vac(b.index({0, 0, 0, 0})) = 1.0;
      Complex v = vac.dot(ck * cq.adjoint() * vac);
      EXPECT_NEAR(std::abs(v - Complex(k == q ? 1.0 : 0.0)), 0.0, 1e-14);
    }
  EXPECT_THROW(collective_mode(b, 0), ConfigError);
}

TEST(Operators, PairExchangeIsAnInvolution) {
  auto b = FockBasis::truncated(4, 3, 4);
  Matrix p(pair_exchange(b));
  EXPECT_LT((p * p - Matrix::Identity(b.size(), b.size())).norm(), 1e-15);
  EXPECT_EQ(p(b.index({0, 0, 1, 2}), b.index({1, 2, 0, 0})), Complex(1.0));
  EXPECT_THROW(pair_exchange(FockBasis::enumerate(3, 2)), ConfigError);
}

TEST(SiteModels, LevelEnergies) {
  auto t = SiteModel::transmon(10.0, 1.0);
  EXPECT_DOUBLE_EQ(t.level_energy(2), 19.0);
  EXPECT_DOUBLE_EQ(t.transition_frequency(1), 9.0);
  auto h = SiteModel::harmonic(10.0);
  EXPECT_DOUBLE_EQ(h.level_energy(3), 30.0);
  EXPECT_TRUE(SiteModel::qubit(1.0).compatible(2));
  EXPECT_FALSE(SiteModel::qubit(1.0).compatible(3));
  EXPECT_EQ(site_kind_from_string("harmonic"), SiteKind::harmonic);
  EXPECT_THROW(site_kind_from_string("fluxonium"), ConfigError);
}
