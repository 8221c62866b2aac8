#include "graphon/core.hpp"

#include <random>

#include <gtest/gtest.h>

#include "graphon/solver.hpp"

namespace graphon {
namespace {

TEST(Sigmoid, SymmetryPoint) { EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5); }

TEST(Sigmoid, InvertsLogit) { EXPECT_NEAR(sigmoid(logit(0.9)), 0.9, 1e-15); }

TEST(Sigmoid, MatchesHighPrecisionValue) {
  // mpmath, 30 digits: e^0.49 / (1 + e^0.49).
  EXPECT_NEAR(sigmoid(0.49), 0.620106432343090131, 1e-15);
  EXPECT_NEAR(sigmoid(0.49), 0.6202, 1e-4);
}

TEST(Sigmoid, SaturatesWithoutOverflow) {
  for (double x : {700.0, -700.0, 1e6, -1e6}) {
    const double s = sigmoid(x);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_GT(sigmoid(-700.0), 0.0);
  EXPECT_LT(sigmoid(30.0), 1.0);
}

TEST(Logit, Values) {
  EXPECT_DOUBLE_EQ(logit(0.5), 0.0);
  // ln 9.
  EXPECT_NEAR(logit(0.9), 2.19722457733621938, 1e-14);
}

TEST(Logit, DomainErrorAtEnds) {
  EXPECT_THROW(logit(0.0), DomainError);
  EXPECT_THROW(logit(1.0), DomainError);
  EXPECT_THROW(logit(-0.1), DomainError);
}

TEST(Softplus, StableAtExtremes) {
  EXPECT_NEAR(softplus(0.0), std::log(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(softplus(800.0), 800.0);
  EXPECT_GT(softplus(-800.0), -1e-300);
}

TEST(Classify, DenseExample) {
  const Region r = classify(0.9, 0.5, 0.9);
  EXPECT_EQ(r.tag, RegionTag::Dense);
  EXPECT_FALSE(r.boundary_dense);
}

TEST(Classify, SparseBoundary) {
  const Region r = classify(0.3, 0.3, 0.3);
  EXPECT_EQ(r.tag, RegionTag::Sparse);
  EXPECT_TRUE(r.boundary_sparse);
  EXPECT_FALSE(r.boundary_dense);
}

TEST(Classify, MiddleExample) {
  EXPECT_EQ(classify(0.9, 0.1, 0.4).tag, RegionTag::Middle);
}

TEST(Classify, CenterIsDenseOnBothBoundaries) {
  const Region r = classify(0.5, 0.5, 0.5);
  EXPECT_EQ(r.tag, RegionTag::Dense);
  EXPECT_TRUE(r.boundary_dense);
  EXPECT_TRUE(r.boundary_sparse);
}

TEST(Classify, DegenerateCrossProbabilityIsNotDense) {
  EXPECT_EQ(classify(0.9, 0.0, 0.9).tag, RegionTag::Middle);
  EXPECT_EQ(classify(0.9, 1.0, 0.9).tag, RegionTag::Middle);
}

TEST(Classify, UndefinedDenseTestFallsThroughThenErrors) {
  // p = 1 makes logit(p) infinite; the sparse test cannot rescue it.
  EXPECT_THROW(classify(1.0, 0.3, 0.8), DegenerateError);
  // p = 0 is never inside the dense test, so the sparse test decides.
  EXPECT_EQ(classify(0.0, 0.5, 0.0).tag, RegionTag::Sparse);
  EXPECT_EQ(classify(0.0, 0.9, 0.7).tag, RegionTag::Middle);
}

TEST(Classify, RejectsOutOfRange) {
  EXPECT_THROW(classify(1.2, 0.5, 0.5), DomainError);
}

TEST(Classify, ErdosRenyiLine) {
  for (int i = 1; i < 100; ++i) {
    const double x = i / 100.0;
    const Region r = classify(x, x, x);
    if (x >= 0.5) {
      EXPECT_EQ(r.tag, RegionTag::Dense) << x;
    } else {
      EXPECT_EQ(r.tag, RegionTag::Sparse) << x;
    }
  }
}

TEST(Classify, TotalOnOpenCube) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 20000; ++i) {
    const double p = u(rng), q = u(rng), r = u(rng);
    const Region region = classify(p, q, r);
    // The returned tag agrees with the defining inequalities.
    const bool dense = p >= 0.5 && r >= 0.5 &&
                       logit(q) * logit(q) <= logit(p) * logit(r) + 1e-9;
    const bool sparse = p <= 0.5 && r <= 0.5 &&
                        (0.5 - q) * (0.5 - q) <= (0.5 - p) * (0.5 - r) + 1e-9;
    if (dense) {
      EXPECT_EQ(region.tag, RegionTag::Dense);
    } else if (sparse) {
      EXPECT_EQ(region.tag, RegionTag::Sparse);
    } else {
      EXPECT_EQ(region.tag, RegionTag::Middle);
    }
  }
}

TEST(RegionFromGram, Examples) {
  EXPECT_EQ(region_from_gram({0, 0, 0}).tag, RegionTag::Sparse);
  // Gram quoted to two decimals: 0.59^2 = 0.3481 vs 0.3479.
  EXPECT_EQ(region_from_gram({0.49, -0.59, 0.71}, 1e-3).tag, RegionTag::Middle);
  EXPECT_EQ(region_from_gram({2.19722, 0, 2.19722}).tag, RegionTag::Dense);
}

TEST(RegionFromGram, AgreesWithClassifyThroughSolver) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 300; ++i) {
    const SbmGraphon g{0.6, u(rng), u(rng), u(rng)};
    const Region expected = classify(g);
    const Region got = region_from_gram(solve_gram(g).gram);
    if (expected.tag == got.tag) continue;
    // Only points next to a boundary may disagree.
    const Region loose = classify(g, 1e-3);
    EXPECT_TRUE(loose.boundary_dense || loose.boundary_sparse)
        << "p=" << g.p << " q=" << g.q << " r=" << g.r;
  }
}

TEST(SbmGraphon, ValidateAndSwap) {
  EXPECT_THROW((SbmGraphon{0.0, 0.5, 0.5, 0.5}).validate(), DomainError);
  EXPECT_THROW((SbmGraphon{0.5, 1.5, 0.5, 0.5}).validate(), DomainError);
  EXPECT_NO_THROW((SbmGraphon{0.3, 0.0, 1.0, 0.5}).validate());
  const SbmGraphon g{0.25, 0.1, 0.2, 0.9};
  EXPECT_EQ(g.swapped(), (SbmGraphon{0.75, 0.9, 0.2, 0.1}));
  EXPECT_EQ(g.swapped().swapped(), g);
}

}  // namespace
}  // namespace graphon
