#include "graphon/linkpred.hpp"

#include <random>

#include <gtest/gtest.h>

#include "graphon/solver.hpp"

namespace graphon {
namespace {

const EmbeddingGram kQuoted{0.49, -0.59, 0.71};

TEST(PredictBaseline, Examples) {
  const BlockProbabilities zero = predict_baseline({0, 0, 0});
  EXPECT_DOUBLE_EQ(zero.p, 0.5);
  EXPECT_DOUBLE_EQ(zero.q, 0.5);
  EXPECT_DOUBLE_EQ(zero.r, 0.5);
  const BlockProbabilities b = predict_baseline(kQuoted);
  EXPECT_NEAR(b.p, 0.620106432343090131, 1e-15);
  EXPECT_NEAR(b.q, 0.356634854305598245, 1e-15);  // sigma(-0.59), unsnapped
  EXPECT_NEAR(b.r, 0.670401159808868590, 1e-15);
}

TEST(PredictBaseline, IdempotentUnderReembedding) {
  const SbmGraphon g{0.7, 0.9, 0.1, 0.4};
  const EmbeddingGram k = solve_gram(g).gram;
  const BlockProbabilities b = predict_baseline(k);
  const EmbeddingGram again = solve_gram({g.a, b.p, b.q, b.r}).gram;
  const BlockProbabilities b2 = predict_baseline(again);
  EXPECT_NEAR(b2.p, b.p, 1e-6);
  EXPECT_NEAR(b2.q, b.q, 1e-6);
  EXPECT_NEAR(b2.r, b.r, 1e-6);
}

TEST(PredictInterpolated, EndpointsAndMidpoint) {
  const SbmGraphon origin{0.7, 0.9, 0.1, 0.4};
  const EmbeddingGram k = solve_gram(origin).gram;
  const SbmGraphon start = predict_interpolated(k, origin.a, origin, 0.0);
  EXPECT_NEAR(start.p, origin.p, 1e-6);
  EXPECT_NEAR(start.q, origin.q, 1e-6);
  EXPECT_NEAR(start.r, origin.r, 1e-6);

  const SbmGraphon end = predict_interpolated(k, origin.a, origin, 1.0);
  const BlockProbabilities densest = densest_member(k);
  EXPECT_NEAR(end.p, densest.p, 1e-12);
  EXPECT_NEAR(end.q, densest.q, 1e-12);
  EXPECT_NEAR(end.r, densest.r, 1e-12);

  const SbmGraphon mid = predict_interpolated(k, origin.a, origin, 0.5);
  const EmbeddingGram mid_k = solve_gram(mid).gram;
  EXPECT_NEAR(mid_k.k1, k.k1, 1e-6);
  EXPECT_NEAR(mid_k.k2, k.k2, 1e-6);
  EXPECT_NEAR(mid_k.k3, k.k3, 1e-6);
  EXPECT_GT(edge_density(mid), edge_density(origin));
  EXPECT_LT(edge_density(mid), edge_density(end));
}

TEST(PredictInterpolated, RejectsForeignOrigin) {
  const EmbeddingGram k = solve_gram({0.7, 0.9, 0.1, 0.4}).gram;
  EXPECT_THROW(predict_interpolated(k, 0.7, {0.7, 0.5, 0.1, 0.4}, 0.5),
               DomainError);
  EXPECT_THROW(predict_interpolated(k, 0.6, {0.6, 0.9, 0.1, 0.4}, 0.5),
               DomainError);
  EXPECT_THROW(predict_interpolated(k, 0.7, {0.7, 0.9, 0.1, 0.4}, 1.5),
               DomainError);
}

TEST(RecoverFromDensity, ExactOnRandomMiddleGraphons) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.05, 0.95), ua(0.2, 0.8);
  int done = 0;
  while (done < 50) {
    const SbmGraphon g{ua(rng), u(rng), u(rng), u(rng)};
    const Region region = classify(g, 1e-3);
    if (region.tag != RegionTag::Middle || region.boundary_dense ||
        region.boundary_sparse) {
      continue;
    }
    const EmbeddingGram k = solve_gram(g).gram;
    const EquivalenceFamily f = family_of(k, g.a);
    if (std::abs(f.density_slope()) < 1e-3) continue;
    ++done;
    const SbmGraphon back = recover_from_density(k, g.a, edge_density(g));
    EXPECT_NEAR(back.p, g.p, 1e-6);
    EXPECT_NEAR(back.q, g.q, 1e-6);
    EXPECT_NEAR(back.r, g.r, 1e-6);
  }
}

TEST(DensityFromAverageDegree, Values) {
  EXPECT_DOUBLE_EQ(density_from_average_degree(9.0, 10), 1.0);
  EXPECT_DOUBLE_EQ(density_from_average_degree(4.5, 10), 0.5);
  EXPECT_THROW(density_from_average_degree(1.0, 1), DomainError);
  EXPECT_THROW(density_from_average_degree(-1.0, 10), DomainError);
}

TEST(DensifyRates, QuotedGramFavorsCommunityTwo) {
  const DensifyRates rates = densify_rates(family_of(kQuoted, 0.66));
  EXPECT_EQ(rates.balance, Balance::Community2Favored);
  EXPECT_EQ(rates.larger_community, 1);
  EXPECT_EQ(rates.cross, 1);
  EXPECT_NEAR(rates.community1 * rates.community2, 1.0, 1e-15);
  EXPECT_EQ(to_string(rates.balance), "community2");
}

TEST(DensifyRates, SymmetricIsBalanced) {
  const EmbeddingGram k = solve_gram({0.5, 0.8, 0.1, 0.8}).gram;
  const DensifyRates rates = densify_rates(family_of(k, 0.5));
  EXPECT_EQ(rates.balance, Balance::Balanced);
  EXPECT_EQ(rates.larger_community, 0);
  EXPECT_NEAR(rates.community1, 1.0, 1e-6);
}

}  // namespace
}  // namespace graphon
