#pragma once

#include <array>
#include <string_view>

#include "graphon/errors.hpp"

namespace graphon {

// Two-block stochastic block model graphon. Community 1 holds the latent
// interval [0, a], community 2 holds (a, 1]. Within-community edge
// probabilities are p (community 1) and r (community 2); cross edges use q.
//
// Nothing forces a >= 1/2; community labels are never permuted implicitly.
struct SbmGraphon {
  double a = 0.5;
  double p = 0.5;
  double q = 0.5;
  double r = 0.5;

  // Throws DomainError unless 0 < a < 1 and p, q, r lie in [0, 1].
  void validate() const;

  // Relabels the communities: (a, p, q, r) -> (1 - a, r, q, p).
  SbmGraphon swapped() const { return {1.0 - a, r, q, p}; }

  bool operator==(const SbmGraphon&) const = default;
};

// Block probabilities (p, q, r) without a community fraction; what an
// inner-product link predictor emits.
struct BlockProbabilities {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;

  bool operator==(const BlockProbabilities&) const = default;
};

// Block-constant limit of the embedding inner products:
//   [[k1, k2], [k2, k3]] with block sizes a and 1 - a.
// Valid grams are 2x2 positive semidefinite.
struct EmbeddingGram {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double a = 0.5;

  std::array<double, 3> entries() const { return {k1, k2, k3}; }
  double determinant() const { return k1 * k3 - k2 * k2; }
  bool is_psd(double tol = 1e-12) const;
  EmbeddingGram swapped() const { return {k3, k2, k1, 1.0 - a}; }
};

enum class RegionTag { Dense, Sparse, Middle };

std::string_view to_string(RegionTag tag);

struct Region {
  RegionTag tag = RegionTag::Middle;
  // The point satisfies the dense-surface equality
  // logit(q)^2 = logit(p) logit(r) with p, r >= 1/2.
  bool boundary_dense = false;
  // The point satisfies (1/2 - q)^2 = (1/2 - p)(1/2 - r) with p, r <= 1/2.
  bool boundary_sparse = false;
};

inline constexpr double kClassifyTol = 1e-9;
inline constexpr double kGramClassifyTol = 1e-6;

// e^x / (1 + e^x), evaluated without overflow.
double sigmoid(double x);

// Derivative of the sigmoid, sigma(x) (1 - sigma(x)).
double sigmoid_prime(double x);

// ln(x) - ln(1 - x). Throws DomainError outside (0, 1).
double logit(double x);

// log(1 + e^x), evaluated without overflow.
double softplus(double x);

// Partition of (p, q, r) space into the dense, sparse and middle regimes.
// Tests run in the order dense, sparse, middle so that exact boundary points
// resolve to the earlier region. A logit of 0 or 1 is treated as infinite;
// when the dense test is undefined and the sparse test fails, a
// DegenerateError is thrown.
Region classify(double p, double q, double r, double tol = kClassifyTol);
inline Region classify(const SbmGraphon& g, double tol = kClassifyTol) {
  return classify(g.p, g.q, g.r, tol);
}

// Reads the regime off a solved gram: zero -> Sparse, rank one -> Middle,
// positive definite -> Dense.
Region region_from_gram(const EmbeddingGram& k, double tol = kGramClassifyTol);

}  // namespace graphon
