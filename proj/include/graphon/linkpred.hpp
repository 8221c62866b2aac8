#pragma once

#include <string_view>

#include "graphon/core.hpp"
#include "graphon/family.hpp"

namespace graphon {

// sigma of the block inner products: what an inner-product link predictor
// outputs. For a rank-one gram this is the densest member of its family.
BlockProbabilities predict_baseline(const EmbeddingGram& k);

// Position of a graphon on a family line. Throws DomainError when the
// graphon is farther than tol from the line or outside [delta_min, 0].
double delta_of(const EquivalenceFamily& f, const SbmGraphon& g,
                double tol = 1e-6);

// Walks the family line from origin (t = 0) to the densest member (t = 1).
SbmGraphon predict_interpolated(const EmbeddingGram& k, double a,
                                const SbmGraphon& origin, double t);

// The unique family member with the given edge density.
SbmGraphon recover_from_density(const EmbeddingGram& k, double a,
                                double density);

// Edge density from an average degree on n nodes: D / (n - 1).
double density_from_average_degree(double average_degree, long long n);

enum class Balance { Community1Favored, Community2Favored, Balanced };

std::string_view to_string(Balance b);

struct DensifyRates {
  double community1 = 1.0;  // eta
  double community2 = 1.0;  // 1 / eta
  int cross = 1;            // s_fam
  Balance balance = Balance::Balanced;
  // 1 when a > 1/2, 2 when a < 1/2, 0 for equal sizes.
  int larger_community = 0;
};

DensifyRates densify_rates(const EquivalenceFamily& f, double tol = 1e-6);

}  // namespace graphon
