#pragma once

#include <string_view>

#include "graphon/core.hpp"

namespace graphon {

// Which coordinate hits its bound first as the family is followed from the
// densest member toward sparser graphons.
enum class BindingConstraint { PZero, QZero, QOne, RZero };

std::string_view to_string(BindingConstraint c);

// The line of middle-regime graphons sharing one embedding:
//
//   p = p* + eta * delta,  q = q* + s_fam * delta,  r = r* + delta / eta,
//
// for delta in [delta_min, 0]. delta = 0 is the densest member, which sits on
// the dense-regime boundary.
struct EquivalenceFamily {
  EmbeddingGram gram;
  double a = 0.5;
  SbmGraphon anchor;
  double eta = 1.0;
  int s_fam = 1;
  double delta_min = 0.0;
  BindingConstraint binding = BindingConstraint::QZero;

  // Rate of change of edge_density along delta.
  double density_slope() const;
};

// Relative tolerance on k2^2 = k1 k3 for grams handed in from outside. Loose
// enough for grams quoted to two decimals.
inline constexpr double kManifoldTol = 1e-3;

// Snaps a rank-one-within-tolerance gram onto the manifold, keeping k1, k3 and
// the sign of k2. Throws DomainError when k2^2 differs from k1 k3 by more than
// tol * max(1, k1 k3), or when the gram is zero.
EmbeddingGram snap_to_rank_one(const EmbeddingGram& k,
                               double tol = kManifoldTol);

// (1 - a) / a * sqrt(k3 / k1). Throws DegenerateError if k1 or k3 <= tol.
double eta_of(const EmbeddingGram& k, double a, double tol = 1e-12);

// sqrt((sigma(k1) - p) / (sigma(k3) - r)): the same rate written in terms of
// the forced errors. Throws BoundaryError if either gap is <= tol, which is
// the case on the dense boundary.
double eta_alt(const EmbeddingGram& k, const SbmGraphon& g, double tol = 1e-12);

// (sigma(k1), sigma(k2), sigma(k3)) of the snapped gram.
BlockProbabilities densest_member(const EmbeddingGram& k,
                                  double tol = kManifoldTol);

EquivalenceFamily family_of(const EmbeddingGram& k, double a,
                            double tol = kManifoldTol);

// Throws RangeError if delta lies outside [delta_min, 0].
SbmGraphon member_at(const EquivalenceFamily& f, double delta);

// Probability that a uniformly random pair is an edge:
//   a^2 p + 2a(1-a) q + (1-a)^2 r.
double edge_density(const SbmGraphon& g);

// The unique delta whose member has the given edge density. Throws
// DegenerateError on a vanishing slope and RangeError outside the family's
// density interval.
double delta_from_density(const EquivalenceFamily& f, double density);

}  // namespace graphon
