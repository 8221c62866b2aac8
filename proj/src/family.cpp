#include "graphon/family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace graphon {

namespace {

constexpr double kDeltaTol = 1e-12;
constexpr double kSlopeTol = 1e-12;

}  // namespace

std::string_view to_string(BindingConstraint c) {
  switch (c) {
    case BindingConstraint::PZero:
      return "p=0";
    case BindingConstraint::QZero:
      return "q=0";
    case BindingConstraint::QOne:
      return "q=1";
    case BindingConstraint::RZero:
      return "r=0";
  }
  return "unknown";
}

double EquivalenceFamily::density_slope() const {
  return a * a * eta + 2.0 * a * (1.0 - a) * s_fam + (1.0 - a) * (1.0 - a) / eta;
}

EmbeddingGram snap_to_rank_one(const EmbeddingGram& k, double tol) {
  if (k.k1 < 0.0 || k.k3 < 0.0) {
    throw DomainError("gram has a negative diagonal entry");
  }
  const double product = k.k1 * k.k3;
  if (k.k1 == 0.0 && k.k2 == 0.0 && k.k3 == 0.0) {
    throw DomainError("zero gram belongs to the sparse regime, not a family");
  }
  if (std::abs(k.k2 * k.k2 - product) > tol * std::max(1.0, product)) {
    throw DomainError("gram is not rank one: k2^2 = " +
                      std::to_string(k.k2 * k.k2) + " but k1 k3 = " +
                      std::to_string(product));
  }
  EmbeddingGram out = k;
  out.k2 = std::copysign(std::sqrt(product), k.k2);
  return out;
}

double eta_of(const EmbeddingGram& k, double a, double tol) {
  if (k.k1 <= tol || k.k3 <= tol) {
    throw DegenerateError(
        "eta undefined: k1 or k3 vanishes (use the forced-error form)");
  }
  return (1.0 - a) / a * std::sqrt(k.k3 / k.k1);
}

double eta_alt(const EmbeddingGram& k, const SbmGraphon& g, double tol) {
  const double gap1 = sigmoid(k.k1) - g.p;
  const double gap3 = sigmoid(k.k3) - g.r;
  if (gap1 <= tol || gap3 <= tol) {
    throw BoundaryError(
        "forced-error eta undefined: graphon lies on the dense boundary");
  }
  return std::sqrt(gap1 / gap3);
}

BlockProbabilities densest_member(const EmbeddingGram& k, double tol) {
  const EmbeddingGram s = snap_to_rank_one(k, tol);
  return {sigmoid(s.k1), sigmoid(s.k2), sigmoid(s.k3)};
}

EquivalenceFamily family_of(const EmbeddingGram& k, double a, double tol) {
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("community fraction a must lie in (0, 1)");
  }
  const EmbeddingGram snapped = snap_to_rank_one(k, tol);
  if (snapped.k1 <= 0.0 || snapped.k3 <= 0.0) {
    throw DegenerateError(
        "family needs k1, k3 > 0; a vanishing diagonal block is the q = 1/2 "
        "edge case");
  }

  EquivalenceFamily f;
  f.gram = snapped;
  f.gram.a = a;
  f.a = a;
  f.eta = eta_of(snapped, a);
  f.s_fam = snapped.k2 <= 0.0 ? 1 : -1;
  const BlockProbabilities star = densest_member(snapped, tol);
  f.anchor = {a, star.p, star.q, star.r};

  // Every coordinate moves monotonically in delta, so each bound is one
  // linear inequality. The upper bounds p, r <= 1 (and q <= 1 when
  // s_fam = +1) only bind for delta > 0.
  struct Bound {
    double delta;
    BindingConstraint which;
  };
  const std::array<Bound, 3> bounds = {{
      {f.s_fam > 0 ? -star.q : -(1.0 - star.q),
       f.s_fam > 0 ? BindingConstraint::QZero : BindingConstraint::QOne},
      {-star.p / f.eta, BindingConstraint::PZero},
      {-star.r * f.eta, BindingConstraint::RZero},
  }};
  const Bound* binding = &bounds[0];
  for (const auto& b : bounds) {
    if (b.delta > binding->delta + kDeltaTol) binding = &b;
  }
  f.delta_min = binding->delta;
  f.binding = binding->which;
  return f;
}

SbmGraphon member_at(const EquivalenceFamily& f, double delta) {
  if (delta > kDeltaTol || delta < f.delta_min - kDeltaTol) {
    throw RangeError("delta " + std::to_string(delta) + " outside [" +
                     std::to_string(f.delta_min) + ", 0]");
  }
  auto unit = [](double v) { return std::clamp(v, 0.0, 1.0); };
  return {f.a, unit(f.anchor.p + f.eta * delta),
          unit(f.anchor.q + f.s_fam * delta),
          unit(f.anchor.r + delta / f.eta)};
}

double edge_density(const SbmGraphon& g) {
  return g.a * g.a * g.p + 2.0 * g.a * (1.0 - g.a) * g.q +
         (1.0 - g.a) * (1.0 - g.a) * g.r;
}

double delta_from_density(const EquivalenceFamily& f, double density) {
  const double slope = f.density_slope();
  if (std::abs(slope) <= kSlopeTol) {
    throw DegenerateError(
        "edge density is constant along this family; density does not "
        "identify a member");
  }
  const double top = edge_density(f.anchor);
  const double bottom = edge_density(member_at(f, f.delta_min));
  const double lo = std::min(top, bottom);
  const double hi = std::max(top, bottom);
  if (density < lo - kDeltaTol || density > hi + kDeltaTol) {
    throw RangeError("density " + std::to_string(density) +
                     " outside the family's range [" + std::to_string(lo) +
                     ", " + std::to_string(hi) + "]");
  }
  return std::clamp((density - top) / slope, f.delta_min, 0.0);
}

}  // namespace graphon
