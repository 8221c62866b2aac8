#include "graphon/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graphon {

BlockProbabilities predict_baseline(const EmbeddingGram& k) {
  return {sigmoid(k.k1), sigmoid(k.k2), sigmoid(k.k3)};
}

double delta_of(const EquivalenceFamily& f, const SbmGraphon& g, double tol) {
  if (std::abs(g.a - f.a) > tol) {
    throw DomainError("graphon has community fraction " + std::to_string(g.a) +
                      " but the family is defined at a = " +
                      std::to_string(f.a));
  }
  // Least-squares position along the direction (eta, s_fam, 1/eta).
  const double u1 = f.eta;
  const double u2 = f.s_fam;
  const double u3 = 1.0 / f.eta;
  const double dp = g.p - f.anchor.p;
  const double dq = g.q - f.anchor.q;
  const double dr = g.r - f.anchor.r;
  const double delta = (dp * u1 + dq * u2 + dr * u3) / (u1 * u1 + u2 * u2 + u3 * u3);
  const double off = std::hypot(dp - delta * u1, dq - delta * u2, dr - delta * u3);
  if (off > tol) {
    throw DomainError("origin graphon is not in the family (distance " +
                      std::to_string(off) + " from the line)");
  }
  if (delta > tol || delta < f.delta_min - tol) {
    throw DomainError("origin graphon lies on the family line but outside [" +
                      std::to_string(f.delta_min) + ", 0]");
  }
  return std::clamp(delta, f.delta_min, 0.0);
}

SbmGraphon predict_interpolated(const EmbeddingGram& k, double a,
                                const SbmGraphon& origin, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("interpolation parameter t must lie in [0, 1]");
  }
  const EquivalenceFamily f = family_of(k, a);
  const double origin_delta = delta_of(f, origin);
  return member_at(f, (1.0 - t) * origin_delta);
}

SbmGraphon recover_from_density(const EmbeddingGram& k, double a,
                                double density) {
  const EquivalenceFamily f = family_of(k, a);
  return member_at(f, delta_from_density(f, density));
}

double density_from_average_degree(double average_degree, long long n) {
  if (n < 2) throw DomainError("average degree needs n >= 2");
  if (average_degree < 0.0) throw DomainError("average degree must be >= 0");
  return average_degree / static_cast<double>(n - 1);
}

std::string_view to_string(Balance b) {
  switch (b) {
    case Balance::Community1Favored:
      return "community1";
    case Balance::Community2Favored:
      return "community2";
    case Balance::Balanced:
      return "balanced";
  }
  return "unknown";
}

DensifyRates densify_rates(const EquivalenceFamily& f, double tol) {
  DensifyRates out;
  out.community1 = f.eta;
  out.community2 = 1.0 / f.eta;
  out.cross = f.s_fam;
  if (f.eta > 1.0 + tol) {
    out.balance = Balance::Community1Favored;
  } else if (f.eta < 1.0 - tol) {
    out.balance = Balance::Community2Favored;
  } else {
    out.balance = Balance::Balanced;
  }
  out.larger_community = f.a > 0.5 ? 1 : (f.a < 0.5 ? 2 : 0);
  return out;
}

}  // namespace graphon
