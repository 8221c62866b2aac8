#include "graphon/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace graphon {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

// Logit with the +-infinity convention at the ends of [0, 1].
double extended_logit(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  if (x >= 1.0) return std::numeric_limits<double>::infinity();
  return std::log(x) - std::log1p(-x);
}

}  // namespace

void SbmGraphon::validate() const {
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("community fraction a must lie in (0, 1), got " +
                      std::to_string(a));
  }
  if (!in_unit(p) || !in_unit(q) || !in_unit(r)) {
    throw DomainError("edge probabilities p, q, r must lie in [0, 1]");
  }
}

bool EmbeddingGram::is_psd(double tol) const {
  return k1 >= -tol && k3 >= -tol && k2 * k2 <= k1 * k3 + tol;
}

std::string_view to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::Dense:
      return "dense";
    case RegionTag::Sparse:
      return "sparse";
    case RegionTag::Middle:
      return "middle";
  }
  return "unknown";
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_prime(double x) {
  const double s = sigmoid(x);
  return s * (1.0 - s);
}

double logit(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("logit is undefined outside (0, 1), got " +
                      std::to_string(x));
  }
  return std::log(x) - std::log1p(-x);
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

Region classify(double p, double q, double r, double tol) {
  if (!in_unit(p) || !in_unit(q) || !in_unit(r)) {
    throw DomainError("edge probabilities p, q, r must lie in [0, 1]");
  }
  Region region;

  const bool dense_sides = p >= 0.5 - tol && r >= 0.5 - tol;
  const bool sparse_sides = p <= 0.5 + tol && r <= 0.5 + tol;

  // Dense test. Either of p, r at 1 makes logit(p) logit(r) undefined
  // (infinite, or infinity times zero); q at 0 or 1 alone only makes the
  // left side infinite.
  enum class Verdict { Yes, No, Undefined } dense = Verdict::No;
  if (dense_sides) {
    if (p >= 1.0 || r >= 1.0) {
      dense = Verdict::Undefined;
    } else {
      const double lq = extended_logit(q);
      const double lhs = lq * lq;
      const double rhs = extended_logit(p) * extended_logit(r);
      if (std::isinf(lhs)) {
        dense = Verdict::No;
      } else {
        dense = lhs <= rhs + tol ? Verdict::Yes : Verdict::No;
        region.boundary_dense = std::abs(lhs - rhs) <= tol;
      }
    }
  }

  const double hp = 0.5 - p;
  const double hq = 0.5 - q;
  const double hr = 0.5 - r;
  const double sparse_gap = hq * hq - hp * hr;
  const bool sparse = sparse_sides && sparse_gap <= tol;
  region.boundary_sparse = sparse_sides && std::abs(sparse_gap) <= tol;

  if (dense == Verdict::Yes) {
    region.tag = RegionTag::Dense;
  } else if (sparse) {
    region.tag = RegionTag::Sparse;
  } else if (dense == Verdict::Undefined) {
    throw DegenerateError(
        "regime undefined: p or r equals 1, so logit(p) logit(r) is not "
        "finite");
  } else {
    region.tag = RegionTag::Middle;
  }
  return region;
}

Region region_from_gram(const EmbeddingGram& k, double tol) {
  Region region;
  if (std::abs(k.k1) <= tol && std::abs(k.k2) <= tol && std::abs(k.k3) <= tol) {
    region.tag = RegionTag::Sparse;
  } else if (std::abs(k.k2 * k.k2 - k.k1 * k.k3) <= tol) {
    region.tag = RegionTag::Middle;
  } else {
    region.tag = RegionTag::Dense;
  }
  return region;
}

}  // namespace graphon
