#include "graphon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/core.h>

namespace graphon {

namespace {

struct Weights {
  double w1;  // a^2
  double w2;  // 2a(1-a)
  double w3;  // (1-a)^2
};

Weights weights(double a) {
  return {a * a, 2.0 * a * (1.0 - a), (1.0 - a) * (1.0 - a)};
}

// Cross-entropy against a Bernoulli(x) target: log(1 + e^y) - x y.
double pair_loss(double y, double x) { return softplus(y) - x * y; }

// Squared Frobenius norm of a symmetric 2x2 matrix stored as (k1, k2, k3).
double frobenius_sq(double d1, double d2, double d3) {
  return d1 * d1 + 2.0 * d2 * d2 + d3 * d3;
}

bool strictly_inside(double x) { return x > 0.0 && x < 1.0; }

void require_open_probabilities(const SbmGraphon& g) {
  if (!(g.a > 0.0 && g.a < 1.0)) {
    throw DomainError("community fraction a must lie in (0, 1)");
  }
  if (!strictly_inside(g.p) || !strictly_inside(g.q) ||
      !strictly_inside(g.r)) {
    throw DomainError(
        "solver requires p, q, r strictly inside (0, 1): the cross-entropy "
        "risk is unbounded below at 0 and 1");
  }
}

constexpr double kActiveTol = 1e-9;
constexpr double kHalfTol = 1e-12;

struct ProjectedGradientResult {
  EmbeddingGram gram;
  int iterations = 0;
  bool converged = false;
};

ProjectedGradientResult projected_gradient(const SbmGraphon& g,
                                           const SolverOptions& opts) {
  auto clamp = [](double v) { return std::clamp(v, -10.0, 10.0); };
  EmbeddingGram x = project_psd(clamp(logit(g.p)), clamp(logit(g.q)),
                                clamp(logit(g.r)), g.a);
  double step = opts.initial_step;
  const double max_step = opts.initial_step * 1e6;

  ProjectedGradientResult out;
  double fx = risk(x, g);
  for (int it = 0; it < opts.max_iterations; ++it) {
    out.iterations = it + 1;
    const auto grad = risk_gradient(x, g);
    // The off-diagonal partial is split across the two symmetric entries
    // so the step lives in the Frobenius metric the projection uses.
    double t = step;
    EmbeddingGram y;
    double fy = 0.0;
    bool accepted = false;
    while (t > 1e-20) {
      y = project_psd(x.k1 - t * grad[0], x.k2 - t * 0.5 * grad[1],
                      x.k3 - t * grad[2], g.a);
      const double d1 = y.k1 - x.k1;
      const double d2 = y.k2 - x.k2;
      const double d3 = y.k3 - x.k3;
      fy = risk(y, g);
      const double model = fx + grad[0] * d1 + grad[1] * d2 + grad[2] * d3 +
                           frobenius_sq(d1, d2, d3) / (2.0 * t);
      if (fy <= model + 8.0 * std::numeric_limits<double>::epsilon() *
                            std::abs(fx)) {
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) break;

    const double mapping =
        std::sqrt(frobenius_sq(y.k1 - x.k1, y.k2 - x.k2, y.k3 - x.k3)) / t;
    x = y;
    fx = fy;
    if (mapping <= opts.gradient_tolerance) {
      out.converged = true;
      break;
    }
    step = std::min(t / opts.backtrack, max_step);
  }
  out.gram = x;
  return out;
}

// Newton refinement on the rank-one face K = (x^2, s x y, y^2) with x, y > 0.
std::optional<EmbeddingGram> rank_one_newton(const EmbeddingGram& start,
                                             const SbmGraphon& g) {
  if (!(start.k1 > 0.0 && start.k3 > 0.0) || start.k2 == 0.0) {
    return std::nullopt;
  }
  const double s = start.k2 < 0.0 ? -1.0 : 1.0;
  const auto [w1, w2, w3] = weights(g.a);

  auto objective = [&](double x, double y) {
    return w1 * pair_loss(x * x, g.p) + w3 * pair_loss(y * y, g.r) +
           w2 * pair_loss(s * x * y, g.q);
  };

  double x = std::sqrt(start.k1);
  double y = std::sqrt(start.k3);
  for (int it = 0; it < 100; ++it) {
    const double e1 = sigmoid(x * x) - g.p;
    const double e3 = sigmoid(y * y) - g.r;
    const double e2 = sigmoid(s * x * y) - g.q;
    const double d1 = sigmoid_prime(x * x);
    const double d3 = sigmoid_prime(y * y);
    const double d2 = sigmoid_prime(s * x * y);

    const double fx = 2.0 * x * w1 * e1 + s * y * w2 * e2;
    const double fy = 2.0 * y * w3 * e3 + s * x * w2 * e2;
    const double gnorm = std::hypot(fx, fy);
    if (gnorm < 1e-15) break;

    const double hxx = w1 * (4.0 * x * x * d1 + 2.0 * e1) + w2 * d2 * y * y;
    const double hyy = w3 * (4.0 * y * y * d3 + 2.0 * e3) + w2 * d2 * x * x;
    const double hxy = w2 * (d2 * x * y + s * e2);
    const double det = hxx * hyy - hxy * hxy;

    double dx = -fx;
    double dy = -fy;
    if (hxx > 0.0 && det > 0.0) {
      dx = -(hyy * fx - hxy * fy) / det;
      dy = -(hxx * fy - hxy * fx) / det;
    }

    const double f0 = objective(x, y);
    const double slope = fx * dx + fy * dy;
    double t = 1.0;
    bool moved = false;
    while (t > 1e-12) {
      const double nx = x + t * dx;
      const double ny = y + t * dy;
      if (nx > 0.0 && ny > 0.0) {
        const double f1 = objective(nx, ny);
        if (f1 <= f0 + 1e-4 * t * slope ||
            (t == 1.0 && f1 <= f0 + 1e-15 * std::abs(f0))) {
          x = nx;
          y = ny;
          moved = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!moved) break;
    if (std::hypot(t * dx, t * dy) < 1e-16 * (1.0 + std::hypot(x, y))) break;
  }
  return EmbeddingGram{x * x, s * x * y, y * y, g.a};
}

GramSolution certify(const EmbeddingGram& k, const SbmGraphon& g,
                     int iterations, std::string method) {
  GramSolution sol;
  sol.gram = k;
  sol.gram.a = g.a;
  sol.certificate = recover_certificate(sol.gram, g);
  sol.iterations = iterations;
  sol.method = std::move(method);
  return sol;
}

}  // namespace

double KktCertificate::max_residual() const {
  double m = 0.0;
  for (double v : residuals) m = std::max(m, std::abs(v));
  return m;
}

bool KktCertificate::valid(double tol) const {
  if (!(max_residual() <= tol)) return false;
  if (mu1 < -tol || mu2 < -tol || mu3 < -tol) return false;
  return cross_dual * cross_dual <=
         std::max(mu1, 0.0) * std::max(mu2, 0.0) + tol;
}

void SolverOptions::validate() const {
  if (!(initial_step > 0.0)) throw DomainError("step size must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw DomainError("backtracking factor must lie in (0, 1)");
  }
  if (max_iterations <= 0) throw DomainError("max iterations must be positive");
  if (!(gradient_tolerance > 0.0) || !(certificate_tolerance > 0.0)) {
    throw DomainError("tolerances must be positive");
  }
}

double risk(const EmbeddingGram& k, const SbmGraphon& g) {
  const auto [w1, w2, w3] = weights(g.a);
  return w1 * pair_loss(k.k1, g.p) + w3 * pair_loss(k.k3, g.r) +
         w2 * pair_loss(k.k2, g.q);
}

std::array<double, 3> risk_gradient(const EmbeddingGram& k,
                                    const SbmGraphon& g) {
  const auto [w1, w2, w3] = weights(g.a);
  return {w1 * (sigmoid(k.k1) - g.p), w2 * (sigmoid(k.k2) - g.q),
          w3 * (sigmoid(k.k3) - g.r)};
}

EmbeddingGram project_psd(double k1, double k2, double k3, double a) {
  const double mean = 0.5 * (k1 + k3);
  const double half_diff = 0.5 * (k1 - k3);
  const double radius = std::hypot(half_diff, k2);
  const double top = mean + radius;
  const double bottom = mean - radius;
  if (bottom >= 0.0) return {k1, k2, k3, a};
  if (top <= 0.0) return {0.0, 0.0, 0.0, a};
  // Keep the top eigenpair only. radius > 0 here since top > 0 > bottom.
  const double c = half_diff / radius;
  const double s = k2 / radius;
  return {0.5 * top * (1.0 + c), 0.5 * top * s, 0.5 * top * (1.0 - c), a};
}

std::optional<EmbeddingGram> analytic_gram(const SbmGraphon& g) {
  require_open_probabilities(g);
  const Region region = classify(g);
  if (region.tag == RegionTag::Dense) {
    return EmbeddingGram{logit(g.p), logit(g.q), logit(g.r), g.a};
  }
  if (region.tag == RegionTag::Sparse) {
    return EmbeddingGram{0.0, 0.0, 0.0, g.a};
  }
  // Faces with a vanishing diagonal block exist only at q = 1/2.
  if (std::abs(g.q - 0.5) <= kHalfTol) {
    if (g.p <= 0.5 && g.r > 0.5) return EmbeddingGram{0.0, 0.0, logit(g.r), g.a};
    if (g.r <= 0.5 && g.p > 0.5) return EmbeddingGram{logit(g.p), 0.0, 0.0, g.a};
  }
  return std::nullopt;
}

std::array<double, 6> kkt_residuals(const EmbeddingGram& k,
                                    const KktCertificate& c,
                                    const SbmGraphon& g) {
  const auto grad = risk_gradient(k, g);
  return {grad[0] - c.mu1 - c.mu3 * k.k3,
          grad[2] - c.mu2 - c.mu3 * k.k1,
          grad[1] + 2.0 * c.mu3 * k.k2 - 2.0 * c.cross_dual,
          c.mu1 * k.k1,
          c.mu2 * k.k3,
          c.mu3 * (k.k1 * k.k3 - k.k2 * k.k2)};
}

KktCertificate recover_certificate(const EmbeddingGram& k,
                                   const SbmGraphon& g) {
  const auto grad = risk_gradient(k, g);
  KktCertificate c;
  const bool k1_zero = std::abs(k.k1) <= kActiveTol;
  const bool k3_zero = std::abs(k.k3) <= kActiveTol;
  const bool k2_zero = std::abs(k.k2) <= kActiveTol;
  const double scale = std::max(1.0, std::abs(k.k1 * k.k3));
  const bool rank_deficient =
      std::abs(k.k1 * k.k3 - k.k2 * k.k2) <= kActiveTol * scale;

  if (k1_zero && k2_zero && k3_zero) {
    // Apex of the cone: the whole gradient is the conic multiplier.
    c.mu1 = grad[0];
    c.mu2 = grad[2];
    c.cross_dual = 0.5 * grad[1];
  } else if (rank_deficient) {
    if (!k2_zero) {
      c.mu3 = -grad[1] / (2.0 * k.k2);
    } else if (k1_zero) {
      c.mu1 = grad[0];
    } else if (k3_zero) {
      c.mu2 = grad[2];
    } else {
      c.mu3 = grad[0] / k.k3;
    }
  }
  c.residuals = kkt_residuals(k, c, g);
  return c;
}

GramSolution solve_gram(const SbmGraphon& g, const SolverOptions& opts) {
  opts.validate();
  require_open_probabilities(g);

  const ProjectedGradientResult pg = projected_gradient(g, opts);

  std::vector<GramSolution> candidates;
  if (opts.use_closed_form) {
    if (auto closed = analytic_gram(g)) {
      candidates.push_back(certify(*closed, g, pg.iterations, "closed-form"));
    }
  }
  if (auto polished = rank_one_newton(pg.gram, g)) {
    candidates.push_back(
        certify(*polished, g, pg.iterations, "rank-one-newton"));
  }
  candidates.push_back(
      certify(pg.gram, g, pg.iterations, "projected-gradient"));

  for (const auto& c : candidates) {
    if (c.certificate.valid(opts.certificate_tolerance)) return c;
  }
  const auto best = std::min_element(
      candidates.begin(), candidates.end(), [](const auto& l, const auto& r) {
        return l.certificate.max_residual() < r.certificate.max_residual();
      });
  throw ConvergenceError(
      fmt::format("solver did not certify a minimizer after {} iterations "
                  "(max KKT residual {:.3g}, tolerance {:.3g})",
                  pg.iterations, best->certificate.max_residual(),
                  opts.certificate_tolerance),
      *best);
}

double grid_spacing(int resolution, double bound) {
  return bound / static_cast<double>(std::max(resolution / 2, 1));
}

EmbeddingGram grid_oracle(const SbmGraphon& g, int resolution, double bound) {
  if (resolution < 50) throw DomainError("grid oracle resolution must be >= 50");
  if (!(bound > 0.0)) throw DomainError("grid oracle bound must be positive");
  const int m = resolution / 2;
  const double h = grid_spacing(resolution, bound);
  const auto [w1, w2, w3] = weights(g.a);

  // Separable risk: tabulate each term once, then scan all PSD triples.
  std::vector<double> t1(m + 1), t3(m + 1), t2(2 * m + 1);
  for (int i = 0; i <= m; ++i) {
    t1[i] = w1 * pair_loss(i * h, g.p);
    t3[i] = w3 * pair_loss(i * h, g.r);
  }
  for (int j = -m; j <= m; ++j) t2[j + m] = w2 * pair_loss(j * h, g.q);

  double best = std::numeric_limits<double>::infinity();
  int bi = 0, bj = 0, bk = 0;
  for (int i = 0; i <= m; ++i) {
    for (int k = 0; k <= m; ++k) {
      const long long cap = static_cast<long long>(i) * k;
      for (int j = -m; j <= m; ++j) {
        if (static_cast<long long>(j) * j > cap) continue;
        const double v = t1[i] + t3[k] + t2[j + m];
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          bk = k;
        }
      }
    }
  }
  return {bi * h, bj * h, bk * h, g.a};
}

}  // namespace graphon
