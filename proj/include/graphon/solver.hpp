#pragma once

#include <array>
#include <optional>
#include <string>

#include "graphon/core.hpp"

namespace graphon {

// Dual variables for the PSD-constrained risk minimization
//
//   min R(K)  s.t.  K1 >= 0,  K3 >= 0,  K1 K3 - K2^2 >= 0
//
// mu1, mu2, mu3 multiply the three scalar constraints. At the apex K = 0
// the scalar constraints lose linear independence and cannot balance a
// nonzero cross gradient; cross_dual is the off-diagonal entry of the conic
// multiplier [[mu1, cross_dual], [cross_dual, mu2]] used there. It is zero
// at every other point.
struct KktCertificate {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double cross_dual = 0.0;

  // Stationarity rows 1..3 followed by mu1 K1, mu2 K3, mu3 (K1 K3 - K2^2).
  std::array<double, 6> residuals{};

  double max_residual() const;

  // Every residual within tol, duals nonnegative within tol, and the apex
  // multiplier block PSD within tol.
  bool valid(double tol) const;
};

struct SolverOptions {
  double initial_step = 1.0;
  double backtrack = 0.5;
  int max_iterations = 100000;
  double gradient_tolerance = 1e-9;
  // Certificate tolerance for accepting a solve.
  double certificate_tolerance = 1e-6;
  // Replace the iterative answer with the regime closed form when one
  // exists and certifies. Disabled in tests that exercise the raw solver.
  bool use_closed_form = true;

  // Throws DomainError on a non-positive step, tolerance or iteration cap,
  // or a backtracking factor outside (0, 1).
  void validate() const;
};

struct GramSolution {
  EmbeddingGram gram;
  KktCertificate certificate;
  int iterations = 0;
  // Which route produced the final gram: "closed-form", "rank-one-newton" or
  // "projected-gradient".
  std::string method;
};

// Raised when the solver cannot certify its answer. Carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, GramSolution best)
      : Error(what), best_(std::move(best)) {}
  const GramSolution& best() const { return best_; }

 private:
  GramSolution best_;
};

// Population risk with the sampling density dropped:
//   a^2 l(K1, p) + (1-a)^2 l(K3, r) + 2a(1-a) l(K2, q),
//   l(y, x) = log(1 + e^y) - x y.
// Uses g.a; k.a is ignored.
double risk(const EmbeddingGram& k, const SbmGraphon& g);

// Partial derivatives of risk with respect to (K1, K2, K3).
std::array<double, 3> risk_gradient(const EmbeddingGram& k,
                                    const SbmGraphon& g);

// Frobenius-nearest PSD matrix to [[k1, k2], [k2, k3]].
EmbeddingGram project_psd(double k1, double k2, double k3, double a = 0.5);

// Closed-form gram where the regime provides one: the dense regime, the
// sparse regime, and the q = 1/2 faces where K1 or K3 vanishes. Returns
// nullopt in the middle regime interior.
std::optional<EmbeddingGram> analytic_gram(const SbmGraphon& g);

// Signed KKT residuals, in the order documented on KktCertificate.
std::array<double, 6> kkt_residuals(const EmbeddingGram& k,
                                    const KktCertificate& cert,
                                    const SbmGraphon& g);

// Reconstructs duals at a candidate minimizer and fills in the residuals.
KktCertificate recover_certificate(const EmbeddingGram& k,
                                   const SbmGraphon& g);

// Minimizes the risk over the PSD cone. Throws DomainError unless
// p, q, r lie strictly inside (0, 1), and ConvergenceError when no candidate
// certifies at opts.certificate_tolerance.
GramSolution solve_gram(const SbmGraphon& g, const SolverOptions& opts = {});

// Brute-force minimizer of the risk over PSD grid triples. The grid has
// spacing bound / (resolution / 2) on every axis, spans [0, bound] for K1, K3
// and [-bound, bound] for K2, and always contains the origin.
EmbeddingGram grid_oracle(const SbmGraphon& g, int resolution, double bound);

// Grid spacing used by grid_oracle for the given arguments.
double grid_spacing(int resolution, double bound);

}  // namespace graphon
