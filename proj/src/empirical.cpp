#include "graphon/empirical.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

namespace graphon {

namespace {

struct PairTerms {
  double loss;     // summed over ordered pairs
  Eigen::MatrixXd residual;  // sigma(s_ij) - a_ij, upper triangle only
};

// Loss over ordered pairs and the upper-triangular residuals, visiting each
// unordered pair once in a fixed order.
PairTerms evaluate(const Eigen::MatrixXd& w, const AdjacencyMatrix& adj,
                   bool want_residual) {
  const auto n = w.rows();
  PairTerms out{0.0, {}};
  if (want_residual) out.residual.setZero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = w.row(i).dot(w.row(j));
      const double e = std::exp(-std::abs(s));
      const double target = adj(i, j);
      out.loss += 2.0 * (std::max(s, 0.0) + std::log1p(e) - target * s);
      if (want_residual) {
        const double sig = s >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
        out.residual(i, j) = sig - target;
      }
    }
  }
  return out;
}

Eigen::MatrixXd gradient(const Eigen::MatrixXd& w,
                         const Eigen::MatrixXd& residual) {
  const auto n = w.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, w.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double c = 2.0 * residual(i, j);
      g.row(i) += c * w.row(j);
      g.row(j) += c * w.row(i);
    }
  }
  return g;
}

double block_value(const EmbeddingGram& k, std::uint8_t li, std::uint8_t lj) {
  if (li != lj) return k.k2;
  return li == 0 ? k.k1 : k.k3;
}

}  // namespace

long long SampledGraph::edge_count() const {
  long long total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) total += adjacency(i, j);
  }
  return total;
}

std::vector<std::uint8_t> sample_labels(double a, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::uint8_t> labels(n);
  for (auto& l : labels) l = unit(rng) <= a ? 0 : 1;
  return labels;
}

SampledGraph sample_graph(const SbmGraphon& g, int n, std::uint64_t seed) {
  g.validate();
  if (n < 2) throw DomainError("sample_graph needs n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SampledGraph out;
  out.n = n;
  out.seed = seed;
  out.labels.resize(n);
  for (auto& l : out.labels) l = unit(rng) <= g.a ? 0 : 1;

  const double prob[2][2] = {{g.p, g.q}, {g.q, g.r}};
  out.adjacency = AdjacencyMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool edge = unit(rng) < prob[out.labels[i]][out.labels[j]];
      out.adjacency(i, j) = out.adjacency(j, i) = edge ? 1 : 0;
    }
  }
  return out;
}

void write_edge_list(const SampledGraph& graph, std::ostream& out) {
  for (int i = 0; i < graph.n; ++i) {
    for (int j = i + 1; j < graph.n; ++j) {
      if (graph.adjacency(i, j)) out << i << ' ' << j << '\n';
    }
  }
}

SampledGraph read_edge_list(std::istream& in, std::vector<std::uint8_t> labels,
                            std::uint64_t seed) {
  SampledGraph out;
  out.n = static_cast<int>(labels.size());
  out.labels = std::move(labels);
  out.seed = seed;
  out.adjacency = AdjacencyMatrix::Zero(out.n, out.n);

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long u = -1, v = -1;
    std::string rest;
    if (!(fields >> u >> v) || (fields >> rest)) {
      throw DomainError("edge list line " + std::to_string(line_no) +
                        ": expected 'u v'");
    }
    if (u < 0 || v < 0 || u >= out.n || v >= out.n) {
      throw DomainError("edge list line " + std::to_string(line_no) +
                        ": node index outside [0, " + std::to_string(out.n) +
                        ")");
    }
    if (u == v) {
      throw DomainError("edge list line " + std::to_string(line_no) +
                        ": self-loop");
    }
    out.adjacency(u, v) = out.adjacency(v, u) = 1;
  }
  return out;
}

EmbeddingFit fit_embeddings(const SampledGraph& graph, int d,
                            const FitOptions& opts) {
  if (d < 2) throw DomainError("embedding dimension must be >= 2");
  if (graph.n < 2) throw DomainError("graph needs at least 2 nodes");
  if (opts.epochs < 0) throw DomainError("epoch count must be >= 0");

  const int n = graph.n;
  const double pairs = static_cast<double>(n) * (n - 1);

  EmbeddingFit fit;
  fit.d = d;
  fit.options = opts;
  fit.vectors.resize(n, d);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> init(-opts.init_scale,
                                              opts.init_scale);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) fit.vectors(i, k) = init(rng);
  }

  double step = opts.learning_rate > 0.0 ? opts.learning_rate : 0.5 / n;
  PairTerms current = evaluate(fit.vectors, graph.adjacency, true);
  fit.loss_trace.push_back(current.loss / pairs);

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    const Eigen::MatrixXd grad = gradient(fit.vectors, current.residual);
    const double grad_sq = grad.squaredNorm();

    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd trial = fit.vectors - step * grad;
      PairTerms next = evaluate(trial, graph.adjacency, true);
      if (!std::isfinite(next.loss)) {
        step *= 0.5;
        continue;
      }
      if (next.loss <= current.loss - 1e-4 * step * grad_sq) {
        fit.vectors = std::move(trial);
        current = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    fit.epochs_run = epoch + 1;
    if (!accepted) {
      // No step decreases the loss: a stationary point up to rounding.
      fit.loss_trace.push_back(fit.loss_trace.back());
      fit.converged = true;
      break;
    }
    const double mean = current.loss / pairs;
    if (!std::isfinite(mean)) throw Error("embedding fit diverged");
    const double improvement = fit.loss_trace.back() - mean;
    fit.loss_trace.push_back(mean);
    if (improvement < opts.tolerance) {
      fit.converged = true;
      break;
    }
    step *= opts.step_growth;
  }
  return fit;
}

GapReport gap_report(const EmbeddingFit& fit, const SampledGraph& graph,
                     const EmbeddingGram& k) {
  if (fit.vectors.rows() != graph.n) {
    throw DomainError("fit has " + std::to_string(fit.vectors.rows()) +
                      " vectors but the graph has " + std::to_string(graph.n) +
                      " nodes");
  }
  const int n = graph.n;
  double total = 0.0;
  std::array<double, 3> sum{}, sum_sq{};
  std::array<double, 3> count{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = fit.vectors.row(i).dot(fit.vectors.row(j));
      const auto li = graph.labels[i];
      const auto lj = graph.labels[j];
      total += std::abs(s - block_value(k, li, lj));
      if (i == j) continue;
      const int block = li != lj ? 1 : (li == 0 ? 0 : 2);
      sum[block] += s;
      sum_sq[block] += s * s;
      count[block] += 1.0;
    }
  }
  GapReport out;
  out.gap = total / (static_cast<double>(n) * n);
  std::array<double, 3> mean{};
  for (int b = 0; b < 3; ++b) {
    if (count[b] == 0.0) {
      mean[b] = std::nan("");
      out.block_standard_error[b] = std::nan("");
      continue;
    }
    mean[b] = sum[b] / count[b];
    const double var =
        count[b] > 1.0
            ? std::max(0.0, (sum_sq[b] - count[b] * mean[b] * mean[b]) /
                                (count[b] - 1.0))
            : 0.0;
    out.block_standard_error[b] = std::sqrt(var / count[b]);
  }
  out.block_gram = {mean[0], mean[1], mean[2], k.a};
  return out;
}

}  // namespace graphon
