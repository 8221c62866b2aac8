#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "graphon/core.hpp"

namespace graphon {

using AdjacencyMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// A graph drawn from an SBM graphon. labels[i] is 0 for community 1
// (latent lambda_i <= a) and 1 for community 2.
struct SampledGraph {
  int n = 0;
  std::vector<std::uint8_t> labels;
  AdjacencyMatrix adjacency;  // symmetric, zero diagonal
  std::uint64_t seed = 0;

  long long edge_count() const;
};

// Community labels for n latent draws. The latent draws are the first n
// values of the seeded stream, so sample_graph(g, n, seed).labels equals
// sample_labels(g.a, n, seed).
std::vector<std::uint8_t> sample_labels(double a, int n, std::uint64_t seed);

// Latent labels first, then one Bernoulli draw per unordered pair (i < j) in
// row-major order.
SampledGraph sample_graph(const SbmGraphon& g, int n, std::uint64_t seed);

// One "u v" line per undirected edge, u < v, 0-indexed.
void write_edge_list(const SampledGraph& graph, std::ostream& out);

// Reads an edge list into a graph with the given labels (n = labels.size()).
// Throws DomainError on malformed lines, self-loops or out-of-range nodes.
SampledGraph read_edge_list(std::istream& in, std::vector<std::uint8_t> labels,
                            std::uint64_t seed = 0);

struct FitOptions {
  // Initial step; 0 means 0.5 / n.
  double learning_rate = 0.0;
  int epochs = 5000;
  double init_scale = 0.1;
  std::uint64_t seed = 0;
  // Stop once an epoch improves the mean pair loss by less than this.
  double tolerance = 1e-10;
  // Step multiplier after each accepted epoch.
  double step_growth = 1.25;
};

struct EmbeddingFit {
  int d = 0;
  Eigen::MatrixXd vectors;  // n x d
  // Mean cross-entropy per ordered pair, recorded after each epoch
  // (index 0 is the initial loss).
  std::vector<double> loss_trace;
  FitOptions options;
  int epochs_run = 0;
  bool converged = false;

  double final_loss() const { return loss_trace.empty() ? 0.0 : loss_trace.back(); }
};

// Full-batch gradient descent with backtracking on
//   sum_{i != j} log(1 + e^{<w_i, w_j>}) - a_ij <w_i, w_j>.
// Labels are not read. Throws DomainError for d < 2 and Error if the loss
// stops being finite.
EmbeddingFit fit_embeddings(const SampledGraph& graph, int d,
                            const FitOptions& opts = {});

struct GapReport {
  // (1/n^2) sum_{i,j} |<w_i, w_j> - K_block(i, j)|, diagonal included.
  double gap = 0.0;
  // Mean off-diagonal inner product per block pair (k1, k2, k3).
  EmbeddingGram block_gram;
  // Standard errors of those means.
  std::array<double, 3> block_standard_error{};
};

GapReport gap_report(const EmbeddingFit& fit, const SampledGraph& graph,
                     const EmbeddingGram& k);

}  // namespace graphon
