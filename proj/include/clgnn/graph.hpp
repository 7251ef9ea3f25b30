#ifndef CLGNN_GRAPH_HPP_
#define CLGNN_GRAPH_HPP_

#include <span>
#include <utility>
#include <vector>

#include "clgnn/rng.hpp"
#include "clgnn/types.hpp"

namespace clgnn {

// Undirected graph in CSR form. Adjacency is symmetric, deduplicated, sorted
// per node, with no stored self-loops (the propagation op adds them
// virtually). labels[v] == -1 means unlabeled.
struct Graph {
  int num_nodes = 0;
  int num_classes = 0;
  std::vector<int> offsets;  // size num_nodes + 1
  std::vector<int> targets;
  Matrix features;           // num_nodes x feature_dim
  std::vector<int> labels;   // -1 or [0, num_classes)

  int degree(int v) const { return offsets[static_cast<size_t>(v) + 1] - offsets[static_cast<size_t>(v)]; }
  std::span<const int> neighbors(int v) const {
    return {targets.data() + offsets[static_cast<size_t>(v)],
            static_cast<size_t>(degree(v))};
  }
  int feature_dim() const { return static_cast<int>(features.cols()); }
  bool has_label(int v) const { return labels[static_cast<size_t>(v)] >= 0; }
  int num_edges() const { return static_cast<int>(targets.size()) / 2; }
};

// Disjoint node roles for one experimental run.
struct SplitSpec {
  std::vector<int> train_labeled;
  std::vector<int> validation;
  std::vector<int> test_eval;
  std::vector<int> test_labeled;  // empty in the fully-unlabeled scenario
};

// Symmetrizes, deduplicates, drops self-loops, sorts adjacency, validates.
Graph build_graph(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                  Matrix features, std::vector<int> labels, int num_classes);

void validate_graph(const Graph& g);
void validate_split(const Graph& g, const SplitSpec& split);

// h_out = D^-1/2 (A + I) D^-1/2 h with degrees taken after the virtual
// self-loop. Sparse row traversal; never materializes the dense operator.
Matrix sym_norm_propagate(const Graph& g, const Matrix& h);

struct MeanAggregate {
  Matrix values;                    // num_nodes x dim
  std::vector<int> sample_offsets;  // size num_nodes + 1
  std::vector<int> samples;         // sampled neighbor ids, grouped per node
};

// Mean over min(degree, sample_size) neighbors drawn uniformly without
// replacement. Isolated nodes yield a zero row and no samples.
MeanAggregate mean_neighbor_aggregate(const Graph& g, const Matrix& h, int sample_size,
                                      Rng& rng);

// Deterministic full-neighborhood mean (evaluation-mode aggregation).
MeanAggregate mean_all_neighbors(const Graph& g, const Matrix& h);

// Routes upstream gradients back through the recorded samples.
Matrix mean_aggregate_backward(const MeanAggregate& agg, const Matrix& upstream,
                               int num_nodes);

// Randomized-BFS growth of a connected node set of exactly target_size nodes.
// `allowed` (when given) restricts both the start and the growth. Bounded
// restarts; SamplingError when the graph cannot supply the component.
std::vector<int> connected_component_sample(const Graph& g, int target_size, Rng& rng,
                                            const std::vector<char>* allowed = nullptr,
                                            int max_retries = 100);

struct Egonet {
  Graph graph;
  int center = 0;                  // index of the seed node inside `graph`
  std::vector<int> original_nodes; // egonet index -> node id in the host graph
};

// Induced subgraph on nodes within BFS distance d of v.
Egonet d_hop_egonet(const Graph& g, int v, int d);

std::vector<int> bfs_distances(const Graph& g, int source);

// One-hot rows for the given labeled nodes, zero elsewhere (num_nodes x C).
Matrix label_onehot(const Graph& g, const std::vector<int>& nodes);

bool same_graph(const Graph& a, const Graph& b);

}  // namespace clgnn

#endif  // CLGNN_GRAPH_HPP_
