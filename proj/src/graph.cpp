#include "clgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>

namespace clgnn {

Graph build_graph(int num_nodes, const std::vector<std::pair<int, int>>& edges,
                  Matrix features, std::vector<int> labels, int num_classes) {
  if (num_nodes < 0) throw ParameterError("build_graph: negative node count");
  if (features.rows() != num_nodes) {
    throw DimensionError("build_graph: " + std::to_string(features.rows()) +
                         " feature rows for " + std::to_string(num_nodes) + " nodes");
  }
  if (static_cast<int>(labels.size()) != num_nodes) {
    throw DimensionError("build_graph: " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(num_nodes) + " nodes");
  }

  std::set<std::pair<int, int>> unique_edges;
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw ParameterError("build_graph: edge (" + std::to_string(u) + ", " +
                           std::to_string(v) + ") out of range for n=" +
                           std::to_string(num_nodes));
    }
    if (u == v) continue;  // self-loops live only inside the propagation op
    unique_edges.emplace(std::min(u, v), std::max(u, v));
  }

  Graph g;
  g.num_nodes = num_nodes;
  g.num_classes = num_classes;
  g.features = std::move(features);
  g.labels = std::move(labels);
  std::vector<int> degree(static_cast<size_t>(num_nodes), 0);
  for (const auto& [u, v] : unique_edges) {
    ++degree[static_cast<size_t>(u)];
    ++degree[static_cast<size_t>(v)];
  }
  g.offsets.assign(static_cast<size_t>(num_nodes) + 1, 0);
  for (int v = 0; v < num_nodes; ++v) {
    g.offsets[static_cast<size_t>(v) + 1] = g.offsets[static_cast<size_t>(v)] + degree[static_cast<size_t>(v)];
  }
  g.targets.resize(static_cast<size_t>(g.offsets.back()));
  std::vector<int> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& [u, v] : unique_edges) {
    g.targets[static_cast<size_t>(cursor[static_cast<size_t>(u)]++)] = v;
    g.targets[static_cast<size_t>(cursor[static_cast<size_t>(v)]++)] = u;
  }
  // Set iteration already yields sorted neighbor lists for increasing u, but
  // each node also receives targets from edges where it is the larger
  // endpoint, so sort per node to canonicalize.
  for (int v = 0; v < num_nodes; ++v) {
    std::sort(g.targets.begin() + g.offsets[static_cast<size_t>(v)],
              g.targets.begin() + g.offsets[static_cast<size_t>(v) + 1]);
  }
  validate_graph(g);
  return g;
}

void validate_graph(const Graph& g) {
  if (static_cast<int>(g.offsets.size()) != g.num_nodes + 1) {
    throw ParameterError("graph: offsets size mismatch");
  }
  if (g.offsets.front() != 0 || g.offsets.back() != static_cast<int>(g.targets.size())) {
    throw ParameterError("graph: offsets do not span targets");
  }
  for (int v = 0; v < g.num_nodes; ++v) {
    if (g.offsets[static_cast<size_t>(v) + 1] < g.offsets[static_cast<size_t>(v)]) {
      throw ParameterError("graph: offsets not monotone at node " + std::to_string(v));
    }
    int prev = -1;
    for (int u : g.neighbors(v)) {
      if (u < 0 || u >= g.num_nodes) throw ParameterError("graph: target out of range");
      if (u == v) throw ParameterError("graph: stored self-loop at node " + std::to_string(v));
      if (u <= prev) throw ParameterError("graph: unsorted or duplicate targets at node " + std::to_string(v));
      prev = u;
      const auto nb = g.neighbors(u);
      if (!std::binary_search(nb.begin(), nb.end(), v)) {
        throw ParameterError("graph: asymmetric edge (" + std::to_string(v) + ", " +
                             std::to_string(u) + ")");
      }
    }
  }
  require_finite(g.features, "graph features");
  for (int v = 0; v < g.num_nodes; ++v) {
    const int y = g.labels[static_cast<size_t>(v)];
    if (y < -1 || y >= g.num_classes) {
      throw ParameterError("graph: label " + std::to_string(y) + " at node " +
                           std::to_string(v) + " outside [0, " +
                           std::to_string(g.num_classes) + ")");
    }
  }
}

void validate_split(const Graph& g, const SplitSpec& split) {
  std::vector<char> seen(static_cast<size_t>(g.num_nodes), 0);
  const std::vector<const std::vector<int>*> sets = {
      &split.train_labeled, &split.validation, &split.test_eval, &split.test_labeled};
  const char* names[] = {"train_labeled", "validation", "test_eval", "test_labeled"};
  for (size_t s = 0; s < sets.size(); ++s) {
    for (int v : *sets[s]) {
      if (v < 0 || v >= g.num_nodes) {
        throw ParameterError(std::string("split: node ") + std::to_string(v) +
                             " in " + names[s] + " out of range");
      }
      if (seen[static_cast<size_t>(v)]) {
        throw ParameterError(std::string("split: node ") + std::to_string(v) +
                             " appears in two sets (" + names[s] + ")");
      }
      seen[static_cast<size_t>(v)] = 1;
    }
  }
}

Matrix sym_norm_propagate(const Graph& g, const Matrix& h) {
  if (h.rows() != g.num_nodes) {
    throw DimensionError("sym_norm_propagate: " + std::to_string(h.rows()) +
                         " rows for " + std::to_string(g.num_nodes) + " nodes");
  }
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  std::vector<double> inv_sqrt(static_cast<size_t>(g.num_nodes));
  for (int v = 0; v < g.num_nodes; ++v) {
    inv_sqrt[static_cast<size_t>(v)] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
  }
  for (int v = 0; v < g.num_nodes; ++v) {
    const double sv = inv_sqrt[static_cast<size_t>(v)];
    out.row(v) = (sv * sv) * h.row(v);  // virtual self-loop
    for (int u : g.neighbors(v)) {
      out.row(v) += (sv * inv_sqrt[static_cast<size_t>(u)]) * h.row(u);
    }
  }
  return out;
}

MeanAggregate mean_neighbor_aggregate(const Graph& g, const Matrix& h, int sample_size,
                                      Rng& rng) {
  if (h.rows() != g.num_nodes) {
    throw DimensionError("mean_neighbor_aggregate: " + std::to_string(h.rows()) +
                         " rows for " + std::to_string(g.num_nodes) + " nodes");
  }
  if (sample_size < 1) throw ParameterError("mean_neighbor_aggregate: sample_size must be >= 1");
  MeanAggregate agg;
  agg.values = Matrix::Zero(h.rows(), h.cols());
  agg.sample_offsets.assign(static_cast<size_t>(g.num_nodes) + 1, 0);
  agg.samples.reserve(static_cast<size_t>(g.num_nodes) * static_cast<size_t>(sample_size));
  std::vector<int> scratch;
  for (int v = 0; v < g.num_nodes; ++v) {
    const auto nb = g.neighbors(v);
    const int deg = static_cast<int>(nb.size());
    const int k = std::min(deg, sample_size);
    if (k > 0) {
      if (k == deg) {
        for (int u : nb) agg.samples.push_back(u);
      } else {
        scratch.assign(nb.begin(), nb.end());
        rng.partial_shuffle(scratch, k);
        for (int i = 0; i < k; ++i) agg.samples.push_back(scratch[static_cast<size_t>(i)]);
      }
      for (int i = 0; i < k; ++i) {
        agg.values.row(v) += h.row(agg.samples[static_cast<size_t>(agg.sample_offsets[static_cast<size_t>(v)] + i)]);
      }
      agg.values.row(v) /= static_cast<double>(k);
    }
    agg.sample_offsets[static_cast<size_t>(v) + 1] =
        agg.sample_offsets[static_cast<size_t>(v)] + k;
  }
  return agg;
}

MeanAggregate mean_all_neighbors(const Graph& g, const Matrix& h) {
  if (h.rows() != g.num_nodes) {
    throw DimensionError("mean_all_neighbors: " + std::to_string(h.rows()) +
                         " rows for " + std::to_string(g.num_nodes) + " nodes");
  }
  MeanAggregate agg;
  agg.values = Matrix::Zero(h.rows(), h.cols());
  agg.sample_offsets.assign(static_cast<size_t>(g.num_nodes) + 1, 0);
  agg.samples.assign(g.targets.begin(), g.targets.end());
  for (int v = 0; v < g.num_nodes; ++v) {
    const auto nb = g.neighbors(v);
    for (int u : nb) agg.values.row(v) += h.row(u);
    if (!nb.empty()) agg.values.row(v) /= static_cast<double>(nb.size());
    agg.sample_offsets[static_cast<size_t>(v) + 1] =
        agg.sample_offsets[static_cast<size_t>(v)] + static_cast<int>(nb.size());
  }
  return agg;
}

Matrix mean_aggregate_backward(const MeanAggregate& agg, const Matrix& upstream,
                               int num_nodes) {
  Matrix grad = Matrix::Zero(num_nodes, upstream.cols());
  for (int v = 0; v < num_nodes; ++v) {
    const int begin = agg.sample_offsets[static_cast<size_t>(v)];
    const int end = agg.sample_offsets[static_cast<size_t>(v) + 1];
    if (begin == end) continue;
    const double inv = 1.0 / static_cast<double>(end - begin);
    for (int i = begin; i < end; ++i) {
      grad.row(agg.samples[static_cast<size_t>(i)]) += inv * upstream.row(v);
    }
  }
  return grad;
}

std::vector<int> connected_component_sample(const Graph& g, int target_size, Rng& rng,
                                            const std::vector<char>* allowed,
                                            int max_retries) {
  if (target_size < 1 || target_size > g.num_nodes) {
    throw ParameterError("connected_component_sample: target_size " +
                         std::to_string(target_size) + " outside [1, " +
                         std::to_string(g.num_nodes) + "]");
  }
  auto ok = [&](int v) { return allowed == nullptr || (*allowed)[static_cast<size_t>(v)]; };

  std::vector<int> starts;
  for (int v = 0; v < g.num_nodes; ++v) {
    if (ok(v)) starts.push_back(v);
  }
  if (static_cast<int>(starts.size()) < target_size) {
    throw SamplingError("connected_component_sample: only " +
                        std::to_string(starts.size()) + " allowed nodes for target " +
                        std::to_string(target_size));
  }

  std::vector<char> visited(static_cast<size_t>(g.num_nodes));
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::fill(visited.begin(), visited.end(), 0);
    std::vector<int> picked;
    std::vector<int> frontier;
    const int start = starts[static_cast<size_t>(rng.index(static_cast<int>(starts.size())))];
    visited[static_cast<size_t>(start)] = 1;
    picked.push_back(start);
    for (int u : g.neighbors(start)) {
      if (ok(u) && !visited[static_cast<size_t>(u)]) {
        visited[static_cast<size_t>(u)] = 1;
        frontier.push_back(u);
      }
    }
    while (static_cast<int>(picked.size()) < target_size && !frontier.empty()) {
      const int slot = rng.index(static_cast<int>(frontier.size()));
      const int v = frontier[static_cast<size_t>(slot)];
      frontier[static_cast<size_t>(slot)] = frontier.back();
      frontier.pop_back();
      picked.push_back(v);
      for (int u : g.neighbors(v)) {
        if (ok(u) && !visited[static_cast<size_t>(u)]) {
          visited[static_cast<size_t>(u)] = 1;
          frontier.push_back(u);
        }
      }
    }
    if (static_cast<int>(picked.size()) == target_size) {
      std::sort(picked.begin(), picked.end());
      return picked;
    }
  }
  throw SamplingError("connected_component_sample: no connected set of " +
                      std::to_string(target_size) + " nodes found in " +
                      std::to_string(max_retries) + " attempts");
}

std::vector<int> bfs_distances(const Graph& g, int source) {
  std::vector<int> dist(static_cast<size_t>(g.num_nodes), -1);
  std::queue<int> queue;
  dist[static_cast<size_t>(source)] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int u : g.neighbors(v)) {
      if (dist[static_cast<size_t>(u)] < 0) {
        dist[static_cast<size_t>(u)] = dist[static_cast<size_t>(v)] + 1;
        queue.push(u);
      }
    }
  }
  return dist;
}

Egonet d_hop_egonet(const Graph& g, int v, int d) {
  if (v < 0 || v >= g.num_nodes) throw ParameterError("d_hop_egonet: center out of range");
  if (d < 0) throw ParameterError("d_hop_egonet: negative radius");
  const std::vector<int> dist = bfs_distances(g, v);
  Egonet ego;
  std::vector<int> index_of(static_cast<size_t>(g.num_nodes), -1);
  for (int u = 0; u < g.num_nodes; ++u) {
    if (dist[static_cast<size_t>(u)] >= 0 && dist[static_cast<size_t>(u)] <= d) {
      index_of[static_cast<size_t>(u)] = static_cast<int>(ego.original_nodes.size());
      ego.original_nodes.push_back(u);
    }
  }
  const int m = static_cast<int>(ego.original_nodes.size());
  Matrix features(m, g.features.cols());
  std::vector<int> labels(static_cast<size_t>(m));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i) {
    const int u = ego.original_nodes[static_cast<size_t>(i)];
    features.row(i) = g.features.row(u);
    labels[static_cast<size_t>(i)] = g.labels[static_cast<size_t>(u)];
    for (int w : g.neighbors(u)) {
      const int j = index_of[static_cast<size_t>(w)];
      if (j > i) edges.emplace_back(i, j);
    }
  }
  ego.graph = build_graph(m, edges, std::move(features), std::move(labels), g.num_classes);
  ego.center = index_of[static_cast<size_t>(v)];
  return ego;
}

Matrix label_onehot(const Graph& g, const std::vector<int>& nodes) {
  Matrix onehot = Matrix::Zero(g.num_nodes, g.num_classes);
  for (int v : nodes) {
    if (v < 0 || v >= g.num_nodes) throw ParameterError("label_onehot: node out of range");
    if (!g.has_label(v)) {
      throw ParameterError("label_onehot: node " + std::to_string(v) + " is unlabeled");
    }
    onehot(v, g.labels[static_cast<size_t>(v)]) = 1.0;
  }
  return onehot;
}

bool same_graph(const Graph& a, const Graph& b) {
  return a.num_nodes == b.num_nodes && a.num_classes == b.num_classes &&
         a.offsets == b.offsets && a.targets == b.targets && a.labels == b.labels &&
         a.features.rows() == b.features.rows() && a.features.cols() == b.features.cols() &&
         a.features == b.features;
}

}  // namespace clgnn
