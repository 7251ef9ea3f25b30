#include "clgnn/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace clgnn {

void validate_synth_spec(const SynthSpec& spec) {
  if (spec.num_nodes < 2) throw ConfigError("num_nodes must be >= 2");
  if (spec.num_classes < 1) throw ConfigError("num_classes must be >= 1");
  if (spec.communities < 1 || spec.communities > spec.num_nodes)
    throw ConfigError("communities must lie in [1, num_nodes]");
  if (!(spec.homophily >= 0.0 && spec.homophily <= 1.0))
    throw ConfigError("homophily must lie in [0, 1]");
  if (std::isnan(spec.feature_noise) || spec.feature_noise < 0.0)
    throw ConfigError("feature_noise must be >= 0");
  if (!(spec.avg_degree > 0.0)) throw ConfigError("avg_degree must be positive");
}

double edge_probability_within(const SynthSpec& spec) {
  const double n = static_cast<double>(spec.num_nodes);
  const double b = static_cast<double>(spec.communities);
  return std::clamp(spec.homophily * spec.avg_degree * b / n, 0.0, 1.0);
}

double edge_probability_across(const SynthSpec& spec) {
  if (spec.communities == 1) return 0.0;
  const double n = static_cast<double>(spec.num_nodes);
  const double b = static_cast<double>(spec.communities);
  return std::clamp((1.0 - spec.homophily) * spec.avg_degree / (n - n / b), 0.0, 1.0);
}

Graph synth_homophily(const SynthSpec& spec, Rng& rng) {
  validate_synth_spec(spec);
  const int n = spec.num_nodes;
  const double p_in = edge_probability_within(spec);
  const double p_out = edge_probability_across(spec);

  std::vector<int> labels(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) labels[static_cast<size_t>(v)] = (v % spec.communities) % spec.num_classes;

  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const bool same = (u % spec.communities) == (v % spec.communities);
      if (rng.bernoulli(same ? p_in : p_out)) edges.push_back({u, v});
    }
  }

  Matrix features = Matrix::Zero(n, spec.num_classes);
  const bool pure_noise = std::isinf(spec.feature_noise);
  for (int v = 0; v < n; ++v) {
    for (int j = 0; j < spec.num_classes; ++j) {
      double value = pure_noise ? rng.normal()
                                : (j == labels[static_cast<size_t>(v)] ? 1.0 : 0.0) +
                                      spec.feature_noise * rng.normal();
      features(v, j) = value;
    }
  }

  return build_graph(n, edges, features, labels, spec.num_classes);
}

bool class_counts_imbalanced(const Graph& g) {
  std::vector<int> counts(static_cast<size_t>(g.num_classes), 0);
  for (int v = 0; v < g.num_nodes; ++v)
    if (g.has_label(v)) ++counts[static_cast<size_t>(g.labels[static_cast<size_t>(v)])];
  for (size_t c = 1; c < counts.size(); ++c)
    if (counts[c] != counts[0]) return true;
  return false;
}

}  // namespace clgnn
