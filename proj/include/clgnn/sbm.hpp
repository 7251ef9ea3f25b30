#ifndef CLGNN_SBM_HPP_
#define CLGNN_SBM_HPP_

#include "clgnn/graph.hpp"
#include "clgnn/rng.hpp"

namespace clgnn {

struct SynthSpec {
  int num_nodes = 600;
  int num_classes = 3;
  int communities = 3;
  double homophily = 0.9;
  double feature_noise = 0.0;  // infinity = pure-noise features
  double avg_degree = 10.0;
};

void validate_synth_spec(const SynthSpec& spec);

// Within-community edge probability h*delta*B/n, cross-community
// (1-h)*delta/(n - n/B), both clamped to [0, 1]; community of node v is
// v % B and its label is community % C. Features are onehot(label) plus
// feature_noise * N(0,1) per entry; infinite noise drops the onehot part.
Graph synth_homophily(const SynthSpec& spec, Rng& rng);

double edge_probability_within(const SynthSpec& spec);
double edge_probability_across(const SynthSpec& spec);

// True when the generated label counts are not all equal.
bool class_counts_imbalanced(const Graph& g);

}  // namespace clgnn

#endif  // CLGNN_SBM_HPP_
