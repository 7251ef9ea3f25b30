#ifndef CLGNN_WL_HPP_
#define CLGNN_WL_HPP_

#include <string>
#include <vector>

#include "clgnn/graph.hpp"
#include "clgnn/report.hpp"

namespace clgnn {

struct Coloring {
  std::vector<int> colors;        // dense ids, canonical per round
  int num_colors = 0;
  int rounds_to_stability = 0;    // strict refinements performed
};

std::vector<int> uniform_colors(int num_nodes);
std::vector<int> label_colors(const Graph& g);     // label only (-1 grouped)
std::vector<int> attribute_colors(const Graph& g); // (degree, label, feature row)

// Color refinement: color <- (own color, sorted neighbor colors), with a
// canonical lexicographic re-index each round, until the partition stops
// refining. Refinement never merges classes.
Coloring wl_refine(const Graph& g, const std::vector<int>& init_colors);

// Exactly `rounds` refinement rounds (stable colorings are fixed points).
Coloring wl_rounds(const Graph& g, const std::vector<int>& init_colors, int rounds);

// Round-d partition from attribute-initialized colors; an upper bound on what
// a d-layer message-passing model can distinguish.
Coloring wl_node_equivalence(const Graph& g, int d);

struct AnchorPair {
  int a = -1;
  int b = -1;
};

struct IsoResult {
  bool isomorphic = false;
  std::vector<int> mapping;  // a-node -> b-node when isomorphic
};

// Exact search respecting degrees, labels, and feature rows; both graphs must
// have at most 12 nodes. The anchor pair, when given, is a forced mapping.
IsoResult graphs_isomorphic(const Graph& a, const Graph& b);
IsoResult graphs_isomorphic(const Graph& a, const Graph& b, AnchorPair anchor);

std::vector<std::vector<int>> all_isomorphisms(const Graph& a, const Graph& b,
                                               const AnchorPair* anchor = nullptr,
                                               int limit = 100000);
std::vector<std::vector<int>> enumerate_automorphisms(const Graph& g);

struct SeparationCertificate {
  std::string kind;  // "group_separation" or "local_isomorphism"
  Graph graph;
  std::vector<int> group_a, group_b;
  bool shared_wl_color = false;
  int shared_color = -1;
  int wl_rounds_used = 0;
  bool groups_non_isomorphic = false;
  int automorphisms_checked = 0;
  int d = 0;                          // egonet radius (local_isomorphism only)
  int node_u = -1, node_v = -1;       // the certified pair
  int labeled_u = -1, labeled_v = -1; // labeled pair with distinct local views
  std::vector<int> egonet_witness_src, egonet_witness_dst;  // original ids

  Report to_report() const;
};

// Fixed 10-node instance: an 8-cycle of unlabeled nodes with two labeled hubs
// whose attachment sets are asymmetric. Certifies (i) all eight cycle nodes
// share one stable WL color from label-initialized colors, and (ii) no
// label-preserving automorphism maps group A onto group B. Certification
// failure is a construction bug and throws.
SeparationCertificate make_group_separation_graph();

// Searches plain paths and single-pendant paths (ascending size) for a node
// pair whose d-hop egonets are anchored-isomorphic on the unlabeled view and
// which share a round-d color, plus a labeled pair (under some anchored
// isomorphism) with non-isomorphic d-hop egonets and distinct round-d colors;
// labels are then placed on that pair and the 2d-hop egonets of the main pair
// must become non-isomorphic on the labeled view. d must be 1 or 2.
SeparationCertificate make_local_isomorphism_graph(int d);

}  // namespace clgnn

#endif  // CLGNN_WL_HPP_
