#include "clgnn/wl.hpp"

#include <algorithm>
#include <set>

#include "clgnn/gnn.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clgnn;
using namespace clgnn::testing;

namespace {

bool has_edge(const Graph& g, int u, int v) {
  for (int w : g.neighbors(u))
    if (w == v) return true;
  return false;
}

Graph random_structure(int n, double edge_p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(edge_p)) edges.push_back({u, v});
  return build_graph(n, edges, Matrix::Ones(n, 1),
                     std::vector<int>(static_cast<size_t>(n), -1), 2);
}

bool is_valid_isomorphism(const Graph& a, const Graph& b, const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != a.num_nodes || a.num_nodes != b.num_nodes)
    return false;
  std::vector<char> hit(static_cast<size_t>(b.num_nodes), 0);
  for (int w : map) {
    if (w < 0 || w >= b.num_nodes || hit[static_cast<size_t>(w)]) return false;
    hit[static_cast<size_t>(w)] = 1;
  }
  for (int v = 0; v < a.num_nodes; ++v) {
    if (a.labels[static_cast<size_t>(v)] != b.labels[static_cast<size_t>(map[static_cast<size_t>(v)])])
      return false;
    for (int j = 0; j < a.feature_dim(); ++j)
      if (a.features(v, j) != b.features(map[static_cast<size_t>(v)], j)) return false;
  }
  for (int u = 0; u < a.num_nodes; ++u)
    for (int v = u + 1; v < a.num_nodes; ++v)
      if (has_edge(a, u, v) !=
          has_edge(b, map[static_cast<size_t>(u)], map[static_cast<size_t>(v)]))
        return false;
  return true;
}

Graph unlabeled_view(const Graph& g) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < g.num_nodes; ++v)
    for (int u : g.neighbors(v))
      if (v < u) edges.push_back({v, u});
  return build_graph(g.num_nodes, edges, g.features,
                     std::vector<int>(static_cast<size_t>(g.num_nodes), -1), g.num_classes);
}

bool anchored_egonets_isomorphic(const Graph& g, int a, int b, int d) {
  const Egonet ea = d_hop_egonet(g, a, d);
  const Egonet eb = d_hop_egonet(g, b, d);
  if (ea.graph.num_nodes != eb.graph.num_nodes) return false;
  return graphs_isomorphic(ea.graph, eb.graph, AnchorPair{ea.center, eb.center}).isomorphic;
}

// Shared facts promised by the pair construction, re-verified from scratch.
void check_pair_certificate(const SeparationCertificate& cert, int d) {
  CHECK(cert.kind == "local_isomorphism");
  CHECK(cert.d == d);
  CHECK(cert.shared_wl_color);
  CHECK(cert.groups_non_isomorphic);
  const Graph& labeled = cert.graph;
  CHECK(labeled.labels[static_cast<size_t>(cert.labeled_u)] == 0);
  CHECK(labeled.labels[static_cast<size_t>(cert.labeled_v)] == 1);
  for (int v = 0; v < labeled.num_nodes; ++v)
    if (v != cert.labeled_u && v != cert.labeled_v)
      CHECK(labeled.labels[static_cast<size_t>(v)] == -1);

  const Graph plain = unlabeled_view(labeled);
  const Coloring col = wl_node_equivalence(plain, d);
  CHECK(col.colors[static_cast<size_t>(cert.node_u)] == cert.shared_color);
  CHECK(col.colors[static_cast<size_t>(cert.node_v)] == cert.shared_color);
  CHECK(col.colors[static_cast<size_t>(cert.labeled_u)] !=
        col.colors[static_cast<size_t>(cert.labeled_v)]);

  CHECK(anchored_egonets_isomorphic(plain, cert.node_u, cert.node_v, d));
  CHECK_FALSE(anchored_egonets_isomorphic(plain, cert.labeled_u, cert.labeled_v, d));
  CHECK_FALSE(anchored_egonets_isomorphic(labeled, cert.node_u, cert.node_v, 2 * d));

  // The witness rows must map the u-egonet onto the v-egonet edge for edge.
  const Egonet eu = d_hop_egonet(plain, cert.node_u, d);
  const Egonet ev = d_hop_egonet(plain, cert.node_v, d);
  REQUIRE(cert.egonet_witness_src.size() == cert.egonet_witness_dst.size());
  REQUIRE(static_cast<int>(cert.egonet_witness_src.size()) == eu.graph.num_nodes);
  CHECK(cert.egonet_witness_src[static_cast<size_t>(eu.center)] == cert.node_u);
  CHECK(cert.egonet_witness_dst[static_cast<size_t>(eu.center)] == cert.node_v);
  const std::set<int> src_set(cert.egonet_witness_src.begin(), cert.egonet_witness_src.end());
  const std::set<int> dst_set(cert.egonet_witness_dst.begin(), cert.egonet_witness_dst.end());
  CHECK(src_set == std::set<int>(eu.original_nodes.begin(), eu.original_nodes.end()));
  CHECK(dst_set == std::set<int>(ev.original_nodes.begin(), ev.original_nodes.end()));
  CHECK(src_set.size() == cert.egonet_witness_src.size());
  for (size_t i = 0; i < cert.egonet_witness_src.size(); ++i)
    for (size_t j = i + 1; j < cert.egonet_witness_src.size(); ++j)
      CHECK(has_edge(plain, cert.egonet_witness_src[i], cert.egonet_witness_src[j]) ==
            has_edge(plain, cert.egonet_witness_dst[i], cert.egonet_witness_dst[j]));
}

}  // namespace

TEST_CASE("initial colorings") {
  CHECK(uniform_colors(4) == std::vector<int>{0, 0, 0, 0});
  CHECK_THROWS_AS(uniform_colors(0), ParameterError);

  Rng rng(301);
  const Graph g = random_graph(6, 0.5, rng, 2, 3);
  const std::vector<int> by_label = label_colors(g);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v)
      CHECK((by_label[static_cast<size_t>(u)] == by_label[static_cast<size_t>(v)]) ==
            (g.labels[static_cast<size_t>(u)] == g.labels[static_cast<size_t>(v)]));

  const std::vector<int> by_attr = attribute_colors(g);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v) {
      const bool same = g.degree(u) == g.degree(v) &&
                        g.labels[static_cast<size_t>(u)] == g.labels[static_cast<size_t>(v)] &&
                        g.features.row(u) == g.features.row(v);
      CHECK((by_attr[static_cast<size_t>(u)] == by_attr[static_cast<size_t>(v)]) == same);
    }
}

TEST_CASE("refinement on a cycle stays a single class") {
  const Graph c6 = cycle_graph(6);
  const Coloring out = wl_refine(c6, uniform_colors(6));
  CHECK(out.num_colors == 1);
  CHECK(out.rounds_to_stability == 0);
  for (int c : out.colors) CHECK(c == 0);
}

TEST_CASE("refinement on a path splits endpoints from the middle") {
  const Graph p3 = path_graph(3);
  const Coloring out = wl_refine(p3, uniform_colors(3));
  CHECK(out.num_colors == 2);
  CHECK(out.rounds_to_stability == 1);
  CHECK(out.colors[0] == out.colors[2]);
  CHECK(out.colors[0] != out.colors[1]);
}

TEST_CASE("stable colorings are fixed points") {
  Rng rng(302);
  const Graph g = random_structure(9, 0.4, rng);
  const Coloring stable = wl_refine(g, uniform_colors(9));
  const Coloring again = wl_rounds(g, stable.colors, 4);
  CHECK(again.colors == stable.colors);
  CHECK(again.rounds_to_stability == 0);
}

TEST_CASE("refinement never merges classes") {
  Rng rng(303);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = random_structure(10, 0.35, rng);
    for (int r = 0; r < 4; ++r) {
      const Coloring coarse = wl_rounds(g, uniform_colors(10), r);
      const Coloring fine = wl_rounds(g, uniform_colors(10), r + 1);
      CHECK(fine.num_colors >= coarse.num_colors);
      for (int u = 0; u < 10; ++u)
        for (int v = u + 1; v < 10; ++v)
          if (fine.colors[static_cast<size_t>(u)] == fine.colors[static_cast<size_t>(v)])
            CHECK(coarse.colors[static_cast<size_t>(u)] ==
                  coarse.colors[static_cast<size_t>(v)]);
    }
  }
}

TEST_CASE("canonical colors are permutation invariant") {
  Rng rng(304);
  const Graph g = random_graph(9, 0.4, rng, 2, 3);
  std::vector<int> perm(9);
  for (int v = 0; v < 9; ++v) perm[static_cast<size_t>(v)] = v;
  rng.shuffle(perm);

  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < 9; ++v)
    for (int u : g.neighbors(v))
      if (v < u)
        edges.push_back({perm[static_cast<size_t>(v)], perm[static_cast<size_t>(u)]});
  Matrix features(9, g.feature_dim());
  std::vector<int> labels(9);
  for (int v = 0; v < 9; ++v) {
    features.row(perm[static_cast<size_t>(v)]) = g.features.row(v);
    labels[static_cast<size_t>(perm[static_cast<size_t>(v)])] = g.labels[static_cast<size_t>(v)];
  }
  const Graph gp = build_graph(9, edges, features, labels, g.num_classes);

  const Coloring base = wl_refine(g, attribute_colors(g));
  const Coloring moved = wl_refine(gp, attribute_colors(gp));
  CHECK(base.num_colors == moved.num_colors);
  for (int v = 0; v < 9; ++v)
    CHECK(base.colors[static_cast<size_t>(v)] ==
          moved.colors[static_cast<size_t>(perm[static_cast<size_t>(v)])]);
}

TEST_CASE("coloring input validation") {
  const Graph p4 = path_graph(4);
  CHECK_THROWS_AS(wl_refine(p4, {0, 0, 0}), DimensionError);
  CHECK_THROWS_AS(wl_refine(p4, {0, 2, 0, 0}), ParameterError);
  CHECK_THROWS_AS(wl_refine(p4, {0, -1, 0, 0}), ParameterError);
  CHECK_THROWS_AS(wl_rounds(p4, uniform_colors(4), -1), ParameterError);
}

TEST_CASE("wl_node_equivalence endpoints") {
  Rng rng(305);
  const Graph g = random_graph(8, 0.4, rng, 2, 2);
  const Coloring zero = wl_node_equivalence(g, 0);
  CHECK(zero.colors == attribute_colors(g));
  const Coloring deep = wl_node_equivalence(g, 10);
  const Coloring stable = wl_refine(g, attribute_colors(g));
  CHECK(deep.colors == stable.colors);
}

TEST_CASE("nodes sharing a deep color share the propagation embedding") {
  const SeparationCertificate cert = make_group_separation_graph();
  const Graph& g = cert.graph;
  const Coloring col = wl_node_equivalence(g, 2);
  Rng rng(306);
  const ModelState model = init_model(ModelKind::gcn, g.feature_dim(), 8, 2, 0.0, rng, 5);
  const Matrix z = forward_eval(model, g, g.features);
  for (int u = 0; u < g.num_nodes; ++u)
    for (int v = u + 1; v < g.num_nodes; ++v)
      if (col.colors[static_cast<size_t>(u)] == col.colors[static_cast<size_t>(v)])
        CHECK((z.row(u) - z.row(v)).cwiseAbs().maxCoeff() < 1e-12);
  int cycle_color_hits = 0;
  for (int v = 0; v < 8; ++v)
    if (col.colors[static_cast<size_t>(v)] == col.colors[0]) ++cycle_color_hits;
  CHECK(cycle_color_hits == 8);  // the assertion above is not vacuous
}

TEST_CASE("isomorphism search finds witnesses and respects structure") {
  Rng rng(307);
  const Graph g = random_structure(7, 0.45, rng);
  const IsoResult self = graphs_isomorphic(g, g);
  REQUIRE(self.isomorphic);
  CHECK(is_valid_isomorphism(g, g, self.mapping));

  // paw graph relabeled by an explicit permutation
  const std::vector<std::pair<int, int>> paw = {{0, 1}, {1, 2}, {0, 2}, {0, 3}};
  const Graph a = build_graph(4, paw, Matrix::Ones(4, 1), {-1, -1, -1, -1}, 2);
  const std::vector<int> perm = {2, 0, 3, 1};
  std::vector<std::pair<int, int>> mapped;
  for (auto [u, v] : paw)
    mapped.push_back({perm[static_cast<size_t>(u)], perm[static_cast<size_t>(v)]});
  const Graph b = build_graph(4, mapped, Matrix::Ones(4, 1), {-1, -1, -1, -1}, 2);
  const IsoResult across = graphs_isomorphic(a, b);
  REQUIRE(across.isomorphic);
  CHECK(is_valid_isomorphism(a, b, across.mapping));

  CHECK_FALSE(graphs_isomorphic(path_graph(3), cycle_graph(3)).isomorphic);

  // equal node and edge counts, different connectivity
  std::vector<std::pair<int, int>> two_triangles = {{0, 1}, {1, 2}, {0, 2},
                                                    {3, 4}, {4, 5}, {3, 5}};
  const Graph tt =
      build_graph(6, two_triangles, Matrix::Ones(6, 1), std::vector<int>(6, -1), 2);
  CHECK_FALSE(graphs_isomorphic(tt, cycle_graph(6)).isomorphic);

  CHECK_THROWS_AS(graphs_isomorphic(path_graph(13), path_graph(13)), SizeBoundError);
}

TEST_CASE("labels and features constrain isomorphisms") {
  std::vector<int> labels_a = {0, -1, 1};
  std::vector<int> labels_b = {1, -1, 0};
  const std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}};
  const Graph a = build_graph(3, edges, Matrix::Ones(3, 1), labels_a, 2);
  const Graph b = build_graph(3, edges, Matrix::Ones(3, 1), labels_b, 2);
  const IsoResult out = graphs_isomorphic(a, b);
  REQUIRE(out.isomorphic);  // reversal swaps the endpoints
  CHECK(out.mapping == std::vector<int>{2, 1, 0});
  CHECK_FALSE(graphs_isomorphic(a, a, AnchorPair{0, 2}).isomorphic);

  Matrix marked = Matrix::Ones(3, 1);
  marked(0, 0) = 2.0;
  const Graph c = build_graph(3, edges, marked, std::vector<int>(3, -1), 2);
  const Graph d = build_graph(3, edges, Matrix::Ones(3, 1), std::vector<int>(3, -1), 2);
  CHECK_FALSE(graphs_isomorphic(c, d).isomorphic);
}

TEST_CASE("anchored search forces the mapping") {
  const Graph p3 = path_graph(3);
  const IsoResult ends = graphs_isomorphic(p3, p3, AnchorPair{0, 2});
  REQUIRE(ends.isomorphic);
  CHECK(ends.mapping == std::vector<int>{2, 1, 0});
  CHECK_FALSE(graphs_isomorphic(p3, p3, AnchorPair{0, 1}).isomorphic);
  CHECK_THROWS_AS(graphs_isomorphic(p3, p3, AnchorPair{0, 7}), ParameterError);
}

TEST_CASE("automorphism enumeration") {
  const std::vector<std::vector<int>> square = enumerate_automorphisms(cycle_graph(4));
  CHECK(square.size() == 8);
  bool has_identity = false;
  const Graph c4 = cycle_graph(4);
  for (const std::vector<int>& sigma : square) {
    CHECK(is_valid_isomorphism(c4, c4, sigma));
    has_identity = has_identity || sigma == std::vector<int>{0, 1, 2, 3};
  }
  CHECK(has_identity);

  // three arms of distinct lengths leave only the identity
  const std::vector<std::pair<int, int>> arms = {{0, 1}, {0, 2}, {2, 3},
                                                 {0, 4}, {4, 5}, {5, 6}};
  const Graph rigid = build_graph(7, arms, Matrix::Ones(7, 1), std::vector<int>(7, -1), 2);
  const std::vector<std::vector<int>> only = enumerate_automorphisms(rigid);
  REQUIRE(only.size() == 1);
  CHECK(only[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6});

  CHECK_THROWS_AS(all_isomorphisms(c4, c4, nullptr, 0), ParameterError);
  CHECK_THROWS_AS(all_isomorphisms(c4, c4, nullptr, 3), SizeBoundError);
}

TEST_CASE("group separation certificate holds up to independent checks") {
  const SeparationCertificate cert = make_group_separation_graph();
  CHECK(cert.kind == "group_separation");
  const Graph& g = cert.graph;
  CHECK(g.num_nodes == 10);
  CHECK(g.num_edges() == 16);
  CHECK(cert.group_a == std::vector<int>{0, 1, 3, 4});
  CHECK(cert.group_b == std::vector<int>{2, 5, 6, 7});
  CHECK(g.labels[8] == 0);
  CHECK(g.labels[9] == 0);
  for (int v = 0; v < 8; ++v) CHECK(g.labels[static_cast<size_t>(v)] == -1);

  CHECK(cert.shared_wl_color);
  CHECK(cert.shared_color == 0);
  CHECK(cert.wl_rounds_used == 0);
  const Coloring stable = wl_refine(g, label_colors(g));
  for (int v = 0; v < 8; ++v)
    CHECK(stable.colors[static_cast<size_t>(v)] == cert.shared_color);
  CHECK(stable.colors[8] != cert.shared_color);
  CHECK(stable.colors[8] == stable.colors[9]);

  CHECK(cert.groups_non_isomorphic);
  CHECK(cert.automorphisms_checked == 2);
  const std::vector<std::vector<int>> autos = enumerate_automorphisms(g);
  REQUIRE(autos.size() == 2);
  const std::set<int> bset(cert.group_b.begin(), cert.group_b.end());
  for (const std::vector<int>& sigma : autos) {
    CHECK(is_valid_isomorphism(g, g, sigma));
    std::set<int> image;
    for (int v : cert.group_a) image.insert(sigma[static_cast<size_t>(v)]);
    CHECK(image != bset);
  }
}

TEST_CASE("local isomorphism certificate at radius two") {
  const SeparationCertificate cert = make_local_isomorphism_graph(2);
  check_pair_certificate(cert, 2);
  CHECK(cert.graph.num_nodes == 5);
  CHECK(cert.graph.num_edges() == 4);
  CHECK(cert.node_u == 0);
  CHECK(cert.node_v == 4);
  CHECK(cert.labeled_u == 2);
  CHECK(cert.labeled_v == 0);
  CHECK(cert.shared_color == 1);
  CHECK(cert.wl_rounds_used == 2);
}

TEST_CASE("local isomorphism certificate at radius one") {
  const SeparationCertificate a = make_local_isomorphism_graph(1);
  check_pair_certificate(a, 1);
  const SeparationCertificate b = make_local_isomorphism_graph(1);
  CHECK(same_graph(a.graph, b.graph));
  CHECK(a.node_u == b.node_u);
  CHECK(a.labeled_u == b.labeled_u);
}

TEST_CASE("certificate radius is bounded") {
  CHECK_THROWS_AS(make_local_isomorphism_graph(0), ParameterError);
  CHECK_THROWS_AS(make_local_isomorphism_graph(3), ParameterError);
}
