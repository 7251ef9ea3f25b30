#include "clgnn/wl.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>

namespace clgnn {
namespace {

constexpr int kIsoNodeBound = 12;

void check_dense(const std::vector<int>& colors) {
  if (colors.empty()) throw ParameterError("empty color vector");
  int max_color = 0;
  for (int c : colors) {
    if (c < 0) throw ParameterError("negative color id");
    max_color = std::max(max_color, c);
  }
  std::vector<char> seen(static_cast<size_t>(max_color) + 1, 0);
  for (int c : colors) seen[static_cast<size_t>(c)] = 1;
  for (char s : seen)
    if (!s) throw ParameterError("color ids are not dense");
}

// Dense rank of rows under lexicographic order.
template <typename Row>
std::pair<std::vector<int>, int> dense_rank(const std::vector<Row>& rows) {
  std::vector<Row> sorted = rows;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> ids(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    ids[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), rows[i]) - sorted.begin());
  }
  return {std::move(ids), static_cast<int>(sorted.size())};
}

std::pair<std::vector<int>, int> refine_once(const Graph& g, const std::vector<int>& colors) {
  std::vector<std::vector<int>> keys(static_cast<size_t>(g.num_nodes));
  for (int v = 0; v < g.num_nodes; ++v) {
    std::vector<int>& key = keys[static_cast<size_t>(v)];
    key.push_back(colors[static_cast<size_t>(v)]);
    for (int u : g.neighbors(v)) key.push_back(colors[static_cast<size_t>(u)]);
    std::sort(key.begin() + 1, key.end());
  }
  return dense_rank(keys);
}

bool features_equal(const Graph& a, int u, const Graph& b, int v) {
  if (a.feature_dim() != b.feature_dim()) return false;
  for (int j = 0; j < a.feature_dim(); ++j)
    if (a.features(u, j) != b.features(v, j)) return false;
  return true;
}

struct IsoSearch {
  const Graph& a;
  const Graph& b;
  int n;
  std::vector<std::uint16_t> amask, bmask;
  std::vector<std::vector<int>> candidates;  // per a-node
  std::vector<int> order;
  std::vector<int> map_ab;
  std::uint16_t used = 0;
  int limit;
  bool just_one;
  std::vector<std::vector<int>> found;

  IsoSearch(const Graph& ga, const Graph& gb, const AnchorPair* anchor, int lim, bool one)
      : a(ga), b(gb), n(ga.num_nodes), limit(lim), just_one(one) {
    amask.assign(static_cast<size_t>(n), 0);
    bmask.assign(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
      for (int u : a.neighbors(v)) amask[static_cast<size_t>(v)] |= std::uint16_t(1) << u;
      for (int u : b.neighbors(v)) bmask[static_cast<size_t>(v)] |= std::uint16_t(1) << u;
    }
    candidates.assign(static_cast<size_t>(n), {});
    for (int v = 0; v < n; ++v) {
      for (int w = 0; w < n; ++w) {
        if (a.degree(v) != b.degree(w)) continue;
        if (a.labels[static_cast<size_t>(v)] != b.labels[static_cast<size_t>(w)]) continue;
        if (!features_equal(a, v, b, w)) continue;
        candidates[static_cast<size_t>(v)].push_back(w);
      }
    }
    map_ab.assign(static_cast<size_t>(n), -1);
    order.reserve(static_cast<size_t>(n));
    if (anchor != nullptr) order.push_back(anchor->a);
    for (int v = 0; v < n; ++v)
      if (anchor == nullptr || v != anchor->a) order.push_back(v);
    if (anchor != nullptr) {
      candidates[static_cast<size_t>(anchor->a)].clear();
      candidates[static_cast<size_t>(anchor->a)].push_back(anchor->b);
    }
  }

  bool consistent(int v, int w, int depth) const {
    for (int i = 0; i < depth; ++i) {
      const int x = order[static_cast<size_t>(i)];
      const bool ea = (amask[static_cast<size_t>(v)] >> x) & 1;
      const bool eb =
          (bmask[static_cast<size_t>(w)] >> map_ab[static_cast<size_t>(x)]) & 1;
      if (ea != eb) return false;
    }
    return true;
  }

  bool dfs(int depth) {
    if (depth == n) {
      if (static_cast<int>(found.size()) >= limit)
        throw SizeBoundError("isomorphism enumeration exceeded limit");
      found.push_back(map_ab);
      return just_one;
    }
    const int v = order[static_cast<size_t>(depth)];
    for (int w : candidates[static_cast<size_t>(v)]) {
      if ((used >> w) & 1) continue;
      if (!consistent(v, w, depth)) continue;
      map_ab[static_cast<size_t>(v)] = w;
      used |= std::uint16_t(1) << w;
      if (dfs(depth + 1)) return true;
      used &= ~(std::uint16_t(1) << w);
      map_ab[static_cast<size_t>(v)] = -1;
    }
    return false;
  }
};

std::vector<std::vector<int>> run_iso_search(const Graph& a, const Graph& b,
                                             const AnchorPair* anchor, int limit,
                                             bool just_one) {
  if (a.num_nodes > kIsoNodeBound || b.num_nodes > kIsoNodeBound)
    throw SizeBoundError("isomorphism search is limited to graphs with at most " +
                         std::to_string(kIsoNodeBound) + " nodes");
  if (a.num_nodes != b.num_nodes || a.num_edges() != b.num_edges()) return {};
  if (anchor != nullptr) {
    if (anchor->a < 0 || anchor->a >= a.num_nodes || anchor->b < 0 ||
        anchor->b >= b.num_nodes)
      throw ParameterError("anchor node out of range");
  }
  IsoSearch search(a, b, anchor, limit, just_one);
  search.dfs(0);
  return std::move(search.found);
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

Graph make_path_graph(int n, int pendant_at) {
  std::vector<std::pair<int, int>> edges;
  const int path_len = pendant_at >= 0 ? n - 1 : n;
  for (int i = 0; i + 1 < path_len; ++i) edges.push_back({i, i + 1});
  if (pendant_at >= 0) edges.push_back({pendant_at, n - 1});
  return build_graph(n, edges, Matrix::Ones(n, 1),
                     std::vector<int>(static_cast<size_t>(n), -1), 2);
}

Graph with_labeled_pair(const Graph& g, int w0, int w1) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < g.num_nodes; ++v)
    for (int u : g.neighbors(v))
      if (v < u) edges.push_back({v, u});
  std::vector<int> labels(static_cast<size_t>(g.num_nodes), -1);
  labels[static_cast<size_t>(w0)] = 0;
  labels[static_cast<size_t>(w1)] = 1;
  return build_graph(g.num_nodes, edges, g.features, labels, 2);
}

bool try_certify_pair(const Graph& g, int d, SeparationCertificate& cert) {
  const Coloring col = wl_rounds(g, attribute_colors(g), d);
  for (int u = 0; u < g.num_nodes; ++u) {
    for (int v = u + 1; v < g.num_nodes; ++v) {
      if (col.colors[static_cast<size_t>(u)] != col.colors[static_cast<size_t>(v)]) continue;
      const Egonet eu = d_hop_egonet(g, u, d);
      const Egonet ev = d_hop_egonet(g, v, d);
      if (eu.graph.num_nodes != ev.graph.num_nodes) continue;
      AnchorPair centers{eu.center, ev.center};
      const std::vector<std::vector<int>> isos =
          all_isomorphisms(eu.graph, ev.graph, &centers);
      if (isos.empty()) continue;
      for (const std::vector<int>& phi : isos) {
        for (int iu = 0; iu < eu.graph.num_nodes; ++iu) {
          const int wu = eu.original_nodes[static_cast<size_t>(iu)];
          const int wv = ev.original_nodes[static_cast<size_t>(phi[static_cast<size_t>(iu)])];
          if (wu == wv) continue;
          if (col.colors[static_cast<size_t>(wu)] == col.colors[static_cast<size_t>(wv)])
            continue;
          const Egonet ewu = d_hop_egonet(g, wu, d);
          const Egonet ewv = d_hop_egonet(g, wv, d);
          if (graphs_isomorphic(ewu.graph, ewv.graph, AnchorPair{ewu.center, ewv.center})
                  .isomorphic)
            continue;
          const Graph labeled = with_labeled_pair(g, wu, wv);
          const Egonet e2u = d_hop_egonet(labeled, u, 2 * d);
          const Egonet e2v = d_hop_egonet(labeled, v, 2 * d);
          if (e2u.graph.num_nodes == e2v.graph.num_nodes &&
              graphs_isomorphic(e2u.graph, e2v.graph, AnchorPair{e2u.center, e2v.center})
                  .isomorphic)
            continue;
          cert.kind = "local_isomorphism";
          cert.graph = labeled;
          cert.group_a = {u};
          cert.group_b = {v};
          cert.shared_wl_color = true;
          cert.shared_color = col.colors[static_cast<size_t>(u)];
          cert.wl_rounds_used = d;
          cert.groups_non_isomorphic = true;
          cert.d = d;
          cert.node_u = u;
          cert.node_v = v;
          cert.labeled_u = wu;
          cert.labeled_v = wv;
          cert.egonet_witness_src = eu.original_nodes;
          cert.egonet_witness_dst.clear();
          for (int i = 0; i < eu.graph.num_nodes; ++i)
            cert.egonet_witness_dst.push_back(
                ev.original_nodes[static_cast<size_t>(phi[static_cast<size_t>(i)])]);
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

std::vector<int> uniform_colors(int num_nodes) {
  if (num_nodes < 1) throw ParameterError("uniform_colors needs at least one node");
  return std::vector<int>(static_cast<size_t>(num_nodes), 0);
}

std::vector<int> label_colors(const Graph& g) {
  std::vector<std::vector<int>> keys(static_cast<size_t>(g.num_nodes));
  for (int v = 0; v < g.num_nodes; ++v)
    keys[static_cast<size_t>(v)] = {g.labels[static_cast<size_t>(v)]};
  return dense_rank(keys).first;
}

std::vector<int> attribute_colors(const Graph& g) {
  std::vector<std::vector<double>> keys(static_cast<size_t>(g.num_nodes));
  for (int v = 0; v < g.num_nodes; ++v) {
    std::vector<double>& key = keys[static_cast<size_t>(v)];
    key.push_back(static_cast<double>(g.degree(v)));
    key.push_back(static_cast<double>(g.labels[static_cast<size_t>(v)]));
    for (int j = 0; j < g.feature_dim(); ++j) key.push_back(g.features(v, j));
  }
  return dense_rank(keys).first;
}

Coloring wl_refine(const Graph& g, const std::vector<int>& init_colors) {
  if (static_cast<int>(init_colors.size()) != g.num_nodes)
    throw DimensionError("init colors do not match node count");
  check_dense(init_colors);
  Coloring out;
  out.colors = init_colors;
  out.num_colors = 1 + *std::max_element(init_colors.begin(), init_colors.end());
  out.rounds_to_stability = 0;
  while (true) {
    auto [next, count] = refine_once(g, out.colors);
    if (count == out.num_colors) {
      out.colors = std::move(next);
      return out;
    }
    out.colors = std::move(next);
    out.num_colors = count;
    ++out.rounds_to_stability;
  }
}

Coloring wl_rounds(const Graph& g, const std::vector<int>& init_colors, int rounds) {
  if (static_cast<int>(init_colors.size()) != g.num_nodes)
    throw DimensionError("init colors do not match node count");
  if (rounds < 0) throw ParameterError("round count must be >= 0");
  check_dense(init_colors);
  Coloring out;
  out.colors = init_colors;
  out.num_colors = 1 + *std::max_element(init_colors.begin(), init_colors.end());
  out.rounds_to_stability = 0;
  for (int r = 0; r < rounds; ++r) {
    auto [next, count] = refine_once(g, out.colors);
    if (count > out.num_colors) ++out.rounds_to_stability;
    out.colors = std::move(next);
    out.num_colors = count;
  }
  return out;
}

Coloring wl_node_equivalence(const Graph& g, int d) {
  return wl_rounds(g, attribute_colors(g), d);
}

IsoResult graphs_isomorphic(const Graph& a, const Graph& b) {
  auto found = run_iso_search(a, b, nullptr, 1, true);
  IsoResult out;
  out.isomorphic = !found.empty();
  if (out.isomorphic) out.mapping = std::move(found.front());
  return out;
}

IsoResult graphs_isomorphic(const Graph& a, const Graph& b, AnchorPair anchor) {
  auto found = run_iso_search(a, b, &anchor, 1, true);
  IsoResult out;
  out.isomorphic = !found.empty();
  if (out.isomorphic) out.mapping = std::move(found.front());
  return out;
}

std::vector<std::vector<int>> all_isomorphisms(const Graph& a, const Graph& b,
                                               const AnchorPair* anchor, int limit) {
  if (limit < 1) throw ParameterError("isomorphism limit must be >= 1");
  return run_iso_search(a, b, anchor, limit, false);
}

std::vector<std::vector<int>> enumerate_automorphisms(const Graph& g) {
  return all_isomorphisms(g, g);
}

Report SeparationCertificate::to_report() const {
  Report r;
  r.set("document", "separation-certificate");
  r.set("kind", kind);
  r.set_int("num_nodes", graph.num_nodes);
  r.set_int("num_edges", graph.num_edges());
  r.set("group_a", join_ints(group_a));
  r.set("group_b", join_ints(group_b));
  r.set_bool("shared_wl_color", shared_wl_color);
  r.set_int("shared_color", shared_color);
  r.set_int("wl_rounds_used", wl_rounds_used);
  r.set_bool("groups_non_isomorphic", groups_non_isomorphic);
  r.set_int("automorphisms_checked", automorphisms_checked);
  r.set_int("egonet_radius", d);
  r.set_int("node_u", node_u);
  r.set_int("node_v", node_v);
  r.set_int("labeled_u", labeled_u);
  r.set_int("labeled_v", labeled_v);
  ReportTable& edges = r.add_table("edges", {"u", "v"});
  for (int v = 0; v < graph.num_nodes; ++v)
    for (int u : graph.neighbors(v))
      if (v < u) edges.rows.push_back({std::to_string(v), std::to_string(u)});
  if (!egonet_witness_src.empty()) {
    ReportTable& witness = r.add_table("egonet_witness", {"src", "dst"});
    for (size_t i = 0; i < egonet_witness_src.size(); ++i)
      witness.rows.push_back(
          {std::to_string(egonet_witness_src[i]), std::to_string(egonet_witness_dst[i])});
  }
  return r;
}

SeparationCertificate make_group_separation_graph() {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 8; ++i) edges.push_back({i, (i + 1) % 8});
  const std::vector<int> attach_a = {0, 1, 3, 4};
  const std::vector<int> attach_b = {2, 5, 6, 7};
  for (int v : attach_a) edges.push_back({8, v});
  for (int v : attach_b) edges.push_back({9, v});
  std::vector<int> labels(10, -1);
  labels[8] = 0;
  labels[9] = 0;
  Graph g = build_graph(10, edges, Matrix::Ones(10, 1), labels, 2);

  SeparationCertificate cert;
  cert.kind = "group_separation";
  cert.graph = g;
  cert.group_a = attach_a;
  cert.group_b = attach_b;

  const Coloring stable = wl_refine(g, label_colors(g));
  const int white = stable.colors[0];
  for (int v = 0; v < 8; ++v)
    if (stable.colors[static_cast<size_t>(v)] != white)
      throw CertificationError("cycle nodes do not share a stable color");
  if (stable.colors[8] == white || stable.colors[9] == white ||
      stable.colors[8] != stable.colors[9])
    throw CertificationError("hub coloring is inconsistent");
  cert.shared_wl_color = true;
  cert.shared_color = white;
  cert.wl_rounds_used = stable.rounds_to_stability;

  const std::vector<std::vector<int>> autos = enumerate_automorphisms(g);
  if (autos.empty()) throw CertificationError("automorphism search found no identity");
  const std::set<int> bset(attach_b.begin(), attach_b.end());
  for (const std::vector<int>& sigma : autos) {
    std::set<int> image;
    for (int v : attach_a) image.insert(sigma[static_cast<size_t>(v)]);
    if (image == bset)
      throw CertificationError("an automorphism maps group A onto group B");
  }
  cert.automorphisms_checked = static_cast<int>(autos.size());
  cert.groups_non_isomorphic = true;
  return cert;
}

SeparationCertificate make_local_isomorphism_graph(int d) {
  if (d < 1 || d > 2) throw ParameterError("egonet radius must be 1 or 2");
  SeparationCertificate cert;
  for (int n = 4; n <= 12; ++n) {
    if (try_certify_pair(make_path_graph(n, -1), d, cert)) return cert;
    for (int i = 1; i + 2 < n; ++i)
      if (try_certify_pair(make_path_graph(n, i), d, cert)) return cert;
  }
  throw CertificationError("no certified pair found in the bounded graph family");
}

}  // namespace clgnn
