#include "clgnn/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "clgnn/graph_io.hpp"
#include "clgnn/sbm.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace clgnn;
using namespace clgnn::testing;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "clgnn_graph_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("build_graph symmetrizes, deduplicates, and drops self-loops") {
  const Graph g = build_graph(3, {{0, 1}, {1, 0}, {0, 1}, {2, 2}}, Matrix::Zero(3, 1),
                              {0, 1, -1}, 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 1);
  CHECK(g.degree(2) == 0);
  CHECK(g.neighbors(0)[0] == 1);
  CHECK(g.neighbors(1)[0] == 0);
}

TEST_CASE("sym_norm_propagate closed forms") {
  const Graph k3 = build_graph(3, {{0, 1}, {1, 2}, {0, 2}}, Matrix::Ones(3, 1),
                               {-1, -1, -1}, 2);
  const Matrix out = sym_norm_propagate(k3, Matrix::Ones(3, 1));
  for (int v = 0; v < 3; ++v) CHECK(out(v, 0) == doctest::Approx(1.0).epsilon(1e-12));

  const Graph lone = build_graph(1, {}, Matrix::Constant(1, 1, 7.5), {-1}, 2);
  const Matrix self = sym_norm_propagate(lone, lone.features);
  CHECK(self(0, 0) == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("sym_norm_propagate matches the dense oracle") {
  Rng rng(101);
  const Graph g = random_graph(8, 0.4, rng, 3);
  const Matrix h = random_matrix(8, 3, rng);
  const Matrix got = sym_norm_propagate(g, h);
  const Matrix want = dense_propagate(g, h);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(sym_norm_propagate(g, Matrix::Zero(5, 3)), DimensionError);
}

TEST_CASE("sym_norm_propagate is permutation-equivariant") {
  Rng rng(102);
  const Graph g = random_graph(7, 0.5, rng, 2);
  const Matrix h = random_matrix(7, 2, rng);
  const Matrix base = sym_norm_propagate(g, h);

  std::vector<int> perm(7);
  for (int i = 0; i < 7; ++i) perm[static_cast<size_t>(i)] = i;
  rng.shuffle(perm);

  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < 7; ++v)
    for (int u : g.neighbors(v))
      if (v < u) edges.push_back({perm[static_cast<size_t>(v)], perm[static_cast<size_t>(u)]});
  Matrix ph(7, 2);
  std::vector<int> labels(7, -1);
  for (int v = 0; v < 7; ++v) ph.row(perm[static_cast<size_t>(v)]) = h.row(v);
  const Graph pg = build_graph(7, edges, ph, labels, 2);
  const Matrix got = sym_norm_propagate(pg, ph);
  for (int v = 0; v < 7; ++v)
    CHECK((got.row(perm[static_cast<size_t>(v)]) - base.row(v)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mean_neighbor_aggregate star and isolated conventions") {
  Matrix features(4, 2);
  features << 0, 0, 3, 1, 3, 1, 3, 1;
  const Graph star =
      build_graph(4, {{0, 1}, {0, 2}, {0, 3}}, features, {-1, -1, -1, -1}, 2);
  Rng rng(7);
  const MeanAggregate agg = mean_neighbor_aggregate(star, star.features, 3, rng);
  CHECK(agg.values(0, 0) == doctest::Approx(3.0));
  CHECK(agg.values(0, 1) == doctest::Approx(1.0));

  const Graph lone = build_graph(2, {}, Matrix::Ones(2, 2), {-1, -1}, 2);
  const MeanAggregate zero = mean_neighbor_aggregate(lone, lone.features, 3, rng);
  CHECK(zero.values.row(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mean_neighbor_aggregate samples uniformly without replacement") {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= 10; ++v) edges.push_back({0, v});
  Matrix features = Matrix::Zero(11, 10);
  for (int v = 1; v <= 10; ++v) features(v, v - 1) = 1.0;  // indicator of neighbor id
  const Graph g = build_graph(11, edges, features, std::vector<int>(11, -1), 2);

  Rng rng(9);
  Vector counts = Vector::Zero(10);
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    const MeanAggregate agg = mean_neighbor_aggregate(g, g.features, 5, rng);
    CHECK(agg.sample_offsets[1] - agg.sample_offsets[0] == 5);
    counts += agg.values.row(0).transpose() * 5.0;  // mean of 5 indicators
  }
  for (int i = 0; i < 10; ++i) {
    const double freq = counts(i) / reps / 5.0;
    CHECK(freq > 0.08);
    CHECK(freq < 0.12);
  }
}

TEST_CASE("connected_component_sample on a path returns contiguous segments") {
  const Graph p10 = path_graph(10);
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> got = connected_component_sample(p10, 3, rng);
    std::sort(got.begin(), got.end());
    CHECK(got.size() == 3);
    CHECK(got[1] == got[0] + 1);
    CHECK(got[2] == got[1] + 1);
  }
  CHECK(connected_component_sample(p10, 1, rng).size() == 1);
}

TEST_CASE("connected_component_sample always yields connected induced subgraphs") {
  SynthSpec spec;
  spec.num_nodes = 80;
  spec.num_classes = 2;
  spec.communities = 2;
  spec.homophily = 0.9;
  spec.avg_degree = 8.0;
  Rng rng(17);
  const Graph g = synth_homophily(spec, rng);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<int> got = connected_component_sample(g, 20, rng);
    CHECK(got.size() == 20);
    CHECK(induced_connected(g, got));
    CHECK(std::set<int>(got.begin(), got.end()).size() == 20);
  }
}

TEST_CASE("connected_component_sample fails cleanly when impossible") {
  const Graph two_pairs =
      build_graph(4, {{0, 1}, {2, 3}}, Matrix::Ones(4, 1), {-1, -1, -1, -1}, 2);
  Rng rng(19);
  CHECK_THROWS_AS(connected_component_sample(two_pairs, 3, rng), SamplingError);
}

TEST_CASE("d_hop_egonet closed forms") {
  const Graph p5 = path_graph(5);

  const Egonet zero = d_hop_egonet(p5, 2, 0);
  CHECK(zero.graph.num_nodes == 1);
  CHECK(zero.graph.num_edges() == 0);
  CHECK(zero.original_nodes[0] == 2);

  const Egonet one = d_hop_egonet(p5, 2, 1);
  CHECK(one.graph.num_nodes == 3);
  CHECK(one.graph.num_edges() == 2);
  CHECK(one.original_nodes[static_cast<size_t>(one.center)] == 2);
  CHECK(one.graph.degree(one.center) == 2);
}

TEST_CASE("d_hop_egonet equals the BFS-distance oracle and grows monotonically") {
  Rng rng(23);
  const Graph g = random_graph(12, 0.3, rng);
  for (int v = 0; v < g.num_nodes; ++v) {
    const std::vector<int> dist = bfs_distances(g, v);
    size_t prev_size = 0;
    for (int d = 0; d <= 12; ++d) {
      const Egonet ego = d_hop_egonet(g, v, d);
      std::set<int> got(ego.original_nodes.begin(), ego.original_nodes.end());
      std::set<int> want;
      for (int u = 0; u < g.num_nodes; ++u)
        if (dist[static_cast<size_t>(u)] >= 0 && dist[static_cast<size_t>(u)] <= d)
          want.insert(u);
      CHECK(got == want);
      CHECK(got.size() >= prev_size);
      prev_size = got.size();
    }
  }
}

TEST_CASE("label_onehot marks exactly the requested nodes") {
  const Graph g =
      build_graph(3, {{0, 1}}, Matrix::Zero(3, 1), {1, 0, 1}, 2);
  const Matrix y = label_onehot(g, {0, 2});
  CHECK(y(0, 1) == 1.0);
  CHECK(y(0, 0) == 0.0);
  CHECK(y(1, 0) == 0.0);
  CHECK(y(1, 1) == 0.0);
  CHECK(y(2, 1) == 1.0);
}

TEST_CASE("validate_split rejects overlap and bad ids") {
  const Graph g = path_graph(6);
  SplitSpec bad;
  bad.train_labeled = {0, 1};
  bad.validation = {1};
  CHECK_THROWS_AS(validate_split(g, bad), ParameterError);
  SplitSpec range;
  range.train_labeled = {7};
  CHECK_THROWS_AS(validate_split(g, range), ParameterError);
}

TEST_CASE("load_graph round-trips and applies file conventions") {
  const auto dir = temp_dir();
  const std::string edges = (dir / "g.edges.tsv").string();
  const std::string features = (dir / "g.features.tsv").string();
  const std::string labels = (dir / "g.labels.tsv").string();

  write_file(edges, "0\t1\n1\t0\n0\t1\n");
  write_file(features, "1.5\t2\n-1\t0.25\n");
  write_file(labels, "0\t1\n");
  const Graph g = load_graph(edges, features, labels, 2);
  CHECK(g.num_nodes == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.neighbors(0)[0] == 1);
  CHECK(g.neighbors(1)[0] == 0);
  CHECK(g.features(0, 0) == 1.5);
  CHECK(g.labels[0] == 1);
  CHECK(g.labels[1] == -1);

  Rng rng(29);
  const Graph big = random_graph(15, 0.3, rng, 4, 3);
  save_graph(big, edges, features, labels);
  const Graph back = load_graph(edges, features, labels, 3);
  CHECK(same_graph(big, back));

  write_file(features, "1.5\tnope\n-1\t0.25\n");
  CHECK_THROWS_AS(load_graph(edges, features, labels, 2), ParseError);
}

TEST_CASE("split files round-trip") {
  SplitSpec split;
  split.train_labeled = {4, 1};
  split.validation = {2};
  split.test_eval = {0, 3};
  const auto path = (temp_dir() / "split.tsv").string();
  save_split(split, path);
  const SplitSpec back = load_split(path);
  CHECK(back.train_labeled == split.train_labeled);
  CHECK(back.validation == split.validation);
  CHECK(back.test_eval == split.test_eval);
  CHECK(back.test_labeled.empty());
}
