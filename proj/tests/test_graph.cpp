#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "gridopt/graph.hpp"
#include "support.hpp"

using namespace gridopt;

namespace {

std::vector<std::pair<int, int>> sorted_edge_pairs(const TreeGraph& tree) {
  std::vector<std::pair<int, int>> pairs;
  for (const WeightedEdge& e : tree.edges()) pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace

TEST_CASE("mst trivial and error cases") {
  const TreeGraph single = mst(1, [](int, int) { return 1.0; });
  REQUIRE(single.node_count() == 1);
  REQUIRE(single.edges().empty());
  REQUIRE(single.weight() == 0.0);
  REQUIRE(testutil::thrown_kind([] { mst(0, [](int, int) { return 1.0; }); }) ==
          ErrorKind::EmptyGraph);
  REQUIRE(testutil::thrown_kind([] {
            mst(3, [](int, int) { return -1.0; });
          }) == ErrorKind::InvalidArgument);
}

TEST_CASE("mst on three collinear nodes drops the dominated edge") {
  // distances 1, 1, 2: total weight 2
  const std::map<std::pair<int, int>, double> w{{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 2.0}};
  const TreeGraph tree = mst(3, [&](int a, int b) {
    return w.at({std::min(a, b), std::max(a, b)});
  });
  REQUIRE_THAT(tree.weight(), Catch::Matchers::WithinAbs(2.0, 1e-12));
  REQUIRE(sorted_edge_pairs(tree) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("mst equals the exhaustive spanning-tree minimum") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 5;
    std::vector<std::vector<double>> w(k, std::vector<double>(k, 0.0));
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        w[a][b] = w[b][a] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      }
    }
    const TreeGraph tree = mst(k, [&](int a, int b) { return w[a][b]; });

    const auto trees = testutil::all_spanning_trees(k);
    REQUIRE(trees.size() == 125);  // Cayley: 5^3
    double best = std::numeric_limits<double>::infinity();
    for (const auto& edges : trees) {
      double total = 0.0;
      for (const auto& [u, v] : edges) total += w[u][v];
      best = std::min(best, total);
    }
    REQUIRE_THAT(tree.weight(), Catch::Matchers::WithinAbs(best, kWeightTol));
  }
}

TEST_CASE("mst tie-break is lexicographic") {
  // all weights equal: Prim from node 0 must produce the star at 0
  const TreeGraph tree = mst(4, [](int, int) { return 1.0; });
  REQUIRE(sorted_edge_pairs(tree) == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}});
}

TEST_CASE("euler tour of a doubled path") {
  Multigraph g(3);
  for (int repeat = 0; repeat < 2; ++repeat) {
    g.add_edge(0, 1);
    g.add_edge(1, 2);
  }
  REQUIRE(euler_tour(g, 0) == std::vector<int>{0, 1, 2, 1, 0});
}

TEST_CASE("euler tour of a doubled star, sorted adjacency") {
  Multigraph g(4);
  for (int leaf : {1, 2, 3}) {
    g.add_edge(0, leaf);
    g.add_edge(0, leaf);
  }
  REQUIRE(euler_tour(g, 0) == std::vector<int>{0, 1, 0, 2, 0, 3, 0});
}

TEST_CASE("euler tour of a doubled random tree uses each edge twice") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 8;
    std::vector<int> sequence(k - 2);
    for (int& s : sequence) s = static_cast<int>(rng() % k);
    const TreeGraph tree = decode_prufer_sequence(k, sequence);
    Multigraph doubled(k);
    for (const WeightedEdge& e : tree.edges()) {
      doubled.add_edge(e.u, e.v);
      doubled.add_edge(e.u, e.v);
    }
    const std::vector<int> walk = euler_tour(doubled, 0);
    REQUIRE(walk.size() == 2 * (k - 1) + 1);
    REQUIRE(walk.front() == 0);
    REQUIRE(walk.back() == 0);
    std::map<std::pair<int, int>, int> used;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
      ++used[{std::min(walk[i], walk[i + 1]), std::max(walk[i], walk[i + 1])}];
    }
    for (const WeightedEdge& e : tree.edges()) {
      REQUIRE(used[{std::min(e.u, e.v), std::max(e.u, e.v)}] == 2);
    }
  }
}

TEST_CASE("euler tour rejects bad inputs") {
  Multigraph odd(3);
  odd.add_edge(0, 1);
  odd.add_edge(1, 2);
  REQUIRE(testutil::thrown_kind([&] { euler_tour(odd, 0); }) == ErrorKind::NotEulerian);

  Multigraph disconnected(4);
  disconnected.add_edge(0, 1);
  disconnected.add_edge(0, 1);
  disconnected.add_edge(2, 3);
  disconnected.add_edge(2, 3);
  REQUIRE(testutil::thrown_kind([&] { euler_tour(disconnected, 0); }) == ErrorKind::NotEulerian);

  Multigraph isolated_start(3);
  isolated_start.add_edge(1, 2);
  isolated_start.add_edge(1, 2);
  REQUIRE(testutil::thrown_kind([&] { euler_tour(isolated_start, 0); }) == ErrorKind::NotEulerian);

  Multigraph empty(2);
  REQUIRE(euler_tour(empty, 1) == std::vector<int>{1});

  REQUIRE(testutil::thrown_kind([] { Multigraph g(2); g.add_edge(0, 0); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("prufer stream counts and validity") {
  {
    PruferTreeStream stream(2);
    int count = 0;
    while (auto tree = stream.next()) ++count;
    REQUIRE(count == 1);
  }
  {
    PruferTreeStream stream(4);
    std::set<std::vector<std::pair<int, int>>> distinct;
    while (auto tree = stream.next()) distinct.insert(sorted_edge_pairs(*tree));
    REQUIRE(distinct.size() == 16);  // Cayley: 4^2
  }
  {
    PruferTreeStream stream(6);
    std::set<std::vector<std::pair<int, int>>> distinct;
    int count = 0;
    while (auto tree = stream.next()) {
      ++count;
      REQUIRE(tree->node_count() == 6);
      REQUIRE(tree->edges().size() == 5);
      REQUIRE(degree_identity_check(*tree));
      distinct.insert(sorted_edge_pairs(*tree));
    }
    REQUIRE(count == 1296);  // Cayley: 6^4
    REQUIRE(distinct.size() == 1296);
    REQUIRE(PruferTreeStream::tree_count(6) == 1296);
  }
}

TEST_CASE("prufer stream argument checks") {
  REQUIRE(testutil::thrown_kind([] { PruferTreeStream stream(9); }) == ErrorKind::CapExceeded);
  REQUIRE(testutil::thrown_kind([] { PruferTreeStream stream(1); }) == ErrorKind::InvalidArgument);
  PruferTreeStream raised_cap(9, 9);
  REQUIRE(raised_cap.next().has_value());
}

TEST_CASE("degree identity on paths and stars") {
  std::vector<WeightedEdge> path;
  for (int v = 0; v + 1 < 5; ++v) path.push_back({v, v + 1, 1.0});
  REQUIRE(degree_identity_check(TreeGraph(5, path)));

  std::vector<WeightedEdge> star;
  for (int leaf = 1; leaf < 5; ++leaf) star.push_back({0, leaf, 1.0});
  REQUIRE(degree_identity_check(TreeGraph(5, star)));
}

TEST_CASE("tree graph validation") {
  REQUIRE(testutil::thrown_kind([] {
            TreeGraph(3, {{0, 1, 1.0}});
          }) == ErrorKind::InvalidArgument);
  REQUIRE(testutil::thrown_kind([] {
            TreeGraph(4, {{0, 1, 1.0}, {0, 1, 1.0}, {2, 3, 1.0}});
          }) == ErrorKind::InvalidArgument);
  REQUIRE(testutil::thrown_kind([] {
            TreeGraph(2, {{0, 1, -0.5}});
          }) == ErrorKind::InvalidArgument);
}
