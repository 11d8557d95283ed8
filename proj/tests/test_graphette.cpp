#include <doctest.h>

#include <random>

#include "graphette/errors.hpp"
#include "graphette/graphette.hpp"
#include "graphette/host_graph.hpp"
#include "oracles.hpp"

using namespace graphette;

namespace {

Permutation random_permutation(int k, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return Permutation(p);
}

std::uint64_t random_bits(int k, std::mt19937_64& rng) {
  const int b = bit_count(k);
  return b == 0 ? 0 : rng() & ((std::uint64_t{1} << b) - 1);
}

}  // namespace

TEST_CASE("encode follows the lower-triangle layout") {
  const std::vector<NodePair> triangle{{0, 1}, {0, 2}, {1, 2}};
  CHECK(encode(3, triangle).bits() == 7);
  CHECK(encode(4, {}).bits() == 0);
  const std::vector<NodePair> one{{1, 2}};
  CHECK(encode(3, one).bits() == 4);
  CHECK(pair_position(2, 1) == 2);
  CHECK(bit_count(8) == 28);
  CHECK(bit_count(12) == 66);
}

TEST_CASE("encode rejects bad edges") {
  const std::vector<NodePair> out_of_range{{0, 3}};
  CHECK_THROWS_AS(encode(3, out_of_range), ArgumentError);
  const std::vector<NodePair> loop{{1, 1}};
  CHECK_THROWS_AS(encode(3, loop), ArgumentError);
  CHECK_THROWS_AS(Graphette(3, 8), ArgumentError);
  CHECK_THROWS_AS(Graphette(0, 0), ArgumentError);
  CHECK_THROWS_AS(Graphette(13, 0), ArgumentError);
}

TEST_CASE("decode") {
  CHECK(decode(Graphette(3, 7)) == std::vector<NodePair>{{1, 0}, {2, 0}, {2, 1}});
  CHECK(decode(Graphette(3, 0)).empty());
  CHECK(decode(Graphette(3, 4)) == std::vector<NodePair>{{2, 1}});
}

TEST_CASE("encode/decode round trip, exhaustive for k <= 6") {
  for (int k = 1; k <= 6; ++k) {
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << bit_count(k)); ++b) {
      const Graphette g(k, b);
      const auto edges = decode(g);
      REQUIRE(encode(k, edges) == g);
      REQUIRE(static_cast<int>(edges.size()) == g.edge_count());
    }
  }
}

TEST_CASE("k = 12 uses bits above 64") {
  const std::vector<NodePair> top{{11, 10}};
  const Graphette g = encode(12, top);
  CHECK(g.bits() == BitWord{1} << 65);
  CHECK(decode(g) == std::vector<NodePair>{{11, 10}});
  CHECK(complement(complement(g)) == g);
  CHECK(complement(Graphette(12, 0)).edge_count() == 66);
}

TEST_CASE("apply_permutation") {
  const Permutation reverse{2, 1, 0};
  CHECK(apply_permutation(Graphette(3, 1), reverse).bits() == 4);
  CHECK(oracle::relabel(3, 1, {2, 1, 0}) == 4);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto pi = random_permutation(3, rng);
    CHECK(apply_permutation(Graphette(3, 7), pi).bits() == 7);
  }
  CHECK_THROWS_AS(apply_permutation(Graphette(3, 1), Permutation::identity(4)), ArgumentError);
}

TEST_CASE("apply_permutation agrees with edge relabeling") {
  std::mt19937_64 rng(11);
  for (int k = 2; k <= 8; ++k) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto bits = random_bits(k, rng);
      const auto pi = random_permutation(k, rng);
      REQUIRE(apply_permutation(Graphette(k, bits), pi).code() == oracle::relabel(k, bits, pi.images()));
    }
  }
}

TEST_CASE("permutation action is a group action") {
  std::mt19937_64 rng(3);
  for (int k = 1; k <= 10; ++k) {
    for (int trial = 0; trial < 100; ++trial) {
      const Graphette g(k, random_bits(k, rng));
      const auto pi = random_permutation(k, rng);
      const auto sigma = random_permutation(k, rng);
      REQUIRE(apply_permutation(g, compose(pi, sigma)) ==
              apply_permutation(apply_permutation(g, sigma), pi));
      REQUIRE(apply_permutation(g, Permutation::identity(k)) == g);
      REQUIRE(apply_permutation(apply_permutation(g, pi), pi.inverse()) == g);
      const Graphette h = apply_permutation(g, pi);
      REQUIRE(degree_sequence(h) == degree_sequence(g));
      REQUIRE(is_connected(h) == is_connected(g));
    }
  }
}

TEST_CASE("permutation validation and ordering") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), ArgumentError);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), ArgumentError);
  CHECK(Permutation({1, 0, 2}) < Permutation({1, 2, 0}));
  CHECK(Permutation::identity(5).is_identity());
  const Permutation p{2, 0, 1};
  CHECK(compose(p, p.inverse()).is_identity());
  CHECK(p.to_string() == "2,0,1");
}

TEST_CASE("degree_sequence") {
  CHECK(degree_sequence(Graphette(3, 7)) == std::vector<int>{2, 2, 2});
  CHECK(degree_sequence(Graphette(3, 1)) == std::vector<int>{0, 1, 1});
  CHECK(degree_sequence(Graphette(4, 0)) == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("is_connected") {
  CHECK(is_connected(Graphette(3, 7)));
  CHECK_FALSE(is_connected(Graphette(3, 1)));
  CHECK(is_connected(Graphette(1, 0)));
  for (int k = 1; k <= 5; ++k) {
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << bit_count(k)); ++b) {
      REQUIRE(is_connected(Graphette(k, b)) == oracle::connected(k, b));
    }
  }
}

TEST_CASE("complement") {
  CHECK(complement(Graphette(3, 0)).bits() == 7);
  CHECK(complement(Graphette(3, 5)).bits() == 2);
  for (int k = 1; k <= 5; ++k) {
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << bit_count(k)); ++b) {
      const Graphette g(k, b);
      REQUIRE(complement(complement(g)) == g);
      auto d = degree_sequence(g);
      auto dc = degree_sequence(complement(g));
      std::reverse(d.begin(), d.end());
      for (std::size_t i = 0; i < d.size(); ++i) REQUIRE(dc[i] == k - 1 - d[i]);
      int degree_sum = 0;
      for (int x : d) degree_sum += x;
      REQUIRE(2 * g.edge_count() == degree_sum);
    }
  }
}

TEST_CASE("induced_bits") {
  const std::vector<std::pair<NodeId, NodeId>> c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const HostGraph cycle(4, c4);
  const std::vector<NodeId> first3{0, 1, 2};
  const Graphette g = induced_bits(cycle, first3);
  CHECK(g.bits() == 5);
  CHECK(decode(g) == std::vector<NodePair>{{1, 0}, {2, 1}});

  std::vector<std::pair<NodeId, NodeId>> k5;
  for (NodeId a = 0; a < 5; ++a)
    for (NodeId b = a + 1; b < 5; ++b) k5.emplace_back(a, b);
  const HostGraph complete(5, k5);
  const std::vector<NodeId> some{4, 1, 3};
  CHECK(induced_bits(complete, some).bits() == 7);

  const HostGraph empty(6, std::span<const std::pair<NodeId, NodeId>>{});
  const std::vector<NodeId> four{5, 0, 2, 3};
  CHECK(induced_bits(empty, four).bits() == 0);

  const std::vector<NodeId> dup{0, 1, 0};
  CHECK_THROWS_AS(induced_bits(cycle, dup), ArgumentError);
  const std::vector<NodeId> far{0, 9};
  CHECK_THROWS_AS(induced_bits(cycle, far), ArgumentError);
}

TEST_CASE("host graph edge test and neighbor lists agree") {
  std::mt19937_64 rng(5);
  std::vector<std::pair<NodeId, NodeId>> edges;
  const NodeId n = 60;
  for (int i = 0; i < 400; ++i) {
    const NodeId a = static_cast<NodeId>(rng() % n), b = static_cast<NodeId>(rng() % n);
    if (a != b) edges.emplace_back(a, b);
  }
  const HostGraph g(n, edges);
  std::set<std::pair<NodeId, NodeId>> expected;
  for (auto [a, b] : edges) expected.insert({std::min(a, b), std::max(a, b)});
  CHECK(g.edge_count() == expected.size());
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = 0; b < n; ++b) {
      const bool e = expected.count({std::min(a, b), std::max(a, b)}) > 0;
      REQUIRE(g.has_edge(a, b) == e);
      REQUIRE(g.has_edge(b, a) == e);
    }
    for (NodeId v : g.neighbors(a)) REQUIRE(g.has_edge(a, v));
  }
  const std::vector<std::pair<NodeId, NodeId>> loop{{2, 2}};
  CHECK_THROWS_AS(HostGraph(3, loop), ArgumentError);
}
