#include <doctest.h>

#include <random>
#include <set>

#include "graphette/canonizer.hpp"
#include "graphette/errors.hpp"
#include "graphette/orbits.hpp"
#include "oracles.hpp"

using namespace graphette;

namespace {

Graphette complete(int k) { return complement(Graphette(k, 0)); }

Graphette path(int k) {
  std::vector<NodePair> e;
  for (int i = 1; i < k; ++i) e.emplace_back(i, i - 1);
  return encode(k, e);
}

Graphette cycle(int k) {
  std::vector<NodePair> e;
  for (int i = 0; i < k; ++i) e.emplace_back(i, (i + 1) % k);
  return encode(k, e);
}

Graphette petersen() {
  std::vector<NodePair> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);          // outer cycle
    e.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    e.emplace_back(i, 5 + i);                // spokes
  }
  return encode(10, e);
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

}  // namespace

TEST_CASE("automorphism group sizes") {
  CHECK(generate_automorphisms(Graphette(3, 7)).size() == 6);
  const auto one_edge = generate_automorphisms(Graphette(3, 1));
  REQUIRE(one_edge.size() == 2);
  CHECK(one_edge.perms[0].is_identity());
  CHECK(one_edge.perms[1] == Permutation({1, 0, 2}));
  for (int k = 1; k <= 8; ++k) {
    CHECK(generate_automorphisms(complete(k)).size() == factorial(k));
    CHECK(generate_automorphisms(Graphette(k, 0)).size() == factorial(k));
    if (k >= 2) CHECK(generate_automorphisms(path(k)).size() == 2);
    if (k >= 3) CHECK(generate_automorphisms(cycle(k)).size() == 2 * static_cast<std::uint64_t>(k));
  }
  CHECK(generate_automorphisms(petersen()).size() == 120);
  CHECK_THROWS_AS(generate_automorphisms(Graphette(11, 0)), ArgumentError);
}

TEST_CASE("Petersen automorphism count against brute force") {
  // 10! permutations checked one by one
  const Graphette g = petersen();
  std::vector<int> p(10);
  std::iota(p.begin(), p.end(), 0);
  std::size_t count = 0;
  do {
    if (apply_permutation(g, Permutation(p)) == g) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(count == 120);
}

TEST_CASE("automorphism sets match brute force and form groups, k <= 6") {
  for (int k = 1; k <= 6; ++k) {
    const auto catalog = build_canonical_map_sequential(k).catalog;
    for (auto bits : catalog.canonicals) {
      const Graphette g(k, bits);
      const auto auts = generate_automorphisms(g);
      std::set<std::vector<int>> got;
      for (const auto& pi : auts.perms) {
        REQUIRE(apply_permutation(g, pi) == g);
        got.insert(pi.images());
      }
      const auto brute = oracle::automorphisms(k, bits);
      REQUIRE(got == std::set<std::vector<int>>(brute.begin(), brute.end()));
      REQUIRE(got.count(Permutation::identity(k).images()) == 1);
      for (const auto& a : auts.perms) {
        REQUIRE(got.count(a.inverse().images()) == 1);
        for (const auto& b : auts.perms) REQUIRE(got.count(compose(a, b).images()) == 1);
      }
      REQUIRE(generate_automorphisms(complement(g)).size() == auts.size());
    }
  }
}

TEST_CASE("split_cycles") {
  const auto cs = split_cycles(Permutation({2, 0, 1, 3, 5, 4}));
  CHECK(cs.cycles == std::vector<std::vector<int>>{{0, 2, 1}, {3}, {4, 5}});
  CHECK(split_cycles(Permutation::identity(4)).cycles ==
        std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
  CHECK(split_cycles(Permutation({1, 0})).cycles == std::vector<std::vector<int>>{{0, 1}});
}

TEST_CASE("cycles are disjoint, cover all nodes and close within k steps") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 12);
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    const Permutation pi(p);
    std::vector<int> seen(static_cast<std::size_t>(k), 0);
    for (const auto& c : split_cycles(pi).cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        ++seen[static_cast<std::size_t>(c[i])];
        REQUIRE(pi[c[i]] == c[(i + 1) % c.size()]);
      }
    }
    for (int u = 0; u < k; ++u) {
      REQUIRE(seen[static_cast<std::size_t>(u)] == 1);
      int v = pi[u], steps = 1;
      while (v != u) v = pi[v], ++steps;
      REQUIRE(steps <= k);
    }
  }
}

TEST_CASE("enumerate_orbits examples") {
  const auto one_edge = orbit_partition(Graphette(3, 1));
  CHECK(one_edge.orbit_of == std::vector<int>{0, 0, 2});
  CHECK(one_edge.orbit_count == 2);
  CHECK(oracle::orbit_labels(3, 1) == one_edge.orbit_of);
  const auto tri = orbit_partition(Graphette(3, 7));
  CHECK(tri.orbit_of == std::vector<int>{0, 0, 0});
  for (int k = 1; k <= 7; ++k) CHECK(orbit_partition(Graphette(k, 0)).orbit_count == 1);
  CHECK(orbit_partition(petersen()).orbit_count == 1);
  CHECK_THROWS_AS(enumerate_orbits(Graphette(3, 1), generate_automorphisms(Graphette(3, 3))),
                  ArgumentError);
}

TEST_CASE("orbit partitions equal the brute-force reachability relation, k <= 6") {
  for (int k = 1; k <= 6; ++k) {
    const auto catalog = build_canonical_map_sequential(k).catalog;
    for (auto bits : catalog.canonicals) {
      const Graphette g(k, bits);
      const auto auts = generate_automorphisms(g);
      const auto part = enumerate_orbits(g, auts);
      REQUIRE(part.orbit_of == oracle::orbit_labels(k, bits));
      REQUIRE(part.orbit_of == orbit_partition(complement(g)).orbit_of);
      for (int u = 0; u < k; ++u) {
        REQUIRE(part.orbit_of[static_cast<std::size_t>(u)] <= u);
        for (const auto& pi : auts.perms) {
          REQUIRE(part.orbit_of[static_cast<std::size_t>(pi[u])] == part.orbit_of[static_cast<std::size_t>(u)]);
        }
      }
      // each cycle sits inside one orbit
      for (const auto& pi : auts.perms) {
        for (const auto& c : split_cycles(pi).cycles) {
          for (int u : c) REQUIRE(part.orbit_of[static_cast<std::size_t>(u)] == part.orbit_of[static_cast<std::size_t>(c[0])]);
        }
      }
    }
  }
}

TEST_CASE("global orbit numbering") {
  const std::uint32_t expected[] = {0, 1, 2, 6, 20, 90, 544};
  for (int k = 1; k <= 6; ++k) {
    const auto catalog = build_canonical_map_sequential(k).catalog;
    const auto index = compute_orbit_index(catalog, 2);
    CHECK(index.total_orbits() == expected[k]);
  }
  const auto catalog3 = build_canonical_map_sequential(3).catalog;
  const auto index3 = compute_orbit_index(catalog3);
  std::vector<std::uint32_t> per;
  for (std::uint32_t c = 0; c < 4; ++c) per.push_back(index3.orbit_count(c));
  CHECK(per == std::vector<std::uint32_t>{1, 2, 2, 1});
  CHECK(index3.base(1) == 1);
  CHECK(index3.global_orbit(1, 2) == 2);
  CHECK(index3.global_orbit(2, 0) == 3);
  CHECK(index3.global_orbit(2, 1) == 4);
  CHECK(index3.describe(4) == std::pair<std::uint32_t, int>{2, 1});
  for (std::uint32_t o = 0; o < index3.total_orbits(); ++o) {
    const auto [c, label] = index3.describe(o);
    CHECK(index3.global_orbit(c, label) == o);
  }

  std::vector<OrbitPartition> missing;
  CHECK_THROWS_AS(assign_global_orbit_ids(catalog3, missing), ArgumentError);
}
