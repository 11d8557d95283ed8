#include "graphette/orbits.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>

#include "graphette/errors.hpp"
#include "permutation_search.hpp"

namespace graphette {

std::vector<int> OrbitPartition::labels() const {
  std::vector<int> out(orbit_of);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<int>> OrbitPartition::orbits() const {
  const auto ls = labels();
  std::vector<std::vector<int>> out(ls.size());
  for (int u = 0; u < static_cast<int>(orbit_of.size()); ++u) {
    const auto pos = std::lower_bound(ls.begin(), ls.end(), orbit_of[static_cast<std::size_t>(u)]) - ls.begin();
    out[static_cast<std::size_t>(pos)].push_back(u);
  }
  return out;
}

AutomorphismSet generate_automorphisms(const Graphette& g) {
  if (g.order() > kMaxAutomorphismOrder) {
    throw ArgumentError("generate_automorphisms supports k <= " +
                        std::to_string(kMaxAutomorphismOrder) + ", got " +
                        std::to_string(g.order()));
  }
  // Aut(g) = Aut(complement(g)); search the sparser one.
  const Graphette target =
      2 * g.edge_count() > bit_count(g.order()) ? complement(g) : g;
  const AdjacencyRows rows = adjacency_rows(target);
  AutomorphismSet result{g, {}};
  detail::DegreeClassSearch search(rows, rows);
  search.run([&](const detail::ImageArray& img) {
    Permutation pi = Permutation::from_array(g.order(), img);
    if (apply_permutation(target, pi) == target) result.perms.push_back(pi);
    return false;
  });
  return result;
}

CycleSet split_cycles(const Permutation& pi) {
  CycleSet out;
  unsigned visited = 0;
  for (int u = 0; u < pi.size(); ++u) {
    if (visited >> u & 1u) continue;
    visited |= 1u << u;
    std::vector<int> cycle{u};
    for (int v = pi[u]; v != u; v = pi[v]) {
      cycle.push_back(v);
      visited |= 1u << v;
    }
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

OrbitPartition enumerate_orbits(const Graphette& g, const AutomorphismSet& auts) {
  if (!(auts.g == g)) throw ArgumentError("enumerate_orbits: automorphisms belong to another graphette");
  const int k = g.order();
  std::vector<std::vector<int>> cycles;
  for (const auto& pi : auts.perms) {
    if (pi.size() != k) throw ArgumentError("enumerate_orbits: automorphism of wrong size");
    for (auto& c : split_cycles(pi).cycles) {
      if (c.size() > 1) cycles.push_back(std::move(c));
    }
  }
  std::vector<int> colour(static_cast<std::size_t>(k));
  for (int u = 0; u < k; ++u) colour[static_cast<std::size_t>(u)] = u;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : cycles) {
      int lowest = k;
      for (int u : c) lowest = std::min(lowest, colour[static_cast<std::size_t>(u)]);
      for (int u : c) {
        if (colour[static_cast<std::size_t>(u)] != lowest) {
          colour[static_cast<std::size_t>(u)] = lowest;
          changed = true;
        }
      }
    }
  }
  OrbitPartition out{g, std::move(colour), 0};
  out.orbit_count = static_cast<int>(out.labels().size());
  return out;
}

OrbitPartition orbit_partition(const Graphette& g) {
  return enumerate_orbits(g, generate_automorphisms(g));
}

GlobalOrbitIndex::GlobalOrbitIndex(int k, std::vector<std::vector<std::uint8_t>> labels)
    : k_(k), labels_(std::move(labels)) {
  base_.reserve(labels_.size());
  rank_.reserve(labels_.size());
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    const auto& l = labels_[c];
    if (static_cast<int>(l.size()) != k) {
      throw ArgumentError("orbit labels for canonical " + std::to_string(c) + " have " +
                          std::to_string(l.size()) + " entries, expected " + std::to_string(k));
    }
    for (int u = 0; u < k; ++u) {
      const int lab = l[static_cast<std::size_t>(u)];
      if (lab > u || l[static_cast<std::size_t>(lab)] != lab) {
        throw ArgumentError("orbit labels for canonical " + std::to_string(c) +
                            " are not minimum-member labels");
      }
    }
    // rank of a label = number of distinct labels below it
    std::vector<std::uint8_t> rank(static_cast<std::size_t>(k));
    std::uint8_t next = 0;
    std::vector<std::uint8_t> rank_of_label(static_cast<std::size_t>(k), 0);
    for (int u = 0; u < k; ++u) {
      if (l[static_cast<std::size_t>(u)] == u) rank_of_label[static_cast<std::size_t>(u)] = next++;
    }
    for (int u = 0; u < k; ++u) rank[static_cast<std::size_t>(u)] = rank_of_label[l[static_cast<std::size_t>(u)]];
    base_.push_back(total_);
    total_ += next;
    rank_.push_back(std::move(rank));
  }
}

std::uint32_t GlobalOrbitIndex::orbit_count(std::uint32_t canonical) const {
  const std::uint32_t end = canonical + 1 < base_.size() ? base_[canonical + 1] : total_;
  return end - base_.at(canonical);
}

std::pair<std::uint32_t, int> GlobalOrbitIndex::describe(std::uint32_t orbit) const {
  if (orbit >= total_) throw ArgumentError("orbit id " + std::to_string(orbit) + " out of range");
  const auto it = std::upper_bound(base_.begin(), base_.end(), orbit);
  const auto c = static_cast<std::uint32_t>(it - base_.begin() - 1);
  const std::uint32_t want = orbit - base_[c];
  for (int u = 0; u < k_; ++u) {
    if (labels_[c][static_cast<std::size_t>(u)] == u && rank_[c][static_cast<std::size_t>(u)] == want) return {c, u};
  }
  throw ArgumentError("orbit id " + std::to_string(orbit) + " has no owner");
}

GlobalOrbitIndex assign_global_orbit_ids(const CanonicalCatalog& catalog,
                                         std::span<const OrbitPartition> partitions) {
  if (partitions.size() != catalog.size()) {
    throw ArgumentError("assign_global_orbit_ids: " + std::to_string(partitions.size()) +
                        " orbit partitions for " + std::to_string(catalog.size()) +
                        " canonicals");
  }
  std::vector<std::vector<std::uint8_t>> labels;
  labels.reserve(partitions.size());
  for (std::uint32_t c = 0; c < catalog.size(); ++c) {
    const auto& part = partitions[c];
    if (!(part.g == catalog.graphette(c))) {
      throw ArgumentError("assign_global_orbit_ids: partition " + std::to_string(c) +
                          " does not belong to canonical " + std::to_string(catalog.canonicals[c]));
    }
    labels.emplace_back(part.orbit_of.begin(), part.orbit_of.end());
  }
  return GlobalOrbitIndex(catalog.k, std::move(labels));
}

GlobalOrbitIndex compute_orbit_index(const CanonicalCatalog& catalog, unsigned workers) {
  std::vector<OrbitPartition> parts(catalog.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next++; c < parts.size(); c = next++) {
      parts[c] = orbit_partition(catalog.graphette(static_cast<std::uint32_t>(c)));
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(parts.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return assign_global_orbit_ids(catalog, parts);
}

}  // namespace graphette
