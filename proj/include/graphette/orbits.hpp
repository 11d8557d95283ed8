#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graphette/canonizer.hpp"
#include "graphette/graphette.hpp"

namespace graphette {

/// Largest order generate_automorphisms accepts.
inline constexpr int kMaxAutomorphismOrder = 10;

struct AutomorphismSet {
  Graphette g;
  std::vector<Permutation> perms;

  std::size_t size() const { return perms.size(); }
};

/// Disjoint cycles of one permutation, each starting at its smallest node.
struct CycleSet {
  std::vector<std::vector<int>> cycles;

  friend bool operator==(const CycleSet&, const CycleSet&) = default;
};

/// orbit_of[u] is the smallest node in u's automorphism orbit.
struct OrbitPartition {
  Graphette g;
  std::vector<int> orbit_of;
  int orbit_count = 0;

  /// Distinct labels, ascending.
  std::vector<int> labels() const;
  /// Nodes grouped by orbit, orbits ordered by label.
  std::vector<std::vector<int>> orbits() const;
};

/// Every permutation fixing g. Searches only degree-preserving maps, on
/// whichever of g and its complement has fewer edges.
AutomorphismSet generate_automorphisms(const Graphette& g);

CycleSet split_cycles(const Permutation& pi);

/// Merges the cycles of all automorphisms by repeated minimum-colour sweeps
/// until no colour changes.
OrbitPartition enumerate_orbits(const Graphette& g, const AutomorphismSet& auts);

OrbitPartition orbit_partition(const Graphette& g);

/// Global orbit numbering across a catalog: canonicals in ID order, local
/// orbits by their minimum node, consecutive IDs.
class GlobalOrbitIndex {
 public:
  GlobalOrbitIndex() = default;
  /// labels[c][u] = local orbit label (minimum orbit member) of node u in canonical c.
  GlobalOrbitIndex(int k, std::vector<std::vector<std::uint8_t>> labels);

  int order() const { return k_; }
  std::size_t canonical_count() const { return labels_.size(); }
  std::uint32_t total_orbits() const { return total_; }
  std::uint32_t base(std::uint32_t canonical) const { return base_.at(canonical); }
  std::uint32_t orbit_count(std::uint32_t canonical) const;
  std::span<const std::uint8_t> labels(std::uint32_t canonical) const { return labels_.at(canonical); }

  std::uint32_t global_orbit(std::uint32_t canonical, int node) const {
    return base_[canonical] + rank_[canonical][static_cast<std::size_t>(node)];
  }

  /// (canonical id, local label) owning a global orbit.
  std::pair<std::uint32_t, int> describe(std::uint32_t orbit) const;

  friend bool operator==(const GlobalOrbitIndex& a, const GlobalOrbitIndex& b) {
    return a.k_ == b.k_ && a.labels_ == b.labels_;
  }

 private:
  int k_ = 0;
  std::vector<std::vector<std::uint8_t>> labels_;
  std::vector<std::vector<std::uint8_t>> rank_;
  std::vector<std::uint32_t> base_;
  std::uint32_t total_ = 0;
};

GlobalOrbitIndex assign_global_orbit_ids(const CanonicalCatalog& catalog,
                                         std::span<const OrbitPartition> partitions);

/// Orbit partitions for every canonical, then global numbering.
GlobalOrbitIndex compute_orbit_index(const CanonicalCatalog& catalog, unsigned workers = 1);

}  // namespace graphette
