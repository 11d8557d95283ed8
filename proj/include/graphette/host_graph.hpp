#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphette/graphette.hpp"

namespace graphette {

using NodeId = std::uint32_t;

/// Undirected simple graph with O(1) expected edge tests and sorted
/// neighbor lists. Immutable after construction.
class HostGraph {
 public:
  HostGraph() = default;
  /// Duplicate edges are collapsed. Throws ArgumentError on self-loops or
  /// endpoints >= n.
  HostGraph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
            std::vector<std::string> names = {});

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(NodeId u, NodeId v) const;
  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  /// Edges with first < second, ascending.
  std::span<const std::pair<NodeId, NodeId>> edges() const { return edges_; }
  /// Cache hint for a later induced_bits(nodes); no observable effect.
  void prefetch_induced(std::span<const NodeId> nodes) const;
  /// Node name from the input file, or the decimal label.
  std::string name(NodeId u) const;

 private:
  friend Graphette induced_bits(const HostGraph&, std::span<const NodeId>);
  std::uint64_t slot_of(NodeId u, NodeId v) const;
  bool probe(std::uint64_t key, std::uint64_t start) const;
  static std::uint64_t key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::uint64_t> slots_;  // open addressing, kEmpty marks free
  std::uint64_t slot_mask_ = 0;
  std::vector<std::string> names_;
};

/// Graphette induced on `nodes` (position i of the array is graphette node i).
/// O(k^2) edge tests.
Graphette induced_bits(const HostGraph& g, std::span<const NodeId> nodes);

}  // namespace graphette
