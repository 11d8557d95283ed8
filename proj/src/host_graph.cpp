#include "graphette/host_graph.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "graphette/errors.hpp"
#include "memory_hints.hpp"

namespace graphette {

namespace {

constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

}  // namespace

HostGraph::HostGraph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                     std::vector<std::string> names)
    : names_(std::move(names)) {
  if (!names_.empty() && names_.size() != n) {
    throw ArgumentError("host graph: " + std::to_string(names_.size()) + " names for " +
                        std::to_string(n) + " nodes");
  }
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) {
      throw ArgumentError("host graph: edge endpoint out of range 0.." + std::to_string(n));
    }
    if (u == v) throw ArgumentError("host graph: self-loop on node " + std::to_string(u));
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  offsets_.assign(n + 1, 0);
  for (auto [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges_) {
    adjacency_[fill[u]++] = v;
    adjacency_[fill[v]++] = u;
  }
  for (std::size_t u = 0; u < n; ++u) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]));
  }

  const std::size_t capacity = std::bit_ceil(std::max<std::size_t>(16, 2 * edges_.size()));
  detail::reserve_huge(slots_, capacity);
  slots_.assign(capacity, kEmpty);
  slot_mask_ = capacity - 1;
  for (auto [u, v] : edges_) {
    const std::uint64_t k = key(u, v);
    std::uint64_t i = mix(k) & slot_mask_;
    while (slots_[i] != kEmpty) i = (i + 1) & slot_mask_;
    slots_[i] = k;
  }
}

bool HostGraph::has_edge(NodeId u, NodeId v) const {
  if (u == v || slots_.empty()) return false;
  return probe(key(u, v), slot_of(u, v));
}

std::uint64_t HostGraph::slot_of(NodeId u, NodeId v) const { return mix(key(u, v)) & slot_mask_; }

bool HostGraph::probe(std::uint64_t k, std::uint64_t start) const {
  for (std::uint64_t i = start;; i = (i + 1) & slot_mask_) {
    if (slots_[i] == k) return true;
    if (slots_[i] == kEmpty) return false;
  }
}

std::string HostGraph::name(NodeId u) const {
  if (u >= node_count()) throw ArgumentError("node " + std::to_string(u) + " out of range");
  return names_.empty() ? std::to_string(u) : names_[u];
}

void HostGraph::prefetch_induced(std::span<const NodeId> nodes) const {
  if (slots_.empty()) return;
  const std::size_t n = node_count();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes[i] < n && nodes[j] < n) detail::prefetch(&slots_[slot_of(nodes[i], nodes[j])]);
    }
  }
}

Graphette induced_bits(const HostGraph& g, std::span<const NodeId> nodes) {
  const int k = static_cast<int>(nodes.size());
  if (k < 1 || k > kMaxOrder) throw ArgumentError("induced_bits: need 1.." + std::to_string(kMaxOrder) + " nodes");
  for (int i = 0; i < k; ++i) {
    const NodeId a = nodes[static_cast<std::size_t>(i)];
    if (a >= g.node_count()) throw ArgumentError("induced_bits: node " + std::to_string(a) + " out of range");
    for (int j = 0; j < i; ++j) {
      if (a == nodes[static_cast<std::size_t>(j)]) {
        throw ArgumentError("induced_bits: duplicate node " + std::to_string(a));
      }
    }
  }
  if (g.slots_.empty()) return Graphette(k, 0);
  // Issue every slot load before probing so the misses overlap.
  std::array<std::uint64_t, kMaxOrder * (kMaxOrder - 1) / 2> start{};
  for (int i = 0, p = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j, ++p) {
      start[static_cast<std::size_t>(p)] = g.slot_of(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
      detail::prefetch(&g.slots_[start[static_cast<std::size_t>(p)]]);
    }
  }
  BitWord bits = 0;
  for (int i = 0, p = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j, ++p) {
      const auto key = HostGraph::key(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
      if (g.probe(key, start[static_cast<std::size_t>(p)])) bits |= BitWord{1} << p;
    }
  }
  return Graphette(k, bits);
}

}  // namespace graphette
