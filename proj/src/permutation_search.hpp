#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "graphette/graphette.hpp"

namespace graphette::detail {

using ImageArray = std::array<std::uint8_t, kMaxOrder>;

// Backtracking over node maps f: V(from) -> V(to) that only send a node to
// nodes of equal degree. Nodes are assigned in index order and candidate
// images are tried in ascending order, so complete maps are reached in
// lexicographic order. A partial map is abandoned as soon as it disagrees on
// an edge among the already-assigned nodes; every complete map handed to the
// visitor therefore carries `from` onto `to` exactly.
class DegreeClassSearch {
 public:
  DegreeClassSearch(const AdjacencyRows& from, const AdjacencyRows& to)
      : from_(from), to_(to), k_(from.k) {
    for (int u = 0; u < k_; ++u) {
      std::uint16_t mask = 0;
      const int du = std::popcount(from_.row[idx(u)]);
      for (int v = 0; v < k_; ++v) {
        if (std::popcount(to_.row[idx(v)]) == du) mask |= static_cast<std::uint16_t>(1u << v);
      }
      candidates_[idx(u)] = mask;
    }
  }

  // visit(const ImageArray&) returns true to stop. Returns true if stopped.
  template <class Visitor>
  bool run(Visitor&& visit) {
    if (from_.k != to_.k) return false;
    return descend(0, 0, visit);
  }

 private:
  static std::size_t idx(int u) { return static_cast<std::size_t>(u); }

  template <class Visitor>
  bool descend(int u, std::uint16_t used, Visitor& visit) {
    if (u == k_) return visit(static_cast<const ImageArray&>(image_));
    std::uint16_t mapped_nbrs = 0;
    const std::uint16_t back = static_cast<std::uint16_t>(from_.row[idx(u)] & ((1u << u) - 1u));
    for (unsigned w = back; w; w &= w - 1) {
      mapped_nbrs |= static_cast<std::uint16_t>(1u << image_[idx(std::countr_zero(w))]);
    }
    for (unsigned c = candidates_[idx(u)] & ~used; c; c &= c - 1) {
      const int v = std::countr_zero(c);
      if ((to_.row[idx(v)] & used) != mapped_nbrs) continue;
      image_[idx(u)] = static_cast<std::uint8_t>(v);
      if (descend(u + 1, static_cast<std::uint16_t>(used | (1u << v)), visit)) return true;
    }
    return false;
  }

  const AdjacencyRows& from_;
  const AdjacencyRows& to_;
  int k_;
  std::array<std::uint16_t, kMaxOrder> candidates_{};
  ImageArray image_{};
};

}  // namespace graphette::detail
