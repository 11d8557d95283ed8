#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace graphette {

__extension__ typedef unsigned __int128 BitWord;

inline constexpr int kMaxOrder = 12;

/// Number of bits in the lower-triangle encoding of a k-node graph.
constexpr int bit_count(int k) { return k * (k - 1) / 2; }

/// Bit position of edge {i, j} with i > j.
constexpr int pair_position(int i, int j) { return i * (i - 1) / 2 + j; }

/// Mask with the low bit_count(k) bits set.
constexpr BitWord full_mask(int k) {
  const int b = bit_count(k);
  return b == 0 ? BitWord{0} : (~BitWord{0}) >> (128 - b);
}

/// Edge as (larger endpoint, smaller endpoint).
using NodePair = std::pair<int, int>;

/// Bijection on {0..k-1}; entry u is the image of node u.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::span<const int> images);
  Permutation(std::initializer_list<int> images);

  static Permutation identity(int k);
  /// Validated construction from the first k entries of an image array.
  static Permutation from_array(int k, const std::array<std::uint8_t, kMaxOrder>& map);

  int size() const { return k_; }
  int operator[](int u) const { return map_[static_cast<std::size_t>(u)]; }
  bool is_identity() const;
  Permutation inverse() const;
  std::vector<int> images() const;
  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.k_ == b.k_ && a.map_ == b.map_;
  }
  /// Lexicographic on the image sequence.
  friend std::strong_ordering operator<=>(const Permutation& a,
                                          const Permutation& b) {
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    return a.map_ <=> b.map_;
  }

 private:
  friend Permutation compose(const Permutation&, const Permutation&);
  static Permutation unchecked(int k, const std::array<std::uint8_t, kMaxOrder>& map);

  std::uint8_t k_ = 0;
  std::array<std::uint8_t, kMaxOrder> map_{};
};

/// (outer ∘ inner)(u) = outer(inner(u)).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// A k-node undirected simple graph held as a lower-triangle bit vector.
class Graphette {
 public:
  Graphette() = default;
  Graphette(int k, BitWord bits);

  int order() const { return k_; }
  BitWord bits() const { return bits_; }
  /// Low 64 bits; exact for k <= 11.
  std::uint64_t code() const { return static_cast<std::uint64_t>(bits_); }

  bool has_edge(int u, int v) const;
  int edge_count() const;

  friend bool operator==(const Graphette&, const Graphette&) = default;

 private:
  std::uint8_t k_ = 1;
  BitWord bits_ = 0;
};

Graphette encode(int k, std::span<const NodePair> edges);
std::vector<NodePair> decode(const Graphette& g);

/// Returns g' with edge {pi(u), pi(v)} iff {u, v} is an edge of g.
Graphette apply_permutation(const Graphette& g, const Permutation& pi);

std::vector<int> degrees(const Graphette& g);
std::vector<int> degree_sequence(const Graphette& g);
bool is_connected(const Graphette& g);
Graphette complement(const Graphette& g);

/// Adjacency rows; bit v of row[u] is set iff {u, v} is an edge.
struct AdjacencyRows {
  int k = 0;
  std::array<std::uint16_t, kMaxOrder> row{};
};

AdjacencyRows adjacency_rows(const Graphette& g);
Graphette from_rows(const AdjacencyRows& rows);

std::string to_string(BitWord bits);

}  // namespace graphette
