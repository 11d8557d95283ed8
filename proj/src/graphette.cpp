#include "graphette/graphette.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "graphette/errors.hpp"

namespace graphette {

namespace {

// (i, j) for each bit position, i > j.
struct PositionTable {
  std::array<std::uint8_t, bit_count(kMaxOrder)> hi{};
  std::array<std::uint8_t, bit_count(kMaxOrder)> lo{};
  constexpr PositionTable() {
    for (int i = 1; i < kMaxOrder; ++i) {
      for (int j = 0; j < i; ++j) {
        hi[static_cast<std::size_t>(pair_position(i, j))] = static_cast<std::uint8_t>(i);
        lo[static_cast<std::size_t>(pair_position(i, j))] = static_cast<std::uint8_t>(j);
      }
    }
  }
};

constexpr PositionTable kPositions{};

void check_order(int k) {
  if (k < 1 || k > kMaxOrder) {
    throw ArgumentError("graphette order must be in 1.." + std::to_string(kMaxOrder) +
                        ", got " + std::to_string(k));
  }
}

int popcount(BitWord w) {
  return std::popcount(static_cast<std::uint64_t>(w)) +
         std::popcount(static_cast<std::uint64_t>(w >> 64));
}

}  // namespace

// Permutation

Permutation Permutation::unchecked(int k, const std::array<std::uint8_t, kMaxOrder>& map) {
  Permutation p;
  p.k_ = static_cast<std::uint8_t>(k);
  p.map_ = map;
  return p;
}

Permutation Permutation::from_array(int k, const std::array<std::uint8_t, kMaxOrder>& map) {
  check_order(k);
  unsigned seen = 0;
  for (int u = 0; u < k; ++u) {
    const unsigned v = map[static_cast<std::size_t>(u)];
    if (v >= static_cast<unsigned>(k) || (seen >> v & 1u)) {
      throw ArgumentError("not a bijection on 0.." + std::to_string(k - 1));
    }
    seen |= 1u << v;
  }
  std::array<std::uint8_t, kMaxOrder> clean{};
  std::copy(map.begin(), map.begin() + k, clean.begin());
  return unchecked(k, clean);
}

Permutation::Permutation(std::span<const int> images) {
  const int k = static_cast<int>(images.size());
  if (k < 1 || k > kMaxOrder) {
    throw ArgumentError("permutation size must be in 1.." + std::to_string(kMaxOrder));
  }
  unsigned seen = 0;
  for (int u = 0; u < k; ++u) {
    const int v = images[static_cast<std::size_t>(u)];
    if (v < 0 || v >= k || (seen >> v & 1u)) {
      throw ArgumentError("not a bijection on 0.." + std::to_string(k - 1));
    }
    seen |= 1u << v;
    map_[static_cast<std::size_t>(u)] = static_cast<std::uint8_t>(v);
  }
  k_ = static_cast<std::uint8_t>(k);
}

Permutation::Permutation(std::initializer_list<int> images)
    : Permutation(std::span<const int>(images.begin(), images.size())) {}

Permutation Permutation::identity(int k) {
  check_order(k);
  std::array<std::uint8_t, kMaxOrder> map{};
  std::iota(map.begin(), map.begin() + k, std::uint8_t{0});
  return unchecked(k, map);
}

bool Permutation::is_identity() const {
  for (int u = 0; u < k_; ++u) {
    if (map_[static_cast<std::size_t>(u)] != u) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::array<std::uint8_t, kMaxOrder> inv{};
  for (int u = 0; u < k_; ++u) inv[map_[static_cast<std::size_t>(u)]] = static_cast<std::uint8_t>(u);
  return unchecked(k_, inv);
}

std::vector<int> Permutation::images() const {
  return std::vector<int>(map_.begin(), map_.begin() + k_);
}

std::string Permutation::to_string() const {
  std::string out;
  for (int u = 0; u < k_; ++u) {
    if (u) out += ',';
    out += std::to_string(map_[static_cast<std::size_t>(u)]);
  }
  return out;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  if (outer.k_ != inner.k_) throw ArgumentError("compose: permutation size mismatch");
  std::array<std::uint8_t, kMaxOrder> map{};
  for (int u = 0; u < inner.k_; ++u) {
    map[static_cast<std::size_t>(u)] = outer.map_[inner.map_[static_cast<std::size_t>(u)]];
  }
  return Permutation::unchecked(inner.k_, map);
}

// Graphette

Graphette::Graphette(int k, BitWord bits) {
  check_order(k);
  if ((bits & ~full_mask(k)) != 0) {
    throw ArgumentError("bit vector " + to_string(bits) + " out of range for k=" +
                        std::to_string(k));
  }
  k_ = static_cast<std::uint8_t>(k);
  bits_ = bits;
}

bool Graphette::has_edge(int u, int v) const {
  if (u == v) return false;
  if (u < v) std::swap(u, v);
  return (bits_ >> pair_position(u, v)) & 1u;
}

int Graphette::edge_count() const { return popcount(bits_); }

Graphette encode(int k, std::span<const NodePair> edges) {
  check_order(k);
  BitWord bits = 0;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= k || b >= k) {
      throw ArgumentError("edge {" + std::to_string(a) + "," + std::to_string(b) +
                          "} has an endpoint outside 0.." + std::to_string(k - 1));
    }
    if (a == b) throw ArgumentError("self-loop on node " + std::to_string(a));
    if (a < b) std::swap(a, b);
    bits |= BitWord{1} << pair_position(a, b);
  }
  return Graphette(k, bits);
}

std::vector<NodePair> decode(const Graphette& g) {
  std::vector<NodePair> edges;
  const int b = bit_count(g.order());
  for (int p = 0; p < b; ++p) {
    if ((g.bits() >> p) & 1u) {
      edges.emplace_back(kPositions.hi[static_cast<std::size_t>(p)],
                         kPositions.lo[static_cast<std::size_t>(p)]);
    }
  }
  return edges;
}

Graphette apply_permutation(const Graphette& g, const Permutation& pi) {
  if (pi.size() != g.order()) {
    throw ArgumentError("permutation of size " + std::to_string(pi.size()) +
                        " applied to graphette of order " + std::to_string(g.order()));
  }
  BitWord out = 0;
  BitWord rest = g.bits();
  while (rest != 0) {
    const auto low = static_cast<std::uint64_t>(rest);
    const int p = low ? std::countr_zero(low)
                      : 64 + std::countr_zero(static_cast<std::uint64_t>(rest >> 64));
    rest &= rest - 1;
    int a = pi[kPositions.hi[static_cast<std::size_t>(p)]];
    int b = pi[kPositions.lo[static_cast<std::size_t>(p)]];
    if (a < b) std::swap(a, b);
    out |= BitWord{1} << pair_position(a, b);
  }
  return Graphette(g.order(), out);
}

AdjacencyRows adjacency_rows(const Graphette& g) {
  AdjacencyRows rows;
  rows.k = g.order();
  const int b = bit_count(g.order());
  for (int p = 0; p < b; ++p) {
    if ((g.bits() >> p) & 1u) {
      const int i = kPositions.hi[static_cast<std::size_t>(p)];
      const int j = kPositions.lo[static_cast<std::size_t>(p)];
      rows.row[static_cast<std::size_t>(i)] |= static_cast<std::uint16_t>(1u << j);
      rows.row[static_cast<std::size_t>(j)] |= static_cast<std::uint16_t>(1u << i);
    }
  }
  return rows;
}

Graphette from_rows(const AdjacencyRows& rows) {
  BitWord bits = 0;
  for (int i = 1; i < rows.k; ++i) {
    for (int j = 0; j < i; ++j) {
      if ((rows.row[static_cast<std::size_t>(i)] >> j) & 1u) bits |= BitWord{1} << pair_position(i, j);
    }
  }
  return Graphette(rows.k, bits);
}

std::vector<int> degrees(const Graphette& g) {
  const auto rows = adjacency_rows(g);
  std::vector<int> deg(static_cast<std::size_t>(g.order()));
  for (int u = 0; u < g.order(); ++u) deg[static_cast<std::size_t>(u)] = std::popcount(rows.row[static_cast<std::size_t>(u)]);
  return deg;
}

std::vector<int> degree_sequence(const Graphette& g) {
  auto deg = degrees(g);
  std::sort(deg.begin(), deg.end());
  return deg;
}

bool is_connected(const Graphette& g) {
  const auto rows = adjacency_rows(g);
  const unsigned all = (1u << g.order()) - 1u;
  unsigned reached = 1u;
  unsigned frontier = 1u;
  while (frontier) {
    unsigned next = 0;
    for (unsigned f = frontier; f; f &= f - 1) next |= rows.row[static_cast<std::size_t>(std::countr_zero(f))];
    frontier = next & ~reached;
    reached |= next;
  }
  return reached == all;
}

Graphette complement(const Graphette& g) {
  return Graphette(g.order(), full_mask(g.order()) ^ g.bits());
}

std::string to_string(BitWord bits) {
  if (bits == 0) return "0";
  std::string s;
  while (bits != 0) {
    s += static_cast<char>('0' + static_cast<int>(bits % 10));
    bits /= 10;
  }
  return {s.rbegin(), s.rend()};
}

}  // namespace graphette
