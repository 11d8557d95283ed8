#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "graphette/graphette.hpp"
#include "graphette/record.hpp"

namespace graphette {

/// Canonical graphettes of one order, ascending by bit vector. The
/// canonical ID of an entry is its index.
struct CanonicalCatalog {
  int k = 0;
  std::vector<std::uint64_t> canonicals;
  std::vector<std::uint8_t> connected;

  std::size_t size() const { return canonicals.size(); }
  Graphette graphette(std::uint32_t id) const { return Graphette(k, canonicals.at(id)); }
  std::optional<std::uint32_t> find(std::uint64_t bits) const;
  std::size_t connected_count() const;

  friend bool operator==(const CanonicalCatalog&, const CanonicalCatalog&) = default;
};

/// Dense map from every bit vector of order k to its packed TableRecord.
class LookupTable {
 public:
  LookupTable() = default;
  LookupTable(int k, std::vector<std::uint64_t> packed);

  int order() const { return k_; }
  std::size_t size() const { return packed_.size(); }
  TableRecord record(std::uint64_t bits) const;
  std::uint64_t packed(std::uint64_t bits) const { return packed_.at(bits); }
  std::span<const std::uint64_t> packed_records() const { return packed_; }

  friend bool operator==(const LookupTable&, const LookupTable&) = default;

 private:
  int k_ = 0;
  std::vector<std::uint64_t> packed_;
};

struct CanonicalMap {
  CanonicalCatalog catalog;
  LookupTable table;
};

/// Result of sifting one contiguous range [begin, end) of bit vectors.
/// Temporary canonicals are the lowest members of each isomorphism class
/// seen inside the range. `members[b - begin]` is a packed record whose id
/// indexes temp_canonicals.
struct SiftPartition {
  std::size_t index = 0;
  int k = 0;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::vector<std::uint64_t> temp_canonicals;
  std::vector<std::uint64_t> members;

  TableRecord member(std::uint64_t bits) const;
};

/// Some pi with apply_permutation(g, pi) == h, or nullopt. When several
/// exist, the lexicographically smallest is returned.
std::optional<Permutation> are_isomorphic(const Graphette& g, const Graphette& h);

CanonicalMap build_canonical_map_sequential(int k);

/// Contiguous near-equal ranges tiling [0, 2^b(k)).
std::vector<std::pair<std::uint64_t, std::uint64_t>> partition_ranges(int k, std::size_t m);

SiftPartition sift_partition(int k, std::uint64_t begin, std::uint64_t end,
                             std::size_t index = 0);

/// Merges temporary canonicals across partitions in pairwise rounds until one
/// global list remains, then propagates final IDs and composed witnesses back
/// through every partition's member map. Output matches the sequential build
/// byte for byte.
CanonicalMap merge_siftings(std::span<const SiftPartition> parts);

CanonicalMap build_canonical_map_parallel(int k, std::size_t partitions, unsigned workers);

}  // namespace graphette
