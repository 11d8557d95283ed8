#pragma once

#include <cstdint>

#include "graphette/graphette.hpp"

namespace graphette {

/// Largest order a lookup table is built or stored for.
inline constexpr int kMaxTableOrder = 8;

/// One lookup-table entry. The witness maps the indexed graphette's nodes
/// onto the canonical's node positions.
struct TableRecord {
  std::uint32_t canonical_id = 0;
  Permutation witness;
  bool connected = false;

  friend bool operator==(const TableRecord&, const TableRecord&) = default;
};

// 8-byte record word: bits 0-13 canonical id, bit 14 connected flag,
// bits 16+3u..18+3u the image of node u. Everything else is zero.
namespace packing {
inline constexpr int kIdBits = 14;
inline constexpr std::uint64_t kIdMask = (std::uint64_t{1} << kIdBits) - 1;
inline constexpr int kConnectedBit = 14;
inline constexpr int kPermShift = 16;
inline constexpr int kImageBits = 3;
inline constexpr std::uint64_t kMaxCanonicalId = kIdMask;

/// Bits allowed to be set in a record word for order k.
constexpr std::uint64_t valid_mask(int k) {
  return kIdMask | (std::uint64_t{1} << kConnectedBit) |
         (((std::uint64_t{1} << (kImageBits * k)) - 1) << kPermShift);
}
}  // namespace packing

/// Packs a record. Throws ArgumentError if the id or witness does not fit.
std::uint64_t pack_record(const TableRecord& record);

/// Unpacks a record word for order k. Throws ArgumentError on reserved bits
/// or a witness that is not a bijection.
TableRecord unpack_record(std::uint64_t word, int k);

}  // namespace graphette
