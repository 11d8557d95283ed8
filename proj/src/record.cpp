#include "graphette/record.hpp"

#include <string>

#include "graphette/errors.hpp"

namespace graphette {

std::uint64_t pack_record(const TableRecord& record) {
  using namespace packing;
  const int k = record.witness.size();
  if (k < 1 || k > kMaxTableOrder) {
    throw ArgumentError("record witness order " + std::to_string(k) + " exceeds table limit " +
                        std::to_string(kMaxTableOrder));
  }
  if (record.canonical_id > kMaxCanonicalId) {
    throw ArgumentError("canonical id " + std::to_string(record.canonical_id) +
                        " does not fit in 14 bits");
  }
  std::uint64_t word = record.canonical_id;
  if (record.connected) word |= std::uint64_t{1} << kConnectedBit;
  for (int u = 0; u < k; ++u) {
    word |= static_cast<std::uint64_t>(record.witness[u]) << (kPermShift + kImageBits * u);
  }
  return word;
}

TableRecord unpack_record(std::uint64_t word, int k) {
  using namespace packing;
  if (k < 1 || k > kMaxTableOrder) {
    throw ArgumentError("table order " + std::to_string(k) + " out of range");
  }
  if ((word & ~valid_mask(k)) != 0) {
    throw ArgumentError("record word has reserved bits set");
  }
  std::array<std::uint8_t, kMaxOrder> images{};
  for (int u = 0; u < k; ++u) {
    images[static_cast<std::size_t>(u)] =
        static_cast<std::uint8_t>((word >> (kPermShift + kImageBits * u)) & 0x7u);
  }
  TableRecord record;
  record.canonical_id = static_cast<std::uint32_t>(word & kIdMask);
  record.connected = (word >> kConnectedBit) & 1u;
  record.witness = Permutation::from_array(k, images);
  return record;
}

}  // namespace graphette
