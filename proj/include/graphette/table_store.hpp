#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graphette/canonizer.hpp"
#include "graphette/orbits.hpp"
#include "graphette/record.hpp"

namespace graphette {

// Table file layout, little-endian throughout:
//
//   offset  size  field
//        0    10  magic "GRAPHETTE1"
//       10     1  format version
//       11     1  k
//       12     4  NC(k)
//       16     4  total orbits
//       20     1  layout tag length (18)
//       21    18  layout tag "lower-triangle-lsb"
//       39     8  record count, 2^b(k)
//       47     8  FNV-1a 64 checksum of everything after the header
//       55        catalog: NC(k) entries of
//                   8 bytes canonical bit vector, 1 byte connected flag,
//                   k bytes orbit labels, 4 bytes global orbit base
//                 records: 2^b(k) packed 8-byte record words
inline constexpr std::string_view kTableMagic = "GRAPHETTE1";
inline constexpr std::uint8_t kTableFormatVersion = 1;
inline constexpr std::string_view kLayoutTag = "lower-triangle-lsb";
inline constexpr std::uint64_t kTableHeaderSize = 55;

constexpr std::uint64_t catalog_entry_size(int k) { return 8 + 1 + static_cast<std::uint64_t>(k) + 4; }
constexpr std::uint64_t record_count(int k) { return std::uint64_t{1} << bit_count(k); }
constexpr std::uint64_t table_file_size(int k, std::uint64_t nc) {
  return kTableHeaderSize + nc * catalog_entry_size(k) + 8 * record_count(k);
}

class TableFormatError : public std::runtime_error {
 public:
  enum class Kind {
    bad_magic,
    version_mismatch,
    truncated,
    length_mismatch,
    checksum_mismatch,
    bad_layout,
    invalid_content,
  };

  TableFormatError(Kind kind, std::uint64_t offset, const std::string& what)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  std::uint64_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::uint64_t offset_;
};

/// Catalog, lookup table and orbit index for one k. Immutable once built.
class GraphetteTable {
 public:
  GraphetteTable(CanonicalCatalog catalog, LookupTable table, GlobalOrbitIndex orbits);

  /// Sequential build when partitions == 1 and k <= 7, partitioned sifting otherwise.
  static GraphetteTable build(int k, std::size_t partitions = 1, unsigned workers = 1);

  int order() const { return catalog_.k; }
  const CanonicalCatalog& catalog() const { return catalog_; }
  const LookupTable& table() const { return table_; }
  const GlobalOrbitIndex& orbits() const { return orbits_; }

  TableRecord query(const Graphette& g) const;
  std::uint32_t node_orbit(const Graphette& g, int u) const;
  std::vector<std::uint32_t> node_orbits(const Graphette& g) const;

  friend bool operator==(const GraphetteTable&, const GraphetteTable&) = default;

 private:
  CanonicalCatalog catalog_;
  LookupTable table_;
  GlobalOrbitIndex orbits_;
};

void serialize(const CanonicalCatalog& catalog, const LookupTable& table,
               const GlobalOrbitIndex& orbits, std::ostream& out);
void serialize(const GraphetteTable& table, std::ostream& out);
GraphetteTable deserialize(std::istream& in);

void write_table_file(const GraphetteTable& table, const std::filesystem::path& path);
GraphetteTable read_table_file(const std::filesystem::path& path);

}  // namespace graphette
