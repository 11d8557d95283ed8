#include "graphette/table_store.hpp"

#include <array>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

#include "graphette/errors.hpp"

namespace graphette {

namespace {

using Kind = TableFormatError::Kind;

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void fnv(std::uint64_t& h, const std::uint8_t* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= kFnvPrime;
  }
}

template <class T>
void put_le(std::vector<std::uint8_t>& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
  }
}

template <class T>
T get_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

using ChunkSink = std::function<void(const std::vector<std::uint8_t>&)>;

// Emits catalog and record sections in bounded chunks.
void emit_body(const CanonicalCatalog& catalog, const LookupTable& table,
               const GlobalOrbitIndex& orbits, const ChunkSink& sink) {
  std::vector<std::uint8_t> buf;
  for (std::uint32_t c = 0; c < catalog.size(); ++c) {
    put_le<std::uint64_t>(buf, catalog.canonicals[c]);
    buf.push_back(catalog.connected[c]);
    for (auto label : orbits.labels(c)) buf.push_back(label);
    put_le<std::uint32_t>(buf, orbits.base(c));
  }
  sink(buf);
  constexpr std::size_t kChunkRecords = 1 << 16;
  const auto records = table.packed_records();
  for (std::size_t i = 0; i < records.size(); i += kChunkRecords) {
    buf.clear();
    const std::size_t end = std::min(records.size(), i + kChunkRecords);
    for (std::size_t r = i; r < end; ++r) put_le<std::uint64_t>(buf, records[r]);
    sink(buf);
  }
}

void check_consistent(const CanonicalCatalog& catalog, const LookupTable& table,
                      const GlobalOrbitIndex& orbits) {
  const int k = catalog.k;
  if (table.order() != k || orbits.order() != k) {
    throw ArgumentError("catalog, table and orbit index disagree on k");
  }
  if (k < 1 || k > kMaxTableOrder) throw ArgumentError("table order out of range");
  if (catalog.connected.size() != catalog.size() || orbits.canonical_count() != catalog.size()) {
    throw ArgumentError("catalog sections disagree on the number of canonicals");
  }
  if (catalog.size() == 0 || catalog.size() > packing::kMaxCanonicalId + 1) {
    throw ArgumentError("canonical count " + std::to_string(catalog.size()) + " out of range");
  }
  if (table.size() != record_count(k)) throw ArgumentError("lookup table has the wrong length");
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads exactly n bytes or reports how many were available.
  std::size_t read(std::uint8_t* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    offset_ += got;
    return got;
  }
  bool at_end() {
    return in_.peek() == std::char_traits<char>::eof();
  }
  std::uint64_t offset() const { return offset_; }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

}  // namespace

GraphetteTable::GraphetteTable(CanonicalCatalog catalog, LookupTable table, GlobalOrbitIndex orbits)
    : catalog_(std::move(catalog)), table_(std::move(table)), orbits_(std::move(orbits)) {
  check_consistent(catalog_, table_, orbits_);
}

GraphetteTable GraphetteTable::build(int k, std::size_t partitions, unsigned workers) {
  CanonicalMap map = (partitions == 1 && k <= 7)
                         ? build_canonical_map_sequential(k)
                         : build_canonical_map_parallel(k, partitions, workers);
  GlobalOrbitIndex orbits = compute_orbit_index(map.catalog, workers);
  return GraphetteTable(std::move(map.catalog), std::move(map.table), std::move(orbits));
}

TableRecord GraphetteTable::query(const Graphette& g) const {
  if (g.order() != order()) {
    throw ArgumentError("query: graphette of order " + std::to_string(g.order()) +
                        " against a k=" + std::to_string(order()) + " table");
  }
  return table_.record(g.code());
}

std::uint32_t GraphetteTable::node_orbit(const Graphette& g, int u) const {
  if (u < 0 || u >= g.order()) {
    throw ArgumentError("node " + std::to_string(u) + " out of range for k=" +
                        std::to_string(g.order()));
  }
  const TableRecord rec = query(g);
  return orbits_.global_orbit(rec.canonical_id, rec.witness[u]);
}

std::vector<std::uint32_t> GraphetteTable::node_orbits(const Graphette& g) const {
  const TableRecord rec = query(g);
  std::vector<std::uint32_t> out;
  for (int u = 0; u < g.order(); ++u) out.push_back(orbits_.global_orbit(rec.canonical_id, rec.witness[u]));
  return out;
}

void serialize(const CanonicalCatalog& catalog, const LookupTable& table,
               const GlobalOrbitIndex& orbits, std::ostream& out) {
  check_consistent(catalog, table, orbits);
  std::uint64_t checksum = kFnvOffset;
  emit_body(catalog, table, orbits,
            [&](const std::vector<std::uint8_t>& chunk) { fnv(checksum, chunk.data(), chunk.size()); });

  std::vector<std::uint8_t> header;
  header.insert(header.end(), kTableMagic.begin(), kTableMagic.end());
  header.push_back(kTableFormatVersion);
  header.push_back(static_cast<std::uint8_t>(catalog.k));
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(catalog.size()));
  put_le<std::uint32_t>(header, orbits.total_orbits());
  header.push_back(static_cast<std::uint8_t>(kLayoutTag.size()));
  header.insert(header.end(), kLayoutTag.begin(), kLayoutTag.end());
  put_le<std::uint64_t>(header, record_count(catalog.k));
  put_le<std::uint64_t>(header, checksum);

  auto write = [&](const std::vector<std::uint8_t>& bytes) {
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure while serializing table");
  };
  write(header);
  emit_body(catalog, table, orbits, write);
}

void serialize(const GraphetteTable& table, std::ostream& out) {
  serialize(table.catalog(), table.table(), table.orbits(), out);
}

GraphetteTable deserialize(std::istream& in) {
  Reader reader(in);
  std::array<std::uint8_t, kTableHeaderSize> h{};
  const std::size_t got = reader.read(h.data(), h.size());
  if (got >= kTableMagic.size() &&
      std::string_view(reinterpret_cast<const char*>(h.data()), kTableMagic.size()) != kTableMagic) {
    throw TableFormatError(Kind::bad_magic, 0, "not a graphette table file: bad magic");
  }
  if (got < h.size()) {
    if (got < kTableMagic.size()) {
      throw TableFormatError(Kind::truncated, got, "truncated header: file too short for magic");
    }
    throw TableFormatError(Kind::truncated, got,
                           "truncated header: expected " + std::to_string(kTableHeaderSize) +
                               " bytes, found " + std::to_string(got));
  }
  if (h[10] != kTableFormatVersion) {
    throw TableFormatError(Kind::version_mismatch, 10,
                           "format version " + std::to_string(h[10]) + ", expected " +
                               std::to_string(kTableFormatVersion));
  }
  const int k = h[11];
  if (k < 1 || k > kMaxTableOrder) {
    throw TableFormatError(Kind::invalid_content, 11, "k=" + std::to_string(k) + " out of range");
  }
  const auto nc = get_le<std::uint32_t>(&h[12]);
  const auto total_orbits = get_le<std::uint32_t>(&h[16]);
  if (h[20] != kLayoutTag.size() ||
      std::string_view(reinterpret_cast<const char*>(&h[21]), kLayoutTag.size()) != kLayoutTag) {
    throw TableFormatError(Kind::bad_layout, 20, "unsupported bit layout tag");
  }
  const auto records = get_le<std::uint64_t>(&h[39]);
  const auto checksum = get_le<std::uint64_t>(&h[47]);
  if (records != record_count(k)) {
    throw TableFormatError(Kind::length_mismatch, 39,
                           "header declares " + std::to_string(records) + " records, k=" +
                               std::to_string(k) + " requires " + std::to_string(record_count(k)));
  }
  if (nc == 0 || nc > packing::kMaxCanonicalId + 1 || nc > records) {
    throw TableFormatError(Kind::invalid_content, 12, "canonical count " + std::to_string(nc) + " out of range");
  }

  std::uint64_t sum = kFnvOffset;
  const std::uint64_t entry = catalog_entry_size(k);
  std::vector<std::uint8_t> cat(nc * entry);
  const std::uint64_t cat_offset = reader.offset();
  if (reader.read(cat.data(), cat.size()) != cat.size()) {
    throw TableFormatError(Kind::truncated, reader.offset(),
                           "truncated catalog section: expected " + std::to_string(nc) +
                               " entries starting at offset " + std::to_string(cat_offset));
  }
  fnv(sum, cat.data(), cat.size());

  const std::uint64_t rec_offset = reader.offset();
  std::vector<std::uint64_t> packed(records);
  {
    constexpr std::size_t kChunk = 1 << 16;
    std::vector<std::uint8_t> buf(kChunk * 8);
    for (std::uint64_t i = 0; i < records; i += kChunk) {
      const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, records - i));
      const std::size_t bytes = reader.read(buf.data(), n * 8);
      if (bytes != n * 8) {
        throw TableFormatError(Kind::length_mismatch, reader.offset(),
                               "record section holds " + std::to_string(i + bytes / 8) +
                                   " records, expected 2^b(k) = " + std::to_string(records) +
                                   " starting at offset " + std::to_string(rec_offset));
      }
      fnv(sum, buf.data(), bytes);
      for (std::size_t r = 0; r < n; ++r) packed[i + r] = get_le<std::uint64_t>(&buf[8 * r]);
    }
  }
  if (!reader.at_end()) {
    throw TableFormatError(Kind::length_mismatch, reader.offset(),
                           "trailing bytes after " + std::to_string(records) + " records");
  }
  if (sum != checksum) {
    throw TableFormatError(Kind::checksum_mismatch, 47, "checksum mismatch");
  }

  CanonicalCatalog catalog;
  catalog.k = k;
  std::vector<std::vector<std::uint8_t>> labels;
  std::vector<std::uint32_t> bases;
  for (std::uint32_t c = 0; c < nc; ++c) {
    const std::uint8_t* e = &cat[c * entry];
    const std::uint64_t off = cat_offset + c * entry;
    const auto bits = get_le<std::uint64_t>(e);
    if (bits >= records || (c > 0 && bits <= catalog.canonicals.back())) {
      throw TableFormatError(Kind::invalid_content, off, "canonical bit vectors not strictly increasing in range");
    }
    if (e[8] > 1) throw TableFormatError(Kind::invalid_content, off + 8, "connected flag not 0/1");
    catalog.canonicals.push_back(bits);
    catalog.connected.push_back(e[8]);
    labels.emplace_back(e + 9, e + 9 + k);
    bases.push_back(get_le<std::uint32_t>(e + 9 + k));
  }
  GlobalOrbitIndex orbits;
  try {
    orbits = GlobalOrbitIndex(k, std::move(labels));
  } catch (const ArgumentError& err) {
    throw TableFormatError(Kind::invalid_content, cat_offset, err.what());
  }
  if (orbits.total_orbits() != total_orbits) {
    throw TableFormatError(Kind::invalid_content, 16, "total orbit count disagrees with catalog");
  }
  for (std::uint32_t c = 0; c < nc; ++c) {
    if (orbits.base(c) != bases[c]) {
      throw TableFormatError(Kind::invalid_content, cat_offset + c * entry + 9 + static_cast<std::uint64_t>(k),
                             "global orbit base disagrees with orbit labels");
    }
  }
  for (std::uint64_t b = 0; b < records; ++b) {
    const std::uint64_t word = packed[b];
    bool ok = (word & ~packing::valid_mask(k)) == 0 && (word & packing::kIdMask) < nc;
    if (ok) {
      unsigned seen = 0;
      for (int u = 0; u < k; ++u) {
        seen |= 1u << ((word >> (packing::kPermShift + packing::kImageBits * u)) & 0x7u);
      }
      ok = seen == (1u << k) - 1u;
    }
    if (!ok) {
      throw TableFormatError(Kind::invalid_content, rec_offset + 8 * b,
                             "invalid record for bit vector " + std::to_string(b));
    }
  }
  return GraphetteTable(std::move(catalog), LookupTable(k, std::move(packed)), std::move(orbits));
}

void write_table_file(const GraphetteTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  serialize(table, out);
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

GraphetteTable read_table_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open table file " + path.string());
  return deserialize(in);
}

}  // namespace graphette
