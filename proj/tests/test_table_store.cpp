#include <doctest.h>

#include <random>
#include <sstream>

#include "graphette/errors.hpp"
#include "graphette/table_store.hpp"
#include "oracles.hpp"

using namespace graphette;

namespace {

std::string bytes_of(const GraphetteTable& t) {
  std::ostringstream out(std::ios::binary);
  serialize(t, out);
  return out.str();
}

TableFormatError::Kind kind_of(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  try {
    deserialize(in);
  } catch (const TableFormatError& e) {
    return e.kind();
  }
  FAIL("deserialize accepted a corrupt file");
  return TableFormatError::Kind::invalid_content;
}

}  // namespace

TEST_CASE("record packing") {
  TableRecord rec{12345, Permutation({7, 6, 5, 4, 3, 2, 1, 0}), true};
  const auto word = pack_record(rec);
  CHECK((word & 0x3fff) == 12345);
  CHECK(((word >> 14) & 1) == 1);
  CHECK(((word >> 16) & 7) == 7);
  CHECK(((word >> (16 + 3 * 7)) & 7) == 0);
  CHECK((word >> 40) == 0);
  CHECK(unpack_record(word, 8) == rec);
  CHECK_THROWS_AS(pack_record({16384, Permutation::identity(3), false}), ArgumentError);
  CHECK_THROWS_AS(pack_record({0, Permutation::identity(9), false}), ArgumentError);
  CHECK_THROWS_AS(unpack_record(std::uint64_t{1} << 15, 3), ArgumentError);
  // images 0,0,0 is not a bijection
  CHECK_THROWS_AS(unpack_record(0, 3), ArgumentError);
}

TEST_CASE("record packing round trip") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 8);
    std::vector<int> p(static_cast<std::size_t>(k));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    const TableRecord rec{static_cast<std::uint32_t>(rng() % 16384), Permutation(p), (rng() & 1) != 0};
    REQUIRE(unpack_record(pack_record(rec), k) == rec);
  }
}

TEST_CASE("file size arithmetic, including k = 8") {
  CHECK(kTableHeaderSize == 55);
  CHECK(table_file_size(3, 4) == 55 + 4 * (13 + 3) + 8 * 8);
  CHECK(record_count(5) * 8 == 8192);
  CHECK(record_count(8) == (std::uint64_t{1} << 28));
  CHECK(table_file_size(8, 12346) == 55 + 12346ull * 21 + (std::uint64_t{1} << 31));
  // 12345 is the largest id at k = 8 and must fit the 14-bit field
  CHECK(packing::kMaxCanonicalId >= 12345);
  CHECK(packing::valid_mask(8) == 0xffffff7fffull);
}

TEST_CASE("serialize layout for k = 3") {
  const auto table = GraphetteTable::build(3);
  const auto bytes = bytes_of(table);
  CHECK(bytes.size() == table_file_size(3, 4));
  CHECK(bytes.substr(0, 10) == "GRAPHETTE1");
  CHECK(bytes[10] == 1);
  CHECK(bytes[11] == 3);
  CHECK(static_cast<unsigned char>(bytes[12]) == 4);
  CHECK(static_cast<unsigned char>(bytes[16]) == 6);
  CHECK(bytes.substr(21, 18) == "lower-triangle-lsb");
  CHECK(static_cast<unsigned char>(bytes[39]) == 8);
  // catalog entry 3 is the triangle: bits 7, connected, labels 0 0 0, base 5
  const std::size_t e3 = 55 + 3 * 16;
  CHECK(static_cast<unsigned char>(bytes[e3]) == 7);
  CHECK(bytes[e3 + 8] == 1);
  CHECK(static_cast<unsigned char>(bytes[e3 + 12]) == 5);
}

TEST_CASE("serialize/deserialize round trip is byte identical") {
  for (int k = 1; k <= 5; ++k) {
    const auto table = GraphetteTable::build(k);
    const auto bytes = bytes_of(table);
    std::istringstream in(bytes, std::ios::binary);
    const auto back = deserialize(in);
    CHECK(back == table);
    CHECK(bytes_of(back) == bytes);
    CHECK(bytes_of(GraphetteTable::build(k)) == bytes);
  }
  const auto t3 = GraphetteTable::build(3);
  std::istringstream in(bytes_of(t3), std::ios::binary);
  const auto back = deserialize(in);
  CHECK(back.catalog().size() == 4);
  CHECK(back.table().size() == 8);
}

TEST_CASE("deserialize reports each failure class") {
  const auto good = bytes_of(GraphetteTable::build(4));
  using K = TableFormatError::Kind;

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(kind_of(bad_magic) == K::bad_magic);

  auto version = good;
  version[10] = 2;
  CHECK(kind_of(version) == K::version_mismatch);

  CHECK(kind_of(good.substr(0, 30)) == K::truncated);
  CHECK(kind_of(good.substr(0, 60)) == K::truncated);

  const auto short_records = good.substr(0, good.size() - 8);
  CHECK(kind_of(short_records) == K::length_mismatch);
  std::istringstream in(short_records, std::ios::binary);
  try {
    deserialize(in);
  } catch (const TableFormatError& e) {
    CHECK(std::string(e.what()).find("64") != std::string::npos);
  }
  CHECK(kind_of(good + "x") == K::length_mismatch);

  auto flipped = good;
  flipped[good.size() - 3] ^= 0x01;
  CHECK(kind_of(flipped) == K::checksum_mismatch);

  auto layout = good;
  layout[21] = 'u';
  CHECK(kind_of(layout) == K::bad_layout);

  CHECK_THROWS_AS(read_table_file("/nonexistent/table.bin"), IoError);
}

TEST_CASE("query and node_orbit") {
  const auto table = GraphetteTable::build(3);
  const auto rec = table.query(Graphette(3, 2));
  CHECK(rec.canonical_id == 1);
  CHECK(apply_permutation(Graphette(3, 2), rec.witness).bits() == 1);
  const auto self = table.query(Graphette(3, 3));
  CHECK(self.canonical_id == 2);
  CHECK(self.witness.is_identity());
  CHECK(table.query(Graphette(3, 7)).connected);
  CHECK_THROWS_AS(table.query(Graphette(4, 0)), ArgumentError);

  const auto tri = table.node_orbits(Graphette(3, 7));
  CHECK(tri == std::vector<std::uint32_t>{5, 5, 5});

  // edge {2,1}: node 0 is isolated and lands on node 2 of canonical 1
  const Graphette g(3, 4);
  const auto w = table.query(g).witness;
  CHECK(w[0] == 2);
  CHECK(oracle::orbit_labels(3, 1)[2] == 2);
  CHECK(table.node_orbit(g, 0) == table.orbits().global_orbit(1, 2));
  CHECK(table.node_orbit(g, 0) == 2);
  CHECK(table.node_orbit(g, 1) == table.node_orbit(g, 2));
  CHECK(table.node_orbit(g, 1) == 1);
  CHECK_THROWS_AS(table.node_orbit(g, 3), ArgumentError);
}

TEST_CASE("node_orbit is invariant under relabeling, exhaustive k <= 5") {
  for (int k = 1; k <= 5; ++k) {
    const auto table = GraphetteTable::build(k);
    const auto perms = oracle::all_permutations(k);
    for (std::uint64_t b = 0; b < table.table().size(); ++b) {
      const Graphette g(k, b);
      const auto base = table.node_orbits(g);
      for (const auto& p : perms) {
        const Permutation pi(p);
        const Graphette moved = apply_permutation(g, pi);
        for (int u = 0; u < k; ++u) {
          REQUIRE(table.node_orbit(moved, pi[u]) == base[static_cast<std::size_t>(u)]);
          REQUIRE(base[static_cast<std::size_t>(u)] < table.orbits().total_orbits());
        }
      }
    }
  }
}
