#include "graphette/canonizer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "graphette/errors.hpp"
#include "permutation_search.hpp"

namespace graphette {

namespace {

using detail::ImageArray;

void check_build_order(int k, int max_k) {
  if (k < 1 || k > max_k) {
    throw ArgumentError("table order must be in 1.." + std::to_string(max_k) + ", got " +
                        std::to_string(k));
  }
}

std::uint64_t space_size(int k) { return std::uint64_t{1} << bit_count(k); }

ImageArray identity_images(int k) {
  ImageArray img{};
  for (int u = 0; u < k; ++u) img[static_cast<std::size_t>(u)] = static_cast<std::uint8_t>(u);
  return img;
}

std::uint64_t pack_images(std::uint32_t id, bool connected, const ImageArray& img, int k) {
  std::uint64_t word = id;
  if (connected) word |= std::uint64_t{1} << packing::kConnectedBit;
  for (int u = 0; u < k; ++u) {
    word |= static_cast<std::uint64_t>(img[static_cast<std::size_t>(u)])
            << (packing::kPermShift + packing::kImageBits * u);
  }
  return word;
}

ImageArray unpack_images(std::uint64_t word, int k) {
  ImageArray img{};
  for (int u = 0; u < k; ++u) {
    img[static_cast<std::size_t>(u)] = static_cast<std::uint8_t>(
        (word >> (packing::kPermShift + packing::kImageBits * u)) & 0x7u);
  }
  return img;
}

ImageArray compose_images(const ImageArray& outer, const ImageArray& inner, int k) {
  ImageArray out{};
  for (int u = 0; u < k; ++u) out[static_cast<std::size_t>(u)] = outer[inner[static_cast<std::size_t>(u)]];
  return out;
}

// Histogram of node degrees, 4 bits per degree value. Isomorphic graphettes
// share a key, so only canonicals in the same bucket need a search.
std::uint64_t bucket_key(const AdjacencyRows& rows) {
  std::uint64_t key = 0;
  for (int u = 0; u < rows.k; ++u) {
    key += std::uint64_t{1} << (4 * std::popcount(rows.row[static_cast<std::size_t>(u)]));
  }
  return key;
}

// Ascending scan that keeps the first-seen member of every isomorphism class.
class CanonicalScanner {
 public:
  struct Outcome {
    std::uint32_t index;
    ImageArray witness;
    bool fresh;
  };

  explicit CanonicalScanner(int k) : k_(k) {}

  Outcome classify(std::uint64_t bits) {
    const AdjacencyRows rows = adjacency_rows(Graphette(k_, bits));
    auto& bucket = buckets_[bucket_key(rows)];
    for (std::uint32_t id : bucket) {
      ImageArray witness{};
      detail::DegreeClassSearch search(rows, rows_[id]);
      if (search.run([&](const ImageArray& img) {
            witness = img;
            return true;
          })) {
        return {id, witness, false};
      }
    }
    const auto id = static_cast<std::uint32_t>(found_.size());
    found_.push_back(bits);
    rows_.push_back(rows);
    bucket.push_back(id);
    return {id, identity_images(k_), true};
  }

  const std::vector<std::uint64_t>& found() const { return found_; }

 private:
  int k_;
  std::vector<std::uint64_t> found_;
  std::vector<AdjacencyRows> rows_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

std::vector<std::uint8_t> connectivity(int k, const std::vector<std::uint64_t>& canonicals) {
  std::vector<std::uint8_t> flags;
  flags.reserve(canonicals.size());
  for (auto bits : canonicals) flags.push_back(is_connected(Graphette(k, bits)) ? 1 : 0);
  return flags;
}

std::vector<ImageArray> automorphism_images(int k, std::uint64_t bits) {
  const AdjacencyRows rows = adjacency_rows(Graphette(k, bits));
  std::vector<ImageArray> auts;
  detail::DegreeClassSearch search(rows, rows);
  search.run([&](const ImageArray& img) {
    auts.push_back(img);
    return false;
  });
  return auts;
}

// Smallest witness in the coset {alpha ∘ w : alpha in Aut(canonical)}.
ImageArray normalize_witness(const ImageArray& w, const std::vector<ImageArray>& auts, int k) {
  ImageArray best = compose_images(auts.front(), w, k);
  for (std::size_t i = 1; i < auts.size(); ++i) {
    const ImageArray cand = compose_images(auts[i], w, k);
    if (std::lexicographical_compare(cand.begin(), cand.begin() + k, best.begin(),
                                     best.begin() + k)) {
      best = cand;
    }
  }
  return best;
}

}  // namespace

std::optional<std::uint32_t> CanonicalCatalog::find(std::uint64_t bits) const {
  auto it = std::lower_bound(canonicals.begin(), canonicals.end(), bits);
  if (it == canonicals.end() || *it != bits) return std::nullopt;
  return static_cast<std::uint32_t>(it - canonicals.begin());
}

std::size_t CanonicalCatalog::connected_count() const {
  return static_cast<std::size_t>(std::count(connected.begin(), connected.end(), 1));
}

LookupTable::LookupTable(int k, std::vector<std::uint64_t> packed)
    : k_(k), packed_(std::move(packed)) {
  check_build_order(k, kMaxTableOrder);
  if (packed_.size() != space_size(k)) {
    throw ArgumentError("lookup table for k=" + std::to_string(k) + " needs " +
                        std::to_string(space_size(k)) + " records, got " +
                        std::to_string(packed_.size()));
  }
}

TableRecord LookupTable::record(std::uint64_t bits) const {
  if (bits >= packed_.size()) {
    throw ArgumentError("bit vector " + std::to_string(bits) + " out of range for k=" +
                        std::to_string(k_));
  }
  return unpack_record(packed_[bits], k_);
}

TableRecord SiftPartition::member(std::uint64_t bits) const {
  if (bits < begin || bits >= end) throw ArgumentError("bit vector outside partition range");
  return unpack_record(members[bits - begin], k);
}

std::optional<Permutation> are_isomorphic(const Graphette& g, const Graphette& h) {
  if (g.order() != h.order()) {
    throw ArgumentError("are_isomorphic: orders " + std::to_string(g.order()) + " and " +
                        std::to_string(h.order()) + " differ");
  }
  if (g.edge_count() != h.edge_count()) return std::nullopt;
  if (degree_sequence(g) != degree_sequence(h)) return std::nullopt;
  const AdjacencyRows from = adjacency_rows(g);
  const AdjacencyRows to = adjacency_rows(h);
  std::optional<Permutation> witness;
  detail::DegreeClassSearch search(from, to);
  search.run([&](const ImageArray& img) {
    witness = Permutation::from_array(g.order(), img);
    return true;
  });
  return witness;
}

CanonicalMap build_canonical_map_sequential(int k) {
  check_build_order(k, 7);
  const std::uint64_t total = space_size(k);
  CanonicalScanner scanner(k);
  std::vector<std::uint64_t> packed(total);
  std::vector<std::uint8_t> connected;
  for (std::uint64_t b = 0; b < total; ++b) {
    const auto out = scanner.classify(b);
    if (out.fresh) connected.push_back(is_connected(Graphette(k, b)) ? 1 : 0);
    packed[b] = pack_images(out.index, connected[out.index] != 0, out.witness, k);
  }
  CanonicalMap result;
  result.catalog.k = k;
  result.catalog.canonicals = scanner.found();
  result.catalog.connected = std::move(connected);
  result.table = LookupTable(k, std::move(packed));
  return result;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> partition_ranges(int k, std::size_t m) {
  check_build_order(k, kMaxTableOrder);
  const std::uint64_t total = space_size(k);
  if (m < 1 || m > total) {
    throw ArgumentError("partition count must be in 1.." + std::to_string(total) + " for k=" +
                        std::to_string(k) + ", got " + std::to_string(m));
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  ranges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    ranges.emplace_back(total * i / m, total * (i + 1) / m);
  }
  return ranges;
}

SiftPartition sift_partition(int k, std::uint64_t begin, std::uint64_t end, std::size_t index) {
  check_build_order(k, kMaxTableOrder);
  if (begin >= end) throw ArgumentError("sift_partition: empty range");
  if (end > space_size(k)) throw ArgumentError("sift_partition: range exceeds 2^b(k)");
  SiftPartition part;
  part.index = index;
  part.k = k;
  part.begin = begin;
  part.end = end;
  part.members.resize(end - begin);
  CanonicalScanner scanner(k);
  for (std::uint64_t b = begin; b < end; ++b) {
    const auto out = scanner.classify(b);
    part.members[b - begin] = pack_images(out.index, false, out.witness, k);
  }
  part.temp_canonicals = scanner.found();
  return part;
}

CanonicalMap merge_siftings(std::span<const SiftPartition> parts) {
  if (parts.empty()) throw ArgumentError("merge_siftings: no partitions");
  const int k = parts.front().k;
  std::vector<const SiftPartition*> order;
  for (const auto& p : parts) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const SiftPartition* a, const SiftPartition* b) { return a->begin < b->begin; });
  std::uint64_t cursor = 0;
  for (const SiftPartition* p : order) {
    if (p->k != k) throw ArgumentError("merge_siftings: partitions of different order");
    if (p->begin != cursor || p->end <= p->begin || p->members.size() != p->end - p->begin) {
      throw ArgumentError("merge_siftings: partitions do not tile the bit-vector space (gap or "
                          "overlap at " + std::to_string(cursor) + ")");
    }
    cursor = p->end;
  }
  if (cursor != space_size(k)) {
    throw ArgumentError("merge_siftings: partitions stop at " + std::to_string(cursor) +
                        ", expected " + std::to_string(space_size(k)));
  }

  // links[p][t]: current representative of temp canonical t of partition p,
  // with the permutation carrying t onto it.
  struct Link {
    std::uint64_t rep;
    ImageArray perm;
  };
  std::vector<std::vector<Link>> links(order.size());
  std::vector<std::vector<std::uint64_t>> groups;
  for (std::size_t p = 0; p < order.size(); ++p) {
    for (auto t : order[p]->temp_canonicals) links[p].push_back({t, identity_images(k)});
    groups.push_back(order[p]->temp_canonicals);
  }

  // Each round merges neighbouring groups; within a merged group the lowest
  // member of every class is elected. Groups hold disjoint ascending bit
  // ranges, so after the last round every representative is a global minimum.
  while (groups.size() > 1) {
    std::vector<std::vector<std::uint64_t>> next;
    std::unordered_map<std::uint64_t, Link> moved;
    for (std::size_t g = 0; g < groups.size(); g += 2) {
      if (g + 1 == groups.size()) {
        next.push_back(std::move(groups[g]));
        continue;
      }
      std::vector<std::uint64_t> merged;
      std::merge(groups[g].begin(), groups[g].end(), groups[g + 1].begin(), groups[g + 1].end(),
                 std::back_inserter(merged));
      CanonicalScanner scanner(k);
      for (auto rep : merged) {
        const auto out = scanner.classify(rep);
        if (!out.fresh) moved.emplace(rep, Link{scanner.found()[out.index], out.witness});
      }
      next.push_back(scanner.found());
    }
    for (auto& per_part : links) {
      for (auto& link : per_part) {
        if (auto it = moved.find(link.rep); it != moved.end()) {
          link.perm = compose_images(it->second.perm, link.perm, k);
          link.rep = it->second.rep;
        }
      }
    }
    groups = std::move(next);
  }

  CanonicalMap result;
  result.catalog.k = k;
  result.catalog.canonicals = std::move(groups.front());
  result.catalog.connected = connectivity(k, result.catalog.canonicals);

  std::vector<std::vector<ImageArray>> auts;
  auts.reserve(result.catalog.size());
  for (auto c : result.catalog.canonicals) auts.push_back(automorphism_images(k, c));

  std::vector<std::uint64_t> packed(space_size(k));
  for (std::size_t p = 0; p < order.size(); ++p) {
    const SiftPartition& part = *order[p];
    std::vector<std::uint32_t> final_id;
    for (const auto& link : links[p]) final_id.push_back(*result.catalog.find(link.rep));
    for (std::uint64_t b = part.begin; b < part.end; ++b) {
      const std::uint64_t word = part.members[b - part.begin];
      const auto t = static_cast<std::size_t>(word & packing::kIdMask);
      const Link& link = links[p].at(t);
      const std::uint32_t id = final_id[t];
      const ImageArray w = compose_images(link.perm, unpack_images(word, k), k);
      packed[b] = pack_images(id, result.catalog.connected[id] != 0,
                              normalize_witness(w, auts[id], k), k);
    }
  }
  result.table = LookupTable(k, std::move(packed));
  return result;
}

CanonicalMap build_canonical_map_parallel(int k, std::size_t partitions, unsigned workers) {
  const auto ranges = partition_ranges(k, partitions);
  std::vector<SiftPartition> parts(ranges.size());
  const unsigned threads =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(ranges.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < ranges.size(); i = next++) {
      try {
        parts[i] = sift_partition(k, ranges[i].first, ranges[i].second, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return merge_siftings(parts);
}

}  // namespace graphette
