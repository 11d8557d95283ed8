#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphette/host_graph.hpp"
#include "graphette/table_store.hpp"

namespace graphette {

enum class SamplingStrategy {
  uniform,          // k nodes uniformly at random
  local_expansion,  // grow from a uniform start node through neighbors
  edge_expansion,   // seed with a uniform edge, then grow as above
};

SamplingStrategy parse_strategy(std::string_view name);
std::string_view to_string(SamplingStrategy strategy);

/// Parses whitespace-separated node pairs, one per line. Lines starting with
/// '#' and blank lines are skipped. Names are interned in order of first
/// appearance; duplicate edges collapse.
HostGraph load_graph(std::istream& in);
HostGraph load_graph_file(const std::filesystem::path& path);

using Rng = std::mt19937_64;

/// Stream `stream` of the generator family named by `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// k distinct node labels drawn by the given strategy. Local expansion picks
/// uniformly from the neighbors of the selected set, falling back to a
/// uniform unselected node when that frontier is empty.
std::vector<NodeId> draw_sample(const HostGraph& g, int k, SamplingStrategy strategy, Rng& rng);

/// Tallies per canonical graphette, per global orbit and, optionally, the
/// per-node orbit degree vectors (dense node x orbit matrix).
class SampleAccumulator {
 public:
  /// Largest node x orbit matrix allocated for orbit degree vectors.
  static constexpr std::uint64_t kMaxOdvEntries = std::uint64_t{1} << 27;

  SampleAccumulator(const GraphetteTable& table, std::size_t host_nodes, bool track_odv = true,
                    std::uint64_t seed = 0);

  int k() const { return k_; }
  std::uint64_t samples() const { return samples_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t host_nodes() const { return host_nodes_; }
  std::uint32_t total_orbits() const { return total_orbits_; }
  const std::vector<std::uint64_t>& graphette_counts() const { return graphette_counts_; }
  const std::vector<std::uint64_t>& orbit_counts() const { return orbit_counts_; }
  bool tracks_odv() const { return !odv_.empty(); }
  std::span<const std::uint64_t> odv_row(NodeId node) const;

  /// Elementwise sum.
  void merge(const SampleAccumulator& other);

  friend bool operator==(const SampleAccumulator&, const SampleAccumulator&) = default;

 private:
  friend void accumulate(SampleAccumulator&, const HostGraph&, std::span<const NodeId>,
                         const GraphetteTable&);
  friend void accumulate_batch(SampleAccumulator&, const HostGraph&, std::span<const NodeId>,
                               const GraphetteTable&);
  void prefetch_rows(std::span<const NodeId> nodes) const;
  void add(const HostGraph& g, std::span<const NodeId> nodes, const GraphetteTable& table);

  int k_;
  std::size_t host_nodes_;
  std::uint32_t total_orbits_;
  std::uint64_t seed_;
  std::uint64_t samples_ = 0;
  std::vector<std::uint64_t> graphette_counts_;
  std::vector<std::uint64_t> orbit_counts_;
  std::vector<std::uint64_t> odv_;
};

/// Identifies the graphette on `nodes` and its node orbits via the table and
/// adds one sample.
void accumulate(SampleAccumulator& acc, const HostGraph& g, std::span<const NodeId> nodes,
                const GraphetteTable& table);

/// Same as calling accumulate on each consecutive k-node slice of `flat`, in
/// order, but pipelined so memory latency on large hosts overlaps with work.
void accumulate_batch(SampleAccumulator& acc, const HostGraph& g, std::span<const NodeId> flat,
                      const GraphetteTable& table);

struct SamplingOptions {
  SamplingStrategy strategy = SamplingStrategy::uniform;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool track_odv = true;
};

/// Worker w draws its share of the samples from make_rng(seed, w); results
/// are merged in worker order.
SampleAccumulator run_sampling(const HostGraph& g, const GraphetteTable& table,
                               const SamplingOptions& options);

inline constexpr std::uint64_t kDefaultEnumerationBound = 10'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Every k-subset exactly once, ascending. Throws BoundError when C(n, k)
/// exceeds `bound`.
SampleAccumulator exhaustive_enumerate(const HostGraph& g, const GraphetteTable& table,
                                       std::uint64_t bound = kDefaultEnumerationBound,
                                       bool track_odv = true);

struct GraphetteFrequency {
  std::uint32_t canonical_id;
  std::uint64_t bits;
  bool connected;
  std::uint64_t count;
  double frequency;
};

struct OrbitFrequency {
  std::uint32_t orbit_id;
  std::uint32_t canonical_id;
  int local_orbit;
  std::uint64_t count;
  double frequency;
};

struct Report {
  int k = 0;
  std::uint64_t samples = 0;
  std::vector<GraphetteFrequency> graphettes;
  std::vector<OrbitFrequency> orbits;
  /// Row-major node x orbit raw counts; empty when not tracked.
  std::vector<std::uint64_t> odv;
  /// Samples containing each node (the ODV row sums).
  std::vector<std::uint64_t> node_samples;

  /// Connected graphettes only, renormalized over connected samples.
  std::vector<GraphetteFrequency> graphlet_view() const;
  /// ODV row divided by the number of samples containing the node.
  std::vector<double> odv_normalized(NodeId node) const;
};

Report estimate(const SampleAccumulator& acc, const GraphetteTable& table);

/// Sections "# summary", "# graphettes", "# orbits" and, when tracked,
/// "# odv". Identical schema for sampled and enumerated reports.
void write_report_tsv(const Report& report, const HostGraph& g, std::ostream& out);

}  // namespace graphette
