#include "graphette/sampler.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "graphette/errors.hpp"
#include "memory_hints.hpp"

namespace graphette {

SamplingStrategy parse_strategy(std::string_view name) {
  if (name == "uniform") return SamplingStrategy::uniform;
  if (name == "local" || name == "local-expansion") return SamplingStrategy::local_expansion;
  if (name == "edge" || name == "edge-expansion") return SamplingStrategy::edge_expansion;
  throw ArgumentError("unknown sampling strategy '" + std::string(name) +
                      "' (expected uniform, local or edge)");
}

std::string_view to_string(SamplingStrategy strategy) {
  switch (strategy) {
    case SamplingStrategy::uniform: return "uniform";
    case SamplingStrategy::local_expansion: return "local";
    case SamplingStrategy::edge_expansion: return "edge";
  }
  return "?";
}

HostGraph load_graph(std::istream& in) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> names;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto intern = [&](const std::string& token) {
    auto [it, fresh] = ids.emplace(token, static_cast<NodeId>(names.size()));
    if (fresh) names.push_back(token);
    return it->second;
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b)) throw ParseError("expected two node names", lineno);
    if (fields >> extra) throw ParseError("expected two node names, found more fields", lineno);
    if (a == b) throw ParseError("self-loop on node '" + a + "'", lineno);
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    edges.emplace_back(u, v);
  }
  if (names.empty()) throw ParseError("graph has no edges", lineno);
  const std::size_t n = names.size();
  return HostGraph(n, edges, std::move(names));
}

HostGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path.string());
  return load_graph(in);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace {

NodeId uniform_node(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(n - 1))(rng);
}

bool contains(const std::vector<NodeId>& v, NodeId x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

NodeId uniform_unselected(std::size_t n, const std::vector<NodeId>& selected, Rng& rng) {
  for (;;) {
    const NodeId u = uniform_node(n, rng);
    if (!contains(selected, u)) return u;
  }
}

// frontier: sorted union of neighbors of `selected`, minus `selected`.
void add_to_frontier(const HostGraph& g, NodeId x, const std::vector<NodeId>& selected,
                     std::vector<NodeId>& frontier) {
  frontier.erase(std::remove(frontier.begin(), frontier.end(), x), frontier.end());
  std::vector<NodeId> merged;
  merged.reserve(frontier.size() + g.degree(x));
  const auto nbrs = g.neighbors(x);
  std::set_union(frontier.begin(), frontier.end(), nbrs.begin(), nbrs.end(),
                 std::back_inserter(merged));
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [&](NodeId v) { return contains(selected, v); }),
               merged.end());
  frontier.swap(merged);
}

void expand(const HostGraph& g, int k, std::vector<NodeId>& selected, Rng& rng) {
  std::vector<NodeId> frontier;
  for (NodeId x : selected) add_to_frontier(g, x, selected, frontier);
  while (static_cast<int>(selected.size()) < k) {
    NodeId next;
    if (frontier.empty()) {
      next = uniform_unselected(g.node_count(), selected, rng);
    } else {
      next = frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)];
    }
    selected.push_back(next);
    add_to_frontier(g, next, selected, frontier);
  }
}

}  // namespace

std::vector<NodeId> draw_sample(const HostGraph& g, int k, SamplingStrategy strategy, Rng& rng) {
  if (k < 1 || k > kMaxOrder) throw ArgumentError("sample size k out of range");
  if (g.node_count() < static_cast<std::size_t>(k)) {
    throw ArgumentError("host graph has " + std::to_string(g.node_count()) +
                        " nodes, fewer than k=" + std::to_string(k));
  }
  std::vector<NodeId> selected;
  selected.reserve(static_cast<std::size_t>(k));
  switch (strategy) {
    case SamplingStrategy::uniform:
      while (static_cast<int>(selected.size()) < k) {
        selected.push_back(uniform_unselected(g.node_count(), selected, rng));
      }
      break;
    case SamplingStrategy::local_expansion:
      selected.push_back(uniform_node(g.node_count(), rng));
      expand(g, k, selected, rng);
      break;
    case SamplingStrategy::edge_expansion: {
      if (g.edge_count() == 0) throw ArgumentError("edge expansion needs a graph with edges");
      if (k < 2) throw ArgumentError("edge expansion needs k >= 2");
      const auto e = g.edges()[std::uniform_int_distribution<std::size_t>(0, g.edge_count() - 1)(rng)];
      selected.push_back(e.first);
      selected.push_back(e.second);
      expand(g, k, selected, rng);
      break;
    }
  }
  return selected;
}

SampleAccumulator::SampleAccumulator(const GraphetteTable& table, std::size_t host_nodes,
                                     bool track_odv, std::uint64_t seed)
    : k_(table.order()),
      host_nodes_(host_nodes),
      total_orbits_(table.orbits().total_orbits()),
      seed_(seed),
      graphette_counts_(table.catalog().size(), 0),
      orbit_counts_(total_orbits_, 0) {
  if (track_odv) {
    const std::uint64_t entries = static_cast<std::uint64_t>(host_nodes) * total_orbits_;
    if (entries > kMaxOdvEntries) {
      throw BoundError("orbit degree vectors need " + std::to_string(host_nodes) + " x " +
                       std::to_string(total_orbits_) + " counters, above the limit of " +
                       std::to_string(kMaxOdvEntries) + "; disable ODV tracking");
    }
    detail::reserve_huge(odv_, static_cast<std::size_t>(entries));
    odv_.assign(entries, 0);
  }
}

std::span<const std::uint64_t> SampleAccumulator::odv_row(NodeId node) const {
  if (!tracks_odv()) throw ArgumentError("orbit degree vectors were not tracked");
  if (node >= host_nodes_) throw ArgumentError("node " + std::to_string(node) + " out of range");
  return {odv_.data() + static_cast<std::size_t>(node) * total_orbits_, total_orbits_};
}

void SampleAccumulator::merge(const SampleAccumulator& other) {
  if (other.k_ != k_ || other.host_nodes_ != host_nodes_ || other.total_orbits_ != total_orbits_ ||
      other.odv_.size() != odv_.size()) {
    throw ArgumentError("cannot merge accumulators of different shape");
  }
  samples_ += other.samples_;
  for (std::size_t i = 0; i < graphette_counts_.size(); ++i) graphette_counts_[i] += other.graphette_counts_[i];
  for (std::size_t i = 0; i < orbit_counts_.size(); ++i) orbit_counts_[i] += other.orbit_counts_[i];
  for (std::size_t i = 0; i < odv_.size(); ++i) odv_[i] += other.odv_[i];
}

void SampleAccumulator::prefetch_rows(std::span<const NodeId> nodes) const {
  // The orbit is not known yet, but short rows can be requested whole so the
  // row misses overlap with the edge probes.
  constexpr std::size_t kPrefetchRowBytes = 256;
  const std::size_t row_bytes = total_orbits_ * sizeof(std::uint64_t);
  if (odv_.empty() || row_bytes > kPrefetchRowBytes) return;
  for (NodeId v : nodes) {
    if (v >= host_nodes_) continue;
    const auto row = reinterpret_cast<std::uintptr_t>(odv_.data() + static_cast<std::size_t>(v) * total_orbits_);
    for (std::uintptr_t line = row & ~std::uintptr_t{63}; line < row + row_bytes; line += 64) {
      detail::prefetch(reinterpret_cast<const void*>(line));
    }
  }
}

void SampleAccumulator::add(const HostGraph& g, std::span<const NodeId> nodes, const GraphetteTable& table) {
  const Graphette sub = induced_bits(g, nodes);
  // Table words were validated when the table was built or loaded, so decode
  // them directly instead of going through unpack_record.
  const std::uint64_t word = table.table().packed_records()[sub.code()];
  const auto id = static_cast<std::uint32_t>(word & packing::kIdMask);
  ++samples_;
  ++graphette_counts_[id];
  const auto& orbits = table.orbits();
  std::array<std::uint32_t, kMaxTableOrder> orbit{};
  for (int u = 0; u < k_; ++u) {
    const int image = static_cast<int>((word >> (packing::kPermShift + packing::kImageBits * u)) & 0x7u);
    orbit[static_cast<std::size_t>(u)] = orbits.global_orbit(id, image);
  }
  if (!tracks_odv()) {
    for (int u = 0; u < k_; ++u) ++orbit_counts_[orbit[static_cast<std::size_t>(u)]];
    return;
  }
  std::array<std::uint64_t*, kMaxTableOrder> cell{};
  for (int u = 0; u < k_; ++u) {
    const auto su = static_cast<std::size_t>(u);
    cell[su] = odv_.data() + static_cast<std::size_t>(nodes[su]) * total_orbits_ + orbit[su];
    detail::prefetch(cell[su]);
  }
  for (int u = 0; u < k_; ++u) {
    const auto su = static_cast<std::size_t>(u);
    ++orbit_counts_[orbit[su]];
    ++*cell[su];
  }
}

namespace {

void check_accumulate_args(const SampleAccumulator& acc, const HostGraph& g, std::size_t nodes,
                           const GraphetteTable& table) {
  if (table.order() != acc.k() || nodes % static_cast<std::size_t>(acc.k()) != 0 || nodes == 0) {
    throw ArgumentError("accumulate: sample of " + std::to_string(nodes) + " nodes for k=" +
                        std::to_string(acc.k()) + " accumulator and k=" +
                        std::to_string(table.order()) + " table");
  }
  if (g.node_count() != acc.host_nodes()) throw ArgumentError("accumulate: host graph size mismatch");
}

}  // namespace

void accumulate(SampleAccumulator& acc, const HostGraph& g, std::span<const NodeId> nodes,
                const GraphetteTable& table) {
  check_accumulate_args(acc, g, nodes.size() == static_cast<std::size_t>(acc.k()) ? nodes.size() : 0, table);
  acc.prefetch_rows(nodes);
  acc.add(g, nodes, table);
}

void accumulate_batch(SampleAccumulator& acc, const HostGraph& g, std::span<const NodeId> flat,
                      const GraphetteTable& table) {
  check_accumulate_args(acc, g, flat.size(), table);
  // Software pipeline: request the memory of sample i + D while identifying
  // sample i, so host-size-dependent cache misses are not waited on.
  constexpr std::size_t kLookahead = 8;
  const auto k = static_cast<std::size_t>(acc.k());
  const std::size_t count = flat.size() / k;
  auto sample = [&](std::size_t i) { return flat.subspan(i * k, k); };
  for (std::size_t i = 0; i < std::min(count, kLookahead); ++i) {
    acc.prefetch_rows(sample(i));
    g.prefetch_induced(sample(i));
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (i + kLookahead < count) {
      acc.prefetch_rows(sample(i + kLookahead));
      g.prefetch_induced(sample(i + kLookahead));
    }
    acc.add(g, sample(i), table);
  }
}

SampleAccumulator run_sampling(const HostGraph& g, const GraphetteTable& table,
                               const SamplingOptions& options) {
  if (options.samples == 0) throw ArgumentError("sample count must be at least 1");
  const int k = table.order();
  if (g.node_count() < static_cast<std::size_t>(k)) {
    throw ArgumentError("host graph has " + std::to_string(g.node_count()) +
                        " nodes, fewer than k=" + std::to_string(k));
  }
  if (options.strategy == SamplingStrategy::edge_expansion && g.edge_count() == 0) {
    throw ArgumentError("edge expansion needs a graph with edges");
  }
  const unsigned workers = std::max(1u, options.workers);
  std::vector<SampleAccumulator> parts;
  for (unsigned w = 0; w < workers; ++w) parts.emplace_back(table, g.node_count(), options.track_odv, options.seed);
  auto work = [&](unsigned w) {
    std::uint64_t quota = options.samples / workers + (w < options.samples % workers ? 1 : 0);
    Rng rng = make_rng(options.seed, w);
    constexpr std::uint64_t kBatch = 256;
    std::vector<NodeId> batch;
    batch.reserve(kBatch * static_cast<std::size_t>(k));
    while (quota > 0) {
      batch.clear();
      for (std::uint64_t b = 0; b < kBatch && quota > 0; ++b, --quota) {
        const auto nodes = draw_sample(g, k, options.strategy, rng);
        batch.insert(batch.end(), nodes.begin(), nodes.end());
      }
      accumulate_batch(parts[w], g, batch, table);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (unsigned w = 1; w < workers; ++w) parts[0].merge(parts[w]);
  return std::move(parts[0]);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

SampleAccumulator exhaustive_enumerate(const HostGraph& g, const GraphetteTable& table,
                                       std::uint64_t bound, bool track_odv) {
  const int k = table.order();
  const std::size_t n = g.node_count();
  if (n < static_cast<std::size_t>(k)) {
    throw ArgumentError("host graph has " + std::to_string(n) + " nodes, fewer than k=" + std::to_string(k));
  }
  const std::uint64_t subsets = binomial(n, static_cast<std::uint64_t>(k));
  if (subsets > bound) {
    throw BoundError("exhaustive enumeration would visit C(" + std::to_string(n) + "," +
                     std::to_string(k) + ") = " +
                     (subsets == std::numeric_limits<std::uint64_t>::max() ? std::string("more than 2^64")
                                                                          : std::to_string(subsets)) +
                     " subsets, above the bound of " + std::to_string(bound));
  }
  SampleAccumulator acc(table, n, track_odv);
  std::vector<NodeId> combo(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = static_cast<NodeId>(i);
  for (;;) {
    accumulate(acc, g, combo, table);
    int i = k - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - static_cast<std::size_t>(k - i)) --i;
    if (i < 0) break;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }
  return acc;
}

std::vector<GraphetteFrequency> Report::graphlet_view() const {
  std::vector<GraphetteFrequency> out;
  std::uint64_t connected = 0;
  for (const auto& row : graphettes) {
    if (row.connected) connected += row.count;
  }
  for (auto row : graphettes) {
    if (!row.connected) continue;
    row.frequency = connected ? static_cast<double>(row.count) / static_cast<double>(connected) : 0.0;
    out.push_back(row);
  }
  return out;
}

std::vector<double> Report::odv_normalized(NodeId node) const {
  if (odv.empty()) throw ArgumentError("orbit degree vectors were not tracked");
  const std::size_t width = orbits.size();
  if (node >= node_samples.size()) throw ArgumentError("node out of range");
  std::vector<double> out(width, 0.0);
  const double denom = static_cast<double>(node_samples[node]);
  if (denom == 0) return out;
  for (std::size_t o = 0; o < width; ++o) out[o] = static_cast<double>(odv[node * width + o]) / denom;
  return out;
}

Report estimate(const SampleAccumulator& acc, const GraphetteTable& table) {
  if (acc.samples() == 0) throw ArgumentError("estimate: no samples accumulated");
  if (acc.k() != table.order()) throw ArgumentError("estimate: table and accumulator disagree on k");
  Report r;
  r.k = acc.k();
  r.samples = acc.samples();
  const double n = static_cast<double>(acc.samples());
  const auto& catalog = table.catalog();
  for (std::uint32_t c = 0; c < catalog.size(); ++c) {
    const auto count = acc.graphette_counts()[c];
    r.graphettes.push_back({c, catalog.canonicals[c], catalog.connected[c] != 0, count,
                            static_cast<double>(count) / n});
  }
  const double kn = n * acc.k();
  for (std::uint32_t o = 0; o < acc.total_orbits(); ++o) {
    const auto [c, local] = table.orbits().describe(o);
    const auto count = acc.orbit_counts()[o];
    r.orbits.push_back({o, c, local, count, static_cast<double>(count) / kn});
  }
  if (acc.tracks_odv()) {
    r.node_samples.assign(acc.host_nodes(), 0);
    r.odv.reserve(acc.host_nodes() * acc.total_orbits());
    for (NodeId v = 0; v < acc.host_nodes(); ++v) {
      for (auto x : acc.odv_row(v)) {
        r.odv.push_back(x);
        r.node_samples[v] += x;
      }
    }
  }
  return r;
}

void write_report_tsv(const Report& report, const HostGraph& g, std::ostream& out) {
  char buf[64];
  auto freq = [&](double f) {
    std::snprintf(buf, sizeof buf, "%.9f", f);
    return std::string(buf);
  };
  out << "# summary\nk\t" << report.k << "\nsamples\t" << report.samples << "\n";
  out << "# graphettes\ncanonical_id\tbits\tconnected\tcount\tfrequency\n";
  for (const auto& row : report.graphettes) {
    out << row.canonical_id << '\t' << row.bits << '\t' << (row.connected ? 1 : 0) << '\t'
        << row.count << '\t' << freq(row.frequency) << '\n';
  }
  out << "# orbits\norbit_id\tcanonical_id\tlocal_orbit\tcount\tfrequency\n";
  for (const auto& row : report.orbits) {
    out << row.orbit_id << '\t' << row.canonical_id << '\t' << row.local_orbit << '\t' << row.count
        << '\t' << freq(row.frequency) << '\n';
  }
  if (report.odv.empty()) return;
  const std::size_t width = report.orbits.size();
  if (report.node_samples.size() != g.node_count()) {
    throw ArgumentError("report and host graph disagree on node count");
  }
  out << "# odv\nnode\tsamples";
  for (std::size_t o = 0; o < width; ++o) out << "\to" << o;
  out << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.name(v) << '\t' << report.node_samples[v];
    for (std::size_t o = 0; o < width; ++o) out << '\t' << report.odv[v * width + o];
    out << '\n';
  }
}

}  // namespace graphette
