#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "graphette/errors.hpp"
#include "graphette/orbits.hpp"
#include "graphette/sampler.hpp"
#include "graphette/table_store.hpp"

using namespace graphette;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kIo = 3,
  kFormat = 4,
  kBound = 5,
};

struct Config {
  int k = 5;
  std::size_t partitions = 1;
  unsigned workers = 1;
  std::string table_path;
  std::string graph_path;
  std::string out_path;
  std::string bits;
  std::string edges;
  std::string strategy = "uniform";
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t bound = kDefaultEnumerationBound;
  bool no_odv = false;
};

std::uint64_t parse_bits(const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    throw ArgumentError("--bits: not an unsigned integer: " + text);
  }
  if (used != text.size()) throw ArgumentError("--bits: not an unsigned integer: " + text);
  return v;
}

// "0-1,1-2" or "0:1 1:2"
std::vector<NodePair> parse_edges(const std::string& text) {
  std::string norm = text;
  for (char& c : norm)
    if (c == ',' || c == '-' || c == ':') c = ' ';
  std::istringstream in(norm);
  std::vector<NodePair> out;
  int a = 0, b = 0;
  while (in >> a) {
    if (!(in >> b)) throw ArgumentError("--edges: odd number of endpoints in '" + text + "'");
    out.emplace_back(a, b);
  }
  if (!in.eof()) throw ArgumentError("--edges: cannot parse '" + text + "'");
  return out;
}

std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

void cmd_build_table(const Config& cfg) {
  const auto start = std::chrono::steady_clock::now();
  // k = 8 is only reachable through partitioned sifting
  const std::size_t m = (cfg.k >= 8 && cfg.partitions == 1) ? cfg.workers * 4 : cfg.partitions;
  const auto table = GraphetteTable::build(cfg.k, m, cfg.workers);
  const std::string path =
      cfg.out_path.empty() ? "graphette_k" + std::to_string(cfg.k) + ".bin" : cfg.out_path;
  write_table_file(table, path);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "k=" << cfg.k << " NC=" << table.catalog().size()
            << " orbits=" << table.orbits().total_orbits() << " elapsed=" << secs << "s"
            << " -> " << path << "\n";
}

void print_orbit_listing(const CanonicalCatalog& catalog, const GlobalOrbitIndex& orbits,
                         std::ostream& out) {
  out << "k=" << catalog.k << " canonicals=" << catalog.size()
      << " connected=" << catalog.connected_count() << " orbits=" << orbits.total_orbits() << "\n";
  for (std::uint32_t c = 0; c < catalog.size(); ++c) {
    const Graphette g = catalog.graphette(c);
    out << c << "\tbits=" << catalog.canonicals[c] << "\tconnected=" << (catalog.connected[c] ? 1 : 0)
        << "\tedges=";
    const auto edges = decode(g);
    for (std::size_t i = 0; i < edges.size(); ++i)
      out << (i ? "," : "") << edges[i].first << "-" << edges[i].second;
    if (edges.empty()) out << "none";
    out << "\torbits=";
    const auto labels = orbits.labels(c);
    bool first = true;
    for (int label = 0; label < catalog.k; ++label) {
      if (labels[static_cast<std::size_t>(label)] != label) continue;
      out << (first ? "" : " ") << orbits.global_orbit(c, label) << ":{";
      first = false;
      bool first_node = true;
      for (int u = 0; u < catalog.k; ++u) {
        if (labels[static_cast<std::size_t>(u)] != label) continue;
        out << (first_node ? "" : ",") << u;
        first_node = false;
      }
      out << "}";
    }
    out << "\n";
  }
}

void cmd_orbits(const Config& cfg, bool k_given) {
  if (!cfg.table_path.empty()) {
    if (k_given) throw ArgumentError("orbits: give either -k or --table, not both");
    const auto table = read_table_file(cfg.table_path);
    with_output(cfg.out_path, [&](std::ostream& o) { print_orbit_listing(table.catalog(), table.orbits(), o); });
    return;
  }
  if (cfg.k > 7) throw ArgumentError("orbits: on-the-fly listing supports k <= 7; pass --table for k = 8");
  const auto map = build_canonical_map_sequential(cfg.k);
  const auto orbits = compute_orbit_index(map.catalog, cfg.workers);
  with_output(cfg.out_path, [&](std::ostream& o) { print_orbit_listing(map.catalog, orbits, o); });
}

void cmd_query(const Config& cfg) {
  if (cfg.bits.empty() == cfg.edges.empty()) throw ArgumentError("query: give exactly one of --bits or --edges");
  const auto table = read_table_file(cfg.table_path);
  const int k = table.order();
  Graphette g = cfg.bits.empty() ? encode(k, parse_edges(cfg.edges)) : [&] {
    const std::uint64_t b = parse_bits(cfg.bits);
    if (b >= record_count(k)) {
      throw ArgumentError("--bits " + cfg.bits + " out of range for k=" + std::to_string(k) +
                          " (must be < " + std::to_string(record_count(k)) + ")");
    }
    return Graphette(k, b);
  }();
  const auto rec = table.query(g);
  std::cout << "canonical_id=" << rec.canonical_id
            << " canonical_bits=" << table.catalog().canonicals[rec.canonical_id]
            << " witness=" << rec.witness.to_string()
            << " connected=" << (rec.connected ? "true" : "false")
            << " orbits=" << join(table.node_orbits(g)) << "\n";
}

void cmd_sample(const Config& cfg) {
  const auto table = read_table_file(cfg.table_path);
  const auto graph = load_graph_file(cfg.graph_path);
  if (graph.node_count() < static_cast<std::size_t>(table.order())) {
    throw ArgumentError("graph has " + std::to_string(graph.node_count()) + " nodes, fewer than k=" +
                        std::to_string(table.order()));
  }
  SamplingOptions opt{parse_strategy(cfg.strategy), cfg.samples, cfg.seed, cfg.workers, !cfg.no_odv};
  std::cerr << "sampling N=" << cfg.samples << " k=" << table.order() << " strategy="
            << to_string(opt.strategy) << " seed=" << cfg.seed << " workers=" << cfg.workers
            << " on n=" << graph.node_count() << " m=" << graph.edge_count() << "\n";
  const auto start = std::chrono::steady_clock::now();
  const auto acc = run_sampling(graph, table, opt);
  const auto report = estimate(acc, table);
  with_output(cfg.out_path, [&](std::ostream& o) { write_report_tsv(report, graph, o); });
  std::cerr << "done in "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
            << "s\n";
}

void cmd_enumerate(const Config& cfg) {
  const auto table = read_table_file(cfg.table_path);
  const auto graph = load_graph_file(cfg.graph_path);
  const auto acc = exhaustive_enumerate(graph, table, cfg.bound, !cfg.no_odv);
  const auto report = estimate(acc, table);
  with_output(cfg.out_path, [&](std::ostream& o) { write_report_tsv(report, graph, o); });
  std::cerr << "enumerated " << acc.samples() << " " << table.order() << "-sets\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphette tables, orbits and sampling"};
  app.require_subcommand(1);
  Config cfg;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());

  auto* build = app.add_subcommand("build-table", "build and write a lookup table for k");
  build->add_option("-k", cfg.k, "graphette order")->check(CLI::Range(1, 8))->capture_default_str();
  build->add_option("-m,--partitions", cfg.partitions, "number of sifting partitions")
      ->check(CLI::PositiveNumber);
  build->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1u, 4096u));
  build->add_option("-o,--output", cfg.out_path, "output path (default graphette_k<k>.bin)");

  auto* orbits = app.add_subcommand("orbits", "list canonicals with their orbit partitions");
  auto* orbits_k = orbits->add_option("-k", cfg.k, "graphette order (k <= 7)")->check(CLI::Range(1, 8));
  orbits->add_option("--table", cfg.table_path, "read catalog and orbits from a table file")
      ->check(CLI::ExistingFile);
  orbits->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1u, 4096u));
  orbits->add_option("-o,--output", cfg.out_path, "output path (default stdout)");

  auto* query = app.add_subcommand("query", "look up one graphette");
  query->add_option("--table", cfg.table_path, "table file")->required()->check(CLI::ExistingFile);
  query->add_option("--bits", cfg.bits, "bit vector, decimal or 0x-prefixed");
  query->add_option("--edges", cfg.edges, "edge list literal such as 0-1,1-2");

  auto* sample = app.add_subcommand("sample", "estimate graphette and orbit frequencies by sampling");
  sample->add_option("--table", cfg.table_path, "table file")->required()->check(CLI::ExistingFile);
  sample->add_option("--graph", cfg.graph_path, "edge list file")->required()->check(CLI::ExistingFile);
  sample->add_option("-N,--samples", cfg.samples, "number of samples")->required()->check(CLI::PositiveNumber);
  sample->add_option("--strategy", cfg.strategy, "uniform, local or edge")
      ->check(CLI::IsMember({"uniform", "local", "local-expansion", "edge", "edge-expansion"}))
      ->capture_default_str();
  sample->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  sample->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1u, 4096u));
  sample->add_option("-o,--output", cfg.out_path, "report path (default stdout)");
  sample->add_flag("--no-odv", cfg.no_odv, "skip per-node orbit degree vectors");

  auto* enumerate = app.add_subcommand("enumerate", "exact counts over every k-set");
  enumerate->add_option("--table", cfg.table_path, "table file")->required()->check(CLI::ExistingFile);
  enumerate->add_option("--graph", cfg.graph_path, "edge list file")->required()->check(CLI::ExistingFile);
  enumerate->add_option("-o,--output", cfg.out_path, "report path (default stdout)");
  enumerate->add_option("--bound", cfg.bound, "maximum number of k-sets")->capture_default_str();
  enumerate->add_flag("--no-odv", cfg.no_odv, "skip per-node orbit degree vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  cfg.workers = std::min(cfg.workers, 4 * hw);

  try {
    if (*build) cmd_build_table(cfg);
    else if (*orbits) cmd_orbits(cfg, orbits_k->count() > 0);
    else if (*query) cmd_query(cfg);
    else if (*sample) cmd_sample(cfg);
    else if (*enumerate) cmd_enumerate(cfg);
    return kOk;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const TableFormatError& e) {
    std::cerr << "table format error: " << e.what() << "\n";
    return kFormat;
  } catch (const ParseError& e) {
    std::cerr << "graph format error: " << e.what() << "\n";
    return kFormat;
  } catch (const BoundError& e) {
    std::cerr << "bound error: " << e.what() << "\n";
    return kBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}
