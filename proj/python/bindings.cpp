#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "graphette/errors.hpp"
#include "graphette/orbits.hpp"
#include "graphette/sampler.hpp"
#include "graphette/table_store.hpp"

namespace py = pybind11;
using namespace graphette;

namespace {

// Bit vectors reach 66 bits at k = 12, so they cross as Python ints.
BitWord to_bits(const py::int_& value) {
  const py::int_ mask(0xffffffffffffffffull);
  const auto lo = py::cast<std::uint64_t>(value & mask);
  const auto hi = py::cast<std::uint64_t>(value.attr("__rshift__")(64));
  return (static_cast<BitWord>(hi) << 64) | lo;
}

py::int_ from_bits(BitWord bits) {
  const py::int_ hi(static_cast<std::uint64_t>(bits >> 64));
  const py::int_ lo(static_cast<std::uint64_t>(bits));
  return py::reinterpret_steal<py::int_>(PyNumber_Or(hi.attr("__lshift__")(64).ptr(), lo.ptr()));
}

Graphette make(int k, const py::int_& bits) { return Graphette(k, to_bits(bits)); }

py::dict record_dict(const GraphetteTable& table, const Graphette& g) {
  const auto rec = table.query(g);
  py::dict d;
  d["canonical_id"] = rec.canonical_id;
  d["canonical_bits"] = table.catalog().canonicals[rec.canonical_id];
  d["witness"] = rec.witness.images();
  d["connected"] = rec.connected;
  d["orbits"] = table.node_orbits(g);
  return d;
}

std::string report_tsv(const SampleAccumulator& acc, const GraphetteTable& table, const HostGraph& g) {
  std::ostringstream out;
  write_report_tsv(estimate(acc, table), g, out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graphette lookup tables, orbit enumeration and sampling";

  static py::exception<TableFormatError> table_format_error(m, "TableFormatError", PyExc_ValueError);
  static py::exception<BoundError> bound_error(m, "BoundError", PyExc_RuntimeError);
  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TableFormatError& e) {
      table_format_error(e.what());
    } catch (const BoundError& e) {
      bound_error(e.what());
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const ArgumentError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    }
  });

  m.def("bit_count", &bit_count, py::arg("k"));
  m.def(
      "encode", [](int k, const std::vector<NodePair>& edges) { return from_bits(encode(k, edges).bits()); },
      py::arg("k"), py::arg("edges"));
  m.def(
      "decode", [](int k, const py::int_& bits) { return decode(make(k, bits)); }, py::arg("k"),
      py::arg("bits"));
  m.def(
      "apply_permutation",
      [](int k, const py::int_& bits, const std::vector<int>& perm) {
        return from_bits(apply_permutation(make(k, bits), Permutation(perm)).bits());
      },
      py::arg("k"), py::arg("bits"), py::arg("perm"));
  m.def(
      "is_connected", [](int k, const py::int_& bits) { return is_connected(make(k, bits)); },
      py::arg("k"), py::arg("bits"));
  m.def(
      "degree_sequence", [](int k, const py::int_& bits) { return degree_sequence(make(k, bits)); },
      py::arg("k"), py::arg("bits"));
  m.def(
      "automorphisms",
      [](int k, const py::int_& bits) {
        std::vector<std::vector<int>> out;
        for (const auto& p : generate_automorphisms(make(k, bits)).perms) out.push_back(p.images());
        return out;
      },
      py::arg("k"), py::arg("bits"));
  m.def(
      "orbits", [](int k, const py::int_& bits) { return orbit_partition(make(k, bits)).orbit_of; },
      py::arg("k"), py::arg("bits"), "Orbit label (smallest member) of every node.");
  m.def(
      "split_cycles", [](const std::vector<int>& perm) { return split_cycles(Permutation(perm)).cycles; },
      py::arg("perm"));

  py::class_<GraphetteTable>(m, "Table")
      .def_static(
          "build", [](int k, std::size_t partitions, unsigned workers) {
            py::gil_scoped_release release;
            return GraphetteTable::build(k, partitions, workers);
          },
          py::arg("k"), py::arg("partitions") = 1, py::arg("workers") = 1)
      .def_static(
          "load", [](const std::string& path) { return read_table_file(path); }, py::arg("path"))
      .def(
          "save", [](const GraphetteTable& t, const std::string& path) { write_table_file(t, path); },
          py::arg("path"))
      .def(
          "to_bytes",
          [](const GraphetteTable& t) {
            std::ostringstream out(std::ios::binary);
            serialize(t, out);
            return py::bytes(out.str());
          })
      .def_property_readonly("k", &GraphetteTable::order)
      .def_property_readonly("canonical_count", [](const GraphetteTable& t) { return t.catalog().size(); })
      .def_property_readonly("connected_count", [](const GraphetteTable& t) { return t.catalog().connected_count(); })
      .def_property_readonly("total_orbits", [](const GraphetteTable& t) { return t.orbits().total_orbits(); })
      .def_property_readonly("canonicals", [](const GraphetteTable& t) { return t.catalog().canonicals; })
      .def(
          "query", [](const GraphetteTable& t, const py::int_& bits) { return record_dict(t, make(t.order(), bits)); },
          py::arg("bits"))
      .def(
          "node_orbit",
          [](const GraphetteTable& t, const py::int_& bits, int u) { return t.node_orbit(make(t.order(), bits), u); },
          py::arg("bits"), py::arg("node"))
      .def(
          "describe_orbit",
          [](const GraphetteTable& t, std::uint32_t orbit) { return t.orbits().describe(orbit); },
          py::arg("orbit"))
      .def("__eq__", [](const GraphetteTable& a, const GraphetteTable& b) { return a == b; });

  py::class_<HostGraph>(m, "Graph")
      .def(py::init([](std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
             return HostGraph(n, edges);
           }),
           py::arg("n"), py::arg("edges"))
      .def_static(
          "from_edge_list",
          [](const std::string& text) {
            std::istringstream in(text);
            return load_graph(in);
          },
          py::arg("text"))
      .def_static(
          "load", [](const std::string& path) { return load_graph_file(path); }, py::arg("path"))
      .def_property_readonly("node_count", &HostGraph::node_count)
      .def_property_readonly("edge_count", &HostGraph::edge_count)
      .def("has_edge", &HostGraph::has_edge, py::arg("u"), py::arg("v"))
      .def("name", &HostGraph::name, py::arg("u"))
      .def(
          "induced_bits",
          [](const HostGraph& g, const std::vector<NodeId>& nodes) { return from_bits(induced_bits(g, nodes).bits()); },
          py::arg("nodes"));

  py::class_<SampleAccumulator>(m, "Counts")
      .def_property_readonly("k", &SampleAccumulator::k)
      .def_property_readonly("samples", &SampleAccumulator::samples)
      .def_property_readonly("graphette_counts", &SampleAccumulator::graphette_counts)
      .def_property_readonly("orbit_counts", &SampleAccumulator::orbit_counts)
      .def_property_readonly("tracks_odv", &SampleAccumulator::tracks_odv)
      .def(
          "odv_row",
          [](const SampleAccumulator& a, NodeId v) {
            const auto row = a.odv_row(v);
            return std::vector<std::uint64_t>(row.begin(), row.end());
          },
          py::arg("node"))
      .def("__eq__", [](const SampleAccumulator& a, const SampleAccumulator& b) { return a == b; });

  m.def(
      "sample",
      [](const HostGraph& g, const GraphetteTable& t, std::uint64_t n, const std::string& strategy,
         std::uint64_t seed, unsigned workers, bool odv) {
        const SamplingOptions opt{parse_strategy(strategy), n, seed, workers, odv};
        py::gil_scoped_release release;
        return run_sampling(g, t, opt);
      },
      py::arg("graph"), py::arg("table"), py::arg("samples"), py::arg("strategy") = "uniform",
      py::arg("seed") = 0, py::arg("workers") = 1, py::arg("odv") = true);
  m.def(
      "enumerate",
      [](const HostGraph& g, const GraphetteTable& t, std::uint64_t bound, bool odv) {
        py::gil_scoped_release release;
        return exhaustive_enumerate(g, t, bound, odv);
      },
      py::arg("graph"), py::arg("table"), py::arg("bound") = kDefaultEnumerationBound, py::arg("odv") = true);
  m.def(
      "frequencies",
      [](const SampleAccumulator& acc, const GraphetteTable& t) {
        std::vector<double> out;
        for (const auto& f : estimate(acc, t).graphettes) out.push_back(f.frequency);
        return out;
      },
      py::arg("counts"), py::arg("table"));
  m.def("report_tsv", &report_tsv, py::arg("counts"), py::arg("table"), py::arg("graph"));
}
