"""Graphette lookup tables, orbit enumeration and sampling (C++ core)."""

from ._core import (
    BoundError,
    Counts,
    Graph,
    ParseError,
    Table,
    TableFormatError,
    apply_permutation,
    automorphisms,
    bit_count,
    decode,
    degree_sequence,
    encode,
    enumerate,
    frequencies,
    is_connected,
    orbits,
    report_tsv,
    sample,
    split_cycles,
)

__all__ = [
    "BoundError",
    "Counts",
    "Graph",
    "ParseError",
    "Table",
    "TableFormatError",
    "apply_permutation",
    "automorphisms",
    "bit_count",
    "decode",
    "degree_sequence",
    "encode",
    "enumerate",
    "frequencies",
    "is_connected",
    "orbits",
    "report_tsv",
    "sample",
    "split_cycles",
]
