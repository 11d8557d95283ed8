import os
import tempfile

import pytest

import graphette as gr


@pytest.fixture(scope="module")
def t3():
    return gr.Table.build(3)


@pytest.fixture(scope="module")
def t4():
    return gr.Table.build(4)


def test_encode_decode_apply():
    assert gr.encode(3, [(0, 1), (0, 2), (1, 2)]) == 7
    assert gr.encode(3, [(1, 2)]) == 4
    assert gr.decode(3, 4) == [(2, 1)]
    assert gr.apply_permutation(3, 1, [2, 1, 0]) == 4
    assert gr.bit_count(8) == 28
    # k = 12 uses bit 65
    assert gr.encode(12, [(11, 10)]) == 1 << 65
    assert gr.decode(12, 1 << 65) == [(11, 10)]
    with pytest.raises(ValueError):
        gr.encode(3, [(0, 3)])
    with pytest.raises(ValueError):
        gr.apply_permutation(3, 1, [0, 0, 1])


def test_orbits_and_automorphisms():
    assert gr.split_cycles([2, 0, 1, 3, 5, 4]) == [[0, 2, 1], [3], [4, 5]]
    assert gr.orbits(3, 1) == [0, 0, 2]
    assert len(gr.automorphisms(3, 7)) == 6
    assert gr.is_connected(3, 3)
    assert not gr.is_connected(3, 1)


def test_table_counts():
    expected = {1: (1, 1), 2: (2, 2), 3: (4, 6), 4: (11, 20), 5: (34, 90)}
    for k, (nc, orbits) in expected.items():
        t = gr.Table.build(k)
        assert (t.canonical_count, t.total_orbits) == (nc, orbits)
    assert gr.Table.build(5).connected_count == 21
    assert gr.Table.build(5, partitions=4, workers=2).to_bytes() == gr.Table.build(5).to_bytes()


def test_query(t3):
    rec = t3.query(7)
    assert rec["canonical_id"] == 3
    assert rec["connected"] is True
    assert rec["orbits"] == [5, 5, 5]
    assert rec["witness"] == [0, 1, 2]
    assert t3.query(4)["witness"] == [2, 0, 1]
    assert t3.node_orbit(4, 0) == 2
    assert t3.describe_orbit(4) == (2, 1)
    with pytest.raises(ValueError):
        t3.query(8)


def test_save_load_roundtrip(t4):
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "t4.bin")
        t4.save(path)
        back = gr.Table.load(path)
        assert back == t4
        data = bytearray(open(path, "rb").read())
        data[0] ^= 0xFF
        open(path, "wb").write(bytes(data))
        with pytest.raises(gr.TableFormatError):
            gr.Table.load(path)
    with pytest.raises(OSError):
        gr.Table.load("/nonexistent/t.bin")


def test_graph_sampling_and_enumeration(t3, t4):
    path = gr.Graph.from_edge_list("a b\nb c\n")
    assert (path.node_count, path.edge_count) == (3, 2)
    exact = gr.enumerate(path, t3)
    assert exact.graphette_counts == [0, 0, 1, 0]
    assert exact.odv_row(1)[3] == 1

    c4 = gr.Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert gr.enumerate(c4, t3).graphette_counts == [0, 0, 4, 0]
    with pytest.raises(gr.BoundError):
        gr.enumerate(c4, t3, bound=2)
    with pytest.raises(gr.ParseError):
        gr.Graph.from_edge_list("0 0\n")

    k5 = gr.Graph(5, [(a, b) for a in range(5) for b in range(a + 1, 5)])
    counts = gr.sample(k5, t3, 200, strategy="local", seed=3)
    assert gr.frequencies(counts, t3) == [0.0, 0.0, 0.0, 1.0]

    er = gr.Graph(30, [(a, b) for a in range(30) for b in range(a + 1, 30) if (a * 31 + b * 17) % 5 == 0])
    a = gr.sample(er, t4, 5000, seed=9, workers=2)
    b = gr.sample(er, t4, 5000, seed=9, workers=2)
    assert a == b
    assert sum(a.graphette_counts) == 5000
    tsv = gr.report_tsv(a, t4, er)
    assert tsv.startswith("# summary\nk\t4\nsamples\t5000\n")
