import io
import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from qembed.graph import Graph, complete_graph, graph_from_edges, path_graph
from qembed.graph6 import (
    Graph6Error,
    InvalidByte,
    NonzeroPadding,
    TrailingGarbage,
    TruncatedBits,
    UnsupportedFormat,
    iter_graph6_records,
    parse_graph6,
    read_edge_list,
    read_graph6_stream,
    write_graph6,
)
from qembed.errors import InputError


def nx_decode(s):
    h = nx.from_graph6_bytes(s.encode())
    return graph_from_edges(h.number_of_nodes(), h.edges())


def random_graph(rng, n):
    p = rng.random()
    return graph_from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


class TestParse:
    def test_k2(self):
        # 'A' -> n=2; '_' = 95-63 = 32 = 0b100000, so x(0,1)=1
        assert parse_graph6("A_") == complete_graph(2)
        assert nx_decode("A_") == complete_graph(2)

    def test_edgeless_pair(self):
        assert parse_graph6("A?") == Graph(2, frozenset())

    def test_star(self):
        # 'D' -> n=5; '?' = 000000, '{' = 60 = 111100: x(0,4)..x(3,4) set
        g = parse_graph6("D?{")
        assert g == graph_from_edges(5, [(0, 4), (1, 4), (2, 4), (3, 4)])
        assert g == nx_decode("D?{")
        assert write_graph6(g) == "D?{"

    def test_four_cycle(self):
        assert parse_graph6("Cr") == graph_from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])

    def test_header_prefix(self):
        assert parse_graph6(">>graph6<<A_") == complete_graph(2)

    def test_large_n_four_byte_form(self):
        g = path_graph(70)
        s = write_graph6(g)
        assert s[0] == "~" and len(s) == 4 + -(-(70 * 69 // 2) // 6)
        assert parse_graph6(s) == g
        assert nx_decode(s) == g


class TestErrors:
    def test_invalid_byte(self):
        with pytest.raises(InvalidByte):
            parse_graph6("A!")

    def test_truncated(self):
        with pytest.raises(TruncatedBits):
            parse_graph6("D?")

    def test_trailing_garbage(self):
        with pytest.raises(TrailingGarbage):
            parse_graph6("A_?")

    def test_nonzero_padding(self):
        # 'A' + '`' (0b100001): the last padding bit is set
        with pytest.raises(NonzeroPadding):
            parse_graph6("A`")
        assert parse_graph6("A`", lenient=True) == complete_graph(2)

    @pytest.mark.parametrize("text,fmt", [(":Fa@x^", "sparse6"), (";Fa@x^", "incremental sparse6"),
                                          ("&B?", "digraph6"), (">>sparse6<<:A_", "sparse6")])
    def test_other_formats(self, text, fmt):
        with pytest.raises(UnsupportedFormat, match=fmt):
            parse_graph6(text)

    def test_empty(self):
        with pytest.raises(Graph6Error):
            parse_graph6("")

    def test_errors_are_input_errors(self):
        assert issubclass(Graph6Error, InputError)


class TestWrite:
    def test_k2(self):
        assert write_graph6(complete_graph(2)) == "A_"

    def test_single_vertex(self):
        assert write_graph6(Graph(1, frozenset())) == "@"

    def test_matches_networkx_encoder(self):
        rng = random.Random(3)
        for _ in range(100):
            g = random_graph(rng, rng.randint(1, 10))
            h = nx.Graph()
            h.add_nodes_from(range(g.n))
            h.add_edges_from(g.edges)
            ref = nx.to_graph6_bytes(h, header=False).decode().strip()
            assert write_graph6(g) == ref

    def test_roundtrip_500(self):
        rng = random.Random(500)
        for _ in range(500):
            g = random_graph(rng, rng.randint(1, 8))
            assert parse_graph6(write_graph6(g)) == g

    @settings(max_examples=200)
    @given(st.integers(1, 12), st.data())
    def test_length_and_bytes(self, n, data):
        pairs = list(itertools.combinations(range(n), 2))
        mask = data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        g = graph_from_edges(n, [e for e, b in zip(pairs, mask) if b])
        s = write_graph6(g)
        assert len(s) == -(-len(pairs) // 6) + 1
        assert all(63 <= ord(c) <= 126 for c in s)
        assert parse_graph6(s) == g  # strict mode: padding must be zero


class TestStream:
    def test_three_records(self):
        assert list(read_graph6_stream(io.StringIO("A_\nA_\nA_\n"))) == [complete_graph(2)] * 3

    def test_header_line(self):
        text = ">>graph6<<\nA_\n\nCr\n"
        assert [g.n for g in read_graph6_stream(io.StringIO(text))] == [2, 4]

    def test_header_glued_to_first_record(self):
        assert [g.n for g in read_graph6_stream([">>graph6<<A_", "Cr"])] == [2, 4]

    def test_header_later_is_error(self):
        with pytest.raises(Graph6Error) as exc:
            list(read_graph6_stream(["A_", ">>graph6<<A_"]))
        assert exc.value.line == 2

    def test_fail_fast_reports_line(self):
        with pytest.raises(TruncatedBits) as exc:
            list(read_graph6_stream(["A_", "", "D?", "A_"]))
        assert exc.value.line == 3 and "line 3" in str(exc.value)

    def test_skip_mode(self, caplog):
        diags = []
        gs = list(read_graph6_stream(["A_", "A!", "Cr"], skip_errors=True, diagnostics=diags))
        assert [g.n for g in gs] == [2, 4]
        assert len(diags) == 1 and isinstance(diags[0], InvalidByte) and diags[0].line == 2
        assert "line 2" in caplog.text

    def test_records_keep_raw(self):
        recs = list(iter_graph6_records(["Cr\n"]))
        assert recs[0].raw == "Cr" and recs[0].line == 1


class TestEdgeList:
    def test_parse(self):
        g = read_edge_list("4 4\n0 1\n1 2\n2 3\n3 0\n")
        assert g == graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])

    @pytest.mark.parametrize("text", ["", "4\n", "3 2\n0 1\n", "3 1\n0 x\n", "3 1\n0 1 2\n", "2 1\n0 5\n"])
    def test_malformed(self, text):
        with pytest.raises(InputError):
            read_edge_list(text)
