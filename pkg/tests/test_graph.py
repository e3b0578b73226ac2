"""Graph model, loader and structural query tests."""

from __future__ import annotations

import numpy as np
import pytest

from curvewalk import (GraphFormatError, WeightedGraph, connected_components,
                       induced_subgraph, largest_component, load_edge_list,
                       write_edge_list)
from conftest import path_graph, star_graph, random_connected_graph


def write_lines(tmp_path, name, lines):
    f = tmp_path / name
    f.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return f


class TestLoader:
    def test_two_edge_path(self, tmp_path):
        f = write_lines(tmp_path, "p.txt", ["0 1", "1 2"])
        g, meta = load_edge_list(f)
        assert g.node_count == 3
        assert [g.degree(i) for i in range(3)] == [1, 2, 1]
        assert np.all(g.edge_weights == 1.0)
        assert meta.labels == ("0", "1", "2")

    def test_comments_headers_blanks(self, tmp_path):
        f = write_lines(tmp_path, "k.tsv", [
            "% sym positive", "# a comment", "", "a\tb\t2.5", "b\tc"])
        g, meta = load_edge_list(f)
        assert g.node_count == 3
        assert g.edge_weight(meta.node_id("a"), meta.node_id("b")) == 2.5
        assert g.edge_weight(meta.node_id("b"), meta.node_id("c")) == 1.0

    def test_labels_first_seen_order(self, tmp_path):
        f = write_lines(tmp_path, "l.txt", ["x y", "z x"])
        _, meta = load_edge_list(f)
        assert meta.labels == ("x", "y", "z")
        assert meta.node_id("z") == 2
        assert meta.label_of(1) == "y"
        with pytest.raises(KeyError):
            meta.node_id("nope")

    def test_unweighted_flag_ignores_column(self, tmp_path):
        f = write_lines(tmp_path, "w.txt", ["a b 9"])
        g, _ = load_edge_list(f, weighted=False)
        assert g.edge_weight(0, 1) == 1.0

    def test_default_node_weight(self, tmp_path):
        f = write_lines(tmp_path, "n.txt", ["a b"])
        g, _ = load_edge_list(f, default_node_weight=0.5)
        assert np.all(g.node_weights == 0.5)
        with pytest.raises(ValueError):
            load_edge_list(f, default_node_weight=0.0)

    @pytest.mark.parametrize("lines,lineno,msg", [
        (["a b", "a"], 2, "expected"),
        (["a b c d"], 1, "expected"),
        (["a b x"], 1, "bad weight"),
        (["a b -1"], 1, "positive"),
        (["a b 0"], 1, "positive"),
        (["a b nan"], 1, "positive"),
        (["a a"], 1, "self-loop"),
        (["a b", "b a"], 2, "duplicate"),
        (["a b 1", "a b 2"], 2, "duplicate"),
    ])
    def test_errors_carry_line_number(self, tmp_path, lines, lineno, msg):
        f = write_lines(tmp_path, "bad.txt", lines)
        with pytest.raises(GraphFormatError) as err:
            load_edge_list(f)
        assert f":{lineno}:" in str(err.value)
        assert msg in str(err.value)

    def test_meta_counts(self, tmp_path):
        f = write_lines(tmp_path, "m.txt", ["a b", "a c", "a d"])
        g, meta = load_edge_list(f, name="tiny-star")
        assert (meta.node_count, meta.edge_count, meta.max_degree) == (4, 3, 3)
        assert meta.name == "tiny-star"

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        g = random_connected_graph(rng, 15, extra=1.0, weighted=True)
        out = tmp_path / "rt.txt"
        write_edge_list(g, out, comments=["round trip"])
        g2, meta = load_edge_list(out)
        assert g2.node_count == g.node_count
        original = {(int(u), int(v)): float(w)
                    for (u, v), w in zip(g.edges, g.edge_weights)}
        reloaded = {}
        for (u, v), w in zip(g2.edges, g2.edge_weights):
            a, b = int(meta.labels[u]), int(meta.labels[v])
            reloaded[(min(a, b), max(a, b))] = float(w)
        assert reloaded == original


class TestConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, [(0, 0)])

    def test_rejects_duplicates_any_orientation(self):
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, [(0, 1), (1, 0)])

    def test_rejects_bad_weights(self):
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, [(0, 1)], [0.0])
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, [(0, 1)], [-2.0])
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, [(0, 1)], node_weights=[1.0, 0.0])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphFormatError):
            WeightedGraph(2, [(0, 2)])

    def test_arrays_frozen(self):
        g = path_graph(3)
        for arr in (g.edges, g.edge_weights, g.node_weights, g.degrees,
                    g.strengths, g.adj_neighbors):
            with pytest.raises(ValueError):
                arr[0] = 1


class TestQueries:
    def test_neighbors_path(self):
        g = path_graph(3)
        assert g.neighbors(1) == [(0, 1.0), (2, 1.0)]

    def test_neighbors_star_and_isolated(self):
        g = star_graph(4)
        assert len(g.neighbors(0)) == 4
        g2 = WeightedGraph(3, [(0, 1)])
        assert g2.neighbors(2) == []

    def test_degree_strength(self):
        g = star_graph(4)
        assert g.degree(0) == 4
        assert g.strength_of(0) == 4.0
        g2 = WeightedGraph(3, [(0, 1), (0, 2)], [2.0, 0.5])
        assert g2.strength_of(0) == 2.5
        g3 = WeightedGraph(2, [])
        assert g3.degree(0) == 0 and g3.strength_of(0) == 0.0

    def test_out_of_range_queries(self):
        g = path_graph(3)
        for fn in (g.neighbors, g.degree, g.strength_of):
            with pytest.raises(ValueError):
                fn(3)
            with pytest.raises(ValueError):
                fn(-1)

    def test_edge_lookup(self):
        g = WeightedGraph(3, [(0, 1)], [2.0])
        assert g.edge_id(0, 1) == g.edge_id(1, 0) == 0
        assert g.edge_weight(1, 0) == 2.0
        assert g.has_edge(0, 1) and not g.has_edge(0, 2)
        with pytest.raises(ValueError):
            g.edge_id(0, 2)


class TestInducedSubgraph:
    def test_triangle_pair(self):
        g = WeightedGraph(3, [(0, 1), (1, 2), (0, 2)], [1.0, 2.0, 3.0])
        sub = induced_subgraph(g, {0, 1})
        assert sub.node_count == 2 and sub.edge_count == 1
        assert sub.edge_weight(0, 1) == 1.0

    def test_full_set_identity(self):
        rng = np.random.default_rng(7)
        g = random_connected_graph(rng, 10, weighted=True)
        sub = induced_subgraph(g, range(10))
        assert np.array_equal(sub.edges, g.edges)
        assert np.array_equal(sub.edge_weights, g.edge_weights)

    def test_path_endpoints_only(self):
        g = path_graph(3)
        sub = induced_subgraph(g, {0, 2})
        assert sub.node_count == 2 and sub.edge_count == 0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            induced_subgraph(path_graph(3), {0, 5})

    def test_preserves_node_weights(self):
        g = WeightedGraph(3, [(0, 1), (1, 2)], node_weights=[1.0, 2.0, 3.0])
        sub = induced_subgraph(g, {1, 2})
        assert sub.node_weights.tolist() == [2.0, 3.0]


class TestInvariants:
    @pytest.mark.parametrize("seed", range(8))
    def test_degree_and_strength_sums(self, seed):
        rng = np.random.default_rng(seed)
        g = random_connected_graph(rng, 20, extra=1.5, weighted=True)
        assert int(g.degrees.sum()) == 2 * g.edge_count
        assert g.strengths.sum() == pytest.approx(2 * g.edge_weights.sum(), rel=1e-12)

    @pytest.mark.parametrize("seed", range(8))
    def test_adjacency_symmetry(self, seed):
        rng = np.random.default_rng(100 + seed)
        g = random_connected_graph(rng, 15, weighted=True)
        for i in range(g.node_count):
            for j, w in g.neighbors(i):
                back = dict(g.neighbors(j))
                assert back[i] == w

    def test_neighbor_order_ascending(self):
        rng = np.random.default_rng(3)
        g = random_connected_graph(rng, 15)
        for i in range(g.node_count):
            ids = [j for j, _ in g.neighbors(i)]
            assert ids == sorted(ids)


class TestComponents:
    def test_connected(self):
        comps = connected_components(path_graph(4))
        assert len(comps) == 1
        assert comps[0].tolist() == [0, 1, 2, 3]

    def test_split(self):
        g = WeightedGraph(5, [(0, 1), (2, 3)])
        comps = connected_components(g)
        assert [c.tolist() for c in comps] == [[0, 1], [2, 3], [4]]
        assert largest_component(g).tolist() == [0, 1]
