import pytest

from cliquemst import (
    Edge,
    Graph,
    GraphFormatError,
    components,
    edge,
    edge_key,
    gen_graph,
    kruskal_forest,
    msf_oracle,
    prim_msf,
    read_graph,
    write_graph,
)


def test_edge_canonicalizes_endpoints():
    assert edge(3, 1, 5) == Edge(1, 3, 5)
    assert edge(1, 3, 5) == Edge(1, 3, 5)


def test_edge_rejects_bad_input():
    with pytest.raises(ValueError):
        edge(2, 2, 1)
    with pytest.raises(ValueError):
        edge(-1, 3, 1)
    with pytest.raises(ValueError):
        edge(0, 2**32, 1)
    with pytest.raises(ValueError):
        edge(0, 1, -1)
    with pytest.raises(ValueError):
        edge(0, 1, 2**64)


def test_edge_key_orders_by_weight_then_endpoints():
    a = edge(5, 6, 10)
    b = edge(0, 9, 10)
    c = edge(0, 1, 11)
    assert sorted([c, a, b], key=edge_key) == [b, a, c]


def test_graph_rejects_duplicates_and_range():
    with pytest.raises(ValueError):
        Graph(3, (edge(0, 1, 1), edge(1, 0, 2)))
    with pytest.raises(ValueError):
        Graph(3, (edge(0, 3, 1),))
    with pytest.raises(ValueError):
        Graph(0, ())


def test_kruskal_triangle():
    es = (edge(0, 1, 1), edge(1, 2, 2), edge(0, 2, 3))
    assert kruskal_forest(es) == (edge(0, 1, 1), edge(1, 2, 2))


def test_kruskal_two_components():
    es = (
        edge(0, 1, 4),
        edge(1, 2, 1),
        edge(0, 2, 2),
        edge(3, 4, 9),
        edge(4, 5, 8),
        edge(3, 5, 7),
    )
    assert kruskal_forest(es) == (
        edge(1, 2, 1),
        edge(0, 2, 2),
        edge(3, 5, 7),
        edge(4, 5, 8),
    )


def test_kruskal_breaks_weight_ties_by_endpoints():
    es = (edge(1, 2, 5), edge(0, 1, 5), edge(0, 2, 5))
    assert kruskal_forest(es) == (edge(0, 1, 5), edge(0, 2, 5))


def test_prim_matches_kruskal():
    g = gen_graph(64, "gnp", 42, p=0.5)
    assert prim_msf(g) == msf_oracle(g)
    for seed in range(25):
        g = gen_graph(3 + seed, "gnp", seed, p=0.3)
        assert prim_msf(g) == msf_oracle(g)


def test_skipped_edges_close_heavier_cycles():
    # every non-forest edge must be the strictly heaviest on the cycle it closes
    g = gen_graph(40, "gnp", 11, p=0.4)
    forest = set(msf_oracle(g).edges)
    adj: dict[int, list[tuple[int, Edge]]] = {}
    for e in forest:
        adj.setdefault(e.u, []).append((e.v, e))
        adj.setdefault(e.v, []).append((e.u, e))

    def path_edges(a: int, b: int) -> list[Edge]:
        prev: dict[int, tuple[int, Edge] | None] = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            for y, e in adj.get(x, ()):
                if y not in prev:
                    prev[y] = (x, e)
                    stack.append(y)
        out = []
        while b != a:
            b, e = prev[b]  # type: ignore[misc]
            out.append(e)
        return out

    for e in g.edges:
        if e in forest:
            continue
        path = path_edges(e.u, e.v)
        assert path, "a skipped edge must connect vertices already joined"
        assert max(edge_key(x) for x in path) < edge_key(e)


def test_components_numbering():
    g = Graph(6, (edge(4, 5, 1), edge(1, 2, 1)))
    assert components(g) == [0, 1, 1, 2, 3, 3]


def test_gen_complete():
    g = gen_graph(4, "complete", 0)
    assert g.n == 4 and len(g.edges) == 6
    assert {(e.u, e.v) for e in g.edges} == {(u, v) for u in range(4) for v in range(u + 1, 4)}


def test_gen_deterministic_per_seed():
    assert gen_graph(30, "gnp", 5, p=0.4) == gen_graph(30, "gnp", 5, p=0.4)
    assert gen_graph(30, "gnp", 5, p=0.4) != gen_graph(30, "gnp", 6, p=0.4)


def test_gen_gnm_exact_edge_count():
    for m in (0, 1, 17, 300, 435):
        g = gen_graph(30, "gnm", 9, m=m)
        assert len(g.edges) == m
    with pytest.raises(ValueError):
        gen_graph(30, "gnm", 0, m=436)
    with pytest.raises(ValueError):
        gen_graph(30, "gnm", 0)


def test_gen_gnp_validates_p():
    with pytest.raises(ValueError):
        gen_graph(10, "gnp", 0)
    with pytest.raises(ValueError):
        gen_graph(10, "gnp", 0, p=1.5)


def test_gen_forest_tree_count():
    for t in (1, 3, 7):
        g = gen_graph(20, "forest", t, t=t)
        assert len(g.edges) == 20 - t
        assert len(set(components(g))) == t
        assert len(msf_oracle(g).edges) == len(g.edges)


def test_gen_path():
    g = gen_graph(5, "path", 2)
    assert [(e.u, e.v) for e in g.edges] == [(0, 1), (1, 2), (2, 3), (3, 4)]


def test_gen_unknown_model():
    with pytest.raises(ValueError):
        gen_graph(5, "torus", 0)


def test_io_round_trip(tmp_path):
    g = gen_graph(24, "gnm", 3, m=60)
    path = str(tmp_path / "g.txt")
    write_graph(g, path)
    assert read_graph(path) == g


def test_read_literal_and_comments(tmp_path):
    path = tmp_path / "tiny.txt"
    path.write_text("# a comment\n\n3 1\n0 1 5\n")
    g = read_graph(str(path))
    assert g == Graph(3, (Edge(0, 1, 5),))


def test_read_canonicalizes_reversed_endpoints(tmp_path):
    path = tmp_path / "rev.txt"
    path.write_text("3 1\n2 0 7\n")
    assert read_graph(str(path)).edges == (Edge(0, 2, 7),)


@pytest.mark.parametrize(
    "text,lineno,fragment",
    [
        ("nope\n", 1, "header"),
        ("3 x\n", 1, "integers"),
        ("3 1\n1 1 4\n", 2, "self-loop"),
        ("3 1\n0 5 4\n", 2, "out of range"),
        ("3 1\n0 1 -2\n", 2, "weight"),
        ("3 2\n0 1 4\n1 0 9\n", 3, "duplicate"),
        ("3 1\n0 1 4\n1 2 9\n", 3, "more than the declared"),
    ],
)
def test_read_errors_carry_line_numbers(tmp_path, text, lineno, fragment):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(GraphFormatError) as err:
        read_graph(str(path))
    assert err.value.line == lineno
    assert fragment in str(err.value)


def test_read_missing_header_and_count_mismatch(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    with pytest.raises(GraphFormatError, match="missing header"):
        read_graph(str(empty))
    short = tmp_path / "short.txt"
    short.write_text("3 2\n0 1 4\n")
    with pytest.raises(GraphFormatError, match="declared 2"):
        read_graph(str(short))
