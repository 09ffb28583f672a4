import pytest

from nbwalk import (
    InvalidParameter,
    MalformedGraph,
    UnsupportedGraph,
    WeightedMultigraph,
    biregular_tree,
    counterexample_graph,
    decode_key,
    encode_key,
    from_adjacency,
    graph_from_spec,
    lattice,
    regular_tree,
    subdivide,
    subdivided_lattice,
)
from nbwalk.graph import sort_token

from helpers import k4, rng, triangle


def test_lattice_1d_neighbors():
    g = lattice(1)
    assert g.neighbors(0) == (1, -1)
    assert g.degree(0) == 2


def test_lattice_2d_degree():
    g = lattice(2)
    assert g.degree((0, 0)) == 4
    assert g.neighbors((0, 0)) == ((1, 0), (-1, 0), (0, 1), (0, -1))


def test_lattice_3d_neighbor_structure():
    g = lattice(3)
    v = (1, -2, 0)
    assert g.degree(v) == 6
    for w in g.neighbors(v):
        diffs = [abs(a - b) for a, b in zip(v, w)]
        assert sorted(diffs) == [0, 0, 1]


@pytest.mark.parametrize("d", [0, 5, -1])
def test_lattice_dimension_guard(d):
    with pytest.raises(InvalidParameter):
        lattice(d)


def test_subdivided_lattice_degrees():
    g = subdivided_lattice(2, 2)
    assert g.degree((0, 0)) == 4
    assert g.degree((1, 0)) == 2
    assert g.degree((2, 0)) == 2
    assert g.degree((3, 0)) == 4
    assert g.neighbors((1, 0)) == ((2, 0), (0, 0))
    with pytest.raises(InvalidParameter):
        g.neighbors((1, 1))  # two off-grid coordinates


def test_regular_tree_degrees():
    g = regular_tree(3)
    assert g.degree(()) == 3
    deep = (0, 1, 1, 0, 1)
    assert g.degree(deep) == 3
    assert g.neighbors(deep)[0] == deep[:-1]
    assert all(len(c) == 6 for c in g.neighbors(deep)[1:])


def test_regular_tree_k2_is_path():
    g = regular_tree(2)
    assert g.degree(()) == 2
    v = (1, 0, 0)
    assert g.degree(v) == 2
    assert g.neighbors(v) == ((1, 0), (1, 0, 0, 0))


def test_regular_tree_guard():
    with pytest.raises(InvalidParameter):
        regular_tree(1)


def _ball(g, root, radius):
    seen = {root}
    frontier = [root]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


@pytest.mark.parametrize("k", [3, 4, 5])
def test_regular_tree_ball_sizes(k):
    g = regular_tree(k)
    for r in range(7):
        expect = 1 + k * ((k - 1) ** r - 1) // (k - 2)
        assert len(_ball(g, (), r)) == expect


def test_biregular_tree_alternation():
    g = biregular_tree(4, 3)
    assert g.degree(()) == 4
    for child in g.neighbors(()):
        assert g.degree(child) == 3
    for v in _ball(g, (), 4):
        dv = g.degree(v)
        assert dv in (3, 4)
        for w in g.neighbors(v):
            assert g.degree(w) != dv


def test_biregular_tree_32():
    g = biregular_tree(3, 2)
    assert g.degree(()) == 3
    assert all(g.degree(c) == 2 for c in g.neighbors(()))


def test_biregular_tree_guard():
    with pytest.raises(InvalidParameter):
        biregular_tree(3, 3)


@pytest.mark.parametrize(
    "make,start",
    [
        (lambda: lattice(2), (0, 0)),
        (lambda: subdivided_lattice(2, 1), (0, 0)),
        (lambda: regular_tree(3), ()),
        (lambda: biregular_tree(4, 3), ()),
        (k4, 0),
        (counterexample_graph, "v"),
    ],
)
def test_adjacency_symmetry_sampled(make, start):
    g = make()
    r = rng(20240817)
    v = start
    seen = 0
    while seen < 1000:
        for w in g.neighbors(v):
            assert v in g.neighbors(w)
        nbrs = g.neighbors(v)
        v = nbrs[int(r.integers(len(nbrs)))]
        seen += 1


def test_from_adjacency_k4():
    g = k4()
    assert len(g) == 4
    assert all(g.degree(v) == 3 for v in g.vertices())
    assert g.edges() == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def test_from_adjacency_validation():
    with pytest.raises(MalformedGraph):
        from_adjacency({0: [1], 1: []})
    with pytest.raises(MalformedGraph):
        from_adjacency({0: [0]})
    with pytest.raises(MalformedGraph):
        from_adjacency({0: [1, 1], 1: [0]})
    with pytest.raises(MalformedGraph):
        from_adjacency({0: [1]})


def test_subdivide_k4_census():
    g = subdivide(k4(), 1)
    degs = sorted(g.degree(v) for v in g.vertices())
    assert len(g) == 10
    assert degs == [2] * 6 + [3] * 4


def test_subdivide_triangle_census():
    # a triangle is a 3-cycle, so subdividing leaves every vertex at
    # degree 2: the result is a 9-cycle
    g = subdivide(triangle(), 2)
    degs = sorted(g.degree(v) for v in g.vertices())
    assert len(g) == 9
    assert degs == [2] * 9


def test_subdivide_identity():
    g = k4()
    h = subdivide(g, 0)
    assert h.vertices() == g.vertices()
    assert h.edges() == g.edges()


@pytest.mark.parametrize("t", [1, 2, 3])
def test_subdivide_counts(t):
    g = counterexample_graph()
    h = subdivide(g, t)
    assert len(h) == len(g) + t * len(g.edges())
    new = set(h.vertices()) - set(g.vertices())
    assert all(h.degree(v) == 2 for v in new)


def test_subdivide_rejects_implicit():
    with pytest.raises(UnsupportedGraph):
        subdivide(lattice(2), 1)


def test_counterexample_graph_shape():
    g = counterexample_graph()
    census = {v: g.degree(v) for v in g.vertices()}
    assert census == {"v": 3, "y": 3, "x": 2, "z": 2, "a": 2, "b": 2}
    assert g.is_connected()
    assert min(census.values()) == 2


def test_key_round_trips():
    for key in [0, -17, "v", (), (1, -2, 0), (0, 1, 1), ("a", "b", 2), ((), (0,))]:
        assert decode_key(encode_key(key)) == key


def test_key_canonicalization_and_order():
    g = from_adjacency({"0": [1], 1: ["0"]})
    assert g.vertices() == (0, 1)
    keys = [3, -1, "z", "a", (0,), ()]
    ordered = sorted(keys, key=sort_token)
    assert ordered == [-1, 3, "a", "z", (), (0,)]


def test_multigraph_half_edges_and_loops():
    mg = WeightedMultigraph(["v", "w"], [("v", "w", 1), ("v", "w", 2), ("v", "v", 3)])
    assert mg.mdegree("v") == 4
    assert mg.mdegree("w") == 2
    assert mg.half_edges("v") == ((0, 0), (1, 0), (2, 0), (2, 1))
    assert mg.endpoint(2, 0) == "v" and mg.endpoint(2, 1) == "v"
    with pytest.raises(MalformedGraph):
        WeightedMultigraph(["v"], [("v", "v", 0)])
    with pytest.raises(MalformedGraph):
        WeightedMultigraph(["v"], [("v", "w", 1)])


def test_graph_from_spec_variants():
    assert graph_from_spec({"type": "lattice", "d": 2}).degree((0, 0)) == 4
    assert graph_from_spec({"type": "subdivided_lattice", "d": 2, "t": 1}).degree((1, 0)) == 2
    assert graph_from_spec({"type": "regular_tree", "k": 3}).degree(()) == 3
    assert graph_from_spec({"type": "biregular_tree", "k1": 4, "k2": 3}).degree(()) == 4
    g = graph_from_spec({"type": "explicit", "adjacency": {"0": [1], "1": [0]}})
    assert g.degree(0) == 1
    sub = graph_from_spec(
        {"type": "subdivided", "base": {"type": "counterexample"}, "t": 1}
    )
    assert len(sub) == 6 + 7
    assert graph_from_spec({"type": "counterexample"}).degree("v") == 3


def test_graph_from_spec_rejects_bad_fields():
    with pytest.raises(InvalidParameter):
        graph_from_spec({"type": "torus", "d": 2})
    with pytest.raises(InvalidParameter):
        graph_from_spec({"type": "lattice", "d": 2, "t": 1})
    with pytest.raises(InvalidParameter):
        graph_from_spec({"type": "lattice"})
    with pytest.raises(UnsupportedGraph):
        graph_from_spec({"type": "subdivided", "base": {"type": "lattice", "d": 1}, "t": 1})


def test_displacements():
    assert lattice(2).displacement((3, 4), (0, 0)) == 5.0
    assert regular_tree(3).displacement((0, 1, 0), ()) == 3.0
    assert k4().displacement(2, 0) == 1.0
    assert k4().displacement(0, 0) == 0.0
