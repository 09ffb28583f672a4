"""Graph families used by the walk laboratory.

Every graph exposes the same two accessors, ``degree`` and ``neighbors``;
the infinite families (lattices, trees) generate neighborhoods on demand
and never enumerate their vertex set.  Vertex keys are plain hashable
values: integers, short strings, or tuples of keys.  Neighbor order is
deterministic and documented per family, which keeps seeded sampling
reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import InvalidParameter, MalformedGraph, UnsupportedGraph

_INT_TOKEN = re.compile(r"-?\d+")
_BAD_STR = re.compile(r"[\s(),]")


def canon_key(value):
    """Normalize a vertex key: ints stay ints, int-like strings become
    ints, lists become tuples. Rejects anything that would not survive a
    text round trip."""
    if isinstance(value, bool):
        raise MalformedGraph("boolean is not a usable vertex key")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        if _INT_TOKEN.fullmatch(value):
            return int(value)
        if not value or _BAD_STR.search(value):
            raise MalformedGraph(f"unusable string key {value!r}")
        return value
    if isinstance(value, (list, tuple)):
        return tuple(canon_key(x) for x in value)
    raise MalformedGraph(f"unsupported key type {type(value).__name__}")


def sort_token(key):
    """Total deterministic order over mixed int/str/tuple keys."""
    if isinstance(key, bool):
        raise MalformedGraph("boolean is not a usable vertex key")
    if isinstance(key, int):
        return (0, key)
    if isinstance(key, str):
        return (1, key)
    return (2, tuple(sort_token(x) for x in key))


def encode_key(key) -> str:
    """Text form of a vertex key; ``decode_key`` inverts it."""
    if isinstance(key, int):
        return str(key)
    if isinstance(key, str):
        return key
    return "(" + ",".join(encode_key(x) for x in key) + ")"


def decode_key(text: str):
    """Parse the text form produced by ``encode_key``."""
    key, rest = _parse_key(text.strip())
    if rest:
        raise MalformedGraph(f"trailing text in key {text!r}")
    return key


def _parse_key(t: str):
    if t.startswith("("):
        t = t[1:]
        if t.startswith(")"):
            return (), t[1:]
        items = []
        while True:
            item, t = _parse_key(t)
            items.append(item)
            if t.startswith(","):
                t = t[1:]
                continue
            if t.startswith(")"):
                return tuple(items), t[1:]
            raise MalformedGraph("unbalanced parentheses in key text")
    m = re.match(r"[^(),]+", t)
    if not m:
        raise MalformedGraph(f"cannot parse key text {t!r}")
    tok, rest = m.group(0), t[m.end():]
    if _INT_TOKEN.fullmatch(tok):
        return int(tok), rest
    return canon_key(tok), rest


class Graph:
    """Read-only simple graph: symmetric adjacency, no loops, no parallel
    edges. Immutable after construction and safe for concurrent reads."""

    def neighbors(self, v) -> tuple:
        raise NotImplementedError

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def displacement(self, v, origin) -> float:
        """Scalar separation of ``v`` from ``origin``; family specific."""
        return 0.0 if v == origin else 1.0

    def default_start(self):
        raise NotImplementedError


class Lattice(Graph):
    """Integer lattice in ``d`` dimensions, each edge optionally
    subdivided by ``subdivisions`` extra degree-2 vertices.

    Anchor vertices sit at coordinates divisible by ``subdivisions + 1``;
    subdivision vertices have exactly one off-grid coordinate.  Keys are
    bare ints for d = 1 and d-tuples of ints otherwise.  Neighbors come in
    the fixed order +e1, -e1, +e2, -e2, ...
    """

    def __init__(self, d: int, subdivisions: int = 0):
        if not isinstance(d, int) or not 1 <= d <= 4:
            raise InvalidParameter(f"lattice dimension must be 1..4, got {d!r}")
        if not isinstance(subdivisions, int) or subdivisions < 0:
            raise InvalidParameter("subdivisions must be a nonnegative integer")
        self.d = d
        self.pitch = subdivisions + 1

    def coordinates(self, v) -> tuple:
        if self.d == 1:
            if isinstance(v, int) and not isinstance(v, bool):
                vec = (v,)
            else:
                raise InvalidParameter(f"{v!r} is not a vertex of this lattice")
        else:
            if (
                isinstance(v, tuple)
                and len(v) == self.d
                and all(isinstance(c, int) and not isinstance(c, bool) for c in v)
            ):
                vec = v
            else:
                raise InvalidParameter(f"{v!r} is not a vertex of this lattice")
        self._off_axis(vec)
        return vec

    def _off_axis(self, vec):
        off = [i for i, c in enumerate(vec) if c % self.pitch]
        if len(off) > 1:
            raise InvalidParameter(f"{vec!r} is not a vertex of this lattice")
        return off[0] if off else None

    def _out(self, vec):
        return vec[0] if self.d == 1 else vec

    def neighbors(self, v):
        vec = self.coordinates(v)
        axis = self._off_axis(vec)
        axes = range(self.d) if axis is None else (axis,)
        out = []
        for a in axes:
            for sign in (1, -1):
                w = list(vec)
                w[a] += sign
                out.append(self._out(tuple(w)))
        return tuple(out)

    def degree(self, v):
        vec = self.coordinates(v)
        return 2 * self.d if self._off_axis(vec) is None else 2

    def displacement(self, v, origin):
        return math.dist(self.coordinates(v), self.coordinates(origin))

    def default_start(self):
        return 0 if self.d == 1 else (0,) * self.d


def lattice(d: int) -> Lattice:
    """The d-dimensional integer lattice."""
    return Lattice(d)


def subdivided_lattice(d: int, t: int) -> Lattice:
    """Lattice with t extra degree-2 vertices on every edge."""
    return Lattice(d, t)


class RegularTree(Graph):
    """Infinite k-regular tree.  Keys are root paths: ``()`` is the root
    and a child extends its parent's key by one branch index.  Neighbor
    order is parent first, then children by index."""

    def __init__(self, k: int):
        if not isinstance(k, int) or k < 2:
            raise InvalidParameter(f"tree degree must be an integer >= 2, got {k!r}")
        self.k = k

    def _check(self, v):
        if not isinstance(v, tuple):
            raise InvalidParameter(f"{v!r} is not a tree vertex key")
        for depth, c in enumerate(v):
            limit = self.k if depth == 0 else self.k - 1
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < limit:
                raise InvalidParameter(f"{v!r} is not a vertex of this tree")

    def neighbors(self, v):
        self._check(v)
        child_count = self.k if v == () else self.k - 1
        children = tuple(v + (j,) for j in range(child_count))
        return children if v == () else (v[:-1],) + children

    def degree(self, v):
        self._check(v)
        return self.k

    def displacement(self, v, origin):
        return float(len(v))

    def default_start(self):
        return ()


def regular_tree(k: int) -> RegularTree:
    return RegularTree(k)


class BiregularTree(Graph):
    """Infinite tree alternating between degree k1 (even depth, root
    included) and degree k2 (odd depth), with k1 > k2 >= 2."""

    def __init__(self, k1: int, k2: int):
        ok = isinstance(k1, int) and isinstance(k2, int)
        if not ok or not k1 > k2 >= 2:
            raise InvalidParameter(f"need k1 > k2 >= 2, got ({k1!r}, {k2!r})")
        self.k1 = k1
        self.k2 = k2

    def _deg_at(self, depth: int) -> int:
        return self.k1 if depth % 2 == 0 else self.k2

    def _check(self, v):
        if not isinstance(v, tuple):
            raise InvalidParameter(f"{v!r} is not a tree vertex key")
        for depth, c in enumerate(v):
            limit = self.k1 if depth == 0 else self._deg_at(depth) - 1
            if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < limit:
                raise InvalidParameter(f"{v!r} is not a vertex of this tree")

    def neighbors(self, v):
        self._check(v)
        deg = self._deg_at(len(v))
        child_count = deg if v == () else deg - 1
        children = tuple(v + (j,) for j in range(child_count))
        return children if v == () else (v[:-1],) + children

    def degree(self, v):
        self._check(v)
        return self._deg_at(len(v))

    def displacement(self, v, origin):
        return float(len(v))

    def default_start(self):
        return ()


def biregular_tree(k1: int, k2: int) -> BiregularTree:
    return BiregularTree(k1, k2)


class ExplicitGraph(Graph):
    """Finite graph built from explicit adjacency lists.  Construction
    validates symmetry and rejects self-loops and duplicate edges;
    neighbor lists are stored sorted."""

    def __init__(self, adjacency: Mapping):
        adj = {}
        for v, ns in adjacency.items():
            cv = canon_key(v)
            if cv in adj:
                raise MalformedGraph(f"duplicate vertex key {cv!r}")
            adj[cv] = [canon_key(w) for w in ns]
        for v, ns in adj.items():
            seen = set()
            for w in ns:
                if w == v:
                    raise MalformedGraph(f"self-loop at {v!r}")
                if w in seen:
                    raise MalformedGraph(f"duplicate edge {v!r}-{w!r}")
                if w not in adj:
                    raise MalformedGraph(f"vertex {w!r} has no adjacency row")
                seen.add(w)
        for v, ns in adj.items():
            for w in ns:
                if v not in adj[w]:
                    raise MalformedGraph(f"asymmetric edge {v!r}-{w!r}")
        self._adj = {v: tuple(sorted(ns, key=sort_token)) for v, ns in adj.items()}
        self._verts = tuple(sorted(adj, key=sort_token))

    def vertices(self) -> tuple:
        return self._verts

    def neighbors(self, v):
        try:
            return self._adj[v]
        except KeyError:
            raise InvalidParameter(f"unknown vertex {v!r}") from None

    def edges(self) -> tuple:
        out = []
        for v in self._verts:
            tv = sort_token(v)
            for w in self._adj[v]:
                if tv < sort_token(w):
                    out.append((v, w))
        return tuple(out)

    def adjacency_dict(self) -> dict:
        return {v: list(ns) for v, ns in self._adj.items()}

    def is_connected(self) -> bool:
        if not self._verts:
            return True
        seen = {self._verts[0]}
        frontier = [self._verts[0]]
        while frontier:
            v = frontier.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return len(seen) == len(self._verts)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._verts)

    def default_start(self):
        return self._verts[0]


def from_adjacency(lists: Mapping) -> ExplicitGraph:
    """Explicit graph from a vertex -> neighbor-list mapping."""
    return ExplicitGraph(lists)


def subdivide(g: ExplicitGraph, t: int) -> ExplicitGraph:
    """Replace every edge of ``g`` with a path through ``t`` new degree-2
    vertices (so each original edge becomes a corridor of length t + 1).
    New vertices are keyed ``(a, b, j)`` for the j-th point on edge (a, b)."""
    if not isinstance(g, ExplicitGraph):
        raise UnsupportedGraph("subdivision needs an explicit finite graph")
    if not isinstance(t, int) or t < 0:
        raise InvalidParameter("subdivision count must be a nonnegative integer")
    if t == 0:
        return ExplicitGraph(g.adjacency_dict())
    adj: dict = {v: [] for v in g.vertices()}
    for a, b in g.edges():
        mids = [(a, b, j) for j in range(1, t + 1)]
        for m in mids:
            if m in adj:
                raise MalformedGraph(f"subdivision key collision at {m!r}")
            adj[m] = []
        chain = [a, *mids, b]
        for u, w in zip(chain, chain[1:]):
            adj[u].append(w)
            adj[w].append(u)
    return ExplicitGraph(adj)


def counterexample_graph() -> ExplicitGraph:
    """Six-vertex graph where a degree-3 vertex v sees neighbors of
    unequal degree (deg y = 3 > deg z = 2), the configuration under which
    erasing backtracks from a plain walk fails to reproduce the
    non-backtracking law."""
    return from_adjacency(
        {
            "v": ["x", "y", "z"],
            "x": ["v", "z"],
            "y": ["v", "a", "b"],
            "z": ["v", "x"],
            "a": ["y", "b"],
            "b": ["y", "a"],
        }
    )


@dataclass(frozen=True)
class MultiEdge:
    a: object
    b: object
    resistance: int
    edge_id: int


class WeightedMultigraph:
    """Finite multigraph with positive integer edge resistances; parallel
    edges and self-loops are allowed.  A loop contributes two half-edges
    at its vertex and therefore counts twice in the multigraph degree."""

    def __init__(self, vertices: Iterable, edges: Sequence):
        verts = [canon_key(v) for v in vertices]
        vset = set(verts)
        if len(verts) != len(vset):
            raise MalformedGraph("duplicate vertices")
        cooked = []
        for eid, spec in enumerate(edges):
            a, b, r = spec
            a, b = canon_key(a), canon_key(b)
            if a not in vset or b not in vset:
                raise MalformedGraph(f"edge endpoint {a!r}-{b!r} not among vertices")
            if not isinstance(r, int) or isinstance(r, bool) or r < 1:
                raise MalformedGraph("resistance must be a positive integer")
            cooked.append(MultiEdge(a, b, r, eid))
        self._edges = tuple(cooked)
        self._verts = tuple(sorted(vset, key=sort_token))
        half: dict = {v: [] for v in self._verts}
        for e in cooked:
            half[e.a].append((e.edge_id, 0))
            half[e.b].append((e.edge_id, 1))
        self._half = {v: tuple(sorted(hs)) for v, hs in half.items()}

    def vertices(self) -> tuple:
        return self._verts

    def edges(self) -> tuple:
        return self._edges

    def edge(self, edge_id: int) -> MultiEdge:
        return self._edges[edge_id]

    def endpoint(self, edge_id: int, end: int):
        e = self._edges[edge_id]
        return e.a if end == 0 else e.b

    def half_edges(self, v) -> tuple:
        """Half-edges at v as (edge_id, end) pairs, sorted; loops appear
        with both ends."""
        try:
            return self._half[v]
        except KeyError:
            raise InvalidParameter(f"unknown vertex {v!r}") from None

    def mdegree(self, v) -> int:
        return len(self.half_edges(v))

    def conductance(self, edge_id: int) -> Fraction:
        return Fraction(1, self._edges[edge_id].resistance)

    def displacement(self, v, origin) -> float:
        return 0.0 if v == origin else 1.0

    def default_start(self):
        return self._verts[0]

    def to_json_dict(self) -> dict:
        return {
            "vertices": [encode_key(v) for v in self._verts],
            "edges": [
                {"a": encode_key(e.a), "b": encode_key(e.b), "r": e.resistance, "id": e.edge_id}
                for e in self._edges
            ],
        }


_SPEC_FIELDS = {
    "lattice": {"type", "d"},
    "subdivided_lattice": {"type", "d", "t"},
    "regular_tree": {"type", "k"},
    "biregular_tree": {"type", "k1", "k2"},
    "explicit": {"type", "adjacency"},
    "subdivided": {"type", "base", "t"},
    "counterexample": {"type"},
}


def _spec_int(spec, field):
    v = spec.get(field)
    if not isinstance(v, int) or isinstance(v, bool):
        raise InvalidParameter(f"field {field!r} must be an integer")
    return v


def graph_from_spec(spec: Mapping) -> Graph:
    """Build a graph from its JSON-style description, e.g.
    ``{"type": "lattice", "d": 2}`` or
    ``{"type": "explicit", "adjacency": {"0": [1, 2], ...}}``.
    Unknown types and stray fields are rejected."""
    if not isinstance(spec, Mapping) or "type" not in spec:
        raise InvalidParameter("graph spec must be an object with a 'type' field")
    kind = spec["type"]
    allowed = _SPEC_FIELDS.get(kind)
    if allowed is None:
        raise InvalidParameter(f"unknown graph type {kind!r}")
    extra = set(spec) - allowed
    if extra:
        raise InvalidParameter(f"unknown fields {sorted(extra)} in {kind!r} spec")
    missing = allowed - set(spec)
    if missing:
        raise InvalidParameter(f"missing fields {sorted(missing)} in {kind!r} spec")
    if kind == "lattice":
        return lattice(_spec_int(spec, "d"))
    if kind == "subdivided_lattice":
        return subdivided_lattice(_spec_int(spec, "d"), _spec_int(spec, "t"))
    if kind == "regular_tree":
        return regular_tree(_spec_int(spec, "k"))
    if kind == "biregular_tree":
        return biregular_tree(_spec_int(spec, "k1"), _spec_int(spec, "k2"))
    if kind == "explicit":
        adjacency = spec["adjacency"]
        if not isinstance(adjacency, Mapping):
            raise InvalidParameter("'adjacency' must be an object")
        return from_adjacency(adjacency)
    if kind == "subdivided":
        base = graph_from_spec(spec["base"])
        if not isinstance(base, ExplicitGraph):
            raise UnsupportedGraph("'subdivided' needs an explicit base graph")
        return subdivide(base, _spec_int(spec, "t"))
    return counterexample_graph()
