"""Degree-2 corridor suppression.

A corridor is a maximal run of degree-2 vertices joining two anchors
(vertices of degree other than 2).  Contracting a finite graph keeps only
the anchors and turns every corridor into one multigraph edge whose
resistance equals the corridor's edge count; parallel corridors become
parallel edges and a corridor from an anchor back to itself becomes a
self-loop.  Observing a walk only when it visits anchors induces a walk
on the contracted multigraph; the exact laws of those induced walks are
computed here for comparison against the multigraph kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    InvalidInput,
    LimitExceeded,
    NoLegalMove,
    UnsupportedGraph,
    UnsupportedStructure,
)
from .graph import ExplicitGraph, WeightedMultigraph, sort_token
from .walkers import MAX_ENUMERATION_HORIZON, PrefixDistribution, WalkKind

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Corridor:
    """Maximal degree-2 run between anchors ``a`` and ``b`` (possibly
    equal); ``interior`` lists the degree-2 vertices in order from a to b."""

    a: object
    b: object
    interior: tuple

    @property
    def length(self) -> int:
        return len(self.interior) + 1


@dataclass(frozen=True)
class ContractionMap:
    """Bookkeeping tying a graph to its contraction.

    ``corridors[i]`` is the corridor behind multigraph edge id i;
    ``edge_of`` sends every original edge (as a sorted pair) to its
    corridor id; ``corridor_of`` sends every degree-2 vertex to its
    corridor id; ``entrances`` sends (anchor, first step) to the
    (corridor id, end) engaged by leaving the anchor that way."""

    corridors: tuple
    anchors: frozenset
    edge_of: dict
    corridor_of: dict
    entrances: dict

    @property
    def max_length(self) -> int:
        return max(c.length for c in self.corridors)


def _edge_pair(u, w):
    return (u, w) if sort_token(u) <= sort_token(w) else (w, u)


def _canonical_corridor(a, b, interior):
    if a == b:
        rev = tuple(reversed(interior))
        best = min(tuple(interior), rev, key=lambda seq: tuple(sort_token(x) for x in seq))
        return Corridor(a, b, best)
    if sort_token(b) < sort_token(a):
        return Corridor(b, a, tuple(reversed(interior)))
    return Corridor(a, b, tuple(interior))


def find_corridors(g: ExplicitGraph) -> list:
    """All maximal corridors of a finite connected graph with minimum
    degree 2 and at least one anchor, sorted by endpoints so ids are
    stable across runs."""
    if not isinstance(g, ExplicitGraph):
        raise UnsupportedGraph("corridor discovery needs an explicit finite graph")
    verts = g.vertices()
    if not verts:
        raise UnsupportedStructure("empty graph")
    for v in verts:
        if g.degree(v) < 2:
            raise UnsupportedStructure(f"vertex {v!r} has degree < 2")
    if not g.is_connected():
        raise UnsupportedStructure("graph is not connected")
    anchors = {v for v in verts if g.degree(v) != 2}
    if not anchors:
        raise UnsupportedStructure("every vertex has degree 2: a cycle with no anchor")
    found = {}
    for a in sorted(anchors, key=sort_token):
        for first in g.neighbors(a):
            prev, cur = a, first
            interior = []
            while cur not in anchors:
                interior.append(cur)
                n1, n2 = g.neighbors(cur)
                prev, cur = cur, (n2 if n1 == prev else n1)
            c = _canonical_corridor(a, cur, interior)
            found[(c.a, c.b, c.interior)] = c
    out = sorted(
        found.values(),
        key=lambda c: (sort_token(c.a), sort_token(c.b), tuple(sort_token(x) for x in c.interior)),
    )
    total = sum(c.length for c in out)
    edge_count = len(g.edges())
    if total != edge_count:
        raise UnsupportedStructure(
            f"corridors cover {total} edges but the graph has {edge_count}"
        )
    return out


def contract(g: ExplicitGraph):
    """Contract ``g`` onto its anchors.  Returns the weighted multigraph
    (one edge per corridor, resistance = corridor length) and the map
    tying the two representations together."""
    corridors = tuple(find_corridors(g))
    anchors = frozenset(v for v in g.vertices() if g.degree(v) != 2)
    mg = WeightedMultigraph(
        sorted(anchors, key=sort_token),
        [(c.a, c.b, c.length) for c in corridors],
    )
    edge_of: dict = {}
    corridor_of: dict = {}
    entrances: dict = {}
    for idx, c in enumerate(corridors):
        chain = (c.a, *c.interior, c.b)
        for u, w in zip(chain, chain[1:]):
            edge_of[_edge_pair(u, w)] = idx
        for x in c.interior:
            corridor_of[x] = idx
        first_from_a = c.interior[0] if c.interior else c.b
        first_from_b = c.interior[-1] if c.interior else c.a
        entrances[(c.a, first_from_a)] = (idx, 0)
        entrances[(c.b, first_from_b)] = (idx, 1)
    cmap = ContractionMap(corridors, anchors, edge_of, corridor_of, entrances)
    return mg, cmap


@dataclass(frozen=True)
class InducedWalk:
    """A walk observed only at anchor visits: the anchor subsequence plus,
    per observed step, the corridor id used and whether the walk bounced
    back out of it instead of crossing."""

    vertices: tuple
    traversals: tuple


def induced_walk(g: ExplicitGraph, path, cmap: ContractionMap) -> InducedWalk:
    """Filter ``path`` down to its anchor visits.  A step that enters a
    corridor and backs out the same way is recorded as a repeated anchor
    with the reflected flag set."""
    path = tuple(path)
    if not path or path[0] not in cmap.anchors:
        raise InvalidInput("induced walk must start at an anchor")
    verts = [path[0]]
    travs = []
    entry = None
    try:
        for j in range(1, len(path)):
            prev, x = path[j - 1], path[j]
            if prev in cmap.anchors:
                entry = cmap.entrances[(prev, x)]
            if x in cmap.anchors:
                eid, _ = entry
                back = cmap.entrances[(x, prev)]
                travs.append((eid, back == entry))
                verts.append(x)
    except KeyError:
        raise InvalidInput("path does not follow edges of the contracted graph") from None
    return InducedWalk(tuple(verts), tuple(travs))


def check_biregular_shape(mg: WeightedMultigraph, k1: int, k2: int) -> bool:
    """Alternating two-degree test on a multigraph: every vertex has
    multigraph degree k1 or k2 and every edge joins the two degree
    classes.  Self-loops fail; so does k1 <= k2."""
    if not (isinstance(k1, int) and isinstance(k2, int)) or not k1 > k2 >= 2:
        return False
    deg = {v: mg.mdegree(v) for v in mg.vertices()}
    if any(d not in (k1, k2) for d in deg.values()):
        return False
    for e in mg.edges():
        if e.a == e.b:
            return False
        if {deg[e.a], deg[e.b]} != {k1, k2}:
            return False
    return True


@lru_cache(maxsize=None)
def _crossing_probability(length: int) -> Fraction:
    """Exact chance that a fair walk entering a corridor of the given
    length reaches the far end before returning to its entrance, solved
    from the interior harmonic system by elimination."""
    if length < 1:
        raise InvalidInput("corridor length must be >= 1")
    if length == 1:
        return _ONE
    m = length - 1
    aug = []
    for i in range(m):
        row = [_ZERO] * (m + 1)
        row[i] = Fraction(2)
        if i > 0:
            row[i - 1] = Fraction(-1)
        if i < m - 1:
            row[i + 1] = Fraction(-1)
        else:
            row[m] = _ONE
        aug.append(row)
    for col in range(m):
        piv = aug[col][col]
        aug[col] = [x / piv for x in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return aug[0][m]


def _anchor_step_law(g: ExplicitGraph, cmap: ContractionMap, v) -> dict:
    # one induced step of the uniform walk from anchor v, at vertex level
    law: dict = {}
    nbrs = g.neighbors(v)
    share = Fraction(1, len(nbrs))
    for n in nbrs:
        eid, end = cmap.entrances[(v, n)]
        c = cmap.corridors[eid]
        far = c.b if end == 0 else c.a
        x = _crossing_probability(c.length)
        law[far] = law.get(far, _ZERO) + share * x
        if x != 1:
            law[v] = law.get(v, _ZERO) + share * (1 - x)
    return law


def induced_prefix_distribution(
    g: ExplicitGraph, kind, start, horizon: int, cmap: ContractionMap | None = None
) -> PrefixDistribution:
    """Exact law of the first horizon+1 anchor visits of a walk on ``g``.

    The uniform walk composes per-anchor first-passage laws (each solved
    exactly from the corridor harmonics), so bounces inside long
    corridors are integrated out rather than enumerated.  The
    non-backtracking walk cannot turn around inside a corridor, so its
    induced law is a plain finite enumeration."""
    kind = WalkKind(kind)
    if cmap is None:
        _, cmap = contract(g)
    if start not in cmap.anchors:
        raise InvalidInput("start must be an anchor")
    if not isinstance(horizon, int) or horizon < 0:
        raise InvalidInput("horizon must be a nonnegative integer")
    if horizon > MAX_ENUMERATION_HORIZON:
        raise LimitExceeded(
            f"horizon {horizon} exceeds the enumeration guard {MAX_ENUMERATION_HORIZON}"
        )
    entries: dict = {}

    def add(seq, p):
        entries[seq] = entries.get(seq, _ZERO) + p

    if kind is WalkKind.SRW:
        laws: dict = {}
        seq = [start]

        def rec(v, depth, prob):
            if depth == horizon:
                add(tuple(seq), prob)
                return
            if v not in laws:
                laws[v] = _anchor_step_law(g, cmap, v)
            for w, p in laws[v].items():
                seq.append(w)
                rec(w, depth + 1, prob * p)
                seq.pop()

        rec(start, 0, _ONE)

    elif kind is WalkKind.NBRW:
        cap = horizon * cmap.max_length
        visits = [start]

        def rec(prev, cur, depth, prob):
            if len(visits) == horizon + 1:
                add(tuple(visits), prob)
                return
            if depth == cap:
                raise LimitExceeded("non-backtracking corridor traversal exceeded its bound")
            nbrs = g.neighbors(cur)
            options = nbrs if prev is None else tuple(w for w in nbrs if w != prev)
            if not options:
                raise NoLegalMove(f"no continuation at {cur!r}")
            p = prob / len(options)
            for w in options:
                hit = w in cmap.anchors
                if hit:
                    visits.append(w)
                rec(cur, w, depth + 1, p)
                if hit:
                    visits.pop()

        if horizon == 0:
            add((start,), _ONE)
        else:
            rec(None, start, 0, _ONE)

    else:
        raise InvalidInput("induced laws are defined for srw and nbrw")

    return PrefixDistribution(horizon, entries)
