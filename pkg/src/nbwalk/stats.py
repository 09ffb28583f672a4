"""Distribution distances, return-time statistics, and the seeded
Monte Carlo harness.

Replica streams are derived from the master seed with a SplitMix64
finalizer (documented in the README); aggregation is a fold over rows in
replica order, so serial and parallel runs of the same configuration
produce byte-identical reports.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import InsufficientData, InvalidInput, InvalidParameter, NoLegalMove
from .graph import BiregularTree, Lattice, RegularTree, WeightedMultigraph, encode_key
from .walkers import (
    HalfEdgeState,
    PrefixDistribution,
    WalkKind,
    nbrw_step,
    nbrw_step_edge,
    srw_step,
    wrw_step,
)

_ZERO = Fraction(0)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def replica_seed(master_seed: int, replica_index: int) -> int:
    """Per-replica 64-bit seed: SplitMix64 finalizer applied to the master
    seed advanced by (replica_index + 1) golden-ratio increments.  The
    mixing function is fixed and part of the reproducibility contract."""
    z = (master_seed + (replica_index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def total_variation(p: PrefixDistribution, q: PrefixDistribution) -> Fraction:
    """Half the L1 gap between two prefix laws on the same horizon, with
    the short-output masses compared as one extra outcome."""
    if p.horizon != q.horizon:
        raise InvalidInput(f"horizon mismatch: {p.horizon} vs {q.horizon}")
    keys = set(p.entries) | set(q.entries)
    acc = sum((abs(p.prob(k) - q.prob(k)) for k in keys), _ZERO)
    acc += abs(p.short_mass - q.short_mass)
    return acc / 2


@dataclass(frozen=True)
class WalkStatistics:
    steps: int
    returns_to_origin: int
    last_return_time: Optional[int]
    end_displacement: float


def return_statistics(path, origin, graph=None) -> WalkStatistics:
    """Count the indices i >= 1 where the path sits at ``origin``.  The
    end displacement is graph specific (Euclidean norm on lattices, depth
    on trees, 0/1 on finite graphs); without a graph it falls back to 0/1."""
    path = tuple(path)
    if not path:
        raise InvalidInput("empty path")
    returns = 0
    last = None
    for i in range(1, len(path)):
        if path[i] == origin:
            returns += 1
            last = i
    end = path[-1]
    if graph is None:
        disp = 0.0 if end == origin else 1.0
    else:
        disp = float(graph.displacement(end, origin))
    return WalkStatistics(len(path) - 1, returns, last, disp)


class FrequencyEstimate(NamedTuple):
    right_fraction: float
    std_error: float
    moves: int


def move_frequency(traces, phase: Optional[int] = None) -> FrequencyEstimate:
    """Empirical right-move probability over cursor traces, counting only
    moves made at positions >= 1 (moves at 0 are forced) and optionally
    only at positions of the given parity.  The error is binomial."""
    rights = 0
    total = 0
    for tr in traces:
        pos = 0
        for mv, after in zip(tr.moves, tr.positions):
            made_at = pos
            pos = after
            if made_at < 1:
                continue
            if phase is not None and made_at % 2 != phase:
                continue
            total += 1
            if mv == "R":
                rights += 1
    if total == 0:
        raise InsufficientData("no moves at qualifying positions")
    f = rights / total
    se = math.sqrt(f * (1.0 - f) / total)
    return FrequencyEstimate(f, se, total)


@dataclass(frozen=True)
class ExperimentReport:
    """Per-replica rows plus order-independent aggregates; serializes to
    a CSV of rows and a JSON summary, both byte-stable for a fixed
    configuration and master seed."""

    config: dict
    master_seed: int
    rows: tuple
    aggregates: dict

    def csv_text(self) -> str:
        lines = ["replica,steps,returns,last_return,displacement"]
        for i, r in enumerate(self.rows):
            last = "" if r.last_return_time is None else str(r.last_return_time)
            lines.append(f"{i},{r.steps},{r.returns_to_origin},{last},{r.end_displacement!r}")
        return "\n".join(lines) + "\n"

    def json_text(self) -> str:
        doc = {
            "config": self.config,
            "master_seed": self.master_seed,
            "aggregates": self.aggregates,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _aggregate(rows) -> dict:
    n = len(rows)
    returns = [r.returns_to_origin for r in rows]
    mean = sum(returns) / n
    if n > 1:
        var = sum((x - mean) ** 2 for x in returns) / (n - 1)
        se = math.sqrt(var / n)
    else:
        se = 0.0
    frac = sum(1 for x in returns if x > 0) / n
    fse = math.sqrt(frac * (1.0 - frac) / n)
    disp = sum(r.end_displacement for r in rows) / n
    return {
        "replicas": n,
        "mean_returns": mean,
        "mean_returns_ci95": 1.96 * se,
        "returned_fraction": frac,
        "returned_fraction_ci95": 1.96 * fse,
        "mean_displacement": disp,
    }


def monte_carlo(
    kind,
    graph,
    start,
    horizon: int,
    replicas: int,
    master_seed: int,
    jobs: int = 1,
    config: Optional[dict] = None,
) -> ExperimentReport:
    """Independent seeded replicas of one walk experiment.  Replica i
    draws from a generator seeded by ``replica_seed(master_seed, i)``, so
    the report does not depend on scheduling or on ``jobs``."""
    kind = WalkKind(kind)
    if not isinstance(replicas, int) or replicas < 1:
        raise InvalidParameter("need at least one replica")
    if not isinstance(horizon, int) or horizon < 0:
        raise InvalidParameter("horizon must be a nonnegative integer")

    def one(i: int) -> WalkStatistics:
        rng = np.random.default_rng(replica_seed(master_seed, i))
        return _replica(kind, graph, start, horizon, rng)

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = tuple(pool.map(one, range(replicas)))
    else:
        rows = tuple(one(i) for i in range(replicas))
    if config is None:
        config = {
            "walk": kind.value,
            "start": encode_key(start),
            "horizon": horizon,
            "replicas": replicas,
        }
    return ExperimentReport(dict(config), master_seed, rows, _aggregate(rows))


def _replica(kind, graph, start, horizon, rng) -> WalkStatistics:
    if isinstance(graph, Lattice) and graph.pitch == 1 and kind in (WalkKind.SRW, WalkKind.NBRW):
        returns, last, disp = _lattice_run(kind, graph, start, horizon, rng)
        return WalkStatistics(horizon, returns, last, disp)
    if isinstance(graph, (RegularTree, BiregularTree)) and start == () and kind in (
        WalkKind.SRW,
        WalkKind.NBRW,
    ):
        return _tree_run(kind, graph, horizon, rng)
    return _generic_replica(kind, graph, start, horizon, rng)


def _tree_run(kind, tree, horizon, rng) -> WalkStatistics:
    """Root-started tree walks via their depth process, which is exact:
    by symmetry the uniform walk's depth is a birth-death chain moving
    toward the root with probability 1/degree, and root visits are depth
    zeros.  A non-backtracking walk on a tree can never revisit a vertex,
    so its statistics are deterministic."""
    if kind is WalkKind.NBRW:
        return WalkStatistics(horizon, 0, None, float(horizon))
    if isinstance(tree, RegularTree):
        up = (1.0 / tree.k, 1.0 / tree.k)
    else:
        up = (1.0 / tree.k1, 1.0 / tree.k2)
    depth = 0
    returns = 0
    last = None
    done = 0
    while done < horizon:
        n = min(_CHUNK, horizon - done)
        draws = rng.random(n).tolist()
        for u in draws:
            done += 1
            if depth == 0:
                depth = 1
            elif u < up[depth % 2]:
                depth -= 1
                if depth == 0:
                    returns += 1
                    last = done
            else:
                depth += 1
    return WalkStatistics(horizon, returns, last, float(depth))


def _generic_replica(kind, graph, start, horizon, rng) -> WalkStatistics:
    returns = 0
    last = None
    cur = start
    i = 0
    try:
        if kind is WalkKind.WRW:
            if not isinstance(graph, WeightedMultigraph):
                raise InvalidInput("wrw needs a weighted multigraph")
            for i in range(1, horizon + 1):
                move = wrw_step(graph, cur, rng)
                cur = graph.endpoint(move.edge_id, move.head_end)
                if cur == start:
                    returns += 1
                    last = i
        elif kind is WalkKind.NBRW and isinstance(graph, WeightedMultigraph):
            state = None
            for i in range(1, horizon + 1):
                if state is None:
                    half = graph.half_edges(cur)
                    if not half:
                        raise NoLegalMove(f"vertex {cur!r} is isolated")
                    eid, end = half[int(rng.integers(len(half)))]
                    state = HalfEdgeState(eid, 1 - end)
                else:
                    state = nbrw_step_edge(graph, state, rng)
                cur = graph.endpoint(state.edge_id, state.head_end)
                if cur == start:
                    returns += 1
                    last = i
        else:
            prev = None
            for i in range(1, horizon + 1):
                if kind is WalkKind.SRW:
                    nxt = srw_step(graph, cur, rng)
                else:
                    nxt = srw_step(graph, cur, rng) if prev is None else nbrw_step(graph, prev, cur, rng)
                    prev = cur
                cur = nxt
                if cur == start:
                    returns += 1
                    last = i
    except NoLegalMove as exc:
        raise NoLegalMove(f"step {i}: {exc}") from None
    return WalkStatistics(horizon, returns, last, float(graph.displacement(cur, start)))


_CHUNK = 1 << 15


def _lattice_run(kind, lat, start, horizon, rng, checkpoints=None):
    """Chunked lattice walk: directions are drawn (and, for the
    non-backtracking walk, chained in a tight loop), positions and origin
    hits are then vectorized.  Optionally records cumulative return counts
    at the given step checkpoints."""
    d = lat.d
    two_d = 2 * d
    lut = np.zeros((two_d, d), dtype=np.int64)
    for j in range(two_d):
        lut[j, j // 2] = 1 if j % 2 == 0 else -1
    origin = np.array(lat.coordinates(start), dtype=np.int64)
    carry = origin.copy()
    returns = 0
    last = None
    done = 0
    prev = -1
    marks = sorted(checkpoints) if checkpoints else []
    marked = {}
    boundaries = sorted(set(marks + [horizon]))
    for hi in boundaries:
        while done < hi:
            n = min(_CHUNK, hi - done)
            if kind is WalkKind.SRW:
                dirs = rng.integers(0, two_d, size=n)
            else:
                out = np.empty(n, dtype=np.int64)
                i0 = 0
                if prev < 0:
                    prev = int(rng.integers(two_d))
                    out[0] = prev
                    i0 = 1
                if n > i0:
                    raws = rng.integers(0, two_d - 1, size=n - i0).tolist()
                    p = prev
                    buf = []
                    append = buf.append
                    for u in raws:
                        rev = p ^ 1
                        if u >= rev:
                            u += 1
                        append(u)
                        p = u
                    out[i0:] = buf
                    prev = p
                dirs = out
            pos = carry + np.cumsum(lut[dirs], axis=0)
            hits = np.all(pos == origin, axis=1)
            k = int(hits.sum())
            if k:
                returns += k
                last = done + int(np.flatnonzero(hits)[-1]) + 1
            carry = pos[-1]
            done += n
        if hi in marks:
            marked[hi] = returns
    disp = float(np.sqrt(((carry - origin) ** 2).sum()))
    if checkpoints is None:
        return returns, last, disp
    return returns, last, disp, marked


def lattice_return_counts(kind, d, horizons, replicas, master_seed) -> dict:
    """Per-replica cumulative return counts of one growing lattice walk,
    read off at each requested horizon.  Pairing the counts across
    horizons on the same path gives a low-variance growth diagnostic."""
    kind = WalkKind(kind)
    horizons = sorted(set(int(h) for h in horizons))
    if not horizons or horizons[0] < 1:
        raise InvalidParameter("need positive horizons")
    lat = Lattice(d)
    start = lat.default_start()
    out = {h: [] for h in horizons}
    top = horizons[-1]
    for i in range(replicas):
        rng = np.random.default_rng(replica_seed(master_seed, i))
        _, _, _, marked = _lattice_run(kind, lat, start, top, rng, checkpoints=horizons)
        for h in horizons:
            out[h].append(marked[h])
    return out
