"""Shared fixtures: small graphs and independent numeric oracles."""

from __future__ import annotations

import numpy as np

from nbwalk import from_adjacency


def rng(seed: int):
    return np.random.default_rng(seed)


def k4():
    return from_adjacency({0: [1, 2, 3], 1: [0, 2, 3], 2: [0, 1, 3], 3: [0, 1, 2]})


def triangle():
    return from_adjacency({0: [1, 2], 1: [0, 2], 2: [0, 1]})


def cycle(n: int):
    return from_adjacency({i: [(i - 1) % n, (i + 1) % n] for i in range(n)})


def theta_graph():
    # u and w joined by corridors of lengths 1, 2, 3
    return from_adjacency(
        {
            "u": ["w", "p1", "q1"],
            "w": ["u", "p1", "q2"],
            "p1": ["u", "w"],
            "q1": ["u", "q2"],
            "q2": ["q1", "w"],
        }
    )


def two_loop_graph():
    # two corridors of length 3 from v back to itself
    return from_adjacency(
        {
            "v": ["x1", "x2", "y1", "y2"],
            "x1": ["v", "x2"],
            "x2": ["x1", "v"],
            "y1": ["v", "y2"],
            "y2": ["y1", "v"],
        }
    )


def complete_bipartite(m: int, n: int):
    adj = {f"a{i}": [f"b{j}" for j in range(n)] for i in range(m)}
    adj.update({f"b{j}": [f"a{i}" for i in range(m)] for j in range(n)})
    return from_adjacency(adj)


def truncated_escape(spec, m: int = 200) -> float:
    """Escape probability via the truncated absorbing chain on {0..M}:
    absorb at 0 and at M, solve the interior linear system numerically,
    and report the chance of reaching M before 0 from state 1.  The
    truncation error is far below 1e-9 for transient specs at M=200."""
    a = np.zeros((m + 1, m + 1))
    b = np.zeros(m + 1)
    a[0, 0] = 1.0
    b[0] = 1.0
    a[m, m] = 1.0
    b[m] = 0.0
    for i in range(1, m):
        p = float(spec.right_prob(i))
        a[i, i] = 1.0
        a[i, i - 1] = -(1.0 - p)
        a[i, i + 1] = -p
    h = np.linalg.solve(a, b)  # h[i] = P(hit 0 before M from i)
    return 1.0 - float(h[1])
