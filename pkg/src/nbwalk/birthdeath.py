"""Reflected birth-death chains with eventually periodic move
probabilities: exact transience decisions, escape probabilities, move-law
enumeration, and trajectory simulation.

These chains mirror the cursor of the backtrack-erasure algorithm: the
erasure of a uniform walk on a k-regular graph moves its cursor right
with probability (k-1)/k away from the origin, and on a tree alternating
between degrees k1 and k2 the right probability alternates with the
parity of the position.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParameter

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class BirthDeathSpec:
    """Right-move probabilities for a chain on the nonnegative integers.

    Position 0 always moves right (reflection).  Positions 1..len(prefix)
    read from ``prefix``; beyond the prefix, position n uses
    ``period[n % len(period)]``, so ``period[0]`` governs the even
    positions.  All probabilities must lie in (0, 1].
    """

    prefix: tuple
    period: tuple

    def __post_init__(self):
        prefix = tuple(Fraction(p) for p in self.prefix)
        period = tuple(Fraction(p) for p in self.period)
        if not period:
            raise InvalidParameter("period must be nonempty")
        for p in (*prefix, *period):
            if not 0 < p <= 1:
                raise InvalidParameter("move probabilities must lie in (0, 1]")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    def right_prob(self, position: int) -> Fraction:
        if position < 0:
            raise InvalidParameter("positions are nonnegative")
        if position == 0:
            return _ONE
        if position <= len(self.prefix):
            return self.prefix[position - 1]
        return self.period[position % len(self.period)]


def chain_for_regular(k: int) -> BirthDeathSpec:
    """Constant right probability (k-1)/k, the cursor law induced by
    erasing a uniform walk on a k-regular graph."""
    if not isinstance(k, int) or k < 2:
        raise InvalidParameter(f"degree must be an integer >= 2, got {k!r}")
    return BirthDeathSpec((), (Fraction(k - 1, k),))


def chain_for_biregular(k1: int, k2: int) -> BirthDeathSpec:
    """Period-2 right probabilities for the alternating-degree case.  The
    start vertex has degree k1, so even positions carry (k1-1)/k1 and odd
    positions (k2-1)/k2."""
    if not (isinstance(k1, int) and isinstance(k2, int)) or not k1 > k2 >= 2:
        raise InvalidParameter(f"need k1 > k2 >= 2, got ({k1!r}, {k2!r})")
    return BirthDeathSpec((), (Fraction(k1 - 1, k1), Fraction(k2 - 1, k2)))


def _period_ratio_product(spec: BirthDeathSpec) -> Fraction:
    # product of left/right odds over one full period past the prefix
    base = len(spec.prefix)
    prod = _ONE
    for j in range(len(spec.period)):
        p = spec.right_prob(base + 1 + j)
        prod *= (1 - p) / p
    return prod


def is_transient(spec: BirthDeathSpec) -> bool:
    """True exactly when the escape series converges, i.e. when the
    one-period product of left/right odds is below 1."""
    return _period_ratio_product(spec) < 1


def escape_probability(spec: BirthDeathSpec) -> Fraction:
    """Exact chance, starting from position 1, of never hitting 0.

    Uses the classical series S = sum over n >= 0 of the products of
    left/right odds up to position n; the escape probability is 1/S, and
    the periodic tail makes S a finite geometric sum.  Returns 0 exactly
    when the chain is recurrent."""
    ratio = _period_ratio_product(spec)
    if ratio >= 1:
        return _ZERO
    s = len(spec.prefix)
    length = len(spec.period)
    head = _ZERO
    gamma = _ONE
    for n in range(s + 1):
        if n > 0:
            p = spec.right_prob(n)
            gamma *= (1 - p) / p
        head += gamma
    block = _ZERO
    for n in range(s + 1, s + length + 1):
        p = spec.right_prob(n)
        gamma *= (1 - p) / p
        block += gamma
    series = head + block / (1 - ratio)
    return 1 / series


def simulate_chain(spec: BirthDeathSpec, n: int, rng) -> list:
    """Trajectory of n moves from 0, reflecting at 0.  Uses float draws;
    exact answers come from the rational routines."""
    if not isinstance(n, int) or n < 0:
        raise InvalidParameter("step count must be a nonnegative integer")
    s = len(spec.prefix)
    length = len(spec.period)
    prefix = [float(p) for p in spec.prefix]
    period = [float(p) for p in spec.period]
    out = [0]
    pos = 0
    if n:
        for u in rng.random(n).tolist():
            if pos == 0:
                pos = 1
            else:
                p = prefix[pos - 1] if pos <= s else period[pos % length]
                pos = pos + 1 if u < p else pos - 1
            out.append(pos)
    return out


def chain_move_law(spec: BirthDeathSpec, moves: int) -> dict:
    """Exact distribution of the first ``moves`` right/left symbols of
    the chain, as a map from strings like ``"RRLR"`` to rationals."""
    if not isinstance(moves, int) or moves < 0:
        raise InvalidParameter("move count must be a nonnegative integer")
    law: dict = {}

    def rec(pos, t, prob, word):
        if t == moves:
            law[word] = law.get(word, _ZERO) + prob
            return
        if pos == 0:
            rec(1, t + 1, prob, word + "R")
            return
        p = spec.right_prob(pos)
        rec(pos + 1, t + 1, prob * p, word + "R")
        q = 1 - p
        if q:
            rec(pos - 1, t + 1, prob * q, word + "L")

    rec(0, 0, _ONE, "")
    return law
