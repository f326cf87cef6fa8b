"""Brute-force reference computations.

Everything here is deliberately naive and shares no code with the ideal,
tree or bound engines: structure functions are re-implemented in vectorised
numpy, the state lattice is walked exhaustively, and the inclusion-exclusion
numerator is built straight from lcms.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

import numpy as np

from .errors import DomainError, ResourceError

__all__ = [
    "brute_force_phi",
    "brute_force_reliability",
    "brute_force_generators",
    "inclusion_exclusion_numerator",
    "DEFAULT_ORACLE_BUDGET",
]

DEFAULT_ORACLE_BUDGET = 1 << 24
_CHUNK = 1 << 18


def _caps(spec) -> tuple[int, ...]:
    return tuple(int(c) for c in spec.component_max_levels)


def _lattice(caps: Sequence[int], budget: int) -> int:
    size = math.prod(c + 1 for c in caps)
    if size > budget:
        raise ResourceError(f"oracle lattice has {size} points, budget is {budget}", size)
    return size


def _decode(start: int, stop: int, caps: Sequence[int]) -> np.ndarray:
    """Mixed-radix decode of flat indices; the last component varies fastest."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, len(caps)), dtype=np.int64)
    for i in range(len(caps) - 1, -1, -1):
        base = caps[i] + 1
        out[:, i] = idx % base
        idx //= base
    return out


def brute_force_phi(spec, states: np.ndarray) -> np.ndarray:
    """Structure function on a ``(rows, n)`` array of states."""
    kind = type(spec).__name__
    n = states.shape[1]
    if kind == "SimpleKN":
        return np.minimum(np.sort(states, axis=1)[:, n - spec.k], spec.max_level)
    if kind == "GeneralizedKN":
        level = np.zeros(states.shape[0], dtype=np.int64)
        for l, k_l in enumerate(spec.thresholds, start=1):
            hit = (states >= l).sum(axis=1) >= k_l
            level = np.where(hit, l, level)
        return level
    if kind == "SumThreshold":
        return (states.sum(axis=1) >= spec.k).astype(np.int64)
    if kind == "ConsecutiveKN":
        on = states > 0
        run = np.zeros(states.shape[0], dtype=np.int64)
        best = np.zeros(states.shape[0], dtype=np.int64)
        for i in range(n):
            run = np.where(on[:, i], run + 1, 0)
            best = np.maximum(best, run)
        return (best >= spec.k).astype(np.int64)
    raise DomainError(f"unsupported system type {kind}")


def _mass_tables(model, caps: Sequence[int]) -> list[list[float]]:
    tables = model.mass() if hasattr(model, "mass") else model
    tables = [[float(q) for q in row] for row in tables]
    if len(tables) != len(caps):
        raise DomainError(f"{len(tables)} mass functions for {len(caps)} components")
    for i, (row, c) in enumerate(zip(tables, caps)):
        if len(row) != c + 1:
            raise DomainError(f"component {i + 1}: {len(row)} masses for max level {c}")
    return tables


def brute_force_reliability(spec, model, j: int, budget: int = DEFAULT_ORACLE_BUDGET) -> float:
    """``P(phi(X) >= j)`` by summing state probabilities over the whole lattice.

    ``model`` is a sequence of mass functions ``P(X_i = a)`` or any object
    with a ``mass()`` method returning one.
    """
    caps = _caps(spec)
    size = _lattice(caps, budget)
    mass = _mass_tables(model, caps)
    width = max(caps) + 1
    table = np.zeros((len(caps), width))
    for i, row in enumerate(mass):
        table[i, : len(row)] = row
    cols = np.arange(len(caps))
    partial = []
    for start in range(0, size, _CHUNK):
        states = _decode(start, min(size, start + _CHUNK), caps)
        keep = brute_force_phi(spec, states) >= j
        if keep.any():
            probs = table[cols, states[keep]].prod(axis=1)
            partial.append(math.fsum(probs.tolist()))
    return math.fsum(partial)


def brute_force_generators(spec, j: int, budget: int = DEFAULT_ORACLE_BUDGET) -> list[tuple[int, ...]]:
    """Minimal states with ``phi >= j``: every single-step decrement drops below ``j``."""
    caps = _caps(spec)
    size = _lattice(caps, budget)
    states = _decode(0, size, caps)
    working = brute_force_phi(spec, states) >= j
    strides = []
    s = 1
    for c in reversed(caps):
        strides.append(s)
        s *= c + 1
    strides.reverse()
    minimal = working.copy()
    flat = np.arange(size)
    for i, stride in enumerate(strides):
        can = states[:, i] > 0
        below = np.zeros(size, dtype=bool)
        below[can] = working[flat[can] - stride]
        minimal &= ~below
    return sorted(tuple(int(e) for e in row) for row in states[minimal])


def inclusion_exclusion_numerator(ideal, max_generators: int = 20) -> dict[tuple[int, ...], int]:
    """Signed lcm expansion over nonempty generator subsets, collapsed.

    Adding generators one at a time, the new subsets are ``{g}`` together with
    every earlier subset extended by ``g``, whose lcm is ``lcm(T) v g``.
    """
    gens = [tuple(int(e) for e in g) for g in ideal.generators]
    if len(gens) > max_generators:
        raise ResourceError(f"{len(gens)} generators exceeds the limit of {max_generators}", len(gens))
    acc: Counter = Counter()
    for g in gens:
        step: Counter = Counter({g: 1})
        for mu, c in acc.items():
            if c:
                step[tuple(map(max, mu, g))] -= c
        acc.update(step)
    return {mu: c for mu, c in acc.items() if c}
