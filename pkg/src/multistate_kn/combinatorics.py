"""Restricted compositions and the closed formulas for sum-threshold ideals.

``J^m_[n,k]`` is generated by the degree-``k`` monomials in ``n`` variables
whose exponents are all at most ``m``. The ideal has linear quotients: added
one generator at a time in descending colex order (compare exponents from
the last variable backwards), the colon of ``x^u`` by the earlier generators
is generated by the variables ``x_t`` with ``u_t < m`` that have a nonzero
exponent somewhere before them. Each generator therefore contributes a
Koszul block ``x^u * prod(sigma)`` over subsets of that free set, and the
Betti numbers follow by counting generators by free-set size.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator

from .monomial import Monomial

__all__ = [
    "bounded_compositions",
    "restricted_compositions",
    "OrderedGenerator",
    "sum_threshold_generator_count",
    "sum_threshold_ordered_generators",
    "sum_threshold_betti",
    "sum_threshold_multigraded_contributions",
    "sum_threshold_numerator_terms",
    "free_variables",
]


@lru_cache(maxsize=None)
def restricted_compositions(p: int, l: int, a: int, b: int) -> int:
    """Number of ordered ``l``-tuples with entries in ``[a, b]`` summing to ``p``.

    Exact big-integer count by dynamic programming over (remaining total,
    remaining parts). ``C(0, 0, a, b) = 1`` for any bounds.
    """
    if l < 0 or p < 0:
        return 0
    if l == 0:
        return 1 if p == 0 else 0
    if a > b:
        return 0
    if p < l * a or p > l * b:
        return 0
    return sum(restricted_compositions(p - v, l - 1, a, b) for v in range(a, min(b, p) + 1))


def bounded_compositions(total: int, parts: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    """Yield every ``parts``-tuple with entries in ``[lo, hi]`` summing to ``total``.

    Tuples come out in lexicographically decreasing order.
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    if lo > hi:
        return
    rest_lo, rest_hi = (parts - 1) * lo, (parts - 1) * hi
    for v in range(min(hi, total - rest_lo), max(lo, total - rest_hi) - 1, -1):
        for tail in bounded_compositions(total - v, parts - 1, lo, hi):
            yield (v,) + tail


@dataclass(frozen=True)
class OrderedGenerator:
    """A generator of ``J^m_[n,k]`` tagged with its place in the listing.

    ``index`` is the (0-based) distinguished variable: the first one carrying
    the maximal exponent ``exponent``. ``prefix_nonzero`` counts nonzero
    exponents before it. ``free_set`` holds the colon variables (see the
    module docstring); it is not derived from ``index``.
    """

    monomial: Monomial
    index: int
    exponent: int
    prefix_nonzero: int
    free_set: frozenset[int]


def sum_threshold_generator_count(m: int, n: int, k: int) -> int:
    """``N^m_[n,k]``: quadruple sum over (exponent, variable, prefix sum, prefix support)."""
    if k == 0:
        return 1
    if k > n * m:
        return 0
    total = 0
    for i in range(1, min(m, k) + 1):
        for j in range(1, n + 1):
            for p in range(0, k - i + 1):
                tail = restricted_compositions(k - i - p, n - j, 0, i)
                if not tail:
                    continue
                for l in range(0, j):
                    total += restricted_compositions(p, l, 1, i - 1) * comb(j - 1, l) * tail
    return total


def sum_threshold_ordered_generators(m: int, n: int, k: int) -> list[OrderedGenerator]:
    """All generators of ``J^m_[n,k]`` in linear-quotient order.

    Blocks run over the maximal exponent ``i`` from ``m`` down to 1 and, inside,
    over the distinguished variable from first to last: the prefix stays
    strictly below ``i``, the distinguished slot equals ``i`` and the suffix is
    at most ``i``.
    """
    if k == 0:
        return [OrderedGenerator(Monomial.one(n), 0, 0, 0, frozenset())]
    out: list[OrderedGenerator] = []
    for i in range(min(m, k), 0, -1):
        for j in range(n):
            for p in range(0, k - i + 1):
                for prefix in bounded_compositions(p, j, 0, i - 1):
                    for suffix in bounded_compositions(k - i - p, n - j - 1, 0, i):
                        mono = prefix + (i,) + suffix
                        nz = sum(1 for e in prefix if e)
                        out.append(OrderedGenerator(Monomial(mono), j, i, nz, free_variables(mono, m)))
    return out


def free_variables(mu: tuple[int, ...], m: int) -> frozenset[int]:
    """Colon variables of ``x^mu`` in ``J^m_[n,k]``: below the cap, after the first nonzero slot."""
    first = next((t for t, e in enumerate(mu) if e), len(mu))
    return frozenset(t for t in range(first + 1, len(mu)) if mu[t] < m)


def sum_threshold_betti(m: int, n: int, k: int) -> list[int]:
    """Graded Betti numbers ``beta_{d, k+d}`` for ``d = 0 .. n-1``.

    A generator whose first nonzero exponent ``a`` sits at position ``f``
    (1-based) and which has ``c`` later exponents at the cap ``m`` has
    ``n-f-c`` free variables, contributing ``C(n-f-c, d)``. The generators
    with given ``(f, a, c)`` are counted with restricted compositions of the
    remaining degree over the ``n-f-c`` uncapped later slots.
    """
    betti = [0] * n
    if k > n * m:
        return betti
    if k == 0:
        betti[0] = 1
        return betti
    for f in range(1, n + 1):
        later = n - f
        for a in range(1, min(m, k) + 1):
            for c in range(0, later + 1):
                rest = k - a - c * m
                if rest < 0:
                    break
                count = comb(later, c) * restricted_compositions(rest, later - c, 0, m - 1)
                if not count:
                    continue
                for d in range(later - c + 1):
                    betti[d] += count * comb(later - c, d)
    return betti


def sum_threshold_multigraded_contributions(g: OrderedGenerator, d: int) -> list[Monomial]:
    """Multidegrees ``mu + 1_sigma`` for every ``sigma`` of size ``d`` in the free set."""
    if d < 0 or d > len(g.free_set):
        return []
    base = list(g.monomial)
    out = []
    for sigma in combinations(sorted(g.free_set), d):
        v = base.copy()
        for t in sigma:
            v[t] += 1
        out.append(Monomial(v))
    return out


def sum_threshold_numerator_terms(m: int, n: int, k: int) -> list[tuple[tuple[int, ...], int]]:
    """``(multidegree, dimension)`` terms of the Hilbert numerator of ``J^m_[n,k]``."""
    terms = []
    for g in sum_threshold_ordered_generators(m, n, k):
        for d in range(len(g.free_set) + 1):
            terms.extend((tuple(mu), d) for mu in sum_threshold_multigraded_contributions(g, d))
    return terms
