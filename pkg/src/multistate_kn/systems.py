"""The four k-out-of-n system families and their reliability ideals.

Components and levels use 0-based component indices and the usual 0..M
level scale. A state vector is a plain tuple of ints, the same shape as a
monomial's exponent vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, Union

from .combinatorics import bounded_compositions
from .errors import DimensionError, DomainError, ResourceError
from .monomial import Monomial, MonomialIdeal, canonical_order, minimalize

__all__ = [
    "DEFAULT_BUDGET",
    "SimpleKN",
    "GeneralizedKN",
    "SumThreshold",
    "ConsecutiveKN",
    "SystemSpec",
    "StandardPair",
    "lattice_size",
    "structure_function",
    "build_reliability_ideal",
    "lower_boundary_points",
    "upper_boundary_points",
    "maximal_standard_pairs",
    "minimal_cuts",
]

DEFAULT_BUDGET = 1 << 28


def _k_subsets_ideal(n: int, eligible: Sequence[int], k: int, level: int) -> list[tuple[int, ...]]:
    gens = []
    for sigma in combinations(eligible, k):
        v = [0] * n
        for i in sigma:
            v[i] = level
        gens.append(tuple(v))
    return gens


@dataclass(frozen=True)
class SimpleKN:
    """``phi(x) = x_(n-k+1)``: the level reached by at least ``k`` components.

    With heterogeneous caps only components with ``M_i >= j`` can take part
    at level ``j``; a level that fewer than ``k`` components can reach has the
    zero ideal. ``system_max_level`` defaults to the highest reachable level.
    """

    k: int
    component_max_levels: tuple[int, ...]
    system_max_level: int | None = None

    def __post_init__(self):
        caps = tuple(int(c) for c in self.component_max_levels)
        object.__setattr__(self, "component_max_levels", caps)
        if not caps:
            raise DomainError("a system needs at least one component")
        if any(c < 1 for c in caps):
            raise DomainError("component max levels must be >= 1")
        if not 1 <= self.k <= len(caps):
            raise DomainError(f"need 1 <= k <= n, got k={self.k}, n={len(caps)}")
        if self.system_max_level is None:
            object.__setattr__(self, "system_max_level", sorted(caps, reverse=True)[self.k - 1])
        elif self.system_max_level < 1:
            raise DomainError("system max level must be >= 1")

    @property
    def n(self) -> int:
        return len(self.component_max_levels)

    @property
    def max_level(self) -> int:
        return self.system_max_level

    def phi(self, x: Sequence[int]) -> int:
        return min(sorted(x)[self.n - self.k], self.max_level)

    def ideal(self, j: int) -> MonomialIdeal:
        eligible = [i for i, c in enumerate(self.component_max_levels) if c >= j]
        if len(eligible) < self.k:
            return MonomialIdeal.zero(self.n)
        return MonomialIdeal._from_minimal(
            self.n,
            tuple(Monomial(g) for g in canonical_order(_k_subsets_ideal(self.n, eligible, self.k, j))),
        )


@dataclass(frozen=True)
class GeneralizedKN:
    """Level ``>= j`` iff some ``l`` in ``[j, M]`` has ``N_l >= k_l``.

    ``N_l`` is the number of components at level ``l`` or above and
    ``thresholds = (k_1, ..., k_M)``.
    """

    thresholds: tuple[int, ...]
    component_max_levels: tuple[int, ...]

    def __post_init__(self):
        ks = tuple(int(k) for k in self.thresholds)
        caps = tuple(int(c) for c in self.component_max_levels)
        object.__setattr__(self, "thresholds", ks)
        object.__setattr__(self, "component_max_levels", caps)
        if not ks:
            raise DomainError("need at least one threshold")
        if not caps:
            raise DomainError("a system needs at least one component")
        if any(c < 1 for c in caps):
            raise DomainError("component max levels must be >= 1")
        for j, k in enumerate(ks, start=1):
            if not 1 <= k <= len(caps):
                raise DomainError(f"threshold k_{j}={k} outside [1, {len(caps)}]")

    @classmethod
    def homogeneous(cls, n: int, thresholds: Sequence[int]) -> "GeneralizedKN":
        return cls(tuple(thresholds), (len(thresholds),) * n)

    @property
    def n(self) -> int:
        return len(self.component_max_levels)

    @property
    def max_level(self) -> int:
        return len(self.thresholds)

    def phi(self, x: Sequence[int]) -> int:
        for level in range(self.max_level, 0, -1):
            if sum(1 for v in x if v >= level) >= self.thresholds[level - 1]:
                return level
        return 0

    def ideal(self, j: int) -> MonomialIdeal:
        gens: list[tuple[int, ...]] = []
        for level in range(j, self.max_level + 1):
            eligible = [i for i, c in enumerate(self.component_max_levels) if c >= level]
            k = self.thresholds[level - 1]
            if len(eligible) >= k:
                gens.extend(_k_subsets_ideal(self.n, eligible, k, level))
        if not gens:
            return MonomialIdeal.zero(self.n)
        return minimalize(gens, self.n)


@dataclass(frozen=True)
class SumThreshold:
    """Binary system of ``n`` components with states ``0..m``; works iff the states sum to ``>= k``."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DomainError("need n >= 1 and m >= 1")
        if not 0 <= self.k <= self.n * self.m:
            raise DomainError(f"need 0 <= k <= n*m = {self.n * self.m}, got {self.k}")

    @property
    def component_max_levels(self) -> tuple[int, ...]:
        return (self.m,) * self.n

    @property
    def max_level(self) -> int:
        return 1

    def phi(self, x: Sequence[int]) -> int:
        return 1 if sum(x) >= self.k else 0

    def ideal(self, j: int) -> MonomialIdeal:
        gens = bounded_compositions(self.k, self.n, 0, self.m)
        return minimalize(gens, self.n)


@dataclass(frozen=True)
class ConsecutiveKN:
    """Linear consecutive k-out-of-n:G with binary components."""

    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise DomainError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def component_max_levels(self) -> tuple[int, ...]:
        return (1,) * self.n

    @property
    def max_level(self) -> int:
        return 1

    def phi(self, x: Sequence[int]) -> int:
        run = 0
        for v in x:
            run = run + 1 if v else 0
            if run >= self.k:
                return 1
        return 0

    def ideal(self, j: int) -> MonomialIdeal:
        gens = [tuple(1 if s <= i < s + self.k else 0 for i in range(self.n))
                for s in range(self.n - self.k + 1)]
        return MonomialIdeal._from_minimal(self.n, tuple(Monomial(g) for g in canonical_order(gens)))


SystemSpec = Union[SimpleKN, GeneralizedKN, SumThreshold, ConsecutiveKN]


@dataclass(frozen=True)
class StandardPair:
    """``(x^base, free_set)``: the monomials ``x^base * x^nu`` with ``supp(nu)`` in ``free_set``."""

    base: Monomial
    free_set: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.base.support & self.free_set:
            raise DomainError("base support and free set must be disjoint")


def lattice_size(spec: SystemSpec) -> int:
    return math.prod(c + 1 for c in spec.component_max_levels)


def _check_state(spec: SystemSpec, x: Sequence[int]) -> tuple[int, ...]:
    x = tuple(int(v) for v in x)
    if len(x) != spec.n:
        raise DimensionError(f"state has {len(x)} entries, system has {spec.n} components")
    for i, (v, c) in enumerate(zip(x, spec.component_max_levels)):
        if not 0 <= v <= c:
            raise DomainError(f"component {i} state {v} outside 0..{c}")
    return x


def _check_level(spec: SystemSpec, j: int, lo: int, hi: int) -> None:
    if not lo <= j <= hi:
        raise DomainError(f"level {j} outside {lo}..{hi}")


def structure_function(spec: SystemSpec, x: Sequence[int]) -> int:
    return spec.phi(_check_state(spec, x))


def build_reliability_ideal(spec: SystemSpec, j: int) -> MonomialIdeal:
    """Minimal generators = minimal j-working states (lower boundary points)."""
    _check_level(spec, j, 1, spec.max_level)
    return spec.ideal(j)


def lower_boundary_points(spec: SystemSpec, j: int) -> list[tuple[int, ...]]:
    return build_reliability_ideal(spec, j).as_tuples()


def _scan_upper(spec: SystemSpec, j: int) -> list[tuple[int, ...]]:
    """Maximal states with ``phi <= j`` by a depth-first walk of the down-set.

    Each lattice point is reached once by incrementing coordinates in
    non-decreasing index order; a child with ``phi > j`` is pruned together
    with everything above it.
    """
    caps = spec.component_max_levels
    n = len(caps)
    phi = spec.phi
    found = []
    start = (0,) * n
    if phi(start) > j:
        return []
    stack = [(start, 0)]
    while stack:
        x, first = stack.pop()
        xs = list(x)
        canonical_blocked = True
        for i in range(first, n):
            if xs[i] < caps[i]:
                xs[i] += 1
                y = tuple(xs)
                xs[i] -= 1
                if phi(y) <= j:
                    canonical_blocked = False
                    stack.append((y, i))
        if not canonical_blocked:
            continue
        for i in range(first):
            if xs[i] < caps[i]:
                xs[i] += 1
                up = phi(tuple(xs))
                xs[i] -= 1
                if up <= j:
                    break
        else:
            found.append(x)
    return sorted(found, key=lambda v: tuple(-e for e in v))


def _generalized_upper_fast(spec: GeneralizedKN, j: int) -> list[tuple[int, ...]]:
    """Combinatorial u.b.p. enumeration for the generalized family.

    ``phi(x) <= j`` iff ``N_l <= k_l - 1`` for every ``l > j``. Since ``N_l``
    is nonincreasing in ``l`` the binding caps are the running minima ``e_l``.
    A point is fixed by the nested sets ``A_M ⊆ ... ⊆ A_{j+1}`` of components
    at or above each level; everything else sits at ``min(M_i, j)``. It is
    maximal iff every component below its cap would break a tight ``e``.
    """
    caps = spec.component_max_levels
    n, top = spec.n, spec.max_level
    eff: dict[int, int] = {}
    run = n
    for level in range(j + 1, top + 1):
        run = min(run, spec.thresholds[level - 1] - 1)
        eff[level] = run
    found = []

    def assign(level: int, chosen: frozenset[int], sizes: dict[int, int], value: dict[int, int]):
        if level == j:
            x = [value.get(i, min(c, j)) for i, c in enumerate(caps)]
            for i, v in enumerate(x):
                if v >= caps[i]:
                    continue
                nxt = v + 1
                if nxt > top:
                    break  # above every constrained level: raising is free
                if nxt > j and sizes[nxt] < eff[nxt]:
                    break
            else:
                found.append(tuple(x))
            return
        eligible = [i for i in range(n) if caps[i] >= level and i not in chosen]
        room = eff[level] - len(chosen)
        if room < 0:
            return
        for size in range(0, min(room, len(eligible)) + 1):
            for extra in combinations(eligible, size):
                new_value = dict(value)
                for i in extra:
                    new_value[i] = caps[i] if level == top else level
                new_sizes = dict(sizes)
                new_sizes[level] = len(chosen) + size
                assign(level - 1, chosen | frozenset(extra), new_sizes, new_value)

    assign(top, frozenset(), {}, {})
    return sorted(set(found), key=lambda v: tuple(-e for e in v))


def upper_boundary_points(
    spec: SystemSpec, j: int, budget: int = DEFAULT_BUDGET, method: str = "auto"
) -> list[tuple[int, ...]]:
    """Maximal states with ``phi <= j`` (``0 <= j <= M-1``).

    ``method`` is ``"scan"`` (pruned lattice walk, needs the full lattice
    within ``budget``), ``"fast"`` (generalized family only) or ``"auto"``,
    which scans when the lattice fits and otherwise falls back to the fast
    path where one exists.
    """
    _check_level(spec, j, 0, spec.max_level - 1)
    size = lattice_size(spec)
    if method == "fast" or (method == "auto" and size > budget and isinstance(spec, GeneralizedKN)):
        if not isinstance(spec, GeneralizedKN):
            raise DomainError("the combinatorial fast path only covers the generalized family")
        return _generalized_upper_fast(spec, j)
    if method not in ("auto", "scan"):
        raise ValueError(f"unknown method {method!r}")
    if size > budget:
        raise ResourceError(f"state lattice has {size} points, budget is {budget}", size)
    return _scan_upper(spec, j)


def maximal_standard_pairs(
    spec: SystemSpec, j: int, budget: int = DEFAULT_BUDGET, method: str = "auto"
) -> list[StandardPair]:
    """Maximal standard pairs of ``I_{S,j}``, read off the u.b.p. to level ``j-1``.

    For a u.b.p. ``alpha`` the free set is the components at their cap and the
    base is ``alpha`` with those coordinates zeroed.
    """
    _check_level(spec, j, 1, spec.max_level)
    caps = spec.component_max_levels
    pairs = []
    for alpha in upper_boundary_points(spec, j - 1, budget, method):
        sigma = frozenset(i for i, (a, c) in enumerate(zip(alpha, caps)) if a == c)
        base = Monomial(0 if i in sigma else a for i, a in enumerate(alpha))
        pairs.append(StandardPair(base, sigma))
    return pairs


def minimal_cuts(
    spec: SystemSpec, j: int, budget: int = DEFAULT_BUDGET, method: str = "auto"
) -> list[tuple[int, ...]]:
    """Minimal cut vectors for level ``j``: the u.b.p. to level ``j-1``."""
    _check_level(spec, j, 1, spec.max_level)
    return upper_boundary_points(spec, j - 1, budget, method)
