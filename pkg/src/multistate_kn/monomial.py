"""Exponent-vector monomials and minimally generated monomial ideals.

A monomial ``x_1^{a_1} ... x_n^{a_n}`` is stored as the tuple ``(a_1, ..., a_n)``.
The same tuple doubles as a component-state vector, which is what makes the
reliability/ideal dictionary work: a state is j-working exactly when its
monomial is a multiple of a generator of the j-reliability ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from operator import le
from typing import Iterable, Sequence

from .errors import DimensionError

__all__ = [
    "Monomial",
    "MonomialIdeal",
    "canonical_key",
    "canonical_order",
    "divides",
    "lcm",
    "minimalize",
    "ideal_sum",
    "intersect_principal",
]

# exponents in this domain are tiny; anything past this is a caller bug
_MAX_EXPONENT = 1 << 30


class Monomial(tuple):
    """Immutable exponent vector with a derived ``degree``."""

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int] = ()):
        exps = tuple(int(e) for e in exponents)
        for e in exps:
            if e < 0 or e > _MAX_EXPONENT:
                raise ValueError(f"exponent out of range: {e}")
        return super().__new__(cls, exps)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self) if e)

    @classmethod
    def one(cls, n: int) -> "Monomial":
        return cls((0,) * n)

    def __repr__(self) -> str:
        return f"Monomial({tuple(self)})"

    def pretty(self, names: Sequence[str] | None = None) -> str:
        """Render as ``x1^2*x3`` (or with custom variable names)."""
        if names is None:
            names = [f"x{i + 1}" for i in range(len(self))]
        parts = []
        for name, e in zip(names, self):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


def _check_same_length(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``x^a`` divides ``x^b`` (componentwise ``a <= b``)."""
    _check_same_length(a, b)
    return all(map(le, a, b))


def lcm(a: Sequence[int], b: Sequence[int]) -> Monomial:
    _check_same_length(a, b)
    return Monomial(map(max, a, b))


def canonical_key(m: Sequence[int]) -> tuple:
    """Ascending degree-reverse-lexicographic order with ``x1 > x2 > ...``.

    Lower degree comes first; within a degree the monomial with the larger
    exponent on the last variable where two differ comes first. For
    ``x1x2, x2x3, x3x4, x4x5`` the order is ``x4x5, x3x4, x2x3, x1x2``, so
    ``x1x2`` is the last generator and the first pivot of a tree.
    """
    return (sum(m), tuple(-e for e in reversed(m)))


def canonical_order(gens: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    return sorted((tuple(g) for g in gens), key=canonical_key)


def _minimal_tuples(gens: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Divisibility-minimal elements of ``gens`` in canonical order.

    Plain-tuple fast path used by the tree engine; no validation.
    """
    cands = sorted(set(gens), key=canonical_key)
    kept: list[tuple[int, ...]] = []
    for c in cands:
        for k in kept:
            if all(map(le, k, c)):
                break
        else:
            kept.append(c)
    return kept


def minimalize(gens: Iterable[Sequence[int]], n: int | None = None) -> "MonomialIdeal":
    """Ideal generated by ``gens``, keeping only the divisibility-minimal ones."""
    tuples = [tuple(int(e) for e in g) for g in gens]
    if n is None:
        if not tuples:
            raise DimensionError("cannot infer variable count from an empty generator set")
        n = len(tuples[0])
    for t in tuples:
        if len(t) != n:
            raise DimensionError(f"generator {t} has length {len(t)}, expected {n}")
        if any(e < 0 for e in t):
            raise ValueError(f"negative exponent in {t}")
    return MonomialIdeal._from_minimal(n, tuple(Monomial(g) for g in _minimal_tuples(tuples)))


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal in ``n`` variables given by its minimal generators.

    ``generators`` is always in canonical order. An empty generator tuple is
    the zero ideal; the single generator ``(0, ..., 0)`` is the unit ideal.
    """

    n: int
    generators: tuple[Monomial, ...]

    def __post_init__(self):
        # any generating set is accepted and normalised to the minimal one
        object.__setattr__(self, "generators", minimalize(self.generators, self.n).generators)

    @classmethod
    def _from_minimal(cls, n: int, gens: tuple[Monomial, ...]) -> "MonomialIdeal":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "generators", gens)
        return obj

    @classmethod
    def zero(cls, n: int) -> "MonomialIdeal":
        return cls._from_minimal(n, ())

    @classmethod
    def unit(cls, n: int) -> "MonomialIdeal":
        return cls._from_minimal(n, (Monomial.one(n),))

    @classmethod
    def from_generators(cls, n: int, gens: Iterable[Sequence[int]]) -> "MonomialIdeal":
        return minimalize(gens, n)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].degree == 0

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def contains(self, m: Sequence[int]) -> bool:
        """Membership: ``x^m`` is a multiple of some minimal generator."""
        if len(m) != self.n:
            raise DimensionError(f"monomial has length {len(m)}, ideal has n={self.n}")
        return any(all(map(le, g, m)) for g in self.generators)

    def issubset(self, other: "MonomialIdeal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(g) for g in self.generators]


def ideal_sum(i: MonomialIdeal, j: MonomialIdeal) -> MonomialIdeal:
    if i.n != j.n:
        raise DimensionError(f"ideals live in {i.n} and {j.n} variables")
    return minimalize(list(i.generators) + list(j.generators), i.n)


def intersect_principal(i: MonomialIdeal, g: Sequence[int]) -> MonomialIdeal:
    """``I ∩ <x^g>``, generated by the lcms of ``g`` with the generators of ``I``."""
    if len(g) != i.n:
        raise DimensionError(f"monomial has length {len(g)}, ideal has n={i.n}")
    g = tuple(g)
    return minimalize((tuple(map(max, h, g)) for h in i.generators), i.n)
