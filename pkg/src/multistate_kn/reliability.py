"""Probability semantics for reliability ideals.

Substituting ``x_i^a -> P(X_i >= a)`` in a Hilbert numerator gives the
probability that the system reaches the ideal's level. Truncating the
alternating sum after ``t`` homological summands gives an upper bound for
odd ``t`` and a lower bound for even ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import sum_threshold_numerator_terms
from .errors import DimensionError, DomainError, ValidationError
from .monomial import MonomialIdeal
from .mvt import HilbertNumerator, MayerVietorisTree, Order, build_mvt, hilbert_numerator
from .systems import (
    DEFAULT_BUDGET,
    SumThreshold,
    SystemSpec,
    build_reliability_ideal,
    minimal_cuts,
)

__all__ = [
    "ProbabilityModel",
    "BoundSequence",
    "LevelReliability",
    "ClassicBounds",
    "weight",
    "evaluate",
    "evaluate_tree",
    "evaluate_coefficients",
    "reliability_numerator",
    "level_reliabilities",
    "classic_lower_bounds",
]

_TOL = 1e-9


@dataclass(frozen=True)
class ProbabilityModel:
    """Per-component survival tables ``survival[i][a] = P(X_i >= a)``, ``a = 0..M_i``."""

    survival: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        for i, row in enumerate(self.survival):
            if not row:
                raise ValidationError(f"component {i + 1}: empty survival table")
            if abs(row[0] - 1.0) > _TOL:
                raise ValidationError(f"component {i + 1}: P(X >= 0) must be 1, got {row[0]}")
            for a, p in enumerate(row):
                if not (-_TOL <= p <= 1 + _TOL) or math.isnan(p):
                    raise ValidationError(f"component {i + 1}: probability {p} at level {a} outside [0, 1]")
                if a and p > row[a - 1] + _TOL:
                    raise ValidationError(f"component {i + 1}: survival increases at level {a}")

    @classmethod
    def from_survival(cls, tables: Iterable[Sequence[float]]) -> "ProbabilityModel":
        return cls(tuple(tuple(float(p) for p in row) for row in tables))

    @classmethod
    def from_mass(cls, tables: Iterable[Sequence[float]]) -> "ProbabilityModel":
        """Build from mass functions ``P(X_i = a)`` (each must sum to 1)."""
        rows = []
        for i, masses in enumerate(tables):
            masses = [float(q) for q in masses]
            if not masses:
                raise ValidationError(f"component {i + 1}: empty mass function")
            if any(q < 0 or math.isnan(q) for q in masses):
                raise ValidationError(f"component {i + 1}: negative mass")
            if abs(math.fsum(masses) - 1.0) > _TOL:
                raise ValidationError(f"component {i + 1}: masses sum to {math.fsum(masses)}, expected 1")
            tail = [math.fsum(masses[a:]) for a in range(len(masses))]
            tail[0] = 1.0
            rows.append(tuple(min(1.0, t) for t in tail))
        return cls(tuple(rows))

    @property
    def n(self) -> int:
        return len(self.survival)

    @property
    def caps(self) -> tuple[int, ...]:
        return tuple(len(row) - 1 for row in self.survival)

    def p(self, i: int, a: int) -> float:
        row = self.survival[i]
        return row[a] if a < len(row) else 0.0

    def mass(self) -> tuple[tuple[float, ...], ...]:
        return tuple(
            tuple(row[a] - (row[a + 1] if a + 1 < len(row) else 0.0) for a in range(len(row)))
            for row in self.survival
        )

    def table(self, width: int) -> np.ndarray:
        """``(n, width)`` array of survival values, zero past each cap."""
        out = np.zeros((self.n, width))
        for i, row in enumerate(self.survival):
            k = min(width, len(row))
            out[i, :k] = row[:k]
        return out


def weight(mu: Sequence[int], model: ProbabilityModel) -> float:
    if len(mu) != model.n:
        raise DimensionError(f"monomial has {len(mu)} entries, model has {model.n} components")
    w = 1.0
    for i, a in enumerate(mu):
        if a:
            w *= model.p(i, a)
    return w


@dataclass(frozen=True)
class BoundSequence:
    """Truncation ladder of one numerator.

    ``level_sums[d]`` is the total weight ``S_d`` of the dimension-``d`` terms
    and ``partial_sums[t-1]`` is ``s_t = sum_{d<t} (-1)^d S_d``. Odd ``t``
    gives an upper bound ``u_t``, even ``t`` a lower bound ``l_t``.
    """

    level_sums: tuple[float, ...]
    partial_sums: tuple[float, ...]

    @property
    def exact(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(("u" if t % 2 else "l") + str(t) for t in range(1, len(self.partial_sums) + 1))

    def items(self) -> list[tuple[str, float]]:
        return list(zip(self.labels, self.partial_sums))

    def bound(self, t: int) -> float:
        return self.partial_sums[t - 1]

    @property
    def upper_bounds(self) -> dict[int, float]:
        return {t: s for t, s in enumerate(self.partial_sums, 1) if t % 2}

    @property
    def lower_bounds(self) -> dict[int, float]:
        return {t: s for t, s in enumerate(self.partial_sums, 1) if t % 2 == 0}

    @classmethod
    def from_level_sums(cls, sums: Sequence[float]) -> "BoundSequence":
        signed = [s if d % 2 == 0 else -s for d, s in enumerate(sums)]
        partial = tuple(math.fsum(signed[:t]) for t in range(1, len(signed) + 1))
        return cls(tuple(sums), partial)


_CHUNK = 1 << 16


class _Accumulator:
    """Per-dimension compensated sums over a stream of multidegrees."""

    def __init__(self, model: ProbabilityModel, n: int):
        if n != model.n:
            raise DimensionError(f"numerator has {n} variables, model has {model.n} components")
        self.model = model
        self.width = max(model.caps) + 2
        self.table = model.table(self.width)
        self.cols = np.arange(n)
        self.buffers: dict[int, list[tuple[int, ...]]] = {}
        self.partials: dict[int, list[float]] = {}

    def add(self, d: int, mu: tuple[int, ...]) -> None:
        buf = self.buffers.setdefault(d, [])
        buf.append(mu)
        if len(buf) >= _CHUNK:
            self._flush(d)

    def _flush(self, d: int) -> None:
        buf = self.buffers.get(d)
        if not buf:
            return
        arr = np.minimum(np.asarray(buf, dtype=np.int64), self.width - 1)
        w = self.table[self.cols, arr].prod(axis=1)
        self.partials.setdefault(d, []).append(math.fsum(w.tolist()))
        buf.clear()

    def result(self) -> BoundSequence:
        for d in list(self.buffers):
            self._flush(d)
        top = max(self.partials) + 1 if self.partials else 0
        return BoundSequence.from_level_sums([math.fsum(self.partials.get(d, [])) for d in range(top)])


def evaluate(numerator: HilbertNumerator, model: ProbabilityModel) -> BoundSequence:
    acc = _Accumulator(model, numerator.n)
    for d, group in enumerate(numerator.groups):
        for mu in group:
            acc.add(d, mu)
        if not group:
            acc.partials.setdefault(d, [])
    return acc.result()


def evaluate_tree(tree: MayerVietorisTree, model: ProbabilityModel) -> BoundSequence:
    """Same as ``evaluate(hilbert_numerator(tree), model)`` without holding the terms."""
    acc = _Accumulator(model, tree.n)
    for _, d, mu in tree.events():
        acc.add(d, mu)
    return acc.result()


def evaluate_coefficients(coefficients: dict[tuple[int, ...], int], model: ProbabilityModel) -> float:
    """Reliability from a collapsed signed coefficient map."""
    return math.fsum(c * weight(mu, model) for mu, c in coefficients.items())


def reliability_numerator(
    spec: SystemSpec, j: int, order: Order | None = None, method: str = "mvt"
) -> HilbertNumerator:
    """Dimension-grouped numerator of the level-``j`` ideal.

    ``method="closed"`` uses the linear-quotient formulas for sum-threshold
    systems instead of walking a tree.
    """
    if method == "closed":
        if not isinstance(spec, SumThreshold):
            raise DomainError("closed-form numerators exist only for sum-threshold systems")
        if j != 1:
            raise DomainError(f"level {j} out of range 1..1")
        return HilbertNumerator.from_terms(spec.n, sum_threshold_numerator_terms(spec.m, spec.n, spec.k))
    if method != "mvt":
        raise ValueError(f"unknown method {method!r}")
    ideal = build_reliability_ideal(spec, j)
    if ideal.is_zero:
        return HilbertNumerator.zero(spec.n)
    return hilbert_numerator(build_mvt(ideal, order=order))


def _ladder(ideal: MonomialIdeal, model: ProbabilityModel, order: Order | None) -> BoundSequence:
    if ideal.is_zero:
        return BoundSequence((), ())
    return evaluate_tree(build_mvt(ideal, order=order), model)


def _check_model(spec: SystemSpec, model: ProbabilityModel) -> None:
    if model.n != spec.n:
        raise DimensionError(f"model has {model.n} components, system has {spec.n}")
    if tuple(model.caps) != tuple(spec.component_max_levels):
        raise DimensionError(f"model caps {model.caps} differ from system caps {tuple(spec.component_max_levels)}")


@dataclass(frozen=True)
class LevelReliability:
    level: int
    reliability: float  # P(phi >= level)
    probability: float  # P(phi == level)
    bounds: BoundSequence | None = None


def level_reliabilities(
    spec: SystemSpec, model: ProbabilityModel, order: Order | None = None
) -> list[LevelReliability]:
    """Rows for ``j = 0..M``: ``R_j = P(phi >= j)`` and ``r_j = R_j - R_{j+1}``."""
    _check_model(spec, model)
    ladders = {j: _ladder(build_reliability_ideal(spec, j), model, order) for j in range(1, spec.max_level + 1)}
    rel = [1.0] + [ladders[j].exact for j in range(1, spec.max_level + 1)] + [0.0]
    return [
        LevelReliability(j, rel[j], rel[j] - rel[j + 1], ladders.get(j))
        for j in range(spec.max_level + 1)
    ]


@dataclass(frozen=True)
class ClassicBounds:
    path_bound: float  # max over minimal paths
    cut_bound: float  # product over minimal cuts


def classic_lower_bounds(
    spec: SystemSpec, model: ProbabilityModel, j: int, budget: int = DEFAULT_BUDGET, method: str = "auto"
) -> ClassicBounds:
    """Path and cut lower bounds at level ``j``.

    The path bound is the best single minimal path; the cut bound multiplies,
    over minimal cuts ``z``, the probability that some component beats its
    cut state: ``1 - prod_i (1 - P(X_i >= z_i + 1))``.
    """
    _check_model(spec, model)
    paths = build_reliability_ideal(spec, j)
    l_path = max((weight(y, model) for y in paths.generators), default=0.0)
    l_cut = 1.0
    for z in minimal_cuts(spec, j, budget=budget, method=method):
        miss = 1.0
        for i, zi in enumerate(z):
            miss *= 1.0 - model.p(i, zi + 1)
        l_cut *= 1.0 - miss
    return ClassicBounds(l_path, l_cut)
