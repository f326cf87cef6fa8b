"""Mayer-Vietoris trees: Betti-number bounds and Hilbert-series numerators.

A node ``J = <f_1, ..., f_r>`` (generators in the tree's order) has the
right child ``J' = <f_1, ..., f_{r-1}>`` and the left child
``J' ∩ <f_r>``. The root sits at position 1, dimension 0; children of
``(p, d)`` are ``(2p, d+1)`` on the left and ``(2p+1, d)`` on the right.
Only the root and the left children ("relevant" nodes) contribute
generators to the iterated mapping-cone resolution the tree describes.

The tree is consumed as a stream of relevant-node generator events, which
keeps memory flat on ideals whose trees have millions of nodes.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import DomainError
from .monomial import Monomial, MonomialIdeal, _minimal_tuples, canonical_key

__all__ = [
    "MvNode",
    "MvEvent",
    "MayerVietorisTree",
    "BettiSummary",
    "HilbertNumerator",
    "build_mvt",
    "betti_bounds",
    "hilbert_numerator",
    "numerator_of",
    "compatible",
]

Order = Callable[[list[tuple[int, ...]]], list[tuple[int, ...]]]


class MvEvent(NamedTuple):
    position: int
    dimension: int
    multidegree: tuple[int, ...]


@dataclass(frozen=True)
class MvNode:
    position: int
    dimension: int
    generators: tuple[tuple[int, ...], ...]
    pivot: tuple[int, ...] | None

    @property
    def relevant(self) -> bool:
        return self.position == 1 or self.position % 2 == 0


class MayerVietorisTree:
    """Lazily walked Mayer-Vietoris tree of a nonzero monomial ideal.

    ``order`` re-sorts every left child before its pivot (the last
    generator) is taken; the default is the canonical ascending
    degree-reverse-lexicographic order. Pass ``keep_nodes=True`` to retain every node (right
    children included) for inspection; otherwise only events are produced.
    """

    def __init__(self, ideal: MonomialIdeal, order: Order | None = None, keep_nodes: bool = False):
        if ideal.is_zero:
            raise DomainError("the zero ideal has no Mayer-Vietoris tree")
        self.ideal = ideal
        self.n = ideal.n
        self._order = order
        root = [tuple(g) for g in ideal.generators]
        self._root = order(root) if order else root
        self.keep_nodes = keep_nodes
        self._nodes: list[MvNode] | None = None

    @property
    def nodes(self) -> list[MvNode]:
        if not self.keep_nodes:
            raise RuntimeError("tree was built without keep_nodes=True")
        if self._nodes is None:
            for _ in self.events():
                pass
        return self._nodes

    def events(self) -> Iterator[MvEvent]:
        """Relevant-node generators as ``(position, dimension, multidegree)``."""
        record = self.keep_nodes and self._nodes is None
        nodes: list[MvNode] = []
        for mu in self._root:
            yield MvEvent(1, 0, mu)
        yield from self._walk(self._root, 1, 0, nodes if record else None)
        if record:
            self._nodes = sorted(nodes, key=lambda nd: nd.position)

    def _walk(self, gens, pos, dim, nodes):
        order = self._order
        p = pos
        for t in range(len(gens) - 1, 0, -1):
            piv = gens[t]
            if nodes is not None:
                nodes.append(MvNode(p, dim, tuple(gens[: t + 1]), piv))
            left = _minimal_tuples([tuple(map(max, g, piv)) for g in gens[:t]])
            if order is not None:
                left = order(left)
            lp = 2 * p
            d = dim + 1
            for mu in left:
                yield MvEvent(lp, d, mu)
            yield from self._walk(left, lp, d, nodes)
            p = 2 * p + 1
        if nodes is not None:
            nodes.append(MvNode(p, dim, (gens[0],), None))


def build_mvt(ideal: MonomialIdeal, order: Order | None = None, keep_nodes: bool = False) -> MayerVietorisTree:
    return MayerVietorisTree(ideal, order=order, keep_nodes=keep_nodes)


def _path_bits(position: int) -> str:
    return bin(position)[3:]


def compatible(pos_a: int, pos_b: int) -> bool:
    """Whether two relevant nodes can host a reduction pair.

    With ``K`` their first common ancestor, one node must lie under the left
    child of ``K`` and the other under the right child, and both must sit the
    same number of left steps below that child. Ancestor pairs never qualify.
    """
    a, b = _path_bits(pos_a), _path_bits(pos_b)
    c = 0
    while c < len(a) and c < len(b) and a[c] == b[c]:
        c += 1
    if c == len(a) or c == len(b):
        return False
    return a[c + 1:].count("0") == b[c + 1:].count("0")


@dataclass
class BettiSummary:
    """Multigraded Betti bounds read from one Mayer-Vietoris tree.

    ``upper[d][mu]`` counts generators of multidegree ``mu`` in relevant
    nodes of dimension ``d``. ``lower`` keeps the entries certified exact:
    multidegrees seen once in the whole tree, and any ``(d, mu)`` with no
    occurrence of ``mu`` in dimension ``d-1`` or ``d+1``. With the
    compatibility refinement, occurrences that have no compatible partner
    also count towards ``lower``.
    """

    n: int
    upper: dict[int, Counter] = field(default_factory=dict)
    lower: dict[int, Counter] = field(default_factory=dict)
    exact: bool = False

    @staticmethod
    def _graded(data: dict[int, Counter]) -> dict[int, Counter]:
        out: dict[int, Counter] = {}
        for d, cnt in data.items():
            g = Counter()
            for mu, c in cnt.items():
                if c:
                    g[sum(mu)] += c
            if g:
                out[d] = g
        return out

    def graded_upper(self) -> dict[int, Counter]:
        return self._graded(self.upper)

    def graded_lower(self) -> dict[int, Counter]:
        return self._graded(self.lower)

    def totals(self, which: str = "upper") -> list[int]:
        """Per-dimension totals ``sum_mu beta_{d, mu}`` (upper or lower)."""
        data = self.upper if which == "upper" else self.lower
        if not self.upper:
            return []
        top = max(self.upper)
        return [sum(data.get(d, Counter()).values()) for d in range(top + 1)]

    def betti(self, d: int, mu: Sequence[int]) -> tuple[int, int]:
        mu = tuple(mu)
        return self.lower.get(d, Counter())[mu], self.upper.get(d, Counter())[mu]


def betti_bounds(tree: MayerVietorisTree, compatibility: bool = False) -> BettiSummary:
    upper: dict[int, Counter] = defaultdict(Counter)
    positions: dict[tuple[int, ...], dict[int, list[int]]] = defaultdict(lambda: defaultdict(list))
    for pos, d, mu in tree.events():
        upper[d][mu] += 1
        if compatibility:
            positions[mu][d].append(pos)

    dims_of: dict[tuple[int, ...], set[int]] = defaultdict(set)
    for d, cnt in upper.items():
        for mu in cnt:
            dims_of[mu].add(d)

    lower: dict[int, Counter] = defaultdict(Counter)
    for d, cnt in upper.items():
        for mu, c in cnt.items():
            dims = dims_of[mu]
            if d - 1 not in dims and d + 1 not in dims:
                lower[d][mu] = c
            elif compatibility:
                mine = positions[mu][d]
                others = positions[mu].get(d - 1, []) + positions[mu].get(d + 1, [])
                free = sum(1 for p in mine if not any(compatible(p, q) for q in others))
                if free:
                    lower[d][mu] = free

    exact = all(lower[d][mu] == c for d, cnt in upper.items() for mu, c in cnt.items())
    return BettiSummary(tree.n, dict(upper), dict(lower), exact)


@dataclass(frozen=True)
class HilbertNumerator:
    """Signed multidegree terms grouped by homological dimension.

    ``groups[d]`` lists the multidegrees at dimension ``d``; each contributes
    ``(-1)**d``. The grouping (not just the collapsed coefficients) is what
    the truncation bounds are read from.
    """

    n: int
    groups: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Sequence[int], int]]) -> "HilbertNumerator":
        by_dim: dict[int, list[tuple[int, ...]]] = defaultdict(list)
        for mu, d in terms:
            if len(mu) != n:
                raise DomainError(f"multidegree {tuple(mu)} does not have {n} entries")
            by_dim[d].append(tuple(mu))
        top = max(by_dim) + 1 if by_dim else 0
        return cls(n, tuple(tuple(by_dim.get(d, ())) for d in range(top)))

    @classmethod
    def zero(cls, n: int) -> "HilbertNumerator":
        return cls(n, ())

    @property
    def max_dimension(self) -> int:
        return len(self.groups) - 1

    def terms(self) -> Iterator[tuple[tuple[int, ...], int]]:
        for d, group in enumerate(self.groups):
            for mu in group:
                yield mu, d

    def __len__(self) -> int:
        return sum(len(g) for g in self.groups)

    def coefficients(self) -> dict[tuple[int, ...], int]:
        """Signed coefficient map after cancellation (zero entries dropped)."""
        acc: Counter = Counter()
        for d, group in enumerate(self.groups):
            sign = -1 if d % 2 else 1
            for mu in group:
                acc[mu] += sign
        return {mu: c for mu, c in sorted(acc.items(), key=lambda kv: canonical_key(kv[0])) if c}

    def pretty(self, names: Sequence[str] | None = None) -> str:
        chunks = []
        for d, group in enumerate(self.groups):
            if not group:
                continue
            body = " + ".join(Monomial(mu).pretty(names) for mu in sorted(group, key=canonical_key))
            chunks.append(("- " if d % 2 else "+ ") + f"({body})")
        text = " ".join(chunks)
        return text[2:] if text.startswith("+ ") else text or "0"


def hilbert_numerator(tree: MayerVietorisTree) -> HilbertNumerator:
    return HilbertNumerator.from_terms(tree.n, ((mu, d) for _, d, mu in tree.events()))


def numerator_of(ideal: MonomialIdeal, order: Order | None = None) -> HilbertNumerator:
    """Hilbert numerator of any ideal; the zero ideal gives the empty numerator."""
    if ideal.is_zero:
        return HilbertNumerator.zero(ideal.n)
    return hilbert_numerator(build_mvt(ideal, order=order))
