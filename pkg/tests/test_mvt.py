import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multistate_kn import (
    ConsecutiveKN,
    DomainError,
    MonomialIdeal,
    betti_bounds,
    build_mvt,
    build_reliability_ideal,
    hilbert_numerator,
    minimalize,
)
from multistate_kn.mvt import HilbertNumerator, MvEvent, compatible, numerator_of
from multistate_kn.oracle import inclusion_exclusion_numerator

ideals = st.lists(st.tuples(*[st.integers(0, 2)] * 3), min_size=1, max_size=7).map(lambda g: minimalize(g, 3))


def consecutive_tree(**kw):
    return build_mvt(build_reliability_ideal(ConsecutiveKN(5, 2), 1), **kw)


def test_zero_ideal_has_no_tree():
    with pytest.raises(DomainError):
        build_mvt(MonomialIdeal.zero(2))
    assert len(numerator_of(MonomialIdeal.zero(2))) == 0


def test_first_pivot_is_x1x2():
    tree = consecutive_tree(keep_nodes=True)
    root = tree.nodes[0]
    assert root.position == 1 and root.pivot == (1, 1, 0, 0, 0)
    assert root.relevant
    left = next(nd for nd in tree.nodes if nd.position == 2)
    assert set(left.generators) == {(1, 1, 1, 0, 0), (1, 1, 0, 1, 1)}
    assert left.dimension == 1


def test_nodes_require_flag():
    with pytest.raises(RuntimeError):
        consecutive_tree().nodes


def test_event_stream_shape():
    events = list(consecutive_tree().events())
    assert all(isinstance(e, MvEvent) for e in events)
    assert [e.multidegree for e in events if e.position == 1] == [
        (0, 0, 0, 1, 1), (0, 0, 1, 1, 0), (0, 1, 1, 0, 0), (1, 1, 0, 0, 0),
    ]
    assert all(e.position == 1 or e.position % 2 == 0 for e in events)
    assert len(events) == 9


def test_principal_and_coprime():
    summary = betti_bounds(build_mvt(MonomialIdeal.from_generators(2, [(2, 3)])))
    assert summary.totals() == [1] and summary.exact
    summary = betti_bounds(build_mvt(MonomialIdeal.from_generators(2, [(1, 0), (0, 1)])))
    assert summary.totals() == [2, 1] and summary.exact
    assert summary.betti(1, (1, 1)) == (1, 1)
    assert summary.betti(2, (1, 1)) == (0, 0)


def test_compatible_examples():
    assert compatible(4, 6)
    assert not compatible(2, 4)
    assert not compatible(4, 4)
    assert compatible(8, 6) is False
    assert compatible(8, 12)
    assert not compatible(16, 12)


def test_numerator_pretty():
    hn = hilbert_numerator(build_mvt(MonomialIdeal.from_generators(2, [(1, 0), (0, 1)])))
    assert hn.pretty(["x", "y"]) == "(y + x) - (x*y)"
    assert HilbertNumerator.zero(2).pretty() == "0"
    assert hn.max_dimension == 1 and len(hn) == 3


def test_from_terms_rejects_bad_length():
    with pytest.raises(DomainError):
        HilbertNumerator.from_terms(2, [((1, 0, 0), 0)])


@settings(max_examples=150, deadline=None)
@given(ideals)
def test_tree_numerator_matches_inclusion_exclusion(ideal):
    hn = numerator_of(ideal)
    assert hn.coefficients() == inclusion_exclusion_numerator(ideal)
    assert sum(hn.coefficients().values()) == 1


@settings(max_examples=100, deadline=None)
@given(ideals, st.randoms(use_true_random=False))
def test_numerator_is_order_independent(ideal, rnd):
    def shuffled(gens):
        gens = list(gens)
        rnd.shuffle(gens)
        return gens

    assert numerator_of(ideal, order=shuffled).coefficients() == numerator_of(ideal).coefficients()


@settings(max_examples=100, deadline=None)
@given(ideals)
def test_betti_bounds_are_ordered(ideal):
    tree = build_mvt(ideal)
    plain = betti_bounds(tree)
    refined = betti_bounds(tree, compatibility=True)
    assert plain.upper == refined.upper
    for d, cnt in plain.upper.items():
        for mu, c in cnt.items():
            lo, lo_ref = plain.lower.get(d, {}).get(mu, 0), refined.lower.get(d, {}).get(mu, 0)
            assert lo <= lo_ref <= c
    assert plain.totals()[0] == len(ideal)


def test_consecutive_exact_betti():
    summary = betti_bounds(consecutive_tree(), compatibility=True)
    assert summary.exact
    assert summary.totals() == [4, 4, 1]
