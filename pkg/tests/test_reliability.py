import math
import random

import pytest

from _support import EX44_MASS, EX44_SPEC, PARALLEL_SPEC, PARALLEL_SURVIVAL, random_mass, random_spec, s421, table_survival

from multistate_kn import (
    BoundSequence,
    DimensionError,
    DomainError,
    ProbabilityModel,
    SumThreshold,
    ValidationError,
    build_mvt,
    build_reliability_ideal,
    classic_lower_bounds,
    evaluate,
    evaluate_tree,
    hilbert_numerator,
    level_reliabilities,
    weight,
)
from multistate_kn.oracle import brute_force_reliability
from multistate_kn.reliability import evaluate_coefficients, reliability_numerator


def test_model_from_mass_and_back():
    model = ProbabilityModel.from_mass(EX44_MASS)
    assert model.survival[0] == pytest.approx((1.0, 0.9, 0.7, 0.4))
    assert model.caps == (3, 3, 3)
    for row, want in zip(model.mass(), EX44_MASS):
        assert row == pytest.approx(want)
    assert model.p(0, 7) == 0.0


@pytest.mark.parametrize("rows", [
    [(0.9, 0.5)],
    [(1.0, 0.5, 0.6)],
    [(1.0, 1.2)],
    [(1.0, float("nan"))],
    [()],
])
def test_model_rejects_bad_survival(rows):
    with pytest.raises(ValidationError):
        ProbabilityModel.from_survival(rows)


@pytest.mark.parametrize("rows", [[(0.5, 0.4)], [(-0.1, 1.1)], [()]])
def test_model_rejects_bad_mass(rows):
    with pytest.raises(ValidationError):
        ProbabilityModel.from_mass(rows)


def test_weight():
    model = ProbabilityModel.from_survival(PARALLEL_SURVIVAL)
    assert weight((1, 2), model) == pytest.approx(0.7 * 0.2)
    assert weight((0, 0), model) == 1.0
    with pytest.raises(DimensionError):
        weight((1,), model)


def test_bound_sequence_ladder():
    seq = BoundSequence.from_level_sums([1.5, 0.7, 0.1])
    assert seq.partial_sums == pytest.approx((1.5, 0.8, 0.9))
    assert seq.exact == pytest.approx(0.9)
    assert seq.labels == ("u1", "l2", "u3")
    assert seq.upper_bounds == pytest.approx({1: 1.5, 3: 0.9})
    assert seq.lower_bounds == pytest.approx({2: 0.8})
    assert seq.bound(2) == pytest.approx(0.8)


def test_example_levels():
    rows = level_reliabilities(EX44_SPEC, ProbabilityModel.from_mass(EX44_MASS))
    assert [r.level for r in rows] == [0, 1, 2, 3]
    assert [r.reliability for r in rows] == pytest.approx([1.0, 0.89, 0.826, 0.396], abs=1e-12)
    assert [r.probability for r in rows] == pytest.approx([0.11, 0.064, 0.43, 0.396], abs=1e-12)
    assert rows[0].bounds is None and rows[3].bounds is not None


def test_parallel_levels():
    rows = level_reliabilities(PARALLEL_SPEC, ProbabilityModel.from_survival(PARALLEL_SURVIVAL))
    # 1 - 0.3*0.3, 1 - 0.7*0.8, P(X_2 >= 3)
    assert [r.reliability for r in rows[1:]] == pytest.approx([0.91, 0.44, 0.1], abs=1e-12)


def test_model_must_match_system():
    with pytest.raises(DimensionError):
        level_reliabilities(PARALLEL_SPEC, ProbabilityModel.from_mass(EX44_MASS))
    with pytest.raises(DimensionError):
        level_reliabilities(PARALLEL_SPEC, ProbabilityModel.from_survival([(1.0, 0.5), (1.0, 0.5)]))


def test_evaluate_routes_agree():
    spec, model = s421(8), table_survival(8)
    ideal = build_reliability_ideal(spec, 3)
    tree = build_mvt(ideal)
    hn = hilbert_numerator(tree)
    a, b = evaluate(hn, model), evaluate_tree(tree, model)
    assert a.partial_sums == pytest.approx(b.partial_sums, abs=1e-14)
    assert evaluate_coefficients(hn.coefficients(), model) == pytest.approx(a.exact, abs=1e-12)


def test_random_ladders_bracket_the_oracle():
    rng = random.Random(11)
    for _ in range(200):
        spec = random_spec(rng)
        mass = random_mass(rng, spec.component_max_levels)
        model = ProbabilityModel.from_mass(mass)
        rows = level_reliabilities(spec, model)
        for row in rows[1:]:
            exact = brute_force_reliability(spec, model, row.level)
            assert row.reliability == pytest.approx(exact, abs=1e-12)
            if row.bounds is None:
                continue
            for t, v in enumerate(row.bounds.partial_sums, 1):
                assert (v >= exact - 1e-12) if t % 2 else (v <= exact + 1e-12)
        assert math.fsum(r.probability for r in rows) == pytest.approx(1.0, abs=1e-12)
        assert all(r.probability >= -1e-12 for r in rows)


def test_closed_numerator_matches_tree():
    spec = SumThreshold(4, 3, 5)
    model = ProbabilityModel.from_survival([(1.0, 0.8, 0.5, 0.2)] * 4)
    closed = evaluate(reliability_numerator(spec, 1, method="closed"), model)
    tree = evaluate(reliability_numerator(spec, 1), model)
    assert closed.exact == pytest.approx(tree.exact, abs=1e-13)
    assert closed.exact == pytest.approx(brute_force_reliability(spec, model, 1), abs=1e-13)
    with pytest.raises(DomainError):
        reliability_numerator(s421(4), 1, method="closed")
    with pytest.raises(ValueError):
        reliability_numerator(spec, 1, method="nope")


def test_zero_ideal_numerator_is_empty():
    from multistate_kn import SimpleKN

    assert len(reliability_numerator(SimpleKN(2, (1, 3), system_max_level=3), 2)) == 0


def test_classic_bounds_are_lower_bounds():
    spec, model = s421(8), table_survival(8)
    for j in (1, 2, 3):
        cb = classic_lower_bounds(spec, model, j)
        exact = evaluate_tree(build_mvt(build_reliability_ideal(spec, j)), model).exact
        assert cb.path_bound <= exact + 1e-12
        assert cb.cut_bound <= exact + 1e-12


def test_classic_bounds_random():
    rng = random.Random(13)
    for _ in range(100):
        spec = random_spec(rng, max_n=4)
        model = ProbabilityModel.from_mass(random_mass(rng, spec.component_max_levels))
        for j in range(1, spec.max_level + 1):
            exact = brute_force_reliability(spec, model, j)
            cb = classic_lower_bounds(spec, model, j)
            assert cb.path_bound <= exact + 1e-12
            assert cb.cut_bound <= exact + 1e-12


@pytest.mark.slow
def test_s14_level_ladders():
    spec, model = s421(14), table_survival(14)
    want = {
        2: {6: 0.670885, 8: 0.765189, 10: 0.767655, 12: 0.767675, 7: 0.785541, 9: 0.767936, 11: 0.767677, 13: 0.767675},
        3: {6: 0.627826, 8: 0.627844, 1: 0.95, 3: 0.6455, 5: 0.628081, 7: 0.627845, 9: 0.627844},
    }
    for j, entries in want.items():
        seq = evaluate_tree(build_mvt(build_reliability_ideal(spec, j)), model)
        for t, v in entries.items():
            assert seq.bound(t) == pytest.approx(v, abs=1e-5)
