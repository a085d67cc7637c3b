import math

import numpy as np
import pytest

from ctxdim import fixtures, qcore, scenarios
from ctxdim.errors import CtxdimError


def test_five_cycle_structure():
    sc = scenarios.build_scenario("kcbs")
    assert sc.direction == "minimize"
    assert len(sc.contexts) == 5
    assert all(len(ctx.labels) == 2 for ctx in sc.contexts)
    assert all(ctx.coefficient == 1 for ctx in sc.contexts)
    assert len(sc.labels) == 5


def test_even_cycle_sign_convention():
    sc = scenarios.build_scenario("chi_n", 6)
    coefs = [ctx.coefficient for ctx in sc.contexts]
    assert coefs == [1, 1, 1, 1, 1, -1]
    sc = scenarios.build_scenario("chi_n", 5)
    assert [ctx.coefficient for ctx in sc.contexts] == [1] * 5


def test_square_structure():
    sc = scenarios.build_scenario("pm")
    assert sc.direction == "maximize"
    assert len(sc.contexts) == 6
    assert sorted(ctx.coefficient for ctx in sc.contexts) == [-1, 1, 1, 1, 1, 1]
    assert len(sc.labels) == 9
    # every label appears in exactly two contexts
    for lab in sc.labels:
        count = sum(lab in ctx.labels for ctx in sc.contexts)
        assert count == 2


def test_reordered_square_variants():
    base = {frozenset(ctx.labels) for ctx in scenarios.build_scenario("pm").contexts}
    for name in ("pm_tilde", "pm_bad_order"):
        other = scenarios.build_scenario(name)
        assert {frozenset(ctx.labels) for ctx in other.contexts} == base
    # the deliberately fragile ordering has one label that sits second in
    # one context and third in another
    bad = scenarios.build_scenario("pm_bad_order")
    slots = {}
    for ctx in bad.contexts:
        for pos, lab in enumerate(ctx.labels):
            slots.setdefault(lab, set()).add(pos)
    assert any(s == {1, 2} for s in slots.values())


def test_unknown_scenario_and_bad_parameters():
    with pytest.raises(CtxdimError):
        scenarios.build_scenario("nonsense")
    with pytest.raises(CtxdimError):
        scenarios.build_scenario("chi_n", 2)


def test_evaluate_five_cycle_fixture():
    sc = scenarios.build_scenario("kcbs")
    value = scenarios.evaluate(
        sc, fixtures.five_cycle_observables(), fixtures.five_cycle_state()
    )
    assert abs(value - (5.0 - 4.0 * math.sqrt(5.0))) < 1e-10


def test_evaluate_square_fixture_state_independent():
    sc = scenarios.build_scenario("pm")
    obs = fixtures.square_observables()
    rng = np.random.default_rng(7)
    for _ in range(10):
        value = scenarios.evaluate(sc, obs, qcore.random_state(4, rng))
        assert abs(value - 6.0) < 1e-10


def test_validate_contexts_flags_noncommuting():
    sc = scenarios.build_scenario("kcbs")
    obs = fixtures.five_cycle_observables()
    assert scenarios.validate_contexts(sc, obs).passed
    # rotate one observable so its contexts stop commuting
    theta = 0.3
    R = np.array(
        [
            [math.cos(theta), -math.sin(theta), 0.0],
            [math.sin(theta), math.cos(theta), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    broken = dict(obs)
    broken["B"] = qcore.classify_dichotomic(R @ obs["B"].operator @ R.T)
    assert not scenarios.validate_contexts(sc, broken).passed


def test_assignment_json_round_trip():
    obs = fixtures.square_observables()
    back = scenarios.assignment_from_json(scenarios.assignment_to_json(obs))
    for lab in obs:
        assert np.allclose(back[lab].operator, obs[lab].operator, atol=1e-12)


def test_scenario_json_shape():
    data = scenarios.build_scenario("chi_n", 6).to_json()
    assert data["direction"] == "minimize"
    assert len(data["contexts"]) == 6
