import itertools
import math

import numpy as np
import pytest

from ctxdim import noise, qcore, scenarios
from ctxdim.bloch import observable_from_bloch
from ctxdim.errors import CtxdimError, NotCanonical, UnsupportedLength


def rand_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def rand_pure(rng):
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    return qcore.pure_state(psi / np.linalg.norm(psi))


def rand_label_noise(rng):
    p = rng.dirichlet([1.0, 1.0, 1.0])
    x = rand_unit(rng) * rng.uniform(0.0, 1.0)
    return noise.LabelNoise(p[0], p[1], int(rng.choice([1, -1])), p[2],
                            tuple(x))


# --- effect-pair decomposition ---------------------------------------------


def test_decompose_projective_effect():
    assert noise.decompose_effect_pair(
        noise.EffectPair(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    ) == (0.0, 0.0, 1.0)


def test_decompose_fully_random_effect():
    p_r, p_f, p_p = noise.decompose_effect_pair(
        noise.EffectPair(0.5 * np.eye(2), 0.5 * np.eye(2))
    )
    assert np.allclose((p_r, p_f, p_p), (1.0, 0.0, 0.0))


def test_decompose_mixed_effect():
    p_r, p_f, p_p = noise.decompose_effect_pair(
        noise.EffectPair(np.diag([0.7, 0.3]), np.diag([0.3, 0.7]))
    )
    assert np.allclose((p_r, p_f, p_p), (0.6, 0.0, 0.4))


def test_decomposition_reconstruction_exact():
    rng = np.random.default_rng(0)
    for _ in range(100):
        b = rng.uniform(0.0, 0.5)
        a = rng.uniform(b, 1.0 - b)
        U = np.linalg.qr(
            rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        )[0]
        e_plus = U @ np.diag([a, b]) @ U.conj().T
        eff = noise.EffectPair(e_plus, np.eye(2) - e_plus)
        p_r, p_f, p_p = noise.decompose_effect_pair(eff)
        assert p_r >= 0 and p_f >= 0 and p_p >= 0
        assert abs(p_r + p_f + p_p - 1.0) < 1e-10
        alpha, beta, _, _ = eff.spectral
        w, v = np.linalg.eigh(eff.e_plus)
        top = np.outer(v[:, -1], v[:, -1].conj())
        rebuilt = beta * np.eye(2) + (alpha - beta) * top
        assert np.max(np.abs(rebuilt - eff.e_plus)) < 1e-12
        # the three-branch procedure reproduces the outcome statistics
        state = rand_pure(rng)
        p_plus = (
            0.5 * p_r
            + p_p * np.trace(state.rho @ top).real
        )
        assert abs(p_plus - np.trace(state.rho @ eff.e_plus).real) < 1e-12


def test_decompose_rejects_non_canonical():
    with pytest.raises(NotCanonical):
        noise.decompose_effect_pair(
            noise.EffectPair(np.diag([0.9, 0.4]), np.diag([0.1, 0.6]))
        )


def test_effect_pair_validation():
    with pytest.raises(CtxdimError):
        noise.EffectPair(np.diag([1.2, 0.0]), np.diag([-0.2, 1.0]))
    with pytest.raises(CtxdimError):
        noise.EffectPair(np.diag([0.5, 0.5]), np.diag([0.6, 0.5]))


# --- noisy sequential means -------------------------------------------------


def test_all_projective_matches_plain_sequential_mean():
    rng = np.random.default_rng(1)
    for _ in range(20):
        obs = {l: observable_from_bloch(rand_unit(rng)) for l in "ABC"}
        state = rand_pure(rng)
        mean = noise.noisy_sequential_mean(
            state, ["A", "B", "C"], obs, noise.NoiseModel()
        )
        plain = qcore.sequential_mean(state, [obs[l] for l in "ABC"])
        assert abs(mean - plain) < 1e-12


def test_length_cap():
    rng = np.random.default_rng(2)
    obs = {l: observable_from_bloch(rand_unit(rng)) for l in "ABCD"}
    with pytest.raises(UnsupportedLength):
        noise.noisy_sequential_mean(
            rand_pure(rng), ["A", "B", "C", "D"], obs, noise.NoiseModel()
        )


def test_multi_affinity_on_random_models():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        obs = {l: observable_from_bloch(rand_unit(rng)) for l in "ABC"}
        state = rand_pure(rng)
        base = {l: rand_label_noise(rng) for l in "ABC"}
        target = base["B"]
        mixed = noise.noisy_sequential_mean(
            state, ["A", "B", "C"], obs, noise.NoiseModel(base)
        )
        parts = 0.0
        for weight, pure in (
            (target.p_proj, noise.LabelNoise()),
            (target.p_fixed,
             noise.LabelNoise(0.0, 1.0, target.fixed_sign, 0.0)),
            (target.p_random,
             noise.LabelNoise(0.0, 0.0, 1, 1.0, target.x_bloch)),
        ):
            swapped = dict(base)
            swapped["B"] = pure
            parts += weight * noise.noisy_sequential_mean(
                state, ["A", "B", "C"], obs, noise.NoiseModel(swapped)
            )
        worst = max(worst, abs(mixed - parts))
    assert worst < 1e-10


def test_corner_rules_match_branch_simulation():
    rng = np.random.default_rng(4)
    for _ in range(5):
        vs = {l: rand_unit(rng) for l in "ABC"}
        xs = {l: rand_unit(rng) * rng.uniform(0.0, 1.0) for l in "ABC"}
        obs = {l: observable_from_bloch(vs[l]) for l in "ABC"}
        state = rand_pure(rng)
        r = np.array(
            [np.trace(state.rho @ P).real for P in noise.PAULI]
        )

        def term_value(term):
            def vec(sym):
                kind, lab = sym
                return vs[lab] if kind == "v" else xs[lab]

            if term is None:
                return 0.0
            if term[0] == "const":
                return term[1]
            if term[0] == "single":
                return term[1] * (r @ vec(term[2]))
            if term[0] == "pair":
                return term[1] * (vec(term[2]) @ vec(term[3]))
            return (
                term[1] * (r @ vec(term[2]))
                * (vec(term[3]) @ vec(term[4]))
            )

        for triple in itertools.product(noise.BEHAVIORS, repeat=3):
            behavior = dict(zip("ABC", triple))
            model = noise.CornerCase(behavior).to_model(
                {l: tuple(xs[l]) for l in "ABC"}
            )
            sim = noise.noisy_sequential_mean(
                state, ["A", "B", "C"], obs, model
            )
            expect = term_value(
                noise._reduce_context(("A", "B", "C"), 1.0, behavior)
            )
            assert abs(sim - expect) < 1e-10, triple


def test_random_last_slot_vanishes():
    rng = np.random.default_rng(5)
    obs = {l: observable_from_bloch(rand_unit(rng)) for l in "ABC"}
    model = noise.CornerCase(
        {"A": "projective", "B": "projective", "C": "random"}
    ).to_model({"C": (0.3, 0.1, -0.2)})
    mean = noise.noisy_sequential_mean(
        rand_pure(rng), ["A", "B", "C"], obs, model
    )
    assert abs(mean) < 1e-12


def test_random_middle_gives_x_correlation():
    rng = np.random.default_rng(6)
    for _ in range(10):
        vs = {l: rand_unit(rng) for l in "ABC"}
        x = rand_unit(rng) * rng.uniform(0.0, 1.0)
        obs = {l: observable_from_bloch(vs[l]) for l in "ABC"}
        state = rand_pure(rng)
        model = noise.CornerCase(
            {"A": "projective", "B": "random", "C": "projective"}
        ).to_model({"B": tuple(x)})
        mean = noise.noisy_sequential_mean(
            state, ["A", "B", "C"], obs, model
        )
        expect = np.trace(state.rho @ obs["A"].operator).real * (vs["C"] @ x)
        assert abs(mean - expect) < 1e-10


def test_noise_model_json_round_trip():
    rng = np.random.default_rng(7)
    model = noise.NoiseModel({l: rand_label_noise(rng) for l in "ABC"})
    back = noise.NoiseModel.from_json(model.to_json())
    for lab in "ABC":
        assert back.for_label(lab) == model.for_label(lab)


# --- corner bounds ----------------------------------------------------------


def test_projective_random_class_square_bound():
    result = noise.corner_bound("pm", "prop12", restarts=12, seed=0)
    assert abs(result.value - 3.0 * math.sqrt(3.0)) < 1e-6
    assert all(
        b in ("projective", "random")
        for b in result.corner.behaviors.values()
    )


def test_sampled_noisy_square_values_stay_below_class_bound():
    rng = np.random.default_rng(8)
    sc = scenarios.build_scenario("pm")
    cap = 3.0 * math.sqrt(3.0) + 1e-6
    for _ in range(25):
        obs = {lab: observable_from_bloch(rand_unit(rng)) for lab in sc.labels}
        state = rand_pure(rng)
        model = noise.NoiseModel(
            {
                lab: noise.LabelNoise(
                    p, 0.0, 1, 1.0 - p,
                    tuple(rand_unit(rng) * rng.uniform(0.0, 1.0)),
                )
                for lab, p in zip(
                    sc.labels, rng.uniform(0.0, 1.0, size=len(sc.labels))
                )
            }
        )
        value = sum(
            ctx.coefficient
            * noise.noisy_sequential_mean(state, list(ctx.labels), obs, model)
            for ctx in sc.contexts
        )
        assert value <= cap


def test_fixed_assignment_class_square_bound():
    result = noise.corner_bound("pm", "prop13", restarts=12, seed=0)
    assert abs(result.value - (1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0)))) < 1e-6


def test_fragile_ordering_reaches_algebraic_maximum():
    result = noise.corner_bound("pm_bad_order", "prop13", restarts=12, seed=0)
    assert abs(result.value - 6.0) < 1e-9
    # the decisive corner fixes the label that sits last in one context
    # but second in another
    assert result.corner.behaviors["gamma"].startswith("fixed")


def test_exhaustive_corner_exceeds_catalogued_square_bound():
    # Investigated case: fixing the last-slot labels C and a together with
    # the leading-slot labels c and alpha decouples every Bloch-vector
    # constraint, and the standard-ordering square then reaches 6 even
    # though the catalogued fixed-assignment analysis stops at ~5.404.
    # The default corner set therefore follows the catalogued taxonomy;
    # this test documents what the unreduced model admits.
    sc = scenarios.build_scenario("pm")
    z = np.array([0.0, 0.0, 1.0])
    vec = {"A": z, "B": z, "C": z, "b": z, "c": z, "a": z,
           "gamma": -z, "alpha": -z, "beta": z}
    obs = {l: observable_from_bloch(v) for l, v in vec.items()}
    corner = {l: "projective" for l in vec}
    for l in ("C", "c", "a", "alpha"):
        corner[l] = "fixed+"
    model = noise.CornerCase(corner).to_model()
    state = qcore.pure_state(np.array([1.0, 0.0]))
    value = sum(
        ctx.coefficient
        * noise.noisy_sequential_mean(state, list(ctx.labels), obs, model)
        for ctx in sc.contexts
    )
    assert abs(value - 6.0) < 1e-12
    assert value > 1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0))


def test_corner_bound_determinism():
    a = noise.corner_bound("pm", "prop12", restarts=8, seed=1)
    b = noise.corner_bound("pm", "prop12", restarts=8, seed=1)
    assert a.value == b.value and a.corner == b.corner


def test_corner_bound_rejects_unknown_combination():
    with pytest.raises(CtxdimError):
        noise.corner_bound("kcbs", "prop12")
    with pytest.raises(CtxdimError):
        noise.corner_bound("pm", "prop99")
