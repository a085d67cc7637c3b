"""End-to-end acceptance checks, one per release criterion.

Each test prints a single pass/fail line on the real stdout so the whole
gate can be read at a glance even when pytest captures output.
"""

import json
import math
import time

import numpy as np

from ctxdim import (
    bloch,
    classical,
    cli,
    fixtures,
    noise,
    optimizer,
    qcore,
    scenarios,
)


def _report(capsys, label, passed):
    with capsys.disabled():
        print(f"{label}: {'PASS' if passed else 'FAIL'}", flush=True)
    assert passed, label


def _unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _pure2(rng):
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    return qcore.pure_state(psi / np.linalg.norm(psi))


def test_criterion_01_deterministic_assignment_bounds(capsys):
    start = time.perf_counter()
    ok = classical.nchv_bound(scenarios.build_scenario("kcbs")).bound == -3.0
    ok &= classical.nchv_bound(scenarios.build_scenario("pm")).bound == 4.0
    for n in range(4, 13):
        sc = scenarios.build_scenario("chi_n", n)
        ok &= classical.nchv_bound(sc).bound == -float(n - 2)
    ok &= (time.perf_counter() - start) < 1.0
    _report(capsys, "criterion 01 deterministic-assignment bounds", ok)


def test_criterion_02_five_cycle_replacement_search(capsys):
    start = time.perf_counter()
    record, stats = classical.enumerate_replacements(
        scenarios.build_scenario("kcbs"), 2
    )
    ok = stats.raw_cases == 7776 and record.bound == -3.0
    ok &= (time.perf_counter() - start) < 1.0
    _report(capsys, "criterion 02 five-cycle replacement search", ok)


def test_criterion_03_square_replacement_search(capsys):
    start = time.perf_counter()
    record, stats = classical.enumerate_replacements(
        scenarios.build_scenario("pm"), 3
    )
    ok = abs(record.bound - 4.0 * (math.sqrt(5.0) - 1.0)) < 1e-9
    ok &= stats.raw_cases == 12 ** 6
    ok &= (time.perf_counter() - start) < 60.0
    _report(capsys, "criterion 03 square replacement search", ok)


def test_criterion_04_chain_geometry(capsys):
    start = time.perf_counter()
    ok = True
    for n in range(3, 13):
        value, _ = bloch.minimize_chain(n, restarts=32, seed=0)
        ok &= abs(value - (-n * math.cos(math.pi / n))) < 1e-6
    value5, _ = bloch.minimize_chain(5, restarts=32, seed=0)
    ok &= abs(value5 - (-5.0 * (1.0 + math.sqrt(5.0)) / 4.0)) < 1e-6
    ok &= (time.perf_counter() - start) < 10.0
    _report(capsys, "criterion 04 chain geometry", ok)


def test_criterion_05_square_bloch_geometry(capsys):
    value, _ = bloch.pm_bloch_max("pm", restarts=64, seed=0)
    ok = abs(value - 3.0 * math.sqrt(3.0)) < 1e-6
    value, _ = bloch.pm_bloch_max("pm_tilde", restarts=64, seed=0)
    ok &= abs(value - (1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0)))) < 1e-6
    _report(capsys, "criterion 05 square Bloch geometry", ok)


def test_criterion_06_quantum_maxima(capsys):
    start = time.perf_counter()

    def best(name, dim, n=None):
        cfg = optimizer.SearchConfig(
            dim=dim, restarts=64, seed=0, require_commuting_contexts=True
        )
        return optimizer.maximize_violation(
            scenarios.build_scenario(name, n), cfg
        ).value

    ok = abs(best("kcbs", 3) - (5.0 - 4.0 * math.sqrt(5.0))) < 1e-4
    ok &= abs(best("pm", 4) - 6.0) < 1e-6
    ok &= abs(best("chi_n", 4, n=6) - (-6.0 * math.cos(math.pi / 6.0))) < 1e-4
    rows = optimizer.hierarchy_table([6], restarts=64, seed=0, attain=True)
    targets = {2: -4.0, 3: -4.944271909999159, 4: -5.196152422706632}
    for row in rows:
        ok &= abs(row.closed_form - targets[row.dim]) < 1e-9
        ok &= row.attained is not None
        ok &= abs(row.attained - row.closed_form) < 1e-3
    ok &= (time.perf_counter() - start) < 300.0
    _report(capsys, "criterion 06 quantum maxima", ok)


def test_criterion_07_noise_corner_bounds(capsys):
    ok = abs(
        noise.corner_bound("pm", "prop12", restarts=16, seed=0).value
        - 3.0 * math.sqrt(3.0)
    ) < 1e-6
    ok &= abs(
        noise.corner_bound("pm", "prop13", restarts=16, seed=0).value
        - (1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0)))
    ) < 1e-6
    ok &= abs(
        noise.corner_bound("pm_bad_order", "prop13", restarts=16, seed=0).value
        - 6.0
    ) < 1e-9
    _report(capsys, "criterion 07 noise corner bounds", ok)


def test_criterion_08_certification_regression(capsys):
    from ctxdim import certify

    strict = certify.AssumptionSet(
        contexts_commuting=True, measurements_projective=True
    )
    ok = certify.certify("pm", strict, 5.36, 0.05).dimension >= 4
    weak = certify.AssumptionSet(noise_model="prop12")
    ok &= certify.certify("pm", weak, 5.36, 0.05).dimension >= 3
    _report(capsys, "criterion 08 certification regression", ok)


def test_criterion_09_property_suites(capsys):
    rng = np.random.default_rng(0)
    ok = True
    for _ in range(1000):
        va, vb, vc = _unit(rng), _unit(rng), _unit(rng)
        A, B, C = (bloch.observable_from_bloch(v) for v in (va, vb, vc))
        state = _pure2(rng)
        ok &= abs(qcore.sequential_mean(state, [A, B]) - va @ vb) < 1e-10
        triple = qcore.sequential_mean(state, [A, B, C])
        expect = np.trace(state.rho @ A.operator).real * (vb @ vc)
        ok &= abs(triple - expect) < 1e-10

    sc = scenarios.build_scenario("pm")
    obs = fixtures.square_observables()
    for _ in range(50):
        ok &= abs(scenarios.evaluate(sc, obs, qcore.random_state(4, rng)) - 6.0) < 1e-10

    for _ in range(100):
        obs3 = {l: bloch.observable_from_bloch(_unit(rng)) for l in "ABC"}
        state = _pure2(rng)
        base = {}
        for l in "ABC":
            p = rng.dirichlet([1.0, 1.0, 1.0])
            base[l] = noise.LabelNoise(
                p[0], p[1], int(rng.choice([1, -1])), p[2],
                tuple(_unit(rng) * rng.uniform(0.0, 1.0)),
            )
        mixed = noise.noisy_sequential_mean(
            state, ["A", "B", "C"], obs3, noise.NoiseModel(base)
        )
        target = base["B"]
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
                state, ["A", "B", "C"], obs3, noise.NoiseModel(swapped)
            )
        ok &= abs(mixed - parts) < 1e-10
    _report(capsys, "criterion 09 property suites", ok)


def test_criterion_10_cli_determinism(capsys):
    argv = [
        "optimize", "--scenario", "kcbs", "--dim", "3", "--commuting",
        "--restarts", "8", "--seed", "0",
    ]
    outputs = []
    for _ in range(2):
        code = cli.main(list(argv))
        captured = capsys.readouterr()
        outputs.append((code, captured.out.encode()))
    ok = outputs[0] == outputs[1] and outputs[0][0] == 0
    ok &= json.loads(outputs[0][1])["command"] == "optimize"
    _report(capsys, "criterion 10 CLI determinism", ok)
