"""Bloch-vector geometry for qubit sequential measurements.

On a qubit, the sequential mean of two projective measurements equals the
inner product of their Bloch vectors, independently of the state, and a
three-measurement sequence factorizes into an ordinary expectation value
times such an inner product.  These reductions turn the inequalities into
geometric optimization problems over vectors in the unit ball, solved here
by multi-restart quasi-Newton descent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import BadParameter, LengthMismatch, UnsupportedKind, WrongDimension
from .qcore import Kind, Observable
from .scenarios import Scenario, build_scenario


@dataclass(frozen=True)
class SignPattern:
    """Per-edge +/-1 coefficients of a cyclic correlation chain."""

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (+1, -1) for s in self.signs):
            raise BadParameter("signs must be +/-1")

    @classmethod
    def cycle(cls, n: int) -> "SignPattern":
        """Default pattern: all positive for odd n, one flip for even n."""
        if n % 2 == 1:
            return cls((+1,) * n)
        return cls((-1,) + (+1,) * (n - 1))

    def __len__(self) -> int:
        return len(self.signs)


def bloch_of(obs: Observable) -> np.ndarray | None:
    """Bloch vector of a projective qubit observable; None for +/-identity."""
    if obs.dim != 2:
        raise WrongDimension("Bloch vectors exist only for qubits")
    if obs.kind is Kind.SIGNED_IDENTITY:
        return None
    if obs.kind is not Kind.PROJECTIVE:
        raise UnsupportedKind("general observables have no single Bloch vector")
    # P+ = (1 + v.sigma)/2, so v reads off the operator A = v.sigma directly
    A = obs.operator
    return np.array(
        [A[0, 1].real, -A[0, 1].imag, A[0, 0].real], dtype=float
    )


def observable_from_bloch(v: np.ndarray) -> Observable:
    """Projective qubit observable with +1 eigenprojector (1 + v.sigma)/2."""
    from .qcore import projective_from_plus

    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-9:
        raise BadParameter("a projective observable needs a unit Bloch vector")
    plus = 0.5 * np.array(
        [[1 + v[2], v[0] - 1j * v[1]], [v[0] + 1j * v[1], 1 - v[2]]], dtype=complex
    )
    return projective_from_plus(plus)


def chain_value(vectors: list[np.ndarray], signs: SignPattern) -> float:
    """Cyclic sum of sign-weighted inner products of consecutive vectors."""
    n = len(vectors)
    if len(signs) != n:
        raise LengthMismatch("need one sign per edge")
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if any(v.shape != (3,) for v in vecs):
        raise LengthMismatch("vectors must be 3-dimensional")
    return float(
        sum(signs.signs[i] * vecs[i] @ vecs[(i + 1) % n] for i in range(n))
    )


def _clamp_to_ball(raw: np.ndarray, max_norms: np.ndarray) -> np.ndarray:
    """Map unconstrained 3-vectors into balls of the given radii."""
    out = raw.copy()
    for i, r in enumerate(max_norms):
        v = out[3 * i : 3 * i + 3]
        norm = np.linalg.norm(v)
        if norm > r:
            out[3 * i : 3 * i + 3] = v * (r / norm) if norm > 0 else 0.0
    return out


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, restart)))


def minimize_chain(
    n: int,
    signs: SignPattern | None = None,
    norms: list[float] | None = None,
    restarts: int = 64,
    seed: int = 0,
) -> tuple[float, list[np.ndarray]]:
    """Numerical minimum of a cyclic chain over vectors in per-vertex balls."""
    if n < 3:
        raise BadParameter("need at least three vectors")
    if signs is None:
        signs = SignPattern.cycle(n)
    if len(signs) != n:
        raise LengthMismatch("need one sign per edge")
    max_norms = np.ones(n) if norms is None else np.asarray(norms, dtype=float)
    if max_norms.shape != (n,) or np.any(max_norms < 0) or np.any(max_norms > 1 + 1e-12):
        raise BadParameter("per-vertex norms must lie in [0, 1]")

    sign_arr = np.array(signs.signs, dtype=float)

    def objective(raw: np.ndarray) -> tuple[float, np.ndarray]:
        x = _clamp_to_ball(raw, max_norms)
        vecs = x.reshape(n, 3)
        rolled = np.roll(vecs, -1, axis=0)
        value = float(np.sum(sign_arr * np.sum(vecs * rolled, axis=1)))
        # gradient w.r.t. the clamped vectors; the radial clamp is a
        # projection, so the chain rule only rescales boundary components
        grad_clamped = (
            sign_arr[:, None] * rolled
            + np.roll(sign_arr, 1)[:, None] * np.roll(vecs, 1, axis=0)
        )
        grad = np.zeros_like(raw)
        for i in range(n):
            v_raw = raw[3 * i : 3 * i + 3]
            norm = np.linalg.norm(v_raw)
            g = grad_clamped[i]
            if norm > max_norms[i] and norm > 0:
                scale = max_norms[i] / norm
                u = v_raw / norm
                g = scale * (g - (g @ u) * u)
            grad[3 * i : 3 * i + 3] = g
        return value, grad

    best_value = np.inf
    best_raw = None
    for restart in range(restarts):
        rng = _restart_rng(seed, restart)
        raw0 = rng.normal(size=3 * n)
        res = minimize(
            objective, raw0, jac=True, method="L-BFGS-B",
            options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12},
        )
        if res.fun < best_value - 1e-15:
            best_value = float(res.fun)
            best_raw = res.x
    vectors = list(_clamp_to_ball(best_raw, max_norms).reshape(n, 3))
    return best_value, vectors


def planarity_defect(vectors: list[np.ndarray]) -> float:
    """Largest out-of-plane component after rotating to the best-fit plane."""
    V = np.asarray(vectors, dtype=float)
    _, _, vt = np.linalg.svd(V, full_matrices=True)
    normal = vt[-1]
    return float(np.max(np.abs(V @ normal)))


# --- two-layer expressions for the PM orderings ----------------------------


def _two_layer_terms(scenario: Scenario) -> list[tuple[str, str, str, int]]:
    """Triple contexts as (first, second, third, coefficient) tuples.

    On a qubit the sequential mean of a length-3 context factorizes into the
    state expectation of the first observable times the state-independent
    correlation of the last two.
    """
    terms = []
    for ctx in scenario.contexts:
        if len(ctx.labels) != 3:
            raise BadParameter("two-layer reduction needs length-3 contexts")
        terms.append((*ctx.labels, ctx.coefficient))
    return terms


def pm_bloch_max(
    ordering: str = "pm",
    norms: dict[str, float] | None = None,
    restarts: int = 128,
    seed: int = 0,
) -> tuple[float, dict[str, np.ndarray]]:
    """Maximum of a PM-type ordering over qubit Bloch configurations.

    Optimizes sum_contexts coef * (r . v_first)(v_second . v_third) over a
    state vector r and one vector per label, all confined to balls of the
    given radii (default 1).
    """
    scenario = build_scenario(ordering)
    terms = _two_layer_terms(scenario)
    labels = list(scenario.labels)
    if norms is None:
        norms = {}
    max_norms = np.array([1.0] + [norms.get(lab, 1.0) for lab in labels])
    index = {lab: i + 1 for i, lab in enumerate(labels)}  # slot 0 is the state
    n_vec = len(labels) + 1
    triple_idx = [
        (index[f], index[s], index[t], float(c)) for f, s, t, c in terms
    ]

    def objective(raw: np.ndarray) -> tuple[float, np.ndarray]:
        x = _clamp_to_ball(raw, max_norms)
        vecs = x.reshape(n_vec, 3)
        value = 0.0
        grad_clamped = np.zeros_like(vecs)
        r = vecs[0]
        for fi, si, ti, c in triple_idx:
            head = r @ vecs[fi]
            tail = vecs[si] @ vecs[ti]
            value += c * head * tail
            grad_clamped[0] += c * tail * vecs[fi]
            grad_clamped[fi] += c * tail * r
            grad_clamped[si] += c * head * vecs[ti]
            grad_clamped[ti] += c * head * vecs[si]
        grad = np.zeros_like(raw)
        for i in range(n_vec):
            v_raw = raw[3 * i : 3 * i + 3]
            norm = np.linalg.norm(v_raw)
            g = grad_clamped[i]
            if norm > max_norms[i] and norm > 0:
                scale = max_norms[i] / norm
                u = v_raw / norm
                g = scale * (g - (g @ u) * u)
            grad[3 * i : 3 * i + 3] = g
        return -value, -grad  # maximize

    best_value = -np.inf
    best_raw = None
    for restart in range(restarts):
        rng = _restart_rng(seed, restart)
        raw0 = rng.normal(size=3 * n_vec)
        res = minimize(
            objective, raw0, jac=True, method="L-BFGS-B",
            options={"maxiter": 1000, "ftol": 1e-16, "gtol": 1e-13},
        )
        if -res.fun > best_value + 1e-15:
            best_value = float(-res.fun)
            best_raw = res.x
    x = _clamp_to_ball(best_raw, max_norms).reshape(n_vec, 3)
    config = {"state": x[0]}
    for lab, i in index.items():
        config[lab] = x[i]
    return best_value, config
