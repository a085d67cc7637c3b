"""Exact finite-dimensional quantum mechanics for dichotomic sequential measurements.

Operators are dense complex numpy arrays.  Dimensions are small (2..8), so
everything is done with exact dense linear algebra; sequential means are
computed by summing over all outcome paths with projective state updates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    NotDichotomic,
    NotHermitian,
    UnsupportedKind,
)

HERMITICITY_TOL = 1e-10
COMMUTATION_TOL = 1e-9
SPECTRUM_TOL = 1e-8

# Pauli matrices, used throughout tests and fixtures.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def eye(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def is_hermitian(M: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return np.max(np.abs(M - M.conj().T)) <= tol


class Kind(Enum):
    PROJECTIVE = "projective"
    SIGNED_IDENTITY = "signed_identity"
    GENERAL = "general"


@dataclass(frozen=True)
class Observable:
    """A dichotomic measurement with outcomes +1/-1.

    For PROJECTIVE observables the eigenprojectors (plus, minus) sum to the
    identity and the operator equals plus - minus.  SIGNED_IDENTITY carries
    only a sign.  GENERAL covers effect-pair observables whose eigenvalues
    lie in [-1, 1]; those are handled by the noise module, not here.
    """

    kind: Kind
    operator: np.ndarray
    sign: int = 0
    plus: np.ndarray | None = None
    minus: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.operator.shape[0]

    def projector(self, outcome: int) -> np.ndarray:
        if self.kind is not Kind.PROJECTIVE:
            raise UnsupportedKind("eigenprojectors exist only for projective observables")
        return self.plus if outcome == +1 else self.minus


@dataclass(frozen=True)
class QuantumState:
    """A density operator: trace one, Hermitian, positive semidefinite."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
            raise ValueError("state trace must be 1")
        if not is_hermitian(rho):
            raise NotHermitian("state must be Hermitian")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("state must be positive semidefinite")

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


def pure_state(vec: np.ndarray) -> QuantumState:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return QuantumState(np.outer(v, v.conj()))


def maximally_mixed(dim: int) -> QuantumState:
    return QuantumState(eye(dim) / dim)


def random_state(dim: int, rng: np.random.Generator) -> QuantumState:
    """Random full-rank density matrix (Hilbert-Schmidt-style G G^dagger)."""
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = G @ G.conj().T
    return QuantumState(rho / np.trace(rho).real)


def classify_dichotomic(M: np.ndarray, tol: float = SPECTRUM_TOL) -> Observable:
    """Classify a Hermitian operator as projective / signed identity / general.

    Eigenvalues within tol of +1 and -1 give a projective observable with
    eigenprojectors built by eigenvalue clustering (degenerate spectra are
    fine).  All eigenvalues on one sign give a signed identity.  Eigenvalues
    inside [-1, 1] but away from the endpoints give a general observable.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch("operator must be square")
    if not is_hermitian(M, max(tol, HERMITICITY_TOL)):
        raise NotHermitian("observable must be Hermitian")
    vals, vecs = np.linalg.eigh(M)
    if vals.min() < -1 - tol or vals.max() > 1 + tol:
        raise NotDichotomic(f"eigenvalue outside [-1, 1]: {vals}")
    near_plus = np.abs(vals - 1) <= tol
    near_minus = np.abs(vals + 1) <= tol
    if not np.all(near_plus | near_minus):
        return Observable(kind=Kind.GENERAL, operator=M)
    if np.all(near_plus):
        return Observable(kind=Kind.SIGNED_IDENTITY, operator=M, sign=+1)
    if np.all(near_minus):
        return Observable(kind=Kind.SIGNED_IDENTITY, operator=M, sign=-1)
    vp = vecs[:, near_plus]
    vm = vecs[:, near_minus]
    plus = vp @ vp.conj().T
    minus = vm @ vm.conj().T
    return Observable(kind=Kind.PROJECTIVE, operator=M, plus=plus, minus=minus)


def signed_identity(dim: int, sign: int) -> Observable:
    return Observable(kind=Kind.SIGNED_IDENTITY, operator=sign * eye(dim), sign=sign)


def projective_from_plus(plus: np.ndarray) -> Observable:
    """Build a projective observable from its +1 eigenprojector."""
    plus = np.asarray(plus, dtype=complex)
    dim = plus.shape[0]
    minus = eye(dim) - plus
    return Observable(
        kind=Kind.PROJECTIVE, operator=plus - minus, plus=plus, minus=minus
    )


def commutes(A: Observable, B: Observable, tol: float = COMMUTATION_TOL) -> bool:
    if A.dim != B.dim:
        raise DimensionMismatch("observables act on different dimensions")
    comm = A.operator @ B.operator - B.operator @ A.operator
    return np.max(np.abs(comm)) <= tol


def commutator_norm(A: Observable, B: Observable) -> float:
    if A.dim != B.dim:
        raise DimensionMismatch("observables act on different dimensions")
    comm = A.operator @ B.operator - B.operator @ A.operator
    return float(np.max(np.abs(comm)))


def lueders_update(
    state: QuantumState, obs: Observable, outcome: int
) -> tuple[float, QuantumState | None]:
    """Projective state update.  Returns (probability, post state).

    A zero-probability branch returns (0.0, None).  Signed identities assign
    their sign deterministically and leave the state untouched.
    """
    if outcome not in (+1, -1):
        raise ValueError("outcome must be +1 or -1")
    if obs.kind is Kind.SIGNED_IDENTITY:
        return (1.0, state) if outcome == obs.sign else (0.0, None)
    if obs.kind is not Kind.PROJECTIVE:
        raise UnsupportedKind("general observables go through the noise module")
    if obs.dim != state.dim:
        raise DimensionMismatch("observable and state dimensions differ")
    P = obs.projector(outcome)
    prob = float(np.trace(P @ state.rho).real)
    if prob <= 1e-14:
        return 0.0, None
    post = P @ state.rho @ P / prob
    # renormalize exactly against round-off
    post = post / np.trace(post).real
    return prob, QuantumState(post)


def sequential_mean(state: QuantumState, seq: list[Observable]) -> float:
    """Mean of the product of outcomes of a sequence of measurements.

    Sums (product of outcomes) x (path probability) over all outcome strings,
    updating the state projectively after each measurement.  Zero-probability
    branches are skipped.
    """
    for obs in seq:
        if obs.kind is Kind.GENERAL:
            raise UnsupportedKind("general observables go through the noise module")
        if obs.dim != state.dim:
            raise DimensionMismatch("observable and state dimensions differ")

    def recurse(rho: np.ndarray, idx: int) -> float:
        if idx == len(seq):
            return 1.0
        obs = seq[idx]
        if obs.kind is Kind.SIGNED_IDENTITY:
            return obs.sign * recurse(rho, idx + 1)
        total = 0.0
        for outcome in (+1, -1):
            P = obs.projector(outcome)
            prob = float(np.trace(P @ rho).real)
            if prob <= 1e-14:
                continue
            post = P @ rho @ P / prob
            total += outcome * prob * recurse(post, idx + 1)
        return total

    return recurse(state.rho, 0)


def sequential_correlation_operator(seq: list[Observable]) -> np.ndarray:
    """Hermitian T with tr(rho T) = sequential_mean(rho, seq) for every rho.

    Built by nested conjugation: T(empty) = identity and
    T(O, rest) = sum_s s P_s T(rest) P_s.
    """
    if not seq:
        raise ValueError("sequence must be nonempty")
    dim = seq[0].dim
    for obs in seq:
        if obs.kind is Kind.GENERAL:
            raise UnsupportedKind("general observables go through the noise module")
        if obs.dim != dim:
            raise DimensionMismatch("mixed dimensions in sequence")

    def build(idx: int) -> np.ndarray:
        if idx == len(seq):
            return eye(dim)
        obs = seq[idx]
        inner = build(idx + 1)
        if obs.kind is Kind.SIGNED_IDENTITY:
            return obs.sign * inner
        total = np.zeros((dim, dim), dtype=complex)
        for outcome in (+1, -1):
            P = obs.projector(outcome)
            total += outcome * (P @ inner @ P)
        return total

    return build(0)


# --- JSON operator encoding (shared with the CLI) ---------------------------


def operator_to_json(M: np.ndarray) -> dict:
    M = np.asarray(M, dtype=complex)
    return {
        "dim": M.shape[0],
        "re": [[float(x) for x in row] for row in M.real],
        "im": [[float(x) for x in row] for row in M.imag],
    }


def operator_from_json(data: dict) -> np.ndarray:
    dim = int(data["dim"])
    M = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
    if M.shape != (dim, dim):
        raise DimensionMismatch("encoded matrix does not match its declared dim")
    return M
