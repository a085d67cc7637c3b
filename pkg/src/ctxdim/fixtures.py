"""Known-optimal observable constructions used as regression fixtures.

The five-cycle configuration is the symmetric pentagram of rank-1
projectors on a qutrit with adjacent vectors orthogonal; the two-qubit
square consists of the nine Pauli products whose six sequences attain
the algebraic maximum on every state.  Tests validate both numerically
(orthogonality and target values) before relying on them.
"""

from __future__ import annotations

import math

import numpy as np

from .qcore import (
    Observable,
    QuantumState,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    classify_dichotomic,
    pure_state,
)


def five_cycle_vectors() -> list[np.ndarray]:
    """Unit vectors |v_j> with <v_j|v_{j+1}> = 0 around the five-cycle.

    The common polar angle satisfies cos^2(theta) = cos(pi/5)/(1+cos(pi/5));
    successive azimuths advance by 4*pi/5 so that neighbors are orthogonal.
    """
    c5 = math.cos(math.pi / 5.0)
    cos_theta = math.sqrt(c5 / (1.0 + c5))
    sin_theta = math.sqrt(1.0 - cos_theta**2)
    vectors = []
    for j in range(5):
        phi = 4.0 * math.pi * j / 5.0
        vectors.append(
            np.array(
                [
                    sin_theta * math.cos(phi),
                    sin_theta * math.sin(phi),
                    cos_theta,
                ]
            )
        )
    return vectors


def five_cycle_observables() -> dict[str, Observable]:
    """Qutrit observables A_j = 2|v_j><v_j| - 1 for the five-cycle."""
    labels = ["A", "B", "C", "D", "E"]
    obs = {}
    for lab, v in zip(labels, five_cycle_vectors()):
        obs[lab] = classify_dichotomic(2.0 * np.outer(v, v) - np.eye(3))
    return obs


def five_cycle_state() -> QuantumState:
    """The symmetry-axis state attaining the five-cycle quantum minimum."""
    return pure_state(np.array([0.0, 0.0, 1.0]))


def square_observables() -> dict[str, Observable]:
    """Two-qubit Pauli products attaining the square's algebraic maximum."""
    eye = np.eye(2, dtype=complex)
    grid = {
        "A": np.kron(SIGMA_Z, eye),
        "B": np.kron(eye, SIGMA_Z),
        "C": np.kron(SIGMA_Z, SIGMA_Z),
        "a": np.kron(eye, SIGMA_X),
        "b": np.kron(SIGMA_X, eye),
        "c": np.kron(SIGMA_X, SIGMA_X),
        "alpha": np.kron(SIGMA_Z, SIGMA_X),
        "beta": np.kron(SIGMA_X, SIGMA_Z),
        "gamma": np.kron(SIGMA_Y, SIGMA_Y),
    }
    return {lab: classify_dichotomic(M) for lab, M in grid.items()}
