"""Inequality scenarios: ordered measurement contexts with sign coefficients.

A scenario is a list of ordered contexts (length 1, 2 or 3) over a set of
observable labels, together with an optimization direction.  Ordering inside
a context is significant and preserved: sequential means are order-sensitive
once observables stop commuting, which is exactly what distinguishes the two
Peres-Mermin orderings.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import qcore
from .errors import BadParameter, DimensionMismatch, UnknownScenario
from .qcore import Observable, QuantumState


@dataclass(frozen=True)
class Context:
    labels: tuple[str, ...]
    coefficient: int  # +1 or -1

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise BadParameter("labels inside a context must be distinct")
        if self.coefficient not in (+1, -1):
            raise BadParameter("context coefficient must be +1 or -1")


@dataclass(frozen=True)
class Scenario:
    name: str
    contexts: tuple[Context, ...]
    direction: str  # "minimize" or "maximize"
    n: int | None = None

    @property
    def labels(self) -> tuple[str, ...]:
        seen: list[str] = []
        for ctx in self.contexts:
            for lab in ctx.labels:
                if lab not in seen:
                    seen.append(lab)
        return tuple(seen)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "contexts": [
                {"labels": list(c.labels), "coef": c.coefficient}
                for c in self.contexts
            ],
            "direction": self.direction,
        }


def _cycle_contexts(labels: list[str], last_coef: int) -> tuple[Context, ...]:
    ctxs = [
        Context((labels[i], labels[i + 1]), +1) for i in range(len(labels) - 1)
    ]
    ctxs.append(Context((labels[-1], labels[0]), last_coef))
    return tuple(ctxs)


# The six Peres-Mermin sequences, ordered such that each observable always
# occupies the same position (first, second or last) in both of its contexts.
_PM_CONTEXTS = (
    (("A", "B", "C"), +1),
    (("b", "c", "a"), +1),
    (("gamma", "alpha", "beta"), +1),
    (("A", "alpha", "a"), +1),
    (("b", "B", "beta"), +1),
    (("gamma", "c", "C"), -1),
)

# Alternate ordering: beta and gamma swap roles in the third and fifth
# sequences, which breaks the fixed-position property and raises the
# two-dimensional noncommuting maximum.
_PM_TILDE_CONTEXTS = (
    (("A", "B", "C"), +1),
    (("b", "c", "a"), +1),
    (("beta", "gamma", "alpha"), +1),
    (("A", "alpha", "a"), +1),
    (("beta", "b", "B"), +1),
    (("gamma", "c", "C"), -1),
)

# An ordering where gamma sits second in one context and last in another;
# the noise bounds are not robust for it.
_PM_BAD_ORDER_CONTEXTS = (
    (("A", "B", "C"), +1),
    (("b", "c", "a"), +1),
    (("alpha", "gamma", "beta"), +1),
    (("A", "alpha", "a"), +1),
    (("b", "B", "beta"), +1),
    (("c", "C", "gamma"), -1),
)

PM_LABELS = ("A", "B", "C", "a", "b", "c", "alpha", "beta", "gamma")


def build_scenario(name: str, n: int | None = None) -> Scenario:
    """Construct one of the built-in scenario families by name."""
    if name == "kcbs":
        labels = ["A", "B", "C", "D", "E"]
        return Scenario("kcbs", _cycle_contexts(labels, +1), "minimize", n=5)
    if name == "chi_n":
        if n is None or n < 3:
            raise BadParameter("chi_n needs N >= 3")
        labels = [f"A{i}" for i in range(1, n + 1)]
        s = +1 if n % 2 == 1 else -1
        return Scenario("chi_n", _cycle_contexts(labels, s), "minimize", n=n)
    if name in ("pm", "pm_tilde", "pm_bad_order"):
        raw = {
            "pm": _PM_CONTEXTS,
            "pm_tilde": _PM_TILDE_CONTEXTS,
            "pm_bad_order": _PM_BAD_ORDER_CONTEXTS,
        }[name]
        ctxs = tuple(Context(labels, coef) for labels, coef in raw)
        return Scenario(name, ctxs, "maximize")
    if name == "eta_n":
        if n is None or n < 2:
            raise BadParameter("eta_n needs N >= 2")
        labels = [f"A{i}" for i in range(1, n + 1)]
        ctxs = [Context((labels[0],), +1)]
        ctxs += [Context((labels[i], labels[i + 1]), +1) for i in range(n - 1)]
        ctxs.append(Context((labels[-1],), -1))
        return Scenario("eta_n", tuple(ctxs), "maximize", n=n)
    if name == "zeta_n":
        if n is None or n < 3:
            raise BadParameter("zeta_n needs N >= 3")
        labels = [f"A{i}" for i in range(1, n + 1)]
        return Scenario("zeta_n", _cycle_contexts(labels, -1), "maximize", n=n)
    raise UnknownScenario(name)


ObservableAssignment = dict[str, Observable]


def _check_assignment(scenario: Scenario, obs: ObservableAssignment) -> int:
    missing = [lab for lab in scenario.labels if lab not in obs]
    if missing:
        raise BadParameter(f"assignment missing labels: {missing}")
    dims = {obs[lab].dim for lab in scenario.labels}
    if len(dims) != 1:
        raise DimensionMismatch("assignment mixes dimensions")
    return dims.pop()


def evaluate(
    scenario: Scenario, obs: ObservableAssignment, state: QuantumState
) -> float:
    """Sum of coefficient-weighted sequential means over the contexts."""
    dim = _check_assignment(scenario, obs)
    if dim != state.dim:
        raise DimensionMismatch("state dimension does not match observables")
    total = 0.0
    for ctx in scenario.contexts:
        seq = [obs[lab] for lab in ctx.labels]
        total += ctx.coefficient * qcore.sequential_mean(state, seq)
    return total


@dataclass(frozen=True)
class ContextReport:
    labels: tuple[str, ...]
    max_commutator_norm: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    contexts: tuple[ContextReport, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.contexts)


def validate_contexts(
    scenario: Scenario, obs: ObservableAssignment, tol: float = qcore.COMMUTATION_TOL
) -> ValidationReport:
    """Report the largest intra-context commutator norm for each context."""
    _check_assignment(scenario, obs)
    reports = []
    for ctx in scenario.contexts:
        worst = 0.0
        for i in range(len(ctx.labels)):
            for j in range(i + 1, len(ctx.labels)):
                norm = qcore.commutator_norm(obs[ctx.labels[i]], obs[ctx.labels[j]])
                worst = max(worst, norm)
        reports.append(ContextReport(ctx.labels, worst, worst <= tol))
    return ValidationReport(tuple(reports), tol)


def assignment_to_json(obs: ObservableAssignment) -> dict:
    return {lab: qcore.operator_to_json(o.operator) for lab, o in obs.items()}


def assignment_from_json(data: dict, tol: float = qcore.SPECTRUM_TOL) -> ObservableAssignment:
    return {
        lab: qcore.classify_dichotomic(qcore.operator_from_json(enc), tol)
        for lab, enc in data.items()
    }
