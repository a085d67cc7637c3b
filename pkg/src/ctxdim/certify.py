"""Dimension certification from measured inequality values.

Maps a measured value with uncertainty, together with the assumptions one
is willing to make about the measurements, to a certified lower bound on
the Hilbert-space dimension.  Each threshold in the tier tables is a
closed form that the enumeration, geometry, optimizer, or noise modules
reproduce numerically; nothing here is a free-standing magic number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .classical import BoundRecord, omega_odd
from .errors import BadParameter, UnsupportedCombination
from .scenarios import Scenario, build_scenario

NOISE_MODELS = ("none", "prop12", "prop13")
ORDERINGS = ("pm", "pm_tilde")


@dataclass(frozen=True)
class AssumptionSet:
    """What the certifier may assume about the measurement apparatus."""

    contexts_commuting: bool = False
    measurements_projective: bool = False
    noise_model: str = "none"
    ordering: str = "pm"

    def __post_init__(self) -> None:
        if self.noise_model not in NOISE_MODELS:
            raise BadParameter(f"unknown noise model {self.noise_model!r}")
        if self.ordering not in ORDERINGS:
            raise BadParameter(f"unknown ordering {self.ordering!r}")
        if self.noise_model != "none" and self.measurements_projective:
            raise BadParameter(
                "a noise model replaces the projectivity assumption; "
                "do not assume both"
            )

    def to_json(self) -> dict:
        return {
            "contexts_commuting": self.contexts_commuting,
            "measurements_projective": self.measurements_projective,
            "noise_model": self.noise_model,
            "ordering": self.ordering,
        }

    @classmethod
    def from_flags(cls, flags: str) -> "AssumptionSet":
        """Parse a comma-separated flag list like "commuting,projective"."""
        commuting = False
        projective = False
        noise = "none"
        ordering = "pm"
        for raw in flags.split(","):
            flag = raw.strip()
            if not flag:
                continue
            if flag == "commuting":
                commuting = True
            elif flag == "projective":
                projective = True
            elif flag in ("prop12", "prop13"):
                noise = flag
            elif flag in ORDERINGS:
                ordering = flag
            else:
                raise BadParameter(f"unknown assumption flag {flag!r}")
        return cls(commuting, projective, noise, ordering)


@dataclass(frozen=True)
class CertificationResult:
    dimension: int
    threshold: float
    provenance: BoundRecord
    margin: float
    assumptions: AssumptionSet

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "threshold": self.threshold,
            "provenance": self.provenance.to_json(),
            "margin": self.margin,
            "assumptions": self.assumptions.to_json(),
        }


def _tier(scenario: str, dim: int, flags: tuple, value: float, how: str):
    return (dim, BoundRecord(scenario, dim, flags, value, how))


def threshold_table(
    scenario: Scenario | str, assumptions: AssumptionSet
) -> list[tuple[int, BoundRecord]]:
    """Ordered tiers (d, record): beating the bound for dimension d
    certifies dimension at least d + 1."""
    if isinstance(scenario, str):
        scenario = build_scenario(scenario)
    name = scenario.name
    a = assumptions

    if name == "pm":
        if a.noise_model == "none":
            if a.contexts_commuting and a.measurements_projective:
                return [
                    _tier("pm", 2, ("commuting", "projective"), 4.0,
                          "enumeration"),
                    _tier("pm", 3, ("commuting", "projective"),
                          4.0 * (math.sqrt(5.0) - 1.0), "enumeration"),
                ]
            if a.measurements_projective and not a.contexts_commuting:
                # noncommuting projective qubit measurements obey a bound
                # strictly below the qutrit tier, so only dim >= 3 follows
                bound = (
                    3.0 * math.sqrt(3.0)
                    if a.ordering == "pm"
                    else 1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0))
                )
                return [
                    _tier("pm", 2, ("projective", a.ordering), bound,
                          "closed-form")
                ]
            raise UnsupportedCombination(
                "certifying with the standard ordering needs commuting "
                "contexts, projective measurements, or a noise model"
            )
        if a.noise_model == "prop12" and a.ordering == "pm":
            return [
                _tier("pm", 2, ("noise:prop12", "pm"),
                      3.0 * math.sqrt(3.0), "closed-form")
            ]
        if a.noise_model == "prop13" and a.ordering == "pm_tilde":
            return [
                _tier("pm", 2, ("noise:prop13", "pm_tilde"),
                      1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0)),
                      "closed-form")
            ]
        raise UnsupportedCombination(
            f"no qubit bound is available for noise model "
            f"{a.noise_model} with ordering {a.ordering}"
        )

    if name == "kcbs":
        if (
            a.contexts_commuting
            and a.measurements_projective
            and a.noise_model == "none"
        ):
            return [
                _tier("kcbs", 2, ("commuting", "projective"), -3.0,
                      "enumeration")
            ]
        raise UnsupportedCombination(
            "without commuting projective measurements the five-cycle "
            "bound holds in every dimension, so no certification follows"
        )

    if name == "chi_n":
        n = scenario.n
        if n is None or n % 2 != 0 or n < 4:
            raise UnsupportedCombination(
                "the dimension hierarchy needs an even cycle length >= 4"
            )
        if (
            a.contexts_commuting
            and a.measurements_projective
            and a.noise_model == "none"
        ):
            flags = ("commuting", "projective", "distinct")
            return [
                _tier("chi_n", 2, flags, -float(n - 2), "enumeration"),
                _tier("chi_n", 3, flags, -1.0 + omega_odd(n - 1),
                      "closed-form"),
                _tier("chi_n", 4, flags, -n * math.cos(math.pi / n),
                      "closed-form"),
            ]
        raise UnsupportedCombination(
            "the even-cycle hierarchy needs commuting projective "
            "measurements"
        )

    raise UnsupportedCombination(f"no threshold table for {name}")


def certify(
    scenario: Scenario | str,
    assumptions: AssumptionSet,
    value: float,
    sigma: float,
    k: float = 1.0,
) -> CertificationResult:
    """Certified dimension from a measured value with one-sided margin.

    A tier counts as cleared when the value lies beyond its threshold, in
    the scenario's violation direction, by more than k*sigma.  The margin
    is the signed distance past the decisive threshold in units of sigma
    (in absolute units when sigma is zero).
    """
    if sigma < 0:
        raise BadParameter("uncertainty must be nonnegative")
    if k < 0:
        raise BadParameter("the margin multiplier must be nonnegative")
    if isinstance(scenario, str):
        scenario = build_scenario(scenario)
    tiers = threshold_table(scenario, assumptions)
    sign = 1.0 if scenario.direction == "maximize" else -1.0

    certified = 1
    decisive = tiers[0]
    for d, record in tiers:
        distance = sign * (value - record.bound)
        if distance > k * sigma:
            certified = d + 1
            decisive = (d, record)
    distance = sign * (value - decisive[1].bound)
    margin = distance / sigma if sigma > 0 else distance
    return CertificationResult(
        dimension=certified,
        threshold=decisive[1].bound,
        provenance=decisive[1],
        margin=margin,
        assumptions=assumptions,
    )
