"""Classical and low-dimensional bounds by exhaustive enumeration.

Two enumerations live here.  `nchv_bound` scans all deterministic +/-1
assignments of a scenario.  `enumerate_replacements` performs the
commuting-observable replacement searches: in low dimensions a commuting
pair (or triple) of dichotomic observables always degenerates - one of them
is a signed identity, or a product of them is - and substituting every
per-context degeneration choice yields a finite case list.  Contradictory
substitution sets are pruned with a signed union-find, and each consistent
case is reduced to a closed form (constants, single-observable terms, and
chain/cycle correlation terms) that can be bounded exactly.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import qcore
from .errors import (
    NotCommuting,
    TooManyLabels,
    UnsupportedScenario,
    WrongDimension,
    BadParameter,
)
from .qcore import Kind, Observable
from .scenarios import Scenario


@dataclass(frozen=True)
class BoundRecord:
    scenario: str
    dim: int | None
    flags: tuple[str, ...]
    bound: float
    provenance: str

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "dim": self.dim,
            "flags": list(self.flags),
            "bound": self.bound,
            "provenance": self.provenance,
        }


def bound_records_to_csv(records: list[BoundRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario", "dim", "flags", "bound", "provenance"])
    for rec in records:
        writer.writerow(
            [rec.scenario, "" if rec.dim is None else rec.dim,
             "+".join(rec.flags), repr(rec.bound), rec.provenance]
        )
    return buf.getvalue()


# --- deterministic-assignment bound ----------------------------------------


def nchv_bound(scenario: Scenario) -> BoundRecord:
    """Exact extremum of the scenario value over deterministic assignments."""
    labels = scenario.labels
    if len(labels) > 20:
        raise TooManyLabels(f"{len(labels)} labels exceed the enumeration cap")
    best = None
    want_min = scenario.direction == "minimize"
    for values in product((+1, -1), repeat=len(labels)):
        assign = dict(zip(labels, values))
        total = 0
        for ctx in scenario.contexts:
            term = ctx.coefficient
            for lab in ctx.labels:
                term *= assign[lab]
            total += term
        if best is None or (total < best if want_min else total > best):
            best = total
    return BoundRecord(scenario.name, None, ("noncontextual",), float(best), "enumeration")


# --- commuting-set classification ------------------------------------------


def _identity_sign(M: np.ndarray, tol: float) -> int | None:
    dim = M.shape[0]
    for sign in (+1, -1):
        if np.max(np.abs(M - sign * np.eye(dim))) <= tol:
            return sign
    return None


def classify_commuting_set(obs: list[Observable], tol: float = 1e-8) -> set[tuple]:
    """Degeneration cases for a commuting pair (d=2) or triple (d=3).

    Returns every applicable tag among:
      ("identity", i, sign)   -- observable i equals sign * identity
      ("pair", i, j, sign)    -- product of observables i, j equals sign * identity
      ("triple", sign)        -- product of all three equals sign * identity
    The cases are not exclusive; for genuinely dichotomic inputs at least one
    always applies.
    """
    k = len(obs)
    if k not in (2, 3):
        raise WrongDimension("expects a pair or a triple of observables")
    dim = obs[0].dim
    if (k == 2 and dim != 2) or (k == 3 and dim != 3):
        raise WrongDimension(f"a {k}-tuple must act on dimension {k}")
    for i in range(k):
        for j in range(i + 1, k):
            if qcore.commutator_norm(obs[i], obs[j]) > tol:
                raise NotCommuting(f"observables {i} and {j} do not commute")
    tags: set[tuple] = set()
    for i in range(k):
        sign = _identity_sign(obs[i].operator, tol)
        if sign is not None:
            tags.add(("identity", i, sign))
    for i in range(k):
        for j in range(i + 1, k):
            sign = _identity_sign(obs[i].operator @ obs[j].operator, tol)
            if sign is not None:
                tags.add(("pair", i, j, sign))
    if k == 3:
        sign = _identity_sign(
            obs[0].operator @ obs[1].operator @ obs[2].operator, tol
        )
        if sign is not None:
            tags.add(("triple", sign))
    return tags


# --- closed-form chain/cycle bounds ----------------------------------------


def omega_odd(m: int) -> float:
    """Extremal quantum value of the odd m-cycle, reachable in dimension 3."""
    c = math.cos(math.pi / m)
    return -(3 * m * c - m) / (1 + c)


def zeta_max_3d(m: int) -> float:
    """Three-dimensional maximum of an m-cycle of correlations with one sign flip."""
    if m % 2 == 1:
        return -omega_odd(m)
    return 1.0 - omega_odd(m - 1)


def lemma9_bounds(form: str, n: int, dim: int) -> BoundRecord:
    """Closed-form maxima of the open-chain (eta) and cycle (zeta) inequalities."""
    if form == "eta":
        if n < 2:
            raise BadParameter("eta needs N >= 2")
        return BoundRecord("eta_n", None, ("commuting",), float(n - 1), "closed-form")
    if form == "zeta":
        if n < 3:
            raise BadParameter("zeta needs N >= 3")
        if dim == 2:
            return BoundRecord("zeta_n", 2, ("commuting",), float(n - 2), "closed-form")
        if dim == 3:
            return BoundRecord("zeta_n", 3, ("commuting",), zeta_max_3d(n), "closed-form")
        raise BadParameter("zeta bounds are tabulated for dimensions 2 and 3")
    raise BadParameter(f"unknown form {form!r}")


def _cycle_max(m: int, sigma: int, dim: int, side_conditions: bool) -> float:
    """Upper bound for a length-m cycle of +/-1-weighted correlation terms.

    sigma is the product of the edge coefficient signs.  An unfrustrated
    cycle (sigma=+1) reaches its algebraic value.  A frustrated cycle is
    bounded by the dimension-dependent cycle maxima; side_conditions marks
    cycles whose observables are pairwise distinct and not proportional to
    the identity, which pins even frustrated cycles at the classical value.
    """
    if sigma == +1:
        return float(m)
    if dim == 2:
        return float(m - 2)
    if side_conditions and m % 2 == 0:
        return float(m - 2)
    return zeta_max_3d(m)


# --- reduced-expression scoring --------------------------------------------


def _brute_max(vertices: dict, edges: dict) -> float:
    """Exact maximum of sum c_v <v> + sum c_e <uv> over +/-1 assignments.

    Valid as a quantum bound whenever the edge graph is acyclic.
    """
    verts = sorted(set(vertices) | {v for e in edges for v in e})
    if not verts:
        return 0.0
    index = {v: i for i, v in enumerate(verts)}
    best = -math.inf
    for signs in product((+1, -1), repeat=len(verts)):
        total = 0.0
        for v, c in vertices.items():
            total += c * signs[index[v]]
        for (u, v), c in edges.items():
            total += c * signs[index[u]] * signs[index[v]]
        best = max(best, total)
    return best


def _component_max(
    verts: list, vertices: dict, edges: dict, dim: int, side_conditions: bool
) -> float:
    """Upper bound for one connected component of a reduced expression."""
    comp_edges = {e: c for e, c in edges.items() if e[0] in verts}
    comp_vertices = {v: c for v, c in vertices.items() if v in verts}
    n_edges = len(comp_edges)
    if n_edges <= len(verts) - 1:
        return _brute_max(comp_vertices, comp_edges)
    # locate the cycle by pruning degree-1 vertices
    adjacency: dict = {v: set() for v in verts}
    for (u, v) in comp_edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    alive = set(verts)
    queue = [v for v in verts if len(adjacency[v]) <= 1]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in adjacency[v]:
            adjacency[u].discard(v)
            if u in alive and len(adjacency[u]) <= 1:
                queue.append(u)
    cycle_edges = {e: c for e, c in comp_edges.items() if e[0] in alive and e[1] in alive}
    rest_edges = {e: c for e, c in comp_edges.items() if e not in cycle_edges}
    if (
        len(cycle_edges) != len(alive)
        or any(abs(abs(c) - 1.0) > 1e-12 for c in cycle_edges.values())
    ):
        # multiple cycles or non-unit weights: fall back to the algebraic bound
        return (
            sum(abs(c) for c in comp_edges.values())
            + sum(abs(c) for c in comp_vertices.values())
        )
    sigma = +1
    for c in cycle_edges.values():
        if c < 0:
            sigma = -sigma
    bound = _cycle_max(len(cycle_edges), sigma, dim, side_conditions)
    if rest_edges or comp_vertices:
        bound += _brute_max(comp_vertices, rest_edges)
    return bound


def _score_max(
    const: float, vertices: dict, edges: dict, dim: int, side_conditions: bool
) -> float:
    """Upper bound for const + sum c_v <v> + sum c_e <uv> over realizations."""
    vertices = {v: c for v, c in vertices.items() if abs(c) > 1e-15}
    edges = {e: c for e, c in edges.items() if abs(c) > 1e-15}
    # connected components over the union of vertex and edge supports
    support = sorted(set(vertices) | {v for e in edges for v in e})
    parent = {v: v for v in support}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (u, v) in edges:
        parent[find(u)] = find(v)
    comps: dict = {}
    for v in support:
        comps.setdefault(find(v), []).append(v)
    total = const
    for verts in comps.values():
        total += _component_max(verts, vertices, edges, dim, side_conditions)
    return total


# --- signed union-find over labels -----------------------------------------


class _SignedUF:
    """Union-find over label indices plus one constant node, with +/-1 signs.

    Supports x = s*y and x = s (via the constant node).  `copy` is cheap so
    the search tree can branch without undo bookkeeping.
    """

    __slots__ = ("parent", "sign")

    def __init__(self, n: int):
        # index n is the constant node with value +1
        self.parent = list(range(n + 1))
        self.sign = [1] * (n + 1)

    def copy(self) -> "_SignedUF":
        other = _SignedUF.__new__(_SignedUF)
        other.parent = self.parent[:]
        other.sign = self.sign[:]
        return other

    def find(self, x: int) -> tuple[int, int]:
        sign = 1
        while self.parent[x] != x:
            sign *= self.sign[x]
            x = self.parent[x]
        return x, sign

    def union(self, x: int, y: int, s: int) -> bool:
        """Impose x = s*y.  Returns False on contradiction."""
        rx, sx = self.find(x)
        ry, sy = self.find(y)
        if rx == ry:
            return sx == s * sy
        # attach the larger index under the smaller for determinism
        if rx < ry:
            self.parent[ry] = rx
            self.sign[ry] = sx * s * sy
        else:
            self.parent[rx] = ry
            self.sign[rx] = sx * s * sy
        return True


# --- replacement enumeration -----------------------------------------------


def _pair_choices(i: int, j: int) -> list[tuple]:
    """Degeneration choices for a pair context over label indices (i, j)."""
    out = []
    for s in (+1, -1):
        out.append(("const", i, s))   # observable i -> s * identity
        out.append(("const", j, s))   # observable j -> s * identity
        out.append(("merge", i, j, s))  # product of i and j -> s * identity
    return out


def _triple_choices(i: int, j: int, k: int) -> list[tuple]:
    out = []
    for s in (+1, -1):
        for x in (i, j, k):
            out.append(("const", x, s))
    for s in (+1, -1):
        for (x, y) in ((i, j), (i, k), (j, k)):
            out.append(("merge", x, y, s))
    return out


def _apply_choice(uf: _SignedUF, choice: tuple, const_node: int) -> bool:
    if choice[0] == "const":
        _, x, s = choice
        return uf.union(x, const_node, s)
    if choice[0] == "merge":
        _, x, y, s = choice
        return uf.union(x, y, s)
    return True  # "keep" imposes nothing up front


def _reduce_case(
    scenario: Scenario,
    choices: tuple,
    uf: _SignedUF,
    label_index: dict,
    const_node: int,
) -> tuple | None:
    """Reduce a consistent case to (const, vertices, edges); None if a kept
    context's side conditions are violated by the global substitutions."""
    const = 0.0
    vertices: dict = {}
    edges: dict = {}
    croot, csign = uf.find(const_node)
    for ctx, choice in zip(scenario.contexts, choices):
        if choice[0] == "keep":
            roots = []
            for lab in ctx.labels:
                r, s = uf.find(label_index[lab])
                if r == croot:
                    return None  # kept observable forced to an identity
                roots.append((r, s))
            (r1, s1), (r2, s2) = roots
            if r1 == r2:
                return None  # kept pair forced equal up to sign
            key = (min(r1, r2), max(r1, r2))
            edges[key] = edges.get(key, 0.0) + ctx.coefficient * s1 * s2
            continue
        k = ctx.coefficient
        counts: dict = {}
        for lab in ctx.labels:
            r, s = uf.find(label_index[lab])
            if r == croot:
                k *= s * csign
            else:
                cnt, sprod = counts.get(r, (0, 1))
                counts[r] = (cnt + 1, sprod * s)
        remaining = []
        for r, (cnt, sprod) in counts.items():
            k *= sprod
            if cnt % 2 == 1:
                remaining.append(r)
        if len(remaining) == 0:
            const += k
        elif len(remaining) == 1:
            vertices[remaining[0]] = vertices.get(remaining[0], 0.0) + k
        elif len(remaining) == 2:
            key = (min(remaining), max(remaining))
            edges[key] = edges.get(key, 0.0) + k
        else:
            raise AssertionError("a replaced context cannot keep three observables")
    return const, vertices, edges


@dataclass(frozen=True)
class ReplacementStats:
    raw_cases: int
    consistent_cases: int
    reduced_form_classes: int

    def to_json(self) -> dict:
        return {
            "raw_cases": self.raw_cases,
            "consistent_cases": self.consistent_cases,
            "reduced_form_classes": self.reduced_form_classes,
        }


def enumerate_replacements(
    scenario: Scenario, dim: int
) -> tuple[BoundRecord, ReplacementStats]:
    """Exhaustive replacement search over per-context degeneration choices.

    Supported: the five-cycle scenario in dimension 2 (6 choices per pair
    context), the Peres-Mermin square in dimension 3 (6+6 choices per triple
    context), and the even-N cycle in dimension 3 (pair choices plus a
    "generic" branch carrying the distinct/non-identity side conditions).
    """
    side_conditions = False
    if scenario.name == "kcbs" and dim == 2:
        per_context = [
            _pair_choices(*[scenario.labels.index(l) for l in ctx.labels])
            for ctx in scenario.contexts
        ]
        seed_bound = None
    elif scenario.name in ("pm",) and dim == 3:
        labels = scenario.labels
        per_context = [
            _triple_choices(*[labels.index(l) for l in ctx.labels])
            for ctx in scenario.contexts
        ]
        # triples whose full product is proportional to the identity never
        # beat the deterministic-assignment value
        seed_bound = 4.0
    elif scenario.name == "chi_n" and dim == 3:
        if scenario.n is None or scenario.n % 2 != 0:
            raise UnsupportedScenario("the dimension-3 pair search needs even N")
        per_context = [
            _pair_choices(*[scenario.labels.index(l) for l in ctx.labels]) + [("keep",)]
            for ctx in scenario.contexts
        ]
        seed_bound = None
        side_conditions = True
    else:
        raise UnsupportedScenario(f"({scenario.name}, dim={dim})")

    labels = scenario.labels
    label_index = {lab: i for i, lab in enumerate(labels)}
    const_node = len(labels)
    want_min = scenario.direction == "minimize"
    sign = -1.0 if want_min else 1.0  # score everything in max mode

    raw = 1
    for ch in per_context:
        raw *= len(ch)

    memo: dict = {}
    best = None if seed_bound is None else sign * seed_bound
    consistent = 0
    n_ctx = len(scenario.contexts)
    choice_stack: list[tuple] = [()] * n_ctx

    def dfs(depth: int, uf: _SignedUF):
        nonlocal best, consistent
        if depth == n_ctx:
            reduced = _reduce_case(
                scenario, tuple(choice_stack), uf, label_index, const_node
            )
            if reduced is None:
                return
            consistent += 1
            const, vertices, edges = reduced
            key = (
                round(const, 9),
                tuple(sorted((v, round(c, 9)) for v, c in vertices.items())),
                tuple(sorted((e, round(c, 9)) for e, c in edges.items())),
            )
            if key in memo:
                score = memo[key]
            else:
                score = _score_max(
                    sign * const,
                    {v: sign * c for v, c in vertices.items()},
                    {e: sign * c for e, c in edges.items()},
                    dim,
                    side_conditions,
                )
                memo[key] = score
            if best is None or score > best:
                best = score
            return
        for choice in per_context[depth]:
            if choice[0] == "keep":
                child = uf
            else:
                child = uf.copy()
                if not _apply_choice(child, choice, const_node):
                    continue
            choice_stack[depth] = choice
            dfs(depth + 1, child)

    dfs(0, _SignedUF(len(labels)))
    bound = sign * best
    flags = ["commuting", "projective-or-identity"]
    if side_conditions:
        flags = ["commuting"]
    record = BoundRecord(scenario.name, dim, tuple(flags), float(bound), "enumeration")
    return record, ReplacementStats(raw, consistent, len(memo))
