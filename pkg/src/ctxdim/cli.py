"""Command-line front end.

Every subcommand prints a single JSON object
{"command": ..., "inputs": ..., "result": ..., "provenance": ...}
on standard output; ``--csv`` switches tabular results to CSV.  Exit
codes: 0 on success, 2 when the requested scenario/assumption
combination supports no certification, 1 on any other error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, certify, classical, noise, optimizer, qcore, scenarios
from .classical import BoundRecord, bound_records_to_csv
from .errors import BadParameter, CtxdimError, UnsupportedCombination


def _emit(command: str, inputs: dict, result, csv_text: str | None, as_csv: bool) -> None:
    if as_csv and csv_text is not None:
        sys.stdout.write(csv_text)
        return
    payload = {
        "command": command,
        "inputs": inputs,
        "result": result,
        "provenance": {"package": "ctxdim", "version": __version__},
    }
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _build(name: str, n: int | None) -> scenarios.Scenario:
    return scenarios.build_scenario(name, n)


def _cmd_evaluate(args) -> None:
    scenario = _build(args.scenario, args.n)
    with open(args.observables) as fh:
        obs = scenarios.assignment_from_json(json.load(fh))
    if args.state:
        with open(args.state) as fh:
            state = qcore.QuantumState(qcore.operator_from_json(json.load(fh)))
    else:
        dim = obs[scenario.labels[0]].dim
        state = qcore.maximally_mixed(dim)
    value = scenarios.evaluate(scenario, obs, state)
    report = scenarios.validate_contexts(scenario, obs)
    result = {
        "value": value,
        "contexts_commute": report.passed,
        "max_commutator_norm": max(
            c.max_commutator_norm for c in report.contexts
        ),
    }
    inputs = {"scenario": args.scenario, "n": args.n,
              "observables": args.observables, "state": args.state}
    _emit("evaluate", inputs, result, None, args.csv)


def _bound_record(scenario: scenarios.Scenario, kind: str) -> BoundRecord:
    name = scenario.name
    if kind == "nchv":
        return classical.nchv_bound(scenario)
    if kind == "bloch":
        if name in ("pm", "pm_tilde"):
            value = (
                3.0 * math.sqrt(3.0)
                if name == "pm"
                else 1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0))
            )
            return BoundRecord(name, 2, ("projective",), value, "closed-form")
        raise UnsupportedCombination(f"no qubit geometric bound for {name}")
    dim = int(kind[3:])
    if name == "kcbs":
        if dim == 2:
            record, _ = classical.enumerate_replacements(scenario, 2)
            return record
        if dim == 3:
            return BoundRecord("kcbs", 3, ("commuting", "projective"),
                               5.0 - 4.0 * math.sqrt(5.0), "closed-form")
    if name == "pm":
        if dim == 3:
            record, _ = classical.enumerate_replacements(scenario, 3)
            return record
        if dim == 4:
            return BoundRecord("pm", 4, ("commuting", "projective"), 6.0,
                               "closed-form")
    if name == "chi_n":
        targets = optimizer.hierarchy_targets(scenario.n)
        if dim in targets:
            return BoundRecord("chi_n", dim,
                               ("commuting", "projective", "distinct"),
                               targets[dim], "closed-form")
    raise UnsupportedCombination(f"no {kind} bound catalogued for {name}")


def _cmd_bound(args) -> None:
    scenario = _build(args.scenario, args.n)
    record = _bound_record(scenario, args.kind)
    inputs = {"scenario": args.scenario, "n": args.n, "kind": args.kind}
    _emit("bound", inputs, record.to_json(),
          bound_records_to_csv([record]), args.csv)


def _cmd_enumerate(args) -> None:
    scenario = _build(args.scenario, None)
    record, stats = classical.enumerate_replacements(scenario, args.dim)
    result = {"bound": record.to_json()}
    if args.stats:
        result["stats"] = stats.to_json()
    inputs = {"scenario": args.scenario, "dim": args.dim, "stats": args.stats}
    _emit("enumerate", inputs, result, bound_records_to_csv([record]), args.csv)


def _cmd_optimize(args) -> None:
    scenario = _build(args.scenario, args.n)
    cfg = optimizer.SearchConfig(
        dim=args.dim,
        restarts=args.restarts,
        seed=args.seed,
        require_commuting_contexts=args.commuting,
    )
    result = optimizer.maximize_violation(scenario, cfg)
    inputs = {"scenario": args.scenario, "n": args.n, "dim": args.dim,
              "commuting": args.commuting, "restarts": args.restarts,
              "seed": args.seed}
    _emit("optimize", inputs, result.to_json(), None, args.csv)


def _cmd_noise_bound(args) -> None:
    result = noise.corner_bound(
        args.scenario, args.model, restarts=args.restarts, seed=args.seed
    )
    inputs = {"scenario": args.scenario, "model": args.model,
              "restarts": args.restarts, "seed": args.seed}
    _emit("noise-bound", inputs, result.to_json(), None, args.csv)


def _cmd_certify(args) -> None:
    assumptions = certify.AssumptionSet.from_flags(args.assume)
    result = certify.certify(
        args.scenario if args.n is None else _build(args.scenario, args.n),
        assumptions, args.value, args.sigma, args.k,
    )
    inputs = {"scenario": args.scenario, "n": args.n, "value": args.value,
              "sigma": args.sigma, "k": args.k, "assume": args.assume}
    _emit("certify", inputs, result.to_json(), None, args.csv)


def _cmd_report(args) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .bloch import minimize_chain

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    # bound catalog: classical and quantum tiers for the core scenarios
    records = [
        classical.nchv_bound(_build("kcbs", None)),
        classical.nchv_bound(_build("pm", None)),
        BoundRecord("kcbs", 3, ("commuting", "projective"),
                    5.0 - 4.0 * math.sqrt(5.0), "closed-form"),
        BoundRecord("pm", 3, ("commuting", "projective"),
                    4.0 * (math.sqrt(5.0) - 1.0), "closed-form"),
        BoundRecord("pm", 4, ("commuting", "projective"), 6.0, "closed-form"),
        BoundRecord("pm", 2, ("projective",), 3.0 * math.sqrt(3.0),
                    "closed-form"),
        BoundRecord("pm_tilde", 2, ("projective",),
                    1.0 + math.sqrt(9.0 + 6.0 * math.sqrt(3.0)),
                    "closed-form"),
    ]
    bounds_csv = out / "bounds.csv"
    bounds_csv.write_text(bound_records_to_csv(records))
    written.append(bounds_csv.name)

    # even-cycle hierarchy: closed-form tiers, optimizer attainment for the
    # smallest even cycle
    n_values = [4, 6, 8, 10]
    rows = []
    for n in n_values:
        rows.extend(
            optimizer.hierarchy_table(
                [n], restarts=args.restarts, seed=args.seed,
                attain=(n == 6),
            )
        )
    hier_csv = out / "hierarchy.csv"
    hier_csv.write_text(optimizer.hierarchy_rows_to_csv(rows))
    written.append(hier_csv.name)

    fig, ax = plt.subplots(figsize=(6, 4))
    for dim, marker in ((2, "o"), (3, "s"), (4, "^")):
        ys = [row.closed_form for row in rows if row.dim == dim]
        ax.plot(n_values, ys, marker=marker, label=f"dimension {dim}")
    ax.set_xlabel("cycle length N")
    ax.set_ylabel("minimal value")
    ax.set_title("Even-cycle dimension hierarchy")
    ax.legend()
    fig.tight_layout()
    hier_png = out / "hierarchy.png"
    fig.savefig(hier_png, dpi=150)
    plt.close(fig)
    written.append(hier_png.name)

    # cyclic-chain geometry: numerical minima against the closed form
    chain_ns = list(range(3, 13))
    chain_vals = [
        minimize_chain(n, restarts=args.restarts, seed=args.seed)[0]
        for n in chain_ns
    ]
    closed = [-n * math.cos(math.pi / n) for n in chain_ns]
    chain_csv = out / "chain.csv"
    lines = ["n,numerical,closed_form\n"]
    for n, num, cf in zip(chain_ns, chain_vals, closed):
        lines.append(f"{n},{num!r},{cf!r}\n")
    chain_csv.write_text("".join(lines))
    written.append(chain_csv.name)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(chain_ns, closed, "-", label="-N cos(pi/N)")
    ax.plot(chain_ns, chain_vals, "x", label="numerical minimum")
    ax.set_xlabel("chain length N")
    ax.set_ylabel("minimal cyclic correlation")
    ax.set_title("Cyclic Bloch-vector chains")
    ax.legend()
    fig.tight_layout()
    chain_png = out / "chain.png"
    fig.savefig(chain_png, dpi=150)
    plt.close(fig)
    written.append(chain_png.name)

    inputs = {"out": str(out), "restarts": args.restarts, "seed": args.seed}
    _emit("report", inputs, {"files": written}, None, args.csv)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxdim",
        description="Certify quantum-dimension lower bounds from "
        "contextuality-inequality values.",
    )
    parser.add_argument("--csv", action="store_true",
                        help="emit tabular results as CSV")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="evaluate a scenario on observables")
    p.add_argument("--scenario", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--observables", required=True)
    p.add_argument("--state", default=None)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("bound", help="look up a catalogued bound")
    p.add_argument("--scenario", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--kind", required=True,
                   choices=["nchv", "dim2", "dim3", "dim4", "bloch"])
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("enumerate",
                       help="exhaustive replacement-case enumeration")
    p.add_argument("--scenario", required=True, choices=["kcbs", "pm"])
    p.add_argument("--dim", type=int, required=True, choices=[2, 3])
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("optimize", help="see-saw search for quantum extrema")
    p.add_argument("--scenario", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--commuting", action="store_true")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("noise-bound",
                       help="corner bound for noisy qubit measurements")
    p.add_argument("--scenario", required=True,
                   choices=["pm", "pm_tilde", "pm_bad_order"])
    p.add_argument("--model", required=True, choices=["prop12", "prop13"])
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_noise_bound)

    p = sub.add_parser("certify", help="certified dimension from a value")
    p.add_argument("--scenario", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--value", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--assume", required=True,
                   help="comma-separated flags: commuting, projective, "
                   "prop12, prop13, pm, pm_tilde")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("report",
                       help="write bound tables and figures to a directory")
    p.add_argument("--out", required=True)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UnsupportedCombination as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 2
    except (CtxdimError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
