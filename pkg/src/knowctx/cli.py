"""Command-line front end.

Exit codes are a stable contract:

    0   success, or a Feasible verdict
    1   negative verdict (no solution found / analytically inadmissible)
    2   usage errors, unparseable or invalid input files
    3   runtime failures inside an otherwise well-formed run

Output goes to standard output unless --output is given.  Tables are
fixed-width with 6 significant digits; CSV and JSON carry full
precision.  Randomized commands take --seed (falling back to the
KNOWCTX_SEED environment variable, then 0) and record it in the output
header.  demo prints byte-for-byte what eval prints on the exported
scenario file, so exporting and re-running is the identity.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .context import (
    apply_event,
    canonical_string,
    initial_state,
    load_scenario,
    mask_resolution,
    parse_scenario,
    save_scenario,
    scenario_dict,
)
from .demos import DEMOS
from .engine import OutcomeDistribution, eval_auto
from .errors import KnowctxError, ScenarioFormatError, ShapeMismatch
from .feasibility import (
    ShapeSpec,
    build_system,
    sampled_independence_check,
    scan_shapes,
    solve,
)
from .oracle import mc_sample_classical
from .rules import GammaModulus

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _sig6(x: float) -> str:
    return f"{x:.6g}"


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("KNOWCTX_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ScenarioFormatError(f"KNOWCTX_SEED must be an integer, got {env!r}")
    return 0


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    for row in rows:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# eval / demo
# ---------------------------------------------------------------------------


def _distribution_dict(dist: OutcomeDistribution) -> dict:
    return {
        "layer": dist.layer,
        "labels": list(dist.labels),
        "values": [float(v) for v in dist.values],
        "kind": dist.kind,
        "observable": dist.observable,
        "conditioning": dist.conditioning,
        "normalization_deviation": float(dist.normalization_deviation),
        "warnings": list(dist.warnings),
    }


def _run_scenario(network, events, seed: int, layer, fmt: str) -> str:
    state = initial_state(network)
    trace = [{"n": None, "event": None, "state": canonical_string(state)}]
    for ev in events:
        state = apply_event(state, ev)
        trace.append(
            {"n": ev.timestamp, "event": ev.describe(), "state": canonical_string(state)}
        )
    target = network.depth - 1 if layer is None else layer
    if not (0 <= target < network.depth):
        raise ShapeMismatch(
            f"layer {target} out of range for a {network.depth}-layer context"
        )
    # Predictive law: the target layer's own resolution, if any, is masked
    # so the distribution it was drawn from is reported, not a point mass.
    dist = eval_auto(mask_resolution(state, target), layer=target)
    name = network.name or "scenario"

    if fmt == "json":
        doc = {
            "scenario": name,
            "seed": seed,
            "rule": network.rule.describe(),
            "trace": trace,
            "distribution": _distribution_dict(dist),
            "warnings": list(network.warnings),
        }
        return json.dumps(doc, indent=2) + "\n"

    head = [
        f"# scenario: {name}",
        f"# seed: {seed}",
        f"# rule: {network.rule.describe()}",
    ]
    for w in network.warnings:
        head.append(f"# warning: {w}")

    if fmt == "csv":
        lines = head + ["alternative,value,kind,layer"]
        for label, v in zip(dist.labels, dist.values):
            lines.append(f"{label},{v!r},{dist.kind},{dist.layer}")
        return "\n".join(lines) + "\n"

    rows = [
        ["-" if t["n"] is None else str(t["n"]), t["event"] or "initial", t["state"]]
        for t in trace
    ]
    out = "\n".join(head) + "\n\n"
    out += _table(["n", "event", "state"], rows)
    out += (
        f"\n{dist.kind} over layer {dist.layer}"
        + (f" ({dist.conditioning})" if dist.conditioning else "")
        + ("" if dist.observable else "  [not observable]")
        + "\n"
    )
    out += _table(
        ["alternative", "value"],
        [[label, _sig6(v)] for label, v in zip(dist.labels, dist.values)],
    )
    for w in dist.warnings:
        out += f"# note: {w}\n"
    return out


def cmd_eval(args) -> int:
    try:
        network, events = load_scenario(args.scenario)
    except (OSError, ScenarioFormatError, KnowctxError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    seed = _resolve_seed(args.seed)
    try:
        text = _run_scenario(network, events, seed, args.layer, args.format)
    except KnowctxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME
    _emit(text, args.output)
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        sys.stderr.write(
            f"error: unknown demo {args.name!r}; choose from {', '.join(sorted(DEMOS))}\n"
        )
        return EXIT_USAGE
    network, events = parse_scenario(DEMOS[args.name])
    seed = _resolve_seed(args.seed)
    if args.export is not None:
        save_scenario(args.export, network, events)
    try:
        text = _run_scenario(network, events, seed, args.layer, args.format)
    except KnowctxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# feasibility
# ---------------------------------------------------------------------------


def _feasibility_table(doc: dict) -> str:
    lines = [
        f"# shape: {doc['shape'][0]},{doc['shape'][1]}",
        f"# rule: {doc['rule']}",
        f"# seed: {doc['seed']}",
        f"# generator: {doc['generator']}",
        f"# restarts: {doc['restarts']}",
        "",
        f"verdict: {doc['verdict']}",
        f"reason: {doc['reason']}",
    ]
    if doc["best_residual"] is not None:
        lines.append(f"best residual: {_sig6(doc['best_residual'])}")
    if doc["jacobian_rank"] is not None:
        lines.append(f"jacobian rank at best point: {doc['jacobian_rank']}")
    dof = doc.get("dof")
    if dof is not None:
        lines.append(
            f"dof: {dof['available']} available vs {dof['required']} required "
            f"({dof['unknowns']} unknowns, {dof['conditions']} conditions)"
        )
    if doc.get("independence_check") is not None:
        lines.append(f"sampled independence deviation: {_sig6(doc['independence_check'])}")
    for note in doc.get("notes", ()):
        lines.append(f"note: {note}")
    out = "\n".join(lines) + "\n"
    if doc.get("witness") is not None:
        rows = [
            [f"row {j + 1}"] + [f"{re:+.6g}{im:+.6g}i" for re, im in row]
            for j, row in enumerate(doc["witness"])
        ]
        out += "\nwitness:\n"
        out += _table([""] + [f"col {k + 1}" for k in range(len(doc["witness"][0]))], rows)
    return out


def cmd_feasibility(args) -> int:
    try:
        m, mp = _parse_shape(args.shape)
        shape = ShapeSpec(m, mp)
        rule = GammaModulus(args.gamma)
    except (ValueError, KnowctxError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    seed = _resolve_seed(args.seed)
    try:
        system = build_system(shape, rule, mode=args.mode, samples=args.samples, seed=seed)
        report = solve(system, restarts=args.restarts, seed=seed)
        doc = report.to_dict()
        doc["independence_check"] = None
        if report.witness is not None:
            doc["independence_check"] = sampled_independence_check(
                shape, rule, report.witness, samples=10_000, seed=seed
            )
    except KnowctxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME

    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    elif args.format == "csv":
        keys = [
            "verdict", "reason", "best_residual", "jacobian_rank",
            "restarts", "seed", "mode",
        ]
        lines = ["key,value"] + [f"{k},{doc[k]}" for k in keys]
        text = "\n".join(lines) + "\n"
    else:
        text = _feasibility_table(doc)
    _emit(text, args.output)
    return EXIT_OK if doc["verdict"] == "feasible" else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def _parse_shape(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"shape must be M,M' (two integers), got {text!r}")
    return int(parts[0]), int(parts[1])


def _parse_range(text: str) -> list[int]:
    """Either a:b (inclusive) or a comma list."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(p) for p in text.split(",") if p != ""]


def cmd_scan(args) -> int:
    try:
        m_values = _parse_range(args.m)
        mp_values = _parse_range(args.m_prime)
        gammas = [float(g) for g in args.gammas.split(",") if g != ""]
        if not m_values or not mp_values or not gammas:
            raise ValueError("scan needs at least one M, one M' and one gamma")
        if min(m_values) < 1 or min(mp_values) < 1:
            raise ValueError("shape sizes must be >= 1")
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    seed = _resolve_seed(args.seed)
    try:
        rows = scan_shapes(
            m_values, mp_values, gammas,
            restarts=args.restarts, seed=seed, samples=args.samples,
        )
    except KnowctxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME

    cols = ["m", "m_prime", "gamma", "admissible", "verdict",
            "best_residual", "dof_available", "dof_required"]
    if args.format == "json":
        text = json.dumps(
            {"seed": seed, "restarts": args.restarts, "rows": rows}, indent=2
        ) + "\n"
    elif args.format == "table":
        head = [f"# seed: {seed}", f"# restarts: {args.restarts}", ""]
        body = [
            [
                str(r["m"]), str(r["m_prime"]), _sig6(r["gamma"]),
                "" if r["admissible"] is None else str(r["admissible"]),
                r["verdict"],
                "" if r["best_residual"] is None else _sig6(r["best_residual"]),
                "" if r["dof_available"] is None else str(r["dof_available"]),
                "" if r["dof_required"] is None else str(r["dof_required"]),
            ]
            for r in rows
        ]
        text = "\n".join(head) + _table(cols, body)
    else:
        lines = [",".join(cols)]
        for r in rows:
            lines.append(
                ",".join("" if r[c] is None else repr(r[c]) if isinstance(r[c], float) else str(r[c]) for c in cols)
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# mc
# ---------------------------------------------------------------------------


def cmd_mc(args) -> int:
    try:
        network, _events = load_scenario(args.scenario)
    except (OSError, ScenarioFormatError, KnowctxError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    seed = _resolve_seed(args.seed)
    try:
        table = mc_sample_classical(network, args.trials, seed, layer=args.layer)
    except (KnowctxError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME

    name = network.name or "scenario"
    if args.format == "json":
        sig = table.sigma
        rows = [
            {
                "alternative": label,
                "count": table.counts[i],
                "freq": table.freqs[i],
                "exact": None if table.exact is None else table.exact[i],
                "sigma": None if sig is None else sig[i],
            }
            for i, label in enumerate(table.labels)
        ]
        doc = {
            "scenario": name,
            "seed": seed,
            "generator": table.generator,
            "rule": table.rule_name,
            "trials": table.trials,
            "layer": table.layer,
            "rows": rows,
        }
        text = json.dumps(doc, indent=2) + "\n"
    elif args.format == "csv":
        text = table.to_csv()
    else:
        head = [
            f"# scenario: {name}",
            f"# seed: {seed}",
            f"# generator: {table.generator}",
            f"# trials: {table.trials}",
            "",
        ]
        sig = table.sigma
        body = [
            [
                label,
                str(table.counts[i]),
                _sig6(table.freqs[i]),
                "" if table.exact is None else _sig6(table.exact[i]),
                "" if sig is None else _sig6(sig[i]),
            ]
            for i, label in enumerate(table.labels)
        ]
        text = "\n".join(head) + _table(
            ["alternative", "count", "freq", "exact", "sigma"], body
        )
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(p, seed=True):
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--output", default=None, help="write the report to a file")
    if seed:
        p.add_argument("--seed", type=int, default=None,
                       help="defaults to KNOWCTX_SEED, then 0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knowctx",
        description="Evaluate epistemic context networks and probe probability rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="run a scenario file and print its trace")
    p.add_argument("--scenario", required=True)
    p.add_argument("--layer", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("demo", help="run a built-in scenario")
    p.add_argument("name", help=", ".join(sorted(DEMOS)))
    p.add_argument("--layer", type=int, default=None)
    p.add_argument("--export", default=None, help="also write the scenario JSON here")
    _add_common(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("feasibility", help="attack one (shape, gamma) condition system")
    p.add_argument("--shape", required=True, help="M,M'")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--mode", choices=["polynomial", "sampled"], default=None)
    p.add_argument("--samples", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("scan", help="grid of verdicts over shapes and gammas")
    p.add_argument("--m", required=True, help="range a:b or comma list")
    p.add_argument("--m-prime", required=True, help="range a:b or comma list")
    p.add_argument("--gammas", required=True, help="comma list")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--samples", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("mc", help="Monte Carlo frequency table for a scenario's network")
    p.add_argument("--scenario", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--layer", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except KnowctxError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
