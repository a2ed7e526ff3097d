"""Command line entry point.

    e1dirac check SCENARIO [--seed N] [--tol X] [--points N]
    e1dirac classify SCENARIO [--at 0,0,0 ...]
    e1dirac trace SCENARIO [--at ...] [--steps N] [--dt H] [--t0 T]
    e1dirac poissonize SCENARIO [--at ...] [--t0 T]
    e1dirac catalog [--dump DIR] [--run]

``SCENARIO`` is a file path or ``catalog:NAME``.  Exit status: 0 when every
verdict passes, 1 on a failed verdict, 2 on bad input, 3 when a numerical
step is refused.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional

from .. import __version__
from ..errors import INPUT_ERRORS, NUMERICAL_REFUSALS, DomainError, E1Error, NotIntegrable, ScenarioError
from . import catalog as cat
from .runner import ACTIONS, Options
from .scenario import Scenario, parse_scenario

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3
SIG_DIGITS = 12


def canonical(obj):
    """Round floats to a fixed number of significant digits; map non-finite to strings."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if obj == 0.0:
            return 0.0
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return canonical(obj.item())
    return obj


def dumps(report: dict) -> str:
    return json.dumps(canonical(report), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def load_scenario(ref: str) -> Scenario:
    if ref.startswith("catalog:"):
        name = ref.split(":", 1)[1]
        if name not in cat.CATALOG:
            raise ScenarioError(f"no catalog scenario named {name!r}")
        return cat.get(name)
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {ref!r}: {exc.strerror}") from None
    return parse_scenario(text)


def _error_dict(exc: Exception) -> dict:
    out = {"code": getattr(exc, "code", "error"), "message": str(exc)}
    for attr in ("line", "column"):
        if getattr(exc, attr, None):
            out[attr] = getattr(exc, attr)
    if getattr(exc, "diagnostics", None):
        out["diagnostics"] = exc.diagnostics
    return out


def _exit_for(exc: Exception) -> int:
    if isinstance(exc, NotIntegrable):
        return EXIT_FAIL
    if isinstance(exc, NUMERICAL_REFUSALS + (DomainError,)):
        return EXIT_REFUSED
    return EXIT_INPUT


def run_command(command: str, sc: Scenario, opts: Options) -> dict:
    """Run one action and wrap it in the report envelope."""
    seed = sc.seed if opts.seed is None else opts.seed
    report = {
        "tool": "e1dirac",
        "version": __version__,
        "command": command,
        "scenario": {"name": sc.name, "kind": sc.kind, "coords": list(sc.chart.names),
                     "digest": sc.digest},
        "seed": seed,
    }
    try:
        result, passed = ACTIONS[command](sc, opts)
    except E1Error as exc:
        report["error"] = _error_dict(exc)
        code = _exit_for(exc)
        report["verdict"] = "FAIL" if code == EXIT_FAIL else "ERROR"
        report["exit_code"] = code
        return report
    report["result"] = result
    report["verdict"] = "PASS" if passed else "FAIL"
    report["exit_code"] = EXIT_PASS if passed else EXIT_FAIL
    return report


def run_catalog(opts: Options, commands=("check", "classify", "trace", "poissonize")) -> dict:
    entries = []
    worst = EXIT_PASS
    for name in cat.catalog_names():
        sc = cat.get(name)
        runs = {}
        for command in commands:
            rep = run_command(command, sc, opts)
            runs[command] = {k: rep[k] for k in ("verdict", "exit_code", "result", "error") if k in rep}
        ok = all(r["verdict"] == "PASS" for r in runs.values())
        if sc.expect == "NOT_INTEGRABLE":
            # a failed certificate is the expected outcome for these entries
            ok = runs.get("check", {}).get("result", {}).get("as_expected", False)
        worst = max(worst, EXIT_PASS if ok else EXIT_FAIL)
        entries.append({"name": name, "digest": sc.digest, "expect": sc.expect, "as_expected": ok,
                        "runs": runs})
    return {"tool": "e1dirac", "version": __version__, "command": "catalog",
            "seed": opts.seed if opts.seed is not None else 0, "entries": entries,
            "verdict": "PASS" if worst == EXIT_PASS else "FAIL", "exit_code": worst}


# ---------------------------------------------------------------------------
# human-readable view


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3e}" if v and (abs(v) < 1e-3 or abs(v) >= 1e4) else f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _table(rows: List[tuple]) -> List[str]:
    if not rows:
        return []
    w = max(len(str(r[0])) for r in rows)
    return [f"  {str(k).ljust(w)}  {_fmt(v)}" for k, v in rows]


def render_text(report: dict) -> str:
    lines = [f"e1dirac {report.get('version', '')}  {report['command']}"]
    if "scenario" in report:
        s = report["scenario"]
        lines.append(f"scenario {s['name']} ({s['kind']} on {', '.join(s['coords'])})  seed {report['seed']}")
    if "error" in report:
        e = report["error"]
        where = f" (line {e['line']}, column {e.get('column', 0)})" if "line" in e else ""
        lines.append(f"error [{e['code']}]{where}: {e['message']}")
    res = report.get("result", {})
    cmd = report["command"]
    if cmd == "check" and res:
        c = res["certificate"]
        lines.append(f"verdict {c['verdict']}")
        rows = [("isotropy max", c["isotropy_max"]), ("frame rank min", c["frame_rank_min"]),
                ("T_L max", c["t_max"]), ("closed form gap", c["t_closed_form_gap"])]
        rows += [(f"residual {k}", v) for k, v in sorted(c["residuals"].items())]
        if "model_bracket" in res:
            rows.append(("model bracket max", res["model_bracket"]["max_residual"]))
        lines += _table(rows)
    elif cmd == "classify" and res:
        lines.append(f"  {'point':<28} {'rank':>4} {'bar':>4}  type")
        for r in res["points"]:
            lines.append(f"  {_fmt(r['point']):<28} {r['rank']:>4} {r['bar_rank']:>4}  {r['leaf_type']}")
    elif cmd == "trace" and res:
        lines += _table([("policy", res["policy"]), ("steps taken", res["steps"]),
                         ("status", res["status"]), ("constant rank", res["constant_rank"]),
                         ("constant leaf type", res["constant_leaf_type"]),
                         ("end point", res["samples"][-1]["point"])])
        if res["message"]:
            lines.append(f"  {res['message']}")
    elif cmd == "poissonize" and res:
        t = res["tilde"]
        rows = [("isotropy max", t["isotropy_max"]), ("rank min", t["rank_min"]),
                ("closure residual", t["closure_residual"])]
        if "isomorphism" in res:
            rows += [("anchor residual", res["isomorphism"]["anchor_residual"]),
                     ("bracket residual", res["isomorphism"]["bracket_residual"])]
        if "poisson_residual" in res:
            rows.append(("[L~, L~] max", res["poisson_residual"]))
        for f in res.get("leaf_forms", []):
            rows.append((f"leaf form at {_fmt(f['point'])} ({f['case']})", f["residual"]))
        if "sigma_relation" in res:
            rows.append(("d sigma relation", res["sigma_relation"]))
        lines += _table(rows)
    elif cmd == "catalog" and "entries" in report:
        for e in report["entries"]:
            verdicts = " ".join(f"{k}:{v['verdict']}" for k, v in e["runs"].items())
            lines.append(f"  {e['name']:<20} {'ok  ' if e['as_expected'] else 'BAD '} {verdicts}")
    lines.append(f"{report['verdict']} (exit {report['exit_code']})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument handling


def _point(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="e1dirac", description="Check, classify and trace E1(M)-Dirac structures.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scenario=True):
        if scenario:
            sp.add_argument("scenario", help="scenario file or catalog:NAME")
        sp.add_argument("--seed", type=int, help="sampling seed (default: scenario value)")
        sp.add_argument("--tol", type=float, help="residual tolerance (default: scenario value)")
        sp.add_argument("--points", type=int, help="number of random sample points")
        sp.add_argument("--at", type=_point, action="append", help="point as comma-separated reals; repeatable")
        sp.add_argument("--t0", type=float, help="initial time for time-extended runs")
        sp.add_argument("--steps", type=int, help="trace steps")
        sp.add_argument("--dt", type=float, help="trace step size")
        sp.add_argument("--policy", choices=("cycle", "random"), help="trace direction policy")
        sp.add_argument("--pairs", type=int, default=50, help="random section pairs for bracket checks (the isomorphism check uses at most 10)")
        sp.add_argument("--out", help="write the JSON report to this path")
        sp.add_argument("--format", choices=("text", "json"), default="text", help="stdout format")

    for name, help_ in (("check", "certify integrability"), ("classify", "analyze leaves at points"),
                        ("trace", "trace a leaf"), ("poissonize", "run the M x R checks")):
        common(sub.add_parser(name, help=help_))
    c = sub.add_parser("catalog", help="list, dump or run the built-in scenarios")
    common(c, scenario=False)
    c.add_argument("--dump", metavar="DIR", help="write every scenario file into DIR")
    c.add_argument("--run", action="store_true", help="run every action on every scenario")
    return p


def _emit(report: dict, args) -> None:
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text if args.format == "json" else render_text(report))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    opts = Options(at=args.at, t0=args.t0, steps=args.steps, dt=args.dt, seed=args.seed,
                   tol=args.tol, points=args.points, policy=args.policy, pairs=args.pairs)
    if args.command == "catalog":
        if args.dump:
            os.makedirs(args.dump, exist_ok=True)
            for name, text in cat.CATALOG.items():
                with open(os.path.join(args.dump, f"{name}.scn"), "w", encoding="utf-8") as fh:
                    fh.write(text)
        if args.run:
            report = run_catalog(opts)
            _emit(report, args)
            return report["exit_code"]
        for sc in cat.catalog():
            sys.stdout.write(f"{sc.name:<20} {sc.kind:<20} {sc.description}\n")
        return EXIT_PASS
    try:
        sc = load_scenario(args.scenario)
        if opts.at:
            for p in opts.at:
                if len(p) != sc.chart.dim:
                    raise ScenarioError(f"--at needs {sc.chart.dim} coordinates, got {len(p)}")
    except INPUT_ERRORS as exc:
        report = {"tool": "e1dirac", "version": __version__, "command": args.command,
                  "error": _error_dict(exc), "verdict": "ERROR", "exit_code": EXIT_INPUT}
        _emit(report, args)
        sys.stderr.write(f"e1dirac: {exc}\n")
        return EXIT_INPUT
    report = run_command(args.command, sc, opts)
    _emit(report, args)
    if "error" in report:
        sys.stderr.write(f"e1dirac: {report['error']['message']}\n")
    return report["exit_code"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
