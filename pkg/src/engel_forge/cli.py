"""Command-line interface: analyze, engel, verify, construct.

Exit status is 0 on success, 1 when a verification check fails and 2 on a
usage, parse or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .config import Thresholds, get_thresholds, set_thresholds
from .corpus import construct, find_group, load_corpus, parse_cycles
from .engel import left_engel_subgroup, right_engel_subgroup
from .errors import EngelForgeError
from .structure import (components_and_layer, fitting_series, generalized_fitting_series,
                        nonsoluble_series)
from .subgroups import is_soluble

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    group: str | None = None
    element: str | None = None
    n_values: tuple[int, ...] = ()
    thresholds: Thresholds | None = None
    seed: int = 0
    jobs: int = 1
    output_format: str = "text"


def parse_n_range(text: str) -> tuple[int, ...]:
    """``"3"``, ``"1-5"`` or ``"1,2,4"``."""
    values: set[int] = set()
    try:
        for part in filter(None, (p.strip() for p in text.split(","))):
            lo, sep, hi = part.partition("-")
            if sep:
                values.update(range(int(lo), int(hi) + 1))
            else:
                values.add(int(part))
    except ValueError:
        raise UsageError(f"bad n range {text!r}") from None
    if not values or min(values) < 1:
        raise UsageError("n values must be positive integers")
    return tuple(sorted(values))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for every sampled step")
    p.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
    p.add_argument("--thresholds", default=None,
                   help="override size thresholds, e.g. enumeration=50000,quotient=20000")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="engel-forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="series and parameters of a group")
    p.add_argument("--group", required=True, help="group file path or bundled corpus name")
    _add_common(p)

    p = sub.add_parser("engel", help="right or left Engel subgroup of an element")
    p.add_argument("--group", required=True)
    p.add_argument("--element", required=True, help='cycle notation, e.g. "(1,2)"')
    p.add_argument("--n", default="1", help="Engel length: a value, list or range")
    p.add_argument("--side", choices=("right", "left"), default="right")
    p.add_argument("--method", choices=("closure", "enumerate", "sample"), default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--corpus", default=None, help="directory or file of group files (default: bundled)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--n", default="1-5", help="Engel lengths to sweep")
    p.add_argument("--checks", default=None, help="comma-separated check ids to run")
    p.add_argument("--timings", action="store_true", help="include runtime_ms in reports")
    p.add_argument("--f1-offset", type=int, default=0,
                   help="test mode: shift the nonsoluble-length bound (negative values must produce fails)")
    p.add_argument("--output", default=None, help="write the JSON report here instead of stdout")
    p.add_argument("--replay", default=None, help="re-run the failing witnesses in a saved report")
    _add_common(p)

    p = sub.add_parser("construct", help="emit a group file for a named construction")
    p.add_argument("expression", help='e.g. "wreath_cyclic(alt(5), 2)"')
    p.add_argument("--name", default=None)
    p.add_argument("--output", default=None)
    return parser


def config_from_args(args) -> CliConfig:
    """Validate option combinations before any computation starts."""
    thresholds = Thresholds.from_string(args.thresholds, get_thresholds()) if getattr(args, "thresholds", None) else None
    n_text = getattr(args, "n", None)
    jobs = getattr(args, "jobs", 1)
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if args.command == "engel" and args.side == "left" and args.method == "closure":
        raise UsageError("the closure method applies to right Engel subgroups only")
    if args.command == "verify" and args.replay and (args.jobs != 1 or args.checks):
        raise UsageError("--replay takes no sweep options")
    return CliConfig(args.command, getattr(args, "group", None), getattr(args, "element", None),
                     parse_n_range(n_text) if n_text else (), thresholds, getattr(args, "seed", 0), jobs,
                     getattr(args, "output_format", "text"))


def _series_text(rec) -> str:
    return " < ".join(f"{label}:{H.order}" for label, H in rec.terms)


def cmd_analyze(args, out) -> int:
    gf = find_group(args.group)
    G = gf.group()
    fs = fitting_series(G, args.seed)
    gs = generalized_fitting_series(G, args.seed)
    ns = nonsoluble_series(G, args.seed)
    layer = components_and_layer(G, args.seed)
    data = {
        "group": gf.name,
        "degree": G.degree,
        "order": G.order,
        "soluble": is_soluble(G),
        "fitting_series": fs.orders(),
        "fitting_height": fs.height_or_length,
        "generalized_fitting_series": gs.orders(),
        "generalized_fitting_height": gs.height_or_length,
        "nonsoluble_series": {label: H.order for label, H in ns.terms},
        "nonsoluble_length": ns.height_or_length,
        "components": [Q.order for Q in layer.components],
        "layer_order": layer.layer.order,
        "mode": "exact" if all(m == "exact" for m in (fs.mode, gs.mode, ns.mode, layer.mode)) else "probabilistic",
    }
    if args.output_format == "json":
        out.write(json.dumps(data, indent=2) + "\n")
        return EXIT_OK
    h = fs.height_or_length
    lines = [
        f"group {gf.name}: degree {G.degree}, order {G.order}, {'soluble' if data['soluble'] else 'nonsoluble'}",
        f"Fitting series: {_series_text(fs)}",
        f"h = {h}" if h is not None else "h undefined (series stops below G)",
        f"generalized Fitting series: {_series_text(gs)}",
        f"h* = {gs.height_or_length}",
        f"nonsoluble series: {_series_text(ns)}",
        f"lambda = {ns.height_or_length}",
        f"components: {data['components'] or 'none'} (layer order {layer.layer.order})",
        f"mode: {data['mode']}",
    ]
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_engel(args, out) -> int:
    gf = find_group(args.group)
    G = gf.group()
    g = parse_cycles(args.element, gf.degree)
    fn = right_engel_subgroup if args.side == "right" else left_engel_subgroup
    results = []
    for n in parse_n_range(args.n):
        res = fn(G, g, n, method=args.method, seed=args.seed, label=gf.name)
        results.append({"group": gf.name, "element": g.cycle_string(), "side": args.side, "n": n,
                        "order": res.subgroup.order, "mode": res.mode, "samples_used": res.samples_used,
                        "generators": [s.cycle_string() for s in res.subgroup.generators]})
    if args.output_format == "json":
        out.write(json.dumps(results if len(results) > 1 else results[0], indent=2) + "\n")
    else:
        for r in results:
            word = "R" if r["side"] == "right" else "E"
            out.write(f"{word}_{r['n']}({r['element']}) in {r['group']}: order {r['order']}, mode {r['mode']}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import SuiteConfig, replay, run_suite

    if args.replay:
        doc = json.loads(Path(args.replay).read_text())
        reports = doc.get("reports", doc if isinstance(doc, list) else [doc])
        witnesses = [r["witness"] for r in reports if r.get("witness")]
        replayed = [rep.to_dict() for w in witnesses for rep in replay(w)]
        out.write(json.dumps(replayed, indent=2) + "\n")
        return EXIT_FAIL if any(r["verdict"] == "fail" for r in replayed) else EXIT_OK
    checks = tuple(c.strip() for c in args.checks.split(",")) if args.checks else None
    config = SuiteConfig(n_values=parse_n_range(args.n), seed=args.seed, jobs=args.jobs,
                         f1_offset=args.f1_offset, timings=args.timings, checks=checks)
    result = run_suite(load_corpus(args.corpus), config)
    text = result.dumps()
    if args.output:
        Path(args.output).write_text(text)
    if args.output_format == "json" and not args.output:
        out.write(text)
    else:
        for cid, counts in result.counts.items():
            summary = ", ".join(f"{k} {v}" for k, v in counts.items())
            out.write(f"{cid}: {summary}\n")
        for cid, hist in result.tightness.items():
            out.write(f"{cid} slack histogram (bound - least index): {hist}\n")
        for rep in result.failures:
            out.write(f"FAIL {rep.check_id} {rep.group} {rep.element} n={rep.n} {rep.computed}\n")
    return EXIT_FAIL if result.failures else EXIT_OK


def cmd_construct(args, out) -> int:
    c = construct(args.expression)
    gf = c.to_file(args.name or c.name, provenance=f"construct {args.expression}")
    if args.output:
        gf.save(args.output)
    else:
        out.write(gf.dumps())
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "engel": cmd_engel, "verify": cmd_verify, "construct": cmd_construct}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    previous = get_thresholds()
    try:
        cfg = config_from_args(args)
        if cfg.thresholds is not None:
            set_thresholds(cfg.thresholds)
        return COMMANDS[args.command](args, out)
    except (UsageError, EngelForgeError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        set_thresholds(previous)


if __name__ == "__main__":
    sys.exit(main())
