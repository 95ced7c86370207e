"""Batch runner: execute check suites over random ensembles or matrix files and
write a JSON (or CSV summary) report.

Exit status: 0 when no check emits a fail, 1 when at least one does, 2 for
usage errors, 3 for unreadable matrix files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__, funcat
from .errors import ConfigError, DomainError, InputError, NumericError, PreconditionError
from .matcore import from_json, hermitian
from .theorems.outcome import FAIL
from .theorems.registry import NAMES, TrialConfig, get
from .theorems.runner import Summary, evaluate, run_check, search_counterexample, trial_inputs
from .tolerances import MAJ_BASE, as_dict

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

# which input slots the matrices of a pair fill, per check (default: A, B)
PAIR_SLOTS = {
    "eq2": ("A", "X"),
    "thm2_4": ("A",),
    "prop4_4": ("As",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="eigineq", description=__doc__.splitlines()[0])
    sel = p.add_argument_group("selection")
    sel.add_argument("--suite", action="append", default=[], metavar="NAME", help="check to run (repeatable)")
    sel.add_argument("--all", action="store_true", help="run every registered check")
    sel.add_argument("--list", action="store_true", help="print the check registry and exit")
    t = p.add_argument_group("trials")
    t.add_argument("--trials", type=int, default=200)
    t.add_argument("--dim-min", type=int, default=1)
    t.add_argument("--dim-max", type=int, default=6)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--tol", type=float, default=MAJ_BASE, help="majorization tolerance base (default 1e-8)")
    t.add_argument("--ensemble", default="gue", help="gue | wishart | pd:KAPPA | projections")
    t.add_argument("--alpha", type=float, default=None, help="fix the mixing weight of the log-convexity checks")
    t.add_argument("--func", default=None, help="catalog function name")
    t.add_argument("--relation", choices=["entrywise"], default=None,
                   help="replace the log-majorization of thm3_3 by entrywise dominance")
    t.add_argument("--drop-hypotheses", action="store_true",
                   help="do not enforce the function hypotheses of the checks")
    t.add_argument("--workers", type=int, default=1, help="worker processes per check")
    s = p.add_argument_group("search")
    s.add_argument("--search", default=None, metavar="CHECK", help="counterexample search for CHECK")
    s.add_argument("--search-iters", type=int, default=None, metavar="N", help="search budget (evaluations)")
    io_ = p.add_argument_group("input/output")
    io_.add_argument("--matrices", action="append", default=[], metavar="FILE",
                     help="matrix JSON file (repeatable); matrices are consumed in pairs")
    io_.add_argument("--out", default=None, metavar="PATH", help="report path (default stdout; .csv for a summary)")
    return p


def _config(args):
    if args.all and args.suite:
        raise UsageError("--all and --suite are mutually exclusive")
    for name in args.suite + ([args.search] if args.search else []):
        if name not in NAMES:
            raise UsageError(f"unknown check {name!r}; see --list")
    if args.func is not None and args.func not in funcat.names():
        raise UsageError(f"unknown function {args.func!r}; known: {', '.join(funcat.names())}")
    if args.search_iters is not None and args.search_iters < 1:
        raise UsageError("--search-iters must be >= 1")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    cfg = TrialConfig(
        dims=(args.dim_min, args.dim_max),
        trials=args.trials,
        seed=args.seed,
        ensemble=args.ensemble,
        tol=args.tol,
        alpha=args.alpha,
        func=args.func,
        enforce=not args.drop_hypotheses,
        relation=args.relation,
    )
    try:
        cfg.validate()
    except (ConfigError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    return cfg


def _skip_reason(name, cfg):
    """Why a check cannot run with the requested function (None if it can)."""
    entry = get(name)
    if cfg.func is None or not entry.pool or not cfg.enforce:
        return None
    if not entry.admits(cfg.func):
        return f"{cfg.func} does not satisfy the hypotheses of {name}"
    return None


# ---------------------------------------------------------------------------
# matrix files
# ---------------------------------------------------------------------------

def read_matrices(paths):
    """[(path, matrix)] from files holding one matrix JSON object or a list of them."""
    out = []
    for path in paths:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(path, exc.strerror or str(exc)) from None
        except json.JSONDecodeError as exc:
            raise InputError(path, f"invalid JSON: {exc}") from None
        items = data if isinstance(data, list) else [data]
        for item in items:
            try:
                out.append((path, from_json(item, hermitian_required=False)))
            except DomainError as exc:
                raise InputError(path, str(exc)) from None
    if len(out) % 2:
        raise InputError(paths[-1], f"matrices are consumed in pairs, got {len(out)}")
    return out


def _pair_inputs(name, cfg, index, pair):
    (pa, A), (pb, B) = pair
    if A.shape != B.shape:
        raise InputError(pb, f"pair has orders {A.shape[0]} and {B.shape[0]}")
    slots = PAIR_SLOTS.get(name, ("A", "B"))
    for path, M, slot in ((pa, A, slots[0]), (pb, B, slots[-1] if len(slots) > 1 else "B")):
        if slot != "X":
            try:
                hermitian(M)
            except DomainError as exc:
                raise InputError(path, str(exc)) from None
    inputs = trial_inputs(name, cfg, index, n=A.shape[0])
    if slots == ("As",):
        inputs["As"] = [A, B]
    elif slots == ("A",):
        inputs["A"] = A
    else:
        inputs[slots[0]], inputs[slots[1]] = A, B
    return inputs


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def run(args):
    """Execute a parsed command line; returns (report dict, exit status)."""
    cfg = _config(args)
    suites = list(NAMES) if args.all else list(args.suite)
    search_targets = [args.search] if args.search else ([] if args.search_iters is None else list(suites))
    if args.search and not args.search_iters:
        args.search_iters = 10_000
    if args.search_iters is not None:
        suites = [s for s in suites if s not in search_targets]
    if not suites and not search_targets:
        raise UsageError("nothing to run: give --suite, --all, --search or --list")
    pairs = read_matrices(args.matrices) if args.matrices else None

    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "eigineq", "version": __version__},
        "config": {
            "suites": suites,
            "search": search_targets,
            "search_iters": args.search_iters,
            "trials": cfg.trials,
            "dims": list(cfg.dims),
            "seed": cfg.seed,
            "ensemble": str(cfg.ensemble),
            "alpha": cfg.alpha,
            "func": cfg.func,
            "relation": cfg.relation,
            "enforce_hypotheses": cfg.enforce,
            "matrices": list(args.matrices),
        },
        "tolerances": as_dict(cfg.tol),
        "checks": [],
        "searches": [],
        "skipped": [],
    }
    any_fail = False
    for name in suites:
        reason = _skip_reason(name, cfg)
        if reason:
            report["skipped"].append({"check": name, "reason": reason})
            continue
        if pairs is not None:
            summary = Summary(name)
            records = []
            for i in range(0, len(pairs), 2):
                inputs = _pair_inputs(name, cfg, i // 2, pairs[i:i + 2])
                try:
                    out = evaluate(name, inputs, cfg)
                except (DomainError, NumericError, PreconditionError) as exc:
                    summary.add_error(i // 2, exc)
                    records.append({"pair": i // 2, "error": f"{type(exc).__name__}: {exc}"})
                    continue
                summary.add(i // 2, out)
                records.append({"pair": i // 2, **out.to_dict()})
            entry = summary.to_dict()
            entry["outcomes"] = records
        else:
            summary = run_check(name, cfg, workers=args.workers)
            entry = summary.to_dict()
        entry["probe"] = not get(name).gate
        entry["probe_violations"] = _probe_violations(name, summary)
        any_fail |= summary.fails > 0
        report["checks"].append(entry)
    for name in search_targets:
        reason = _skip_reason(name, cfg)
        if reason:
            report["skipped"].append({"check": name, "reason": reason})
            continue
        res = search_counterexample(name, cfg, budget=args.search_iters)
        report["searches"].append(res.to_dict())
        any_fail |= res.best is not None and res.best.status == FAIL
    report["totals"] = {
        key: sum(c[key] for c in report["checks"])
        for key in ("trials", "passes", "fails", "inconclusives", "errors")
    }
    report["totals"]["probe_violations"] = sum(c["probe_violations"] for c in report["checks"])
    report["status"] = "fail" if any_fail else "pass"
    return report, EXIT_FAIL if any_fail else EXIT_OK


def _probe_violations(name, summary):
    if get(name).gate or summary.worst is None:
        return 0
    return summary.inconclusives


def to_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "trials", "passes", "fails", "inconclusives", "errors", "min_margin", "min_slack"])
    for c in report["checks"]:
        w.writerow([c["check"], c["trials"], c["passes"], c["fails"], c["inconclusives"], c["errors"],
                    repr(c["min_margin"]), repr(c["min_slack"])])
    for s in report["searches"]:
        best = s["best"] or {}
        w.writerow([f"search:{s['check']}", s["evaluations"], "", int(best.get("status") == FAIL), "", "",
                    repr(best.get("margin")), ""])
    return buf.getvalue()


def write_report(report, path):
    if path is not None and path.endswith(".csv"):
        text = to_csv(report)
    else:
        text = json.dumps(report, indent=1, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.list:
            for name in NAMES:
                print(name)
            return EXIT_OK
        report, status = run(args)
    except UsageError as exc:
        print(f"eigineq: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"eigineq: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    write_report(report, args.out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
