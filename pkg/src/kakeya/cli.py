"""Command line entry point: ``kakeya <command> [options]``.

Primary output (JSON or CSV) goes to stdout or ``--out``; a run manifest
describing how to reproduce it goes to ``--manifest`` (default
``<out>.manifest.json``, or stderr when writing to stdout).

Exit codes: 0 success, 1 invariant failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import sys
import time
from pathlib import Path

from . import __version__
from ._parallel import default_workers
from .bounds import BoundError, alpha_root, bound_table
from .entropy import DistributionError, JointDist, cond_entropy, entropy, marginal, shearer_check
from .ratios import RatioError, RSet, witness_replay
from .search import SearchConfig, search_lower_bound

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# -- commands ---------------------------------------------------------------

def cmd_entropy(args) -> tuple[str, int, dict]:
    try:
        D = JointDist.from_json(_read(args.dist))
    except DistributionError as exc:
        raise UsageError(f"{args.dist}: {exc}") from None
    k = D.dim
    report = {
        "dim": k,
        "atoms": len(D),
        "H": entropy(D),
        "marginals": [entropy(marginal(D, [i])) for i in range(k)],
        "conditionals": [
            {"a": i, "b": j, "H": cond_entropy(D, [i], [j])}
            for i, j in itertools.permutations(range(k), 2)
        ],
    }
    if k >= 2:
        family = [list(F) for F in itertools.combinations(range(k), k - 1)]
        rep = shearer_check(D, family, k - 1)
        report["shearer"] = {"family": family, "t": k - 1, "lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds}
    ok = report.get("shearer", {}).get("holds", True)
    return _dumps(report), EXIT_OK if ok else EXIT_FAIL, {"dist": args.dist}


def _search_config(args) -> SearchConfig:
    cfg = SearchConfig()
    if args.config:
        try:
            cfg = SearchConfig.from_toml(_read(args.config))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"{args.config}: {exc}") from None
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.restarts is not None:
        over["restarts"] = args.restarts
    if args.max_iters is not None:
        over["max_iters"] = args.max_iters
    if over:
        cfg = SearchConfig(**{**cfg.to_dict(), **over})
    return cfg


def cmd_beta_search(args) -> tuple[str, int, dict]:
    try:
        R = RSet.parse(args.rset)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--rset: {exc}") from None
    cfg = _search_config(args)
    try:
        bound = search_lower_bound(R, cfg, args.functional, workers=args.workers)
    except (RatioError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    witness_replay(bound)
    if args.verbose:
        print(f"best {args.functional} ratio {bound.value:.12f} (restart {bound.extra['restart']})", file=sys.stderr)
    return _dumps(bound.to_dict()), EXIT_OK, {"rset": args.rset, "functional": args.functional, "search": cfg.to_dict()}


def cmd_bound_table(args) -> tuple[str, int, dict]:
    if args.beta.strip().lower() == "alpha":
        beta = alpha_root().value
    else:
        try:
            beta = float(args.beta)
        except ValueError:
            raise UsageError(f"--beta: expected a number or 'alpha', got {args.beta!r}") from None
    try:
        rows = bound_table(beta, args.d_max)
    except BoundError as exc:
        raise UsageError(str(exc)) from None
    if args.verbose:
        for r in rows:
            flag = f"  [{r['note']}]" if r["note"] else ""
            print(f"d={r['d']:2d}  beta_out={r['beta_out']:.12f}  mink={r['mink_factor']:.12f}{flag}", file=sys.stderr)
    if args.format == "json":
        text = _dumps(rows)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d", "beta_in", "delta", "beta_out", "mink_factor"])
        for r in rows:
            w.writerow([r["d"], repr(r["beta_in"]), repr(r["delta"]), repr(r["beta_out"]), repr(r["mink_factor"])])
        text = buf.getvalue()
    return text, EXIT_OK, {"beta": args.beta, "d_max": args.d_max, "format": args.format}


def _parse_tols(items):
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(val)
        except ValueError:
            raise UsageError(f"--tol {name}: {val!r} is not a number") from None
    return out


def cmd_verify(args) -> tuple[str, int, dict]:
    from .verify import run_verify

    seed = 0 if args.seed is None else args.seed
    try:
        report = run_verify(args.suite, seed=seed, workers=args.workers, p_cap=args.p_cap,
                            tolerances=_parse_tols(args.tol))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.verbose:
        for r in report["results"]:
            mark = "PASS" if r["passed"] else "FAIL"
            print(f"{mark}  {r['suite']:9s} {r['invariant']:26s} cases={r['cases']}", file=sys.stderr)
    return _dumps(report), EXIT_OK if report["passed"] else EXIT_FAIL, {
        "suite": args.suite, "p_cap": args.p_cap, "tol": args.tol or []}


def cmd_pipeline(args) -> tuple[str, int, dict]:
    from .sets import TypicalSetParams, section4_pipeline

    try:
        D = JointDist.from_json(_read(args.dist))
        R = RSet.parse(args.rset)
        rep = section4_pipeline(D, R, TypicalSetParams(args.n, args.eps), args.p, args.gamma,
                                seed=0 if args.seed is None else args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = all(rep["checks"].values()) if rep["checks"] else True
    return _dumps(rep), EXIT_OK if ok else EXIT_FAIL, {"dist": args.dist, "rset": args.rset}


def cmd_replay(args) -> tuple[str, int, dict]:
    try:
        manifest = json.loads(_read(args.manifest))
        argv = manifest["argv"]
        digest = manifest["output_sha256"]
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{args.manifest}: malformed manifest ({exc})") from None
    inner = _fill_defaults(build_parser().parse_args(argv))
    text, code, _ = COMMANDS[inner.command](inner)
    new = hashlib.sha256(text.encode()).hexdigest()
    same = new == digest
    out = _dumps({"manifest": args.manifest, "recorded": digest, "replayed": new, "identical": same})
    return out, EXIT_OK if same else EXIT_FAIL, {"manifest": args.manifest}


COMMANDS = {
    "entropy": cmd_entropy,
    "beta-search": cmd_beta_search,
    "bound-table": cmd_bound_table,
    "verify": cmd_verify,
    "pipeline": cmd_pipeline,
    "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="u64 seed for every random choice")
    common.add_argument("--workers", type=int, default=default_workers())
    common.add_argument("--out", help="write primary output here instead of stdout")
    common.add_argument("--manifest", help="run manifest path (default: <out>.manifest.json or stderr)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--verbose", "-v", action="store_true", help="human-readable tables on stderr")

    p = argparse.ArgumentParser(prog="kakeya", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("entropy", parents=[common], help="entropy report for a distribution file")
    s.add_argument("dist")

    s = sub.add_parser("beta-search", parents=[common], help="search for a lower-bound witness")
    s.add_argument("--rset", required=True, help='e.g. "0,1" or "0:0,1:0,0:1,1:1"')
    s.add_argument("--config", help="TOML search config")
    s.add_argument("--functional", choices=("kakeya", "homogeneous", "gap"), default="kakeya")
    s.add_argument("--restarts", type=int)
    s.add_argument("--max-iters", type=int)

    s = sub.add_parser("bound-table", parents=[common], help="product bounds for d = 1..d_max")
    s.add_argument("--beta", required=True, help="a number in (1, 2] or 'alpha'")
    s.add_argument("--d-max", type=int, default=8)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    s.add_argument("--suite", choices=("entropy", "bounds", "ratios", "fourier", "pipeline", "all"), default="all")
    s.add_argument("--p-cap", type=int, default=101)
    s.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance")

    s = sub.add_parser("pipeline", parents=[common], help="run the F_p reduction on a distribution")
    s.add_argument("dist")
    s.add_argument("--rset", required=True)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--p", type=int, default=2003)
    s.add_argument("--gamma", type=float, default=None)

    s = sub.add_parser("replay", parents=[common], help="re-run a manifest and compare output digests")
    s.add_argument("manifest")
    return p


def _fill_defaults(args):
    if args.format is None:
        args.format = "csv" if args.command == "bound-table" else "json"
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    _fill_defaults(args)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        text, code, config = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    wall = time.perf_counter() - t0

    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    manifest = {
        "command": args.command,
        "argv": argv,
        "config": config,
        "seed": args.seed,
        "tool_version": __version__,
        "wall_time_s": round(wall, 3),
        "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }
    if args.command != "replay":
        dest = args.manifest or (args.out + ".manifest.json" if args.out else None)
        if dest:
            Path(dest).write_text(_dumps(manifest))
        else:
            print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
