"""Command-line front end.

Subcommands:
    upper          refined upper bound for one exponent pair
    lower          trial-field lower bound
    rough          closed-form rough upper bound
    asymptotics    closed-form large-p lower bound and its asymptote
    limits         p-th roots of the rough bounds along a list of p values
    verify-tables  recompute published table rows and compare
    oracle         randomized spectral cross-checks

Exit codes: 0 success, 2 regime/argument error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from .envelopes import ProblemParams, envelope_max
from .errors import NsconstError, OutOfRegimeError
from .flatsums import k_flat, thread_count
from .lower import (
    TrialParams,
    asymptote_log,
    asymptotic_lower,
    asymptotic_lower_log,
    g_lower_eval,
    g_lower_optimize,
    k_lower_combined,
    limit_probe,
)
from .reports import (
    cache_get,
    cache_put,
    emit,
    job_key,
    lower_report_dict,
    report_json,
    upper_report_dict,
)
from .rounding import sig_str
from .tables import (
    ARB_ANCHOR_52,
    ENVELOPE_C_ANCHORS,
    REL_FARFIELD,
    REL_FLAT,
    TABLE_C,
    TABLE_D,
    TABLE_E,
    TABLE_F,
    desk_rows,
)
from .upper import TruncationConfig, rough_upper, rough_upper_root, upper_bound


@dataclass
class JobConfig:
    command: str
    kind: str
    p: float
    n: float
    d: int
    rho: float | None = None
    mu: float = 2.0
    m: int = 6
    threads: int | None = None
    use_cache: bool = True
    use_symmetry: bool = True

    def params(self) -> ProblemParams:
        return ProblemParams(self.p, self.n, self.d)

    def settings(self) -> dict:
        return {
            "command": self.command,
            "kind": self.kind,
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "rho": self.rho,
            "mu": self.mu,
            "m": self.m,
            "no_symmetry": not self.use_symmetry,
        }


def _add_common(sp: argparse.ArgumentParser, need_p: bool = True) -> None:
    sp.add_argument("--kind", required=True, choices=["K", "G"])
    if need_p:
        sp.add_argument("--p", required=True, type=float)
    sp.add_argument("--n", required=True, type=float)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--json", metavar="PATH", help="write the JSON report here")
    sp.add_argument("--csv", metavar="PATH", help="write the CSV row here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nsconst", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    up = sub.add_parser("upper", help="refined upper bound")
    _add_common(up)
    up.add_argument("--rho", required=True, type=float)
    up.add_argument("--mu", type=float, default=2.0)
    up.add_argument("--order", "-m", type=int, default=6, dest="m")
    up.add_argument("--threads", type=int)
    up.add_argument(
        "--no-symmetry",
        action="store_true",
        help="scan every frequency instead of one per symmetry orbit (cross-check)",
    )
    up.add_argument("--no-cache", action="store_true")
    up.add_argument("--cache-dir", metavar="DIR")

    lo = sub.add_parser("lower", help="trial-field lower bound")
    _add_common(lo)
    lo.add_argument("--no-cache", action="store_true")
    lo.add_argument("--cache-dir", metavar="DIR")

    ro = sub.add_parser("rough", help="closed-form rough upper bound")
    _add_common(ro)
    ro.add_argument("--log-domain", action="store_true", help="report logarithms only")

    asym = sub.add_parser("asymptotics", help="closed-form large-p lower bound")
    _add_common(asym)
    asym.add_argument("--log-domain", action="store_true", help="report logarithms only")

    lim = sub.add_parser("limits", help="p-th roots of the bounds along p")
    lim.add_argument("--kind", required=True, choices=["K", "G"])
    lim.add_argument("--n", required=True, type=float)
    lim.add_argument("--d", type=int, default=3)
    lim.add_argument("--p-list", default="100,1000,10000,100000")

    ver = sub.add_parser("verify-tables", help="recompute published rows and compare")
    ver.add_argument("--selection", choices=["desk", "extended"], default="desk")
    ver.add_argument(
        "--tables", default="C,D,E,F", help="comma list from C,D,E,F,anchors"
    )
    ver.add_argument("--threads", type=int)

    orc = sub.add_parser("oracle", help="randomized spectral cross-checks")
    orc.add_argument("--d", type=int, default=3)
    orc.add_argument("--samples", type=int, default=50)
    orc.add_argument("--seed", type=int, default=0)
    return ap


def _finish(report: dict, args) -> None:
    sys.stdout.write(report_json(report))
    if getattr(args, "json", None):
        emit(report, "json", args.json)
    if getattr(args, "csv", None):
        emit(report, "csv", args.csv)


def cmd_upper(args) -> int:
    if args.cache_dir:
        os.environ["NSCONST_CACHE_DIR"] = args.cache_dir
    cfg = JobConfig(
        "upper", args.kind, args.p, args.n, args.d, args.rho, args.mu, args.m,
        args.threads, not args.no_cache, not args.no_symmetry,
    )
    key = job_key(cfg.settings())
    report = cache_get(key) if cfg.use_cache else None
    if report is None:
        res = upper_bound(
            args.kind,
            cfg.params(),
            TruncationConfig(args.rho, args.mu, args.m),
            threads=args.threads,
            use_symmetry=cfg.use_symmetry,
        )
        report = upper_report_dict(res, thread_count(args.threads))
        if cfg.use_cache:
            cache_put(key, report)
    _finish(report, args)
    return 0


def cmd_lower(args) -> int:
    if args.cache_dir:
        os.environ["NSCONST_CACHE_DIR"] = args.cache_dir
    cfg = JobConfig("lower", args.kind, args.p, args.n, args.d, use_cache=not args.no_cache)
    key = job_key(cfg.settings())
    report = cache_get(key) if cfg.use_cache else None
    if report is None:
        params = cfg.params()
        res = k_lower_combined(params) if args.kind == "K" else g_lower_optimize(params)
        report = lower_report_dict(res, 1)
        if cfg.use_cache:
            cache_put(key, report)
    _finish(report, args)
    return 0


def cmd_rough(args) -> int:
    from .upper import rough_upper_log

    params = ProblemParams(args.p, args.n, args.d)
    result = {
        "log_rough_upper": rough_upper_log(args.kind, params),
        "pth_root": rough_upper_root(args.kind, params),
    }
    if not args.log_domain:
        result = {"rough_upper": rough_upper(args.kind, params), **result}
    report = {
        "meta": {"kind": args.kind, "p": args.p, "n": args.n, "d": args.d,
                 "version": __version__},
        "result": result,
    }
    _finish(report, args)
    return 0


def cmd_asymptotics(args) -> int:
    params = ProblemParams(args.p, args.n, args.d)
    lg = asymptotic_lower_log(args.kind, params)
    result = {
        "log_lower": lg,
        "pth_root": math.exp(lg / args.p),
        "asymptote_ratio": math.exp(lg - asymptote_log(args.kind, params)),
    }
    if not args.log_domain:
        result = {"lower": asymptotic_lower(args.kind, params), **result}
    report = {
        "meta": {"kind": args.kind, "p": args.p, "n": args.n, "d": args.d,
                 "version": __version__},
        "result": result,
    }
    _finish(report, args)
    return 0


def cmd_limits(args) -> int:
    p_list = [float(tok) for tok in args.p_list.split(",") if tok]
    rows = limit_probe(args.kind, args.n, args.d, p_list)
    print(f"# kind={args.kind} n={args.n} d={args.d}")
    print("p,lower_root,upper_root")
    for p, lo, hi in rows:
        print(f"{p:g},{lo:.6f},{hi:.6f}")
    return 0


def cmd_oracle(args) -> int:
    from .checks import run_spectral_checks

    failed = 0
    for res in run_spectral_checks(args.d, args.samples, args.seed):
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {res.name}: worst deviation {res.worst:.3e} (tol {res.tol:g})")
        failed += 0 if res.passed else 1
    return 3 if failed else 0


# -- table verification -------------------------------------------------------


def _close(a: float, b: float, rel: float) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b))


class _Verifier:
    def __init__(self) -> None:
        self.failures = 0
        self.passes = 0

    def check(self, where: str, field: str, ok: bool, expected, got) -> None:
        if ok:
            self.passes += 1
            print(f"[PASS] {where} {field}")
        else:
            self.failures += 1
            print(f"[FAIL] {where} {field}: expected {expected}, got {got}")


def _verify_upper_rows(kind: str, rows, vf: _Verifier, threads: int | None) -> None:
    from .lattice import canonicalize

    for row in rows:
        params = ProblemParams(float(row.p), float(row.n), 3)
        cfg = TruncationConfig(row.rho, 2.0, 6)
        rep = upper_bound(kind, params, cfg, threads=threads)
        where = f"table {'C' if kind == 'K' else 'D'} ({row.p},{row.n}) rho={row.rho:g}"
        vf.check(where, "max_flat", _close(rep.ball_max, row.max_flat, REL_FLAT),
                 row.max_flat, rep.ball_max)
        vf.check(where, "kmax", rep.ball_argmax == canonicalize(row.kmax),
                 canonicalize(row.kmax), rep.ball_argmax)
        vf.check(where, "delta", _close(rep.tail_delta, row.delta, REL_FLAT),
                 row.delta, rep.tail_delta)
        vf.check(where, "farfield", _close(rep.farfield, row.farfield, REL_FARFIELD),
                 row.farfield, rep.farfield)
        vf.check(where, "final", sig_str(rep.final_bound) == row.final,
                 row.final, sig_str(rep.final_bound))


def _verify_table_e(vf: _Verifier) -> None:
    from .lower import k_family_sup, k_lower_simple
    from .rounding import round_sig

    for row in TABLE_E:
        params = ProblemParams(float(row.p), float(row.n), 3)
        where = f"table E ({row.p},{row.n})"
        simple = round_sig(k_lower_simple(params), 3, "down")
        fam = round_sig(k_family_sup(params)[0], 3, "down")
        combined = k_lower_combined(params)
        vf.check(where, "simple", sig_str(simple) == row.simple, row.simple, sig_str(simple))
        vf.check(where, "family", sig_str(fam) == row.family, row.family, sig_str(fam))
        vf.check(where, "combined", sig_str(combined.value) == row.combined,
                 row.combined, sig_str(combined.value))


def _verify_table_f(vf: _Verifier) -> None:
    from .rounding import round_sig

    for row in TABLE_F:
        params = ProblemParams(float(row.p), float(row.n), 3)
        where = f"table F ({row.p},{row.n})"
        at_point = g_lower_eval(params, TrialParams(*row.theta))
        vf.check(where, "value_at_point", sig_str(round_sig(at_point, 3, "down")) == row.value,
                 row.value, sig_str(round_sig(at_point, 3, "down")))
        best = g_lower_optimize(params)
        vf.check(where, "optimized>=printed", best.raw_value >= float(row.value),
                 f">= {row.value}", best.raw_value)


def _verify_anchors(vf: _Verifier) -> None:
    a = ARB_ANCHOR_52
    params = ProblemParams(float(a["p"]), float(a["n"]), 3)
    got = k_flat(a["k"], params, a["rho"])
    vf.check("high-precision anchor (5,2) rho=50", "flat(2,1,0)",
             abs(got - a["value"]) <= a["abs_tol"], a["value"], got)
    for (p, n), expected in ENVELOPE_C_ANCHORS.items():
        env = envelope_max(ProblemParams(float(p), float(n), 3), "C")
        vf.check(f"envelope C ({p},{n})", "value", _close(env.value, expected, REL_FLAT),
                 expected, env.value)


def cmd_verify_tables(args) -> int:
    wanted = {tok.strip().upper() for tok in args.tables.split(",") if tok.strip()}
    vf = _Verifier()
    if "C" in wanted:
        rows = desk_rows(TABLE_C) if args.selection == "desk" else TABLE_C
        _verify_upper_rows("K", rows, vf, args.threads)
    if "D" in wanted:
        rows = desk_rows(TABLE_D) if args.selection == "desk" else TABLE_D
        _verify_upper_rows("G", rows, vf, args.threads)
    if "E" in wanted:
        _verify_table_e(vf)
    if "F" in wanted:
        _verify_table_f(vf)
    if "ANCHORS" in wanted or args.selection == "extended":
        _verify_anchors(vf)
    print(f"# {vf.passes} passed, {vf.failures} failed")
    return 3 if vf.failures else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "upper": cmd_upper,
        "lower": cmd_lower,
        "rough": cmd_rough,
        "asymptotics": cmd_asymptotics,
        "limits": cmd_limits,
        "verify-tables": cmd_verify_tables,
        "oracle": cmd_oracle,
    }
    try:
        return handlers[args.command](args)
    except OutOfRegimeError as exc:
        print(f"error: out of regime: {exc}", file=sys.stderr)
        return 2
    except NsconstError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
