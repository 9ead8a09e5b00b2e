"""Command line entry point.

Exit status: 0 all hard checks pass, 1 a hard check failed, 2 only
informational checks (conjecture verdicts) failed, 3 configuration or cache
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from .errors import ChecksumError, ConfigError, MissingCacheError, SchemaError, ZetaPfracError
from .numkernel import PrecisionContext

EXIT_OK, EXIT_FAIL, EXIT_INFO, EXIT_CONFIG = 0, 1, 2, 3
DEFAULT_CACHE = "zetapfrac_zeros.csv"
DEFAULT_POINTS = ("2,0", "2,2", "1,10", "6,3")
MONOTONE_TS = (0.0, 5.0, 14.2, 30.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _num(x):
    """JSON-safe float (inf and nan become strings)."""
    v = float(x)
    if math.isfinite(v):
        return v
    return str(v)


def _fmt(x) -> str:
    return repr(float(x))


def _cfmt(z) -> str:
    return str(complex(z)).strip("()")


def _parse_point(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse point {text!r}") from exc
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise ConfigError(f"points are given as RE,IM, got {text!r}")
    return complex(parts[0], parts[1])


def _cache_path(args) -> Path:
    if args.cache:
        return Path(args.cache)
    return Path(os.environ.get("ZETAPFRAC_CACHE", DEFAULT_CACHE))


def _ctx(args) -> PrecisionContext:
    if not 10 <= args.digits <= 200:
        raise ConfigError("--digits must lie in 10..200")
    return PrecisionContext(digits=args.digits)


def _load(args, ctx, need: int | None = None):
    from .zero_table import load_cache

    path = _cache_path(args)
    if not path.exists():
        raise MissingCacheError(f"no zero cache at {path}; run the 'zeros' subcommand first")
    cache = load_cache(path, ctx)
    if need is not None and need > len(cache):
        raise MissingCacheError(f"cache {path} holds {len(cache)} zeros, {need} needed")
    return cache


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def cmd_zeros(args, ctx) -> tuple[int, str]:
    from .coefficients import fill_coefficients
    from .zero_table import locate_zeros, save_cache

    if args.n < 1:
        raise ConfigError("--n must be positive")
    cache = locate_zeros(n=args.n, ctx=ctx, workers=args.workers)
    cache = fill_coefficients(cache, ctx)
    path = save_cache(cache, _cache_path(args), ctx)
    report = {"count": len(cache), "digits": ctx.digits, "path": str(path), "t_max": _num(cache.t_max)}
    return EXIT_OK, _dump(report)


def cmd_coeffs(args, ctx) -> tuple[int, str]:
    from .coefficients import build_coefficient_set, fill_coefficients
    from .zero_table import save_cache

    cache = _load(args, ctx)
    if any(r.c_imag is None for r in cache.records):
        cache = fill_coefficients(cache, ctx)
        save_cache(cache, _cache_path(args), ctx)
    n = min(args.n, len(cache))
    cs = build_coefficient_set(cache, args.W, n, ctx)
    k = cs.constants
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "index", "value"])
        w.writerow(["real", 0, _fmt(cs.c0)])
        for i, v in sorted(cs.c_real.items()):
            w.writerow(["real", i, _fmt(v)])
        for i, v in sorted(cs.c_imag.items()):
            w.writerow(["imag", i, _fmt(v)])
        return EXIT_OK, buf.getvalue()
    report = {
        "c0": _num(cs.c0),
        "c_real": {str(i): _num(v) for i, v in cs.c_real.items()},
        "c_imag": {str(i): _num(v) for i, v in cs.c_imag.items()},
        "constants": {
            "N": k.N, "A": _num(k.A), "B": _num(k.B), "C": _num(k.C),
            "A_tail": _num(k.A_tail), "B_tail": _num(k.B_tail), "C_tail": _num(k.C_tail),
            "decay_K": _num(k.fit.K), "decay_p": _num(k.fit.p), "decay_stderr": _num(k.fit.stderr),
        },
    }
    return EXIT_OK, _dump(report)


def _truncation(args):
    from .partial_fraction import ExpansionTruncation

    try:
        return ExpansionTruncation(W=args.W, N=args.n, d=args.d, alpha=args.alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_verify(args, ctx) -> tuple[int, str]:
    from .partial_fraction import classify, delta_eval

    trunc = _truncation(args)
    cache = _load(args, ctx, trunc.N)
    points = [_parse_point(p) for p in (args.s or DEFAULT_POINTS)]
    rows, status = [], EXIT_OK
    for s in points:
        dv = delta_eval(s, trunc, cache, ctx)
        region = classify(s, trunc, cache, ctx)
        dabs, budget = abs(dv.delta), dv.budget
        if not dabs <= budget:
            status = EXIT_FAIL
        rows.append({
            "s_re": _fmt(s.real), "s_im": _fmt(s.imag), "region": str(region),
            "f": _cfmt(dv.f.to_mpc()), "p": _cfmt(dv.p.to_mpc()),
            "delta_abs": _fmt(dabs), "tail_budget": _fmt(budget),
        })
    cols = ["s_re", "s_im", "region", "f", "p", "delta_abs", "tail_budget"]
    if args.format == "json":
        return status, _dump(rows)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return status, buf.getvalue()


def cmd_audit(args, ctx) -> tuple[int, str]:
    from .contour_audit import exponent_estimates

    if not 0 < args.alpha < 0.5:
        raise ConfigError("--alpha must lie in (0, 1/2)")
    cache = _load(args, ctx, args.n)
    report = exponent_estimates(args.n, args.alpha, cache, ctx, workers=args.workers)
    status = EXIT_OK if all(v.holds for v in report.verdicts.values()) else EXIT_INFO
    return status, _dump(report.to_dict())


def cmd_monotone(args, ctx) -> tuple[int, str]:
    from .asymptotics_monotonicity import (
        ProductDescriptor,
        complete_monotone_check,
        sin_product_decrease,
        xi_monotone_profile,
    )

    cache = _load(args, ctx, args.n)
    desc = ProductDescriptor.from_zeros(cache, args.n, ctx)
    v_grid = [0.01 + 0.08 * i for i in range(50)]
    x_grid = [0.02 + 0.039 * i for i in range(50)]
    report = {
        "xi_increasing": {str(t): xi_monotone_profile(t, v_grid, ctx) for t in MONOTONE_TS},
        "sin_product_decreasing": {str(t): sin_product_decrease(4, desc, t, x_grid, ctx) for t in MONOTONE_TS},
    }
    table = complete_monotone_check(desc, 3, 1, 0.1, 4, ctx, tol=1e-10)
    report["complete_monotone"] = [{"j": r.j, "value": _num(r.value), "ok": r.ok} for r in table]
    bad = any(report["xi_increasing"].values()) or any(report["sin_product_decreasing"].values())
    bad = bad or not all(r.ok for r in table)
    return (EXIT_FAIL if bad else EXIT_OK), _dump(report)


def cmd_laplace(args, ctx) -> tuple[int, str]:
    from .laplace_density import DensityConfig, transform_residual

    s = _parse_point(args.s[0] if args.s else "2,0")
    cache = _load(args, ctx, args.n)
    try:
        config = DensityConfig(N=args.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    res = transform_residual(s, config, cache, ctx)
    status = EXIT_OK if res.residual <= res.budget else EXIT_FAIL
    return status, _dump({k: _num(v) for k, v in res.to_dict().items()})


def cmd_all(args, ctx) -> tuple[int, str]:
    outdir = Path(args.out or "zetapfrac_reports")
    outdir.mkdir(parents=True, exist_ok=True)
    steps = []
    if not _cache_path(args).exists():
        steps.append(("zeros", cmd_zeros, "zeros.json"))
    steps += [
        ("coeffs", cmd_coeffs, "coeffs.json"),
        ("verify-expansion", cmd_verify, "verify_expansion.csv"),
        ("audit-conjectures", cmd_audit, "audit.json"),
        ("monotone-check", cmd_monotone, "monotone.json"),
        ("laplace-check", cmd_laplace, "laplace.json"),
    ]
    worst, summary = EXIT_OK, {}
    for name, fn, fname in steps:
        sub = argparse.Namespace(**vars(args))
        sub.format = "csv" if fname.endswith(".csv") else "json"
        code, text = fn(sub, ctx)
        (outdir / fname).write_text(text)
        summary[name] = code
        if code == EXIT_FAIL or (code == EXIT_INFO and worst == EXIT_OK):
            worst = code
    return worst, _dump({"exit": summary, "reports": str(outdir)})


COMMANDS = {
    "zeros": cmd_zeros,
    "coeffs": cmd_coeffs,
    "verify-expansion": cmd_verify,
    "audit-conjectures": cmd_audit,
    "monotone-check": cmd_monotone,
    "laplace-check": cmd_laplace,
    "all": cmd_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=30, help="working precision in decimal digits")
    common.add_argument("--n", type=int, default=100, help="number of zeros")
    common.add_argument("--alpha", type=float, default=0.25, help="disk factor for the imaginary poles")
    common.add_argument("--d", type=float, default=2.0, help="disk radius for the real poles")
    common.add_argument("--W", type=int, default=50, help="real pole cutoff")
    common.add_argument("--cache", default=None, help=f"zero cache CSV (default $ZETAPFRAC_CACHE or {DEFAULT_CACHE})")
    common.add_argument("--out", default=None, help="output file (directory for 'all'); stdout if omitted")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--s", action="append", default=None, help="evaluation point RE,IM (repeatable)")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    parser = _Parser(prog="zetapfrac", description="Partial fraction checks for 1/(sin(pi s/4) 2 xi(1/2 + s)).")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        subs.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = _ctx(args)
        if args.workers < 1:
            raise ConfigError("--workers must be positive")
        code, text = COMMANDS[args.command](args, ctx)
    except (ConfigError, MissingCacheError, SchemaError, ChecksumError) as exc:
        print(f"zetapfrac: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ZetaPfracError as exc:
        print(f"zetapfrac: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.command == "all":
        sys.stdout.write(text)
    else:
        _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
