"""Ordinates of the nontrivial zeros on the critical line, gaps, and zeta' there.

Zeros are located as sign changes of Xi(t) = xi(1/2 + i t) on a uniform grid.
The coarse scan uses the double precision Hardy Z kernel (same sign pattern as
-Xi); every bracket is confirmed and refined with the extended-precision Xi.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from mpmath import libmp

from . import kernels
from .errors import (
    ChecksumError,
    MissedZeroWarning,
    PrecisionWarning,
    SchemaError,
    SimpleZeroViolation,
)
from .numkernel import DEFAULT_CONTEXT, ComplexValue, PrecisionContext, complex_derivative, zeta_mpc
from .xi_core import big_xi

__all__ = [
    "ZeroRecord",
    "ZeroCache",
    "locate_zeros",
    "scan_brackets",
    "gap_stats",
    "zeta_prime_at_zero",
    "cache_io",
    "save_cache",
    "load_cache",
    "smooth_zero_count",
    "CSV_HEADER",
    "SCHEMA_VERSION",
]

CSV_HEADER = ["k", "gamma", "delta", "delta_prime", "zetap_re", "zetap_im", "c_imag"]
SCHEMA_VERSION = 1
DEFAULT_STEP = 0.05


@dataclass(frozen=True)
class ZeroRecord:
    k: int
    gamma: object
    delta: object
    delta_prime: object
    zeta_prime: ComplexValue | None = None
    c_imag: object | None = None


@dataclass(frozen=True)
class ZeroCache:
    """Ordered zero records, complete on (0, t_max]."""

    records: tuple
    digits: int
    t_max: object

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def record(self, k: int) -> ZeroRecord:
        if not 1 <= k <= len(self.records):
            raise IndexError(f"zero index {k} outside 1..{len(self.records)}")
        return self.records[k - 1]

    def gamma(self, k: int):
        """gamma_k, with gamma_{-k} = -gamma_k."""
        if k < 0:
            return -self.record(-k).gamma
        return self.record(k).gamma

    @property
    def gammas(self) -> list:
        return [r.gamma for r in self.records]

    def truncated(self, n: int) -> "ZeroCache":
        if n > len(self.records):
            raise IndexError(f"cache holds {len(self.records)} zeros, {n} requested")
        recs = self.records[:n]
        if n == len(self.records):
            return self
        t_max = (recs[-1].gamma + self.records[n].gamma) / 2
        return ZeroCache(recs, self.digits, t_max)

    def with_c_imag(self, values: Sequence) -> "ZeroCache":
        recs = tuple(replace(r, c_imag=v) for r, v in zip(self.records, values))
        recs += self.records[len(recs):]
        return ZeroCache(recs, self.digits, self.t_max)

    def __reduce__(self):
        # mpf classes belong to a private context and do not pickle; ship raw mantissa tuples
        rows = []
        for r in self.records:
            zp = r.zeta_prime
            zp_raw = None if zp is None else (_raw(zp.re), _raw(zp.im), _raw(zp.err))
            rows.append((r.k, _raw(r.gamma), _raw(r.delta), _raw(r.delta_prime), zp_raw, _raw(r.c_imag)))
        return (_rebuild_cache, (tuple(rows), self.digits, _raw(self.t_max)))


def _raw(x):
    if x is None:
        return None
    mpf = getattr(x, "_mpf_", None)
    return ("mpf", mpf) if mpf is not None else ("num", x)


def _cook(mp, x):
    if x is None:
        return None
    tag, val = x
    return mp.make_mpf(val) if tag == "mpf" else mp.mpf(val)


def _rebuild_cache(rows, digits, t_max) -> ZeroCache:
    mp = PrecisionContext(max(digits, 15)).mp
    records = []
    for k, g, d, dp, zp, c in rows:
        zpv = None if zp is None else ComplexValue(*(_cook(mp, v) for v in zp))
        records.append(ZeroRecord(k, _cook(mp, g), _cook(mp, d), _cook(mp, dp), zpv, _cook(mp, c)))
    return ZeroCache(tuple(records), digits, _cook(mp, t_max))


def smooth_zero_count(t: float) -> float:
    """(T/2pi) log(T/(2 pi e)) + 7/8."""
    if t <= 0:
        return 0.0
    x = t / (2 * math.pi)
    return x * math.log(x / math.e) + 7 / 8


def _t_for_count(n: int) -> float:
    lo, hi = 10.0, 10.0
    while smooth_zero_count(hi) < n + 1.5:
        hi *= 1.5
    for _ in range(60):
        mid = (lo + hi) / 2
        if smooth_zero_count(mid) < n + 1.5:
            lo = mid
        else:
            hi = mid
    return hi


# ---------------------------------------------------------------------------
# scanning and refinement

def scan_brackets(t_lo: float, t_hi: float, step: float = DEFAULT_STEP, ctx=DEFAULT_CONTEXT, backend=None):
    """Sign-change brackets [a, b] of Xi on the grid t_lo + j*step inside [t_lo, t_hi].

    Grid signs come from the Hardy Z kernel; each bracket's endpoint signs are
    confirmed with the extended-precision Xi (points where the double precision
    value is too small to trust are re-evaluated first).
    """
    kern = kernels.get_backend(backend)
    n_pts = int(math.floor((t_hi - t_lo) / step + 1e-9)) + 1
    ts = t_lo + step * np.arange(n_pts)
    zs = -kern.hardy_z(ts)
    signs = np.sign(zs)
    shaky = np.abs(zs) < 1e-9 * (1.0 + ts)
    for i in np.nonzero(shaky | (signs == 0))[0]:
        signs[i] = np.sign(float(big_xi(ts[i], ctx)[0]))
    out = []
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        a, b = float(ts[i]), float(ts[i + 1])
        fa, _ = big_xi(a, ctx)
        fb, _ = big_xi(b, ctx)
        if fa * fb < 0:
            out.append((a, b))
        else:
            # double precision disagreed with Xi; resolve on a finer local grid
            out.extend(_resolve_local(a, b, ctx))
    return out


def _resolve_local(a, b, ctx, parts=16):
    ts = [a + (b - a) * j / parts for j in range(parts + 1)]
    vals = [big_xi(t, ctx)[0] for t in ts]
    return [(ts[j], ts[j + 1]) for j in range(parts) if vals[j] * vals[j + 1] < 0]


def _refine(a, b, ctx: PrecisionContext):
    """Shrink a sign-change bracket of Xi to width <= 10^(5 - digits).

    Illinois false position with a bisection step whenever the bracket fails
    to halve over three iterations.
    """
    mp = ctx.mp
    tol = mp.mpf(10) ** (5 - ctx.digits)
    a, b = mp.mpf(a), mp.mpf(b)
    fa, _ = big_xi(a, ctx)
    fb, _ = big_xi(b, ctx)
    if fa * fb > 0:
        raise ValueError("not a sign-change bracket")
    side = 0
    widths = [b - a]
    it = 0
    while b - a > tol:
        it += 1
        w = b - a
        if len(widths) > 3 and w > widths[-4] / 2:
            c = (a + b) / 2
        else:
            c = (a * fb - b * fa) / (fb - fa)
            if not a < c < b:
                c = (a + b) / 2
            # once close, straddle the estimate to close the bracket in one shot
            elif w < 1e6 * tol:
                lo, hi = c - tol / 4, c + tol / 4
                if a < lo and hi < b:
                    flo, _ = big_xi(lo, ctx)
                    fhi, _ = big_xi(hi, ctx)
                    if flo * fhi <= 0:
                        a, b, fa, fb = lo, hi, flo, fhi
                        widths.append(b - a)
                        continue
        fc, _ = big_xi(c, ctx)
        if fc == 0:
            return c
        if fc * fb < 0:
            a, fa = b, fb
            b, fb = c, fc
            side = 0
        else:
            b, fb = c, fc
            if side == -1:
                fa /= 2
            side = -1
        if a > b:
            a, b, fa, fb = b, a, fb, fa
        widths.append(b - a)
        if it > 500:
            break
    return (a + b) / 2


def _refine_batch(args):
    brackets, digits = args
    ctx = PrecisionContext(digits)
    return [str(_refine(a, b, ctx)) for a, b in brackets]


def _refine_all(brackets, ctx, workers):
    mp = ctx.mp
    if workers <= 1 or len(brackets) < 2 * workers:
        return [_refine(a, b, ctx) for a, b in brackets]
    chunk = math.ceil(len(brackets) / workers)
    jobs = [(brackets[i:i + chunk], ctx.digits) for i in range(0, len(brackets), chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_refine_batch, jobs))
    return [mp.mpf(x) for part in parts for x in part]


def locate_zeros(
    n: int | None = None,
    t_max: float | None = None,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    step: float = DEFAULT_STEP,
    derivatives: bool = True,
    workers: int = 1,
    backend: str | None = None,
) -> ZeroCache:
    """Locate the first ``n`` zero ordinates, or all ordinates in (0, t_max].

    One further zero is located beyond the last record so every stored record
    carries both neighbour gaps.  With ``derivatives`` the records also hold
    zeta'(1/2 + i gamma_k).
    """
    if (n is None) == (t_max is None):
        raise ValueError("give exactly one of n or t_max")
    if n is not None and not 1 <= n <= 2000:
        raise ValueError("n must lie in 1..2000")
    if t_max is not None and not 0 < t_max <= 2000:
        raise ValueError("t_max must lie in (0, 2000]")

    brackets: list = []
    lo = 0.0
    hi = _t_for_count(n) if n is not None else float(t_max) + 5.0
    while True:
        brackets.extend(scan_brackets(lo, hi, step, ctx, backend))
        if n is not None and len(brackets) >= n + 1:
            break
        if t_max is not None and brackets and brackets[-1][0] > t_max:
            break
        k_done = int(round((hi - lo) / step))
        lo = lo + k_done * step
        hi = lo + 20.0
    if n is None:
        n = sum(1 for a, _ in brackets if a < t_max)
        # a bracket straddling t_max decides by its refined root below
    keep = brackets[: n + 2]
    roots = _refine_all(keep, ctx, workers)
    roots.sort()
    if t_max is not None:
        n = sum(1 for g in roots if g <= t_max)
    gammas = roots[: n + 1]
    mp = ctx.mp
    t_cap = mp.mpf(t_max) if t_max is not None else (gammas[n - 1] + gammas[n]) / 2
    _check_count(n, float(t_cap))

    records = []
    for k in range(1, n + 1):
        g = gammas[k - 1]
        left = g - (gammas[k - 2] if k >= 2 else 0)
        right = gammas[k] - g
        delta = min(left, right)
        delta_prime = min(1 / mp.log(g), delta)
        records.append(ZeroRecord(k, g, delta, delta_prime))
    cache = ZeroCache(tuple(records), ctx.digits, t_cap)
    if derivatives:
        zps = [zeta_prime_at_zero(cache, k, ctx) for k in range(1, n + 1)]
        cache = ZeroCache(
            tuple(replace(r, zeta_prime=zp) for r, zp in zip(cache.records, zps)), ctx.digits, t_cap
        )
    return cache


def _check_count(count: int, t: float):
    expected = smooth_zero_count(t)
    if abs(count - expected) > 2:
        warnings.warn(
            f"{count} zeros found on (0, {t:.3f}] but the smooth count is {expected:.2f}",
            MissedZeroWarning,
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# gaps and derivatives

def gap_stats(cache: ZeroCache, k: int):
    """(delta_k, delta_k') from the stored ordinates, with gamma_0 := 0."""
    if not 1 <= k <= len(cache) - 1:
        raise IndexError(f"gamma_{k + 1} is not in the cache")
    g = cache.gamma(k)
    left = g - (cache.gamma(k - 1) if k > 1 else 0)
    right = cache.gamma(k + 1) - g
    delta = min(left, right)
    mp = getattr(g, "context", DEFAULT_CONTEXT.mp)
    return delta, min(1 / mp.log(g), delta)


def zeta_prime_at_zero(cache: ZeroCache, k: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ComplexValue:
    """zeta'(1/2 + i gamma_k) by Cauchy-circle differentiation.

    Radius min(delta_k'/2, 0.1).  Negative k gives the conjugate zero.
    Raises SimpleZeroViolation if |zeta'| <= 10^(-digits/2).
    """
    mp = ctx.mp
    rec = cache.record(abs(k))
    if rec.zeta_prime is not None and cache.digits >= ctx.digits:
        zp = rec.zeta_prime
    else:
        radius = min(rec.delta_prime / 2, mp.mpf(0.1))
        center = mp.mpc(0.5, rec.gamma)
        zp = complex_derivative(lambda z: zeta_mpc(z, ctx), center, radius, ctx)
    if abs(zp) <= mp.mpf(10) ** (-(ctx.digits / 2)):
        raise SimpleZeroViolation(f"|zeta'(1/2 + i gamma_{abs(k)})| = {mp.nstr(abs(zp), 5)}")
    return zp.conjugate() if k < 0 else zp


# ---------------------------------------------------------------------------
# persistence

def _fmt(x, mp) -> str:
    if x is None:
        return ""
    return libmp.to_str(mp.mpf(x)._mpf_, libmp.repr_dps(mp.prec))


def _render_csv(cache: ZeroCache, mp) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in cache.records:
        zp = r.zeta_prime
        w.writerow(
            [
                r.k,
                _fmt(r.gamma, mp),
                _fmt(r.delta, mp),
                _fmt(r.delta_prime, mp),
                _fmt(zp.re, mp) if zp is not None else "",
                _fmt(zp.im, mp) if zp is not None else "",
                _fmt(r.c_imag, mp),
            ]
        )
    return buf.getvalue()


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def save_cache(cache: ZeroCache, path, ctx: PrecisionContext | None = None) -> Path:
    ctx = ctx or PrecisionContext(max(cache.digits, 15))
    mp = ctx.mp
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = _render_csv(cache, mp)
    meta = {
        "schema": SCHEMA_VERSION,
        "digits": cache.digits,
        "t_max": _fmt(cache.t_max, mp),
        "count": len(cache),
        "checksum": hashlib.sha256(text.encode()).hexdigest(),
    }
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)
    _sidecar(path).write_text(json.dumps(meta, sort_keys=True, indent=1) + "\n")
    return path


def load_cache(path, ctx: PrecisionContext | None = None) -> ZeroCache:
    path = Path(path)
    side = _sidecar(path)
    if not path.exists() or not side.exists():
        raise FileNotFoundError(f"zero cache {path} (or its sidecar) not found")
    try:
        meta = json.loads(side.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"unreadable sidecar {side}") from exc
    if meta.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"schema {meta.get('schema')!r} != {SCHEMA_VERSION}")
    for key in ("digits", "t_max", "count", "checksum"):
        if key not in meta:
            raise SchemaError(f"sidecar lacks {key!r}")
    text = path.read_text()
    if hashlib.sha256(text.encode()).hexdigest() != meta["checksum"]:
        raise ChecksumError(f"{path} does not match its checksum")
    digits = int(meta["digits"])
    if ctx is None:
        ctx = PrecisionContext(max(digits, 15))
    elif digits < ctx.digits:
        warnings.warn(f"cache stored at {digits} digits, {ctx.digits} requested", PrecisionWarning, stacklevel=2)
    mp = ctx.mp
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise SchemaError("unexpected CSV header")
    records = []
    for row in rows[1:]:
        if len(row) != len(CSV_HEADER):
            raise SchemaError(f"bad row {row!r}")
        k, g, d, dp, zr, zi, c = row
        zp = ComplexValue(mp.mpf(zr), mp.mpf(zi), mp.zero) if zr else None
        records.append(ZeroRecord(int(k), mp.mpf(g), mp.mpf(d), mp.mpf(dp), zp, mp.mpf(c) if c else None))
    if len(records) != int(meta["count"]):
        raise SchemaError("row count does not match sidecar")
    return ZeroCache(tuple(records), digits, mp.mpf(meta["t_max"]))


def cache_io(cache: ZeroCache | None, path, direction: str, ctx: PrecisionContext | None = None) -> ZeroCache:
    """Save (``direction="save"``) or load (``"load"``) a zero cache."""
    if direction == "save":
        save_cache(cache, path, ctx)
        return cache
    if direction == "load":
        return load_cache(path, ctx)
    raise ValueError("direction must be 'save' or 'load'")
