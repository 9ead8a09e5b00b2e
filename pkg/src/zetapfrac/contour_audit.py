"""The contour T_*(alpha) around the zeros and empirical growth exponents.

T_*(alpha) runs up the imaginary axis (in the s = (w - 1/2) picture) and
detours to the right around each i gamma_k on the semicircle of radius
alpha delta_k'.  Four exponents are estimated from lower-envelope log-log
fits over the upper half of the zero table:

    eps0   |zeta(1/2 + s(t, alpha))| >= lambda t^(-eps0)
    eps1   |zeta'(1/2 + i gamma_k)| >= K gamma_k^(-eps1)
    eps2   delta_k >= K gamma_k^(-eps2)
    eps1~  j_k(alpha) >= K gamma_k^(-eps1~)
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import DomainError, InsufficientData, PoleError
from .numkernel import DEFAULT_CONTEXT, ComplexValue, PrecisionContext, zeta_mpc
from .xi_core import block_mpc
from .zero_table import ZeroCache, zeta_prime_at_zero

__all__ = [
    "Estimate",
    "Verdict",
    "AuditReport",
    "contour_point",
    "j_k_eval",
    "contour_minimum",
    "envelope_fit",
    "exponent_estimates",
    "monotone_replacement_check",
]

GRID_POINTS = 201
GOLDEN = (math.sqrt(5) - 1) / 2


def _gp(cache: ZeroCache, k: int) -> tuple[float, float]:
    rec = cache.record(k)
    return float(rec.gamma), float(rec.delta_prime)


def contour_point(t, alpha: float, cache: ZeroCache) -> complex:
    """s(t, alpha) = x(t, alpha) + i t on T_*(alpha).  DomainError for t <= t(1)."""
    t = float(t)
    g1, d1 = _gp(cache, 1)
    if t <= g1 - alpha * d1:
        raise DomainError("t must exceed t(1) = gamma_1 - alpha delta_1'")
    gammas = [float(r.gamma) for r in cache.records]
    j = bisect.bisect_left(gammas, t)
    for i in (j - 1, j):
        if 0 <= i < len(gammas):
            g, dp = _gp(cache, i + 1)
            rad = alpha * dp
            if abs(t - g) <= rad:
                return complex(math.sqrt(max(rad * rad - (t - g) ** 2, 0.0)), t)
    if t > float(cache.t_max):
        raise DomainError("t lies beyond the range of the zero table")
    return complex(0.0, t)


def _quotient_mp(t, k: int, cache: ZeroCache, ctx, zp_abs):
    mp = ctx.mp
    g = mp.mpf(cache.gamma(k))
    h = mp.mpf(t) - g
    if abs(h) < mp.mpf(10) ** (-(ctx.digits // 3)):
        return zp_abs
    return abs(zeta_mpc(mp.mpc(0.5, mp.mpf(t)), ctx)) / abs(h)


def j_k_eval(k: int, alpha: float, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT, backend=None):
    """j_k(alpha) = min |zeta(1/2 + it)/(t - gamma_k)| over |t - gamma_k| <= alpha delta_k'.

    A 201-point double precision grid locates the minimum, which is then
    refined by golden-section search at working precision.  The grid centre
    carries |zeta'(1/2 + i gamma_k)|.
    """
    mp = ctx.mp
    kern = kernels.get_backend(backend)
    g, dp = _gp(cache, k)
    rad = alpha * dp
    zp_abs = abs(zeta_prime_at_zero(cache, k, ctx))
    ts = np.linspace(g - rad, g + rad, GRID_POINTS)
    vals = np.abs(np.asarray(kern.zeta_line(0.5, ts)))
    h = np.abs(ts - g)
    mid = GRID_POINTS // 2
    with np.errstate(divide="ignore", invalid="ignore"):
        q = vals / h
    q[mid] = float(zp_abs)
    i = int(np.argmin(q))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, GRID_POINTS - 1)]
    best = min(zp_abs, _quotient_mp(ts[i], k, cache, ctx, zp_abs))
    a, b = mp.mpf(lo), mp.mpf(hi)
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1 = _quotient_mp(x1, k, cache, ctx, zp_abs)
    f2 = _quotient_mp(x2, k, cache, ctx, zp_abs)
    for _ in range(40):
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = _quotient_mp(x1, k, cache, ctx, zp_abs)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = _quotient_mp(x2, k, cache, ctx, zp_abs)
        if b - a < mp.mpf(10) ** -10 * (1 + rad):
            break
    return min(best, f1, f2)


def contour_minimum(k: int, alpha: float, cache: ZeroCache, backend=None, samples: int = 64):
    """(t, |zeta(1/2 + s(t, alpha))|) minimising over the semicircle S_k and the interval I_k."""
    kern = kernels.get_backend(backend)
    g, dp = _gp(cache, k)
    rad = alpha * dp
    if k < len(cache):
        g2, dp2 = _gp(cache, k + 1)
        top = g2 - alpha * dp2
    else:
        # last zero in the table: the interval is cut at the table's end
        top = float(cache.t_max)
    best = (None, math.inf)
    for j in range(samples + 1):
        phi = -math.pi / 2 + math.pi * j / samples
        x, t = rad * math.cos(phi), g + rad * math.sin(phi)
        v = abs(kern.zeta_d(0.5 + x, t))
        if v < best[1]:
            best = (t, v)
    lo, hi = g + rad, top
    if hi > lo:
        ts = np.linspace(lo, hi, samples + 1)
        vals = np.abs(np.asarray(kern.zeta_line(0.5, ts)))
        i = int(np.argmin(vals))
        if vals[i] < best[1]:
            best = (float(ts[i]), float(vals[i]))
    return best


@dataclass(frozen=True)
class Estimate:
    """Exponent estimate: value clipped at 0, raw fitted value, standard error, envelope intercept."""

    value: float
    raw: float
    stderr: float
    log_lambda: float
    n_used: int


@dataclass(frozen=True)
class Verdict:
    holds: bool
    margin: float


def envelope_fit(x, y, bins: int = 10) -> tuple[float, float, float]:
    """Lower-envelope line y >= a + b x: (b, a, stderr of b).

    The slope is the least-squares slope through per-bin minima; the
    intercept is then lowered until every point lies on or above the line.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    order = np.argsort(x)
    x, y = x[order], y[order]
    chunks = np.array_split(np.arange(len(x)), min(bins, len(x)))
    bx, by = [], []
    for ch in chunks:
        if len(ch):
            j = ch[int(np.argmin(y[ch]))]
            bx.append(x[j])
            by.append(y[j])
    bx, by = np.array(bx), np.array(by)
    A = np.vstack([np.ones_like(bx), bx]).T
    sol, *_ = np.linalg.lstsq(A, by, rcond=None)
    resid = by - A @ sol
    dof = max(len(bx) - 2, 1)
    cov = float(resid @ resid) / dof * np.linalg.inv(A.T @ A)
    slope = float(sol[1])
    intercept = float(np.min(y - slope * x))
    return slope, intercept, float(math.sqrt(max(cov[1, 1], 0.0)))


def _estimate(x, y) -> Estimate:
    slope, intercept, se = envelope_fit(x, y)
    return Estimate(max(-slope, 0.0), -slope, se, intercept, len(x))


@dataclass(frozen=True)
class AuditReport:
    alpha: float
    N: int
    eps0: Estimate
    eps1: Estimate
    eps2: Estimate
    eps1tilde: Estimate
    verdicts: dict
    samples: dict

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "N": self.N,
            "estimates": {name: asdict(getattr(self, name)) for name in ("eps0", "eps1", "eps2", "eps1tilde")},
            "verdicts": {name: asdict(v) for name, v in self.verdicts.items()},
        }
        return out

    def envelope_violations(self) -> list[int]:
        """Indices of contour samples below the fitted eps0 envelope (empty by construction)."""
        ts, vs = self.samples["contour_t"], self.samples["contour_abs"]
        est = self.eps0
        bad = []
        for i, (t, v) in enumerate(zip(ts, vs)):
            if math.log(v) < est.log_lambda - est.raw * math.log(t) - 1e-9:
                bad.append(i)
        return bad


def _per_zero(args):
    k, alpha, cache, ctx, backend = args
    zp = abs(zeta_prime_at_zero(cache, k, ctx))
    jk = j_k_eval(k, alpha, cache, ctx, backend)
    t, v = contour_minimum(k, alpha, cache, backend)
    return float(zp), float(jk), t, v


def exponent_estimates(N: int, alpha: float, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT,
                       *, workers: int = 1, backend=None) -> AuditReport:
    """Fit eps0, eps1, eps2 and eps1~ on the upper half of the first N zeros."""
    if N < 50:
        raise InsufficientData("at least 50 zeros are needed for the exponent fits")
    if N > len(cache):
        raise InsufficientData(f"the audit needs {N} zeros, cache holds {len(cache)}")
    if not 0 < alpha < 0.5:
        raise ValueError("alpha must lie in (0, 1/2)")
    ks = list(range(N // 2 + 1, N + 1))
    jobs = [(k, alpha, cache, ctx, backend) for k in ks]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_per_zero, jobs))
    else:
        rows = [_per_zero(j) for j in jobs]
    lg = [math.log(float(cache.gamma(k))) for k in ks]
    zps = [r[0] for r in rows]
    jks = [r[1] for r in rows]
    cts = [r[2] for r in rows]
    cvs = [r[3] for r in rows]
    deltas = [float(cache.record(k).delta) for k in ks]
    eps0 = _estimate([math.log(t) for t in cts], [math.log(v) for v in cvs])
    eps1 = _estimate(lg, [math.log(v) for v in zps])
    eps2 = _estimate(lg, [math.log(v) for v in deltas])
    eps1t = _estimate(lg, [math.log(v) for v in jks])
    verdicts = {
        "C1ii": Verdict(eps0.value < 0.75, 0.75 - eps0.value),
        "Cprime": Verdict(eps0.value < 1.75, 1.75 - eps0.value),
        "C3ii": Verdict(eps1.value + eps2.value < 0.75, 0.75 - eps1.value - eps2.value),
        "C4ii": Verdict(eps1t.value + eps2.value <= 1.0, 1.0 - eps1t.value - eps2.value),
    }
    samples = {"k": ks, "zeta_prime_abs": zps, "j_k": jks, "contour_t": cts, "contour_abs": cvs, "delta": deltas}
    return AuditReport(alpha, N, eps0, eps1, eps2, eps1t, verdicts, samples)


def monotone_replacement_check(t, alpha: float, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT,
                               samples: int = 8) -> list:
    """x values in [0, x(t, alpha)) where |f(x + it)| falls more than 1% below |f(s(t, alpha))|.

    |f(x + it)| decreases in x^2, so the contour point carries the smallest
    value on the segment; an empty list means the replacement is sound.
    """
    mp = ctx.mp
    s_c = contour_point(t, alpha, cache)
    try:
        ref = abs(block_mpc("f", mp.mpc(s_c.real, s_c.imag), ctx)[0])
    except PoleError:
        return []
    bad = []
    for j in range(samples):
        x = s_c.real * j / samples
        try:
            v = abs(block_mpc("f", mp.mpc(x, s_c.imag), ctx)[0])
        except PoleError:
            continue
        if ref > v * (1 + mp.mpf(0.01)):
            bad.append(x)
    return bad
