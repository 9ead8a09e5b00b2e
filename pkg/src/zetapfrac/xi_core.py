"""Building-block functions l, a, b, xi, n, f and their symmetries.

    l(s) = 2 Gamma(1 + s/2) pi^(-s/2)
    a(s) = l(s) (s - 1)
    xi(s) = a(s) zeta(s) / 2
    b(s) = sin(pi s / 4) a(1/2 + s)
    n(s) = sin(pi s / 4) 2 xi(1/2 + s) = b(s) zeta(1/2 + s)
    f(s) = 1 / n(s)
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum

from .errors import PoleError
from .numkernel import DEFAULT_CONTEXT, ComplexValue, PrecisionContext, _gamma, as_mpc, zeta_with_err

__all__ = [
    "BlockName",
    "Strip",
    "eval_block",
    "block_mpc",
    "xi_symmetry_residual",
    "big_xi",
    "sigma0",
]


class BlockName(str, Enum):
    L = "l"
    A = "a"
    B = "b"
    XI = "xi"
    N = "n"
    F = "f"


@dataclass(frozen=True)
class Strip:
    """Vertical strip x0 < Re(s) < x1 (closed: <=)."""

    x0: float
    x1: float
    closed: bool = False

    def __post_init__(self):
        if not self.x0 < self.x1:
            raise ValueError("strip needs x0 < x1")

    def __contains__(self, s) -> bool:
        x = complex(s).real
        if self.closed:
            return self.x0 <= x <= self.x1
        return self.x0 < x < self.x1


def _l(mp, s, ctx):
    g, rel = _gamma(mp, 1 + s / 2, ctx)
    return 2 * g * mp.power(mp.pi, -s / 2), rel + 4 * ctx.eps


def _a(mp, s, ctx):
    lv, rel = _l(mp, s, ctx)
    return lv * (s - 1), rel + ctx.eps


def _xi(mp, u, ctx):
    """xi(u) with an absolute error estimate; cancels the zeta pole at u = 1."""
    eps = ctx.eps
    h = u - 1
    if abs(h) < mp.mpf(10) ** (-(ctx.digits // 2)):
        # (u-1) zeta(u) = 1 + gamma_E (u-1) + O((u-1)^2)
        lv, rel = _l(mp, u, ctx)
        rz = 1 + mp.euler * h
        val = lv * rz / 2
        return val, abs(val) * (rel + eps) + abs(lv) * abs(h) ** 2
    av, arel = _a(mp, u, ctx)
    zv, zerr = zeta_with_err(u, ctx)
    val = av * zv / 2
    err = abs(av) / 2 * zerr + abs(val) * arel
    return val, err


def _sin_quarter(mp, s):
    return mp.sinpi(s / 4)


def block_mpc(name, s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Value and absolute error of a building block, as mp numbers (no wrapping)."""
    mp = ctx.mp
    name = BlockName(name)
    s = as_mpc(s, mp)
    eps = ctx.eps
    if name is BlockName.L:
        v, rel = _l(mp, s, ctx)
        return v, abs(v) * rel
    if name is BlockName.A:
        v, rel = _a(mp, s, ctx)
        return v, abs(v) * rel
    if name is BlockName.B:
        av, rel = _a(mp, mp.mpf(0.5) + s, ctx)
        v = _sin_quarter(mp, s) * av
        return v, abs(v) * (rel + 2 * eps)
    if name is BlockName.XI:
        return _xi(mp, s, ctx)
    xv, xerr = _xi(mp, mp.mpf(0.5) + s, ctx)
    sn = _sin_quarter(mp, s)
    nv = 2 * sn * xv
    nerr = 2 * abs(sn) * xerr + abs(nv) * 2 * eps
    if name is BlockName.N:
        return nv, nerr
    floor = mp.mpf(10) ** (-(ctx.digits // 2))
    if abs(nv) < floor:
        raise PoleError(f"f has a pole near s = {mp.nstr(s, 15)} (|n(s)| = {mp.nstr(abs(nv), 3)})")
    fv = 1 / nv
    return fv, nerr / abs(nv) ** 2


def eval_block(name, s, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ComplexValue:
    """Evaluate l, a, b, xi, n or f at s, with an absolute error estimate.

    f raises PoleError when |n(s)| < 10^(-digits/2).
    """
    v, err = block_mpc(name, s, ctx)
    return ComplexValue(v.real, v.imag, err)


def xi_symmetry_residual(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """|xi(1/2 - s) - xi(1/2 + s)|; should not exceed the combined error estimates."""
    mp = ctx.mp
    s = as_mpc(s, mp)
    half = mp.mpf(0.5)
    v1, _ = _xi(mp, half - s, ctx)
    v2, _ = _xi(mp, half + s, ctx)
    return abs(v1 - v2)


def big_xi(t, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Xi(t) = xi(1/2 + i t), real for real t.  Returns (value, error).

    Raises AssertionError if the imaginary part exceeds 10x the error estimate.
    """
    mp = ctx.mp
    t = mp.mpf(t)
    v, err = _xi(mp, mp.mpc(0.5, t), ctx)
    if abs(v.imag) > 10 * err:
        raise AssertionError(f"Xi({mp.nstr(t, 15)}) has imaginary part {mp.nstr(v.imag, 3)} > 10*err")
    return v.real, err


@functools.lru_cache(maxsize=8)
def sigma0(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """The root of zeta(sigma) = 2 on (1, oo), by bisection."""
    mp = ctx.mp

    def g(x):
        return zeta_with_err(mp.mpc(x), ctx)[0].real - 2

    lo, hi = mp.mpf(1.2), mp.mpf(2)
    assert g(lo) > 0 > g(hi)
    tol = ctx.tol / 10
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
