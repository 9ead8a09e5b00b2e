"""Residues of f at the poles of n, the even series P_0, and the constants A, B, C.

Real poles 4w carry c(4w) = c~(4w) (-pi^2)^w with

    c~(4k) = 1 / (pi^(3/4) Gamma(5/4 + 2k) (2k - 1/4) zeta(1/2 + 4k)) > 0,

imaginary poles i gamma_k carry c(i gamma_k) = 1 / (b(i gamma_k) zeta'(1/2 + i gamma_k)),
which is real.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import mpmath
import numpy as np

from .errors import CapError, RealnessViolation
from .numkernel import DEFAULT_CONTEXT, ComplexValue, PrecisionContext, _gamma, as_mpc, zeta_with_err
from .xi_core import block_mpc
from .zero_table import ZeroCache, zeta_prime_at_zero

__all__ = [
    "RealPole",
    "ImagPole",
    "CoefficientSet",
    "SeriesConstants",
    "DecayFit",
    "c_tilde",
    "c_at",
    "p0_eval",
    "fill_coefficients",
    "imag_coefficients",
    "fit_decay",
    "series_constants",
    "build_coefficient_set",
]


@dataclass(frozen=True)
class RealPole:
    w: int


@dataclass(frozen=True)
class ImagPole:
    k: int


Pole = Union[RealPole, ImagPole]


@functools.lru_cache(maxsize=4096)
def c_tilde(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """c~(4k), positive for every k >= 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    mp = ctx.mp
    g, _ = _gamma(mp, mp.mpc(mp.mpf(5) / 4 + 2 * k), ctx)
    z, _ = zeta_with_err(mp.mpc(mp.mpf(0.5) + 4 * k), ctx)
    val = 1 / (mp.power(mp.pi, mp.mpf(3) / 4) * g.real * (2 * k - mp.mpf(1) / 4) * z.real)
    assert val > 0, "c~(4k) must be positive"
    return val


def _c_real(w: int, ctx):
    w = abs(w)
    return c_tilde(w, ctx) * (-ctx.mp.pi ** 2) ** w


def _c_imag_value(gamma, zeta_prime: ComplexValue, ctx, loc_err=0, sensitivity=1):
    """(value, error) of 1 / (b(i gamma) zeta'(1/2 + i gamma)) as mpc.

    ``loc_err`` is the uncertainty in gamma and ``sensitivity`` bounds the
    logarithmic derivative of b zeta' near the zero.
    """
    mp = ctx.mp
    z = mp.mpc(0, gamma)
    bv, berr = block_mpc("b", z, ctx)
    zp = zeta_prime.to_mpc(mp)
    val = 1 / (bv * zp)
    err = abs(val) * (berr / abs(bv) + zeta_prime.err / abs(zp) + loc_err * sensitivity)
    return val, err


def c_at(pole: Pole, cache: ZeroCache | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Residue coefficient c(z) = 1/n'(z) at a real or imaginary pole (a real number).

    RealPole(w): c~(4|w|)(-pi^2)^|w|.  ImagPole(k): Re of 1/(b(i gamma_k) zeta'),
    raising RealnessViolation if |Im| exceeds 10x its error estimate.  Negative
    k uses c(i gamma_{-k}) = c(i gamma_k).
    """
    if isinstance(pole, RealPole):
        return _c_real(pole.w, ctx)
    if cache is None:
        raise ValueError("imaginary poles need a zero cache")
    k = abs(pole.k)
    rec = cache.record(k)
    if rec.c_imag is not None and cache.digits >= ctx.digits:
        return ctx.mp.mpf(rec.c_imag)
    zp = zeta_prime_at_zero(cache, k, ctx)
    mp = ctx.mp
    # the zero is only known to within the refinement bracket
    loc_err = mp.mpf(10) ** (5 - min(cache.digits, ctx.digits))
    sensitivity = 1 / rec.delta_prime + mp.log(rec.gamma)
    val, err = _c_imag_value(rec.gamma, zp, ctx, loc_err, sensitivity)
    if abs(val.imag) > 10 * err:
        raise RealnessViolation(
            f"c(i gamma_{k}) has imaginary part {ctx.mp.nstr(val.imag, 3)} (error {ctx.mp.nstr(err, 3)})"
        )
    return val.real


def imag_coefficients(cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT, n: int | None = None) -> list:
    n = len(cache) if n is None else n
    return [c_at(ImagPole(k), cache, ctx) for k in range(1, n + 1)]


def fill_coefficients(cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ZeroCache:
    """Return the cache with the c_imag column filled."""
    return cache.with_c_imag(imag_coefficients(cache, ctx))


def p0_eval(z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ComplexValue:
    """P_0(z) = -sum_{k>=1} c~(4k) (-z^2)^k, summed until terms fall below 10^-digits of the running max."""
    mp = ctx.mp
    z = as_mpc(z, mp)
    q = -z * z
    total = mp.mpc(0)
    power = mp.mpc(1)
    running_max = mp.zero
    rel = mp.mpf(10) ** (-ctx.digits)
    for k in range(1, ctx.max_series_terms + 1):
        power *= q
        term = c_tilde(k, ctx) * power
        total -= term
        running_max = max(running_max, abs(term))
        if running_max == 0:
            # z == 0
            return ComplexValue(mp.zero, mp.zero, mp.zero)
        if abs(term) < rel * running_max and k > 2:
            # the factorial decay makes the remaining tail smaller than the last term
            bound = abs(term) + ctx.eps * running_max * k
            return ComplexValue(total.real, total.imag, bound)
    raise CapError("P_0 series reached max_series_terms")


# ---------------------------------------------------------------------------
# decay fit and the series constants

@dataclass(frozen=True)
class DecayFit:
    """|c(i gamma)| ~ K gamma^(-p), fitted on the upper half of the table."""

    K: float
    p: float
    stderr: float
    n_used: int

    def __call__(self, gamma: float) -> float:
        return self.K * gamma ** (-self.p)


def fit_decay(gammas, coeffs) -> DecayFit:
    g = np.array([float(x) for x in gammas])
    c = np.array([abs(float(x)) for x in coeffs])
    half = len(g) // 2
    g, c = g[half:], c[half:]
    if len(g) < 3:
        raise ValueError("need at least 6 coefficients to fit a decay exponent")
    x, y = np.log(g), np.log(c)
    A = np.vstack([np.ones_like(x), x]).T
    sol, res, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ sol
    dof = max(len(x) - 2, 1)
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    return DecayFit(float(np.exp(sol[0])), float(-sol[1]), float(np.sqrt(cov[1, 1])), len(x))


def _zero_density(g):
    return math.log(g / (2 * math.pi)) / (2 * math.pi)


def fitted_tail(fit: DecayFit, gamma_from: float, weight) -> float:
    """Integral over gamma > gamma_from of fit(gamma) * weight(gamma) * zero density."""
    if fit.p <= 0:
        return float("inf")
    with mpmath.workdps(20):
        val = mpmath.quad(lambda g: fit(float(g)) * weight(float(g)) * _zero_density(float(g)), [gamma_from, mpmath.inf])
    return float(val)


@dataclass(frozen=True)
class SeriesConstants:
    """Partial sums A_N = 2 sum |c|, B_N = sum |c|/delta', C_N = sum |c|/gamma^2 plus fitted tails."""

    N: int
    A: object
    B: object
    C: object
    A_tail: float
    B_tail: float
    C_tail: float
    fit: DecayFit


def series_constants(cache: ZeroCache, N: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SeriesConstants:
    mp = ctx.mp
    cs = imag_coefficients(cache, ctx, N)
    recs = cache.records[:N]
    A = 2 * mp.fsum(abs(c) for c in cs)
    B = mp.fsum(abs(c) / r.delta_prime for c, r in zip(cs, recs))
    C = mp.fsum(abs(c) / r.gamma ** 2 for c, r in zip(cs, recs))
    fit = fit_decay([r.gamma for r in cache.records[:N]], cs) if N >= 6 else DecayFit(0.0, 0.0, float("inf"), N)
    g_n = float(recs[-1].gamma)
    if N >= 6:
        a_tail = 2 * fitted_tail(fit, g_n, lambda g: 1.0)
        # typical delta' for large gamma is 1/log(gamma)
        b_tail = fitted_tail(fit, g_n, lambda g: math.log(g))
        c_tail = fitted_tail(fit, g_n, lambda g: g ** -2)
    else:
        a_tail = b_tail = c_tail = float("inf")
    return SeriesConstants(N, A, B, C, a_tail, b_tail, c_tail, fit)


@dataclass(frozen=True)
class CoefficientSet:
    c0: object
    c_real: dict
    c_imag: dict
    constants: SeriesConstants

    def __post_init__(self):
        assert all(v != 0 for v in self.c_real.values())


def build_coefficient_set(cache: ZeroCache, W: int, N: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> CoefficientSet:
    c_real = {w: _c_real(w, ctx) for w in range(1, W + 1)}
    c_imag = {k: c_at(ImagPole(k), cache, ctx) for k in range(1, N + 1)}
    return CoefficientSet(_c_real(0, ctx), c_real, c_imag, series_constants(cache, N, ctx))
