"""Extended-precision complex arithmetic, Gamma, zeta and numerical differentiation.

Every operation runs inside a :class:`PrecisionContext`, which owns a private
mpmath context at ``digits + guard`` decimal digits.  The global
``mpmath.mp`` precision is never touched, so operations are reentrant.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Any, Callable

from mpmath.ctx_mp import MPContext

from .errors import CapError, ConvergenceError, DomainError, PoleError

__all__ = [
    "PrecisionContext",
    "ComplexValue",
    "DEFAULT_CONTEXT",
    "complex_gamma",
    "complex_zeta",
    "complex_derivative",
    "gamma_mpc",
    "zeta_mpc",
    "zeta_with_err",
    "as_mpc",
]


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for every numeric operation.

    ``digits`` is the target accuracy; arithmetic runs at ``digits + guard``.
    """

    digits: int = 30
    max_series_terms: int = 200_000
    guard: int = 12
    _mp: MPContext = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError("digits must be >= 15")
        if self.max_series_terms <= 0:
            raise ValueError("max_series_terms must be positive")
        m = MPContext()
        m.dps = self.digits + self.guard
        object.__setattr__(self, "_mp", m)

    def __reduce__(self):
        return (PrecisionContext, (self.digits, self.max_series_terms, self.guard))

    @property
    def mp(self) -> MPContext:
        return self._mp

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @property
    def eps(self):
        """Unit roundoff of the working precision."""
        return self._mp.mpf(10) ** (-self.dps)

    @property
    def tol(self):
        """Accuracy contract of results, 10^(1 - digits)."""
        return self._mp.mpf(10) ** (1 - self.digits)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return PrecisionContext(digits, self.max_series_terms, self.guard)


DEFAULT_CONTEXT = PrecisionContext()


def as_mpc(x: Any, mp: MPContext):
    """Coerce numbers, strings, mpmath values and ComplexValue to ``mp.mpc``."""
    if isinstance(x, ComplexValue):
        return mp.mpc(x.re, x.im)
    if isinstance(x, tuple):
        return mp.mpc(*x)
    return mp.mpc(mp.convert(x))


@dataclass(frozen=True)
class ComplexValue:
    """Complex number with an attached absolute error bound.

    Sums add errors; products and quotients propagate them to first order.
    """

    re: Any
    im: Any
    err: Any = 0

    def __post_init__(self):
        if not math.isfinite(float(self.err)) or self.err < 0:
            raise ValueError("err must be finite and nonnegative")

    @classmethod
    def of(cls, z, err=0, ctx: PrecisionContext | None = None) -> "ComplexValue":
        mp = (ctx or DEFAULT_CONTEXT).mp
        if isinstance(z, ComplexValue):
            return cls(z.re, z.im, z.err + err)
        zc = as_mpc(z, mp)
        return cls(zc.real, zc.imag, mp.mpf(err))

    def to_mpc(self, mp: MPContext | None = None):
        mp = mp or DEFAULT_CONTEXT.mp
        return mp.mpc(self.re, self.im)

    @property
    def value(self):
        return self.to_mpc(self._ctx_mp())

    def _ctx_mp(self):
        ctx = getattr(self.re, "context", None)
        return ctx if isinstance(ctx, MPContext) else DEFAULT_CONTEXT.mp

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return self._ctx_mp().hypot(self.re, self.im)

    def conjugate(self) -> "ComplexValue":
        return ComplexValue(self.re, -self.im, self.err)

    def __neg__(self) -> "ComplexValue":
        return ComplexValue(-self.re, -self.im, self.err)

    def _coerce(self, other) -> "ComplexValue":
        if isinstance(other, ComplexValue):
            return other
        mp = self._ctx_mp()
        z = as_mpc(other, mp)
        return ComplexValue(z.real, z.imag, mp.zero)

    def __add__(self, other):
        o = self._coerce(other)
        return ComplexValue(self.re + o.re, self.im + o.im, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return ComplexValue(self.re - o.re, self.im - o.im, self.err + o.err)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        mp = self._ctx_mp()
        z = self.to_mpc(mp) * o.to_mpc(mp)
        err = abs(self) * o.err + abs(o) * self.err + self.err * o.err
        return ComplexValue(z.real, z.imag, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        mp = self._ctx_mp()
        den = o.to_mpc(mp)
        if den == 0:
            raise PoleError("division by zero ComplexValue")
        z = self.to_mpc(mp) / den
        err = (self.err + abs(z) * o.err) / abs(den)
        return ComplexValue(z.real, z.imag, err)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def close_to(self, other, tol=0) -> bool:
        o = self._coerce(other)
        return abs(self - o) <= self.err + o.err + tol


# ---------------------------------------------------------------------------
# per-precision caches; keyed by mp.prec, guarded for concurrent first use

_cache_lock = threading.Lock()
_em_coeff_cache: dict[int, list] = {}
_stirling_cache: dict[int, list] = {}
_log_cache: dict[int, dict[int, Any]] = {}
_spf: list[int] = [0, 1]


def _em_coeffs(mp: MPContext, count: int) -> list:
    """[B_{2j}/(2j)! for j = 1..count] at mp's precision."""
    key = mp.prec
    lst = _em_coeff_cache.get(key)
    if lst is None or len(lst) < count:
        new = [mp.bernoulli(2 * j) / mp.factorial(2 * j) for j in range(1, max(count, 64) + 1)]
        with _cache_lock:
            _em_coeff_cache[key] = new
        lst = new
    return lst


def _stirling_coeffs(mp: MPContext, count: int) -> list:
    """[B_{2j}/(2j(2j-1)) for j = 1..count]."""
    key = mp.prec
    lst = _stirling_cache.get(key)
    if lst is None or len(lst) < count:
        new = [mp.bernoulli(2 * j) / (2 * j * (2 * j - 1)) for j in range(1, max(count, 64) + 1)]
        with _cache_lock:
            _stirling_cache[key] = new
        lst = new
    return lst


def _smallest_prime_factors(n: int) -> list[int]:
    global _spf
    if len(_spf) > n:
        return _spf
    size = max(n + 1, 2 * len(_spf))
    spf = list(range(size))
    for p in range(2, int(size**0.5) + 1):
        if spf[p] == p:
            for q in range(p * p, size, p):
                if spf[q] == q:
                    spf[q] = p
    with _cache_lock:
        _spf = spf
    return spf


def _log_int(mp: MPContext, n: int):
    table = _log_cache.setdefault(mp.prec, {})
    v = table.get(n)
    if v is None:
        v = mp.log(n)
        table[n] = v
    return v


# ---------------------------------------------------------------------------
# Gamma

def _is_nonpositive_integer(mp, z) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == mp.floor(z.real)


def _loggamma_shifted(mp, w, eps, max_terms):
    """Stirling series for log Gamma(w), Re(w) large; returns (value, bound)."""
    coeffs = _stirling_coeffs(mp, 32)
    inv = 1 / w
    inv2 = inv * inv
    acc = mp.zero
    p = inv
    aw = abs(w)
    j = 0
    while True:
        if j >= len(coeffs):
            coeffs = _stirling_coeffs(mp, 2 * len(coeffs))
        if j >= max_terms:
            raise CapError("Stirling series did not converge")
        acc += coeffs[j] * p
        p *= inv2
        j += 1
        # remainder <= |next coefficient| / |w|^(2j+1) * sec^(2j+2)(arg/2), sec^2 <= 2
        if j >= len(coeffs):
            coeffs = _stirling_coeffs(mp, 2 * len(coeffs))
        bound = abs(coeffs[j]) / aw ** (2 * j + 1) * mp.mpf(2) ** (j + 1)
        if bound < eps:
            break
    val = (w - mp.mpf(0.5)) * mp.log(w) - w + mp.log(2 * mp.pi) / 2 + acc
    return val, bound


def gamma_mpc(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Gamma(z) as an mpc at the context's working precision."""
    return _gamma(ctx.mp, as_mpc(z, ctx.mp), ctx)[0]


def _gamma(mp, z, ctx):
    if _is_nonpositive_integer(mp, z):
        raise PoleError(f"Gamma has a pole at {z}")
    eps = ctx.eps
    if z.real < mp.mpf(0.5):
        # reflection Gamma(z) Gamma(1-z) = pi / sin(pi z)
        g1, rel = _gamma(mp, 1 - z, ctx)
        sz = mp.sinpi(z)
        if sz == 0:
            raise PoleError(f"Gamma has a pole at {z}")
        return mp.pi / (sz * g1), rel + 4 * eps
    r_min = max(10, int(0.6 * ctx.dps) + 4)
    shift = 0
    if z.real < r_min:
        shift = int(mp.ceil(r_min - z.real))
    w = z + shift
    lg, bound = _loggamma_shifted(mp, w, eps, ctx.max_series_terms)
    val = mp.exp(lg)
    if shift:
        den = mp.one
        for k in range(shift):
            den *= z + k
        val /= den
    rel = bound + eps * (abs(lg) + shift + 4)
    return val, rel


def complex_gamma(z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ComplexValue:
    """Gamma(z) with relative error <= 10^(1-digits).

    Shifted Stirling series with upward recurrence; reflection for Re(z) < 1/2.
    Raises PoleError at z in {0, -1, -2, ...}.
    """
    mp = ctx.mp
    zc = as_mpc(z, mp)
    val, rel = _gamma(mp, zc, ctx)
    return ComplexValue(val.real, val.imag, abs(val) * rel)


# ---------------------------------------------------------------------------
# zeta

def _zeta_em(mp, s, ctx):
    """Euler-Maclaurin zeta(s) for Re(s) >= 0; returns (value, abs_error_bound)."""
    eps = ctx.eps
    dps = ctx.dps
    sigma = s.real
    abs_s = abs(s)
    n_full = max(8, int(math.ceil((float(abs_s) + 3.4 * dps) / math.pi)))
    candidates = []
    if sigma > 1 and dps / (float(sigma) - 1) < 6:
        # N^(1-sigma) already below eps: a few direct terms suffice
        n_small = max(8, int(math.ceil(10 ** (dps / (float(sigma) - 1)))))
        if n_small < n_full:
            candidates.append(n_small)
    candidates.append(n_full)
    n_cut = 0
    while True:
        n_cut = candidates.pop(0) if candidates else 2 * n_cut
        if n_cut > ctx.max_series_terms:
            raise CapError("Euler-Maclaurin cut exceeds max_series_terms")
        result = _zeta_em_fixed(mp, s, n_cut, eps, ctx.max_series_terms)
        if result is not None:
            return result


def _zeta_em_fixed(mp, s, n_cut, eps, max_terms):
    spf = _smallest_prime_factors(n_cut)
    pw = [mp.zero, mp.one]
    minus_s = -s
    for n in range(2, n_cut + 1):
        p = spf[n]
        if p == n:
            pw.append(mp.exp(minus_s * _log_int(mp, n)))
        else:
            pw.append(pw[p] * pw[n // p])
    total = mp.fsum(pw[1:n_cut])
    n_pow = pw[n_cut]
    total += n_pow * n_cut / (s - 1) + n_pow / 2
    coeffs = _em_coeffs(mp, 64)
    sigma = s.real
    poch = s
    term_pow = n_pow / n_cut
    inv_n2 = mp.one / (n_cut * n_cut)
    prev_bound = None
    j = 0
    while True:
        if j + 1 >= len(coeffs):
            coeffs = _em_coeffs(mp, 2 * len(coeffs))
        if j >= max_terms:
            raise CapError("Euler-Maclaurin correction did not converge")
        total += coeffs[j] * poch * term_pow
        # remainder after j+1 corrections:
        # |s(s+1)...(s+2j+2)| |B_{2j+4}/(2j+4)!| N^(-sigma-2j-3) / (sigma+2j+3)
        poch_next = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
        tail_den = sigma + 2 * j + 3
        if tail_den > 0:
            bound = abs(poch_next) * abs(coeffs[j + 1]) * abs(term_pow) * inv_n2 / tail_den
            scale = max(mp.one, abs(total))
            if bound < eps * scale:
                roundoff = eps * (n_cut + j + 4) * scale
                return total, bound + roundoff
            if prev_bound is not None and bound > prev_bound and j > 4:
                return None
            prev_bound = bound
        poch = poch_next
        term_pow *= inv_n2
        j += 1


def zeta_with_err(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """zeta(s) and an absolute error bound, both as mp numbers."""
    mp = ctx.mp
    s = as_mpc(s, mp)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real >= 0:
        return _zeta_em(mp, s, ctx)
    # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    z1, e1 = _zeta_em(mp, 1 - s, ctx)
    g, grel = _gamma(mp, 1 - s, ctx)
    factor = mp.power(2, s) * mp.power(mp.pi, s - 1) * mp.sinpi(s / 2) * g
    val = factor * z1
    err = abs(factor) * e1 + abs(val) * (grel + 8 * ctx.eps)
    return val, err


def zeta_mpc(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """zeta(s) as an mpc at the context's working precision."""
    return zeta_with_err(s, ctx)[0]


def complex_zeta(z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ComplexValue:
    """Riemann zeta(z) by Euler-Maclaurin summation with a remainder bound.

    Uses the Riemann functional equation for Re(z) < 0.  Raises PoleError at 1.
    """
    val, err = zeta_with_err(z, ctx)
    return ComplexValue(val.real, val.imag, err)


# ---------------------------------------------------------------------------
# numerical differentiation

def _call(fn, z, mp):
    v = fn(z)
    if isinstance(v, ComplexValue):
        return v.to_mpc(mp), v.err
    return mp.mpc(mp.convert(v)), mp.zero


def complex_derivative(
    fn: Callable,
    z,
    radius,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    tol=None,
    m_start: int = 16,
    m_max: int = 1024,
) -> ComplexValue:
    """f'(z) by the trapezoid rule on the Cauchy circle |w - z| = radius.

    The node count doubles from ``m_start`` (reusing previous nodes) until two
    successive estimates agree to ``tol`` relative (default ``ctx.tol``).
    ``fn`` receives an mpc and may return a number or a ComplexValue.
    """
    mp = ctx.mp
    radius = mp.mpf(radius) if not isinstance(radius, ComplexValue) else mp.mpf(radius.re)
    if not radius > 0:
        raise DomainError("radius must be positive")
    z0 = as_mpc(z, mp)
    tol = ctx.tol if tol is None else mp.mpf(tol)

    m = m_start
    samples: dict[int, Any] = {}  # node index on the finest grid -> f(node) e^{-i theta}
    fn_err = mp.zero
    level = m_max  # index nodes on the m_max grid

    def node(idx):
        nonlocal fn_err
        w = mp.expjpi(mp.mpf(2 * idx) / level)
        v, e = _call(fn, z0 + radius * w, mp)
        fn_err = max(fn_err, e)
        return v / w

    prev = None
    while True:
        stride = level // m
        for j in range(m):
            idx = j * stride
            if idx not in samples:
                samples[idx] = node(idx)
        est = mp.fsum(samples[j * stride] for j in range(m)) / (m * radius)
        if prev is not None:
            diff = abs(est - prev)
            if diff <= tol * max(mp.one, abs(est)):
                return ComplexValue(est.real, est.imag, diff + fn_err / radius)
        if m * 2 > m_max:
            raise ConvergenceError(f"Cauchy derivative not converged at M = {m}")
        prev = est
        m *= 2
