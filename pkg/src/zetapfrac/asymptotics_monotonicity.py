"""Monotonicity in x^2 of products over imaginary-axis zeros, and growth bounds.

For E(s) = K prod_m (1 - s/(i phi_m)) prod_k (1 + (s/theta_k)^2) and fixed t,
|E(x + it)| increases with v = x^2 because each factor satisfies

    |1 - s/(i r)|^2 = r^-2 (v + (t - r)^2),

and |E(x + it)|^-2 is completely monotone in v.  The module checks these
statements on finite truncations, together with the sine, b and zeta ratio
estimates used for the vanishing of f away from its poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, StepError
from .numkernel import DEFAULT_CONTEXT, ComplexValue, PrecisionContext, as_mpc, zeta_with_err
from .xi_core import block_mpc
from .zero_table import ZeroCache

__all__ = [
    "ProductDescriptor",
    "DRegion",
    "SPrime",
    "SignRow",
    "h_factor",
    "factor_identity_residual",
    "hadamard_xi",
    "monotone_profile",
    "xi_monotone_profile",
    "complete_monotone_check",
    "sin_product_decrease",
    "sin_modulus_identity_residual",
    "sin_recip_bound",
    "fit_sin_constant",
    "b_lower_bound_check",
    "calibrate_b_constant",
    "zeta_ratio_check",
    "region_member",
    "laplace_kernel_check",
    "f_decreasing_in_x",
]


@dataclass(frozen=True)
class ProductDescriptor:
    """Finite truncation of E: scale K, linear factors at i phi_m, paired factors at +-i theta_k."""

    K: object
    phis: tuple = ()
    thetas: tuple = ()

    def __post_init__(self):
        if self.K == 0:
            raise ValueError("K must be nonzero")
        if any(p == 0 for p in self.phis):
            raise ValueError("phi_m must be nonzero")
        if any(t <= 0 for t in self.thetas):
            raise ValueError("theta_k must be positive")
        object.__setattr__(self, "phis", tuple(self.phis))
        object.__setattr__(self, "thetas", tuple(sorted(self.thetas)))

    @classmethod
    def from_zeros(cls, cache: ZeroCache, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> "ProductDescriptor":
        """The product for xi(1/2 + s): K = xi(1/2), theta_k = gamma_k for k <= n."""
        if n > len(cache):
            raise IndexError(f"cache holds {len(cache)} zeros, {n} requested")
        k0 = block_mpc("xi", ctx.mp.mpf(0.5), ctx)[0].real
        return cls(k0, (), tuple(ctx.mp.mpf(g) for g in cache.gammas[:n]))

    def value(self, s, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """E(s) as an mpc, multiplied factor by factor."""
        mp = ctx.mp
        s = as_mpc(s, mp)
        val = mp.mpc(self.K)
        for p in self.phis:
            val *= 1 - s / mp.mpc(0, p)
        for th in self.thetas:
            val *= 1 + (s / th) ** 2
        return val

    def rho(self, v, t, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """|E(sqrt(v) + it)|^-2 through the factors h(v, t, r)."""
        mp = ctx.mp
        v, t = mp.mpf(v), mp.mpf(t)
        out = 1 / mp.mpf(abs(self.K)) ** 2
        for p in self.phis:
            out /= h_factor(v, t, p, mp)
        for th in self.thetas:
            out /= h_factor(v, t, th, mp) * h_factor(v, t, -th, mp)
        return out


def h_factor(z, u, r, mp=None):
    """h(z, u, r) = r^-2 (z + (u - r)^2)."""
    mp = mp or DEFAULT_CONTEXT.mp
    r = mp.mpf(r)
    return (z + (u - r) ** 2) / (r * r)


def factor_identity_residual(v, t, r, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """| |1 - s/(ir)|^2 - h(v, t, r) | at s = sqrt(v) + it."""
    mp = ctx.mp
    v, t, r = mp.mpf(v), mp.mpf(t), mp.mpf(r)
    s = mp.mpc(mp.sqrt(v), t)
    return abs(abs(1 - s / mp.mpc(0, r)) ** 2 - h_factor(v, t, r, mp))


def hadamard_xi(s, K_terms: int, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(xi(1/2) prod_{k<=K_terms} (1 + (s/gamma_k)^2), relative gap to xi(1/2 + s))."""
    mp = ctx.mp
    s = as_mpc(s, mp)
    desc = ProductDescriptor.from_zeros(cache, K_terms, ctx)
    val = desc.value(s, ctx)
    direct, derr = block_mpc("xi", mp.mpf(0.5) + s, ctx)
    gap = abs(val - direct) / abs(direct) if direct != 0 else mp.inf
    err = abs(val) * ctx.eps * (2 * K_terms + 4)
    return ComplexValue(val.real, val.imag, err), gap


def _increasing_violations(vals, tol, increasing=True) -> list[int]:
    bad = []
    for i in range(len(vals) - 1):
        a, b = vals[i], vals[i + 1]
        step = (b - a) if increasing else (a - b)
        if step < -tol * max(abs(a), abs(b)):
            bad.append(i)
    return bad


def _check_grid(grid):
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")


def monotone_profile(desc: ProductDescriptor, t, v_grid: Sequence, ctx: PrecisionContext = DEFAULT_CONTEXT,
                     reciprocal: bool = False) -> list[int]:
    """Indices i where |E(sqrt(v_i) + it)| fails to increase to v_{i+1} (1/|E| fails to decrease)."""
    _check_grid(v_grid)
    mp = ctx.mp
    vals = [abs(desc.value(mp.mpc(mp.sqrt(mp.mpf(v)), t), ctx)) for v in v_grid]
    if reciprocal:
        vals = [1 / x for x in vals]
    tol = ctx.eps * 10 * (len(desc.thetas) + len(desc.phis) + 1)
    return _increasing_violations(vals, tol, increasing=not reciprocal)


def xi_monotone_profile(t, v_grid: Sequence, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list[int]:
    """Indices where |xi(1/2 + sqrt(v) + it)|, evaluated directly, fails to increase."""
    _check_grid(v_grid)
    mp = ctx.mp
    vals, errs = [], []
    for v in v_grid:
        val, err = block_mpc("xi", mp.mpc(mp.mpf(0.5) + mp.sqrt(mp.mpf(v)), t), ctx)
        vals.append(abs(val))
        errs.append(err)
    bad = []
    for i in range(len(vals) - 1):
        if vals[i + 1] < vals[i] - (errs[i] + errs[i + 1]):
            bad.append(i)
    return bad


@dataclass(frozen=True)
class SignRow:
    j: int
    value: object  # (-1)^j Delta_h^j g(v0)
    ok: bool


def complete_monotone_check(desc: ProductDescriptor, t, v0, h, J: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                            tol=None) -> list[SignRow]:
    """Signs of (-1)^j Delta_h^j g(v0), j = 0..J, for g(v) = |E(sqrt(v) + it)|^-2.

    A forward difference equals h^j g^(j) at an interior point, so complete
    monotonicity forces every row to be >= 0; rows are accepted down to
    -tol * g(v0) (default tol = 10^(-digits/3)).
    """
    mp = ctx.mp
    if J < 0 or J > 6:
        raise ValueError("J must lie in 0..6")
    v0, h = mp.mpf(v0), mp.mpf(h)
    if v0 <= 0 or h <= 0:
        raise ValueError("v0 and h must be positive")
    if J > 0 and h > v0 / (2 * J):
        raise StepError(f"step {mp.nstr(h, 5)} exceeds v0/(2J) = {mp.nstr(v0 / (2 * J), 5)}")
    tol = mp.mpf(10) ** (-(ctx.digits / 3)) if tol is None else mp.mpf(tol)
    g = [desc.rho(v0 + i * h, t, ctx) for i in range(J + 1)]
    rows = []
    for j in range(J + 1):
        diff = mp.fsum((-1) ** (j - i) * mp.binomial(j, i) * g[i] for i in range(j + 1))
        val = (-1) ** j * diff
        rows.append(SignRow(j, val, bool(val >= -tol * g[0])))
    return rows


def sin_product_decrease(a, desc: ProductDescriptor, t, x_grid: Sequence, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list[int]:
    """Indices where 1/|sin(pi s/a) E(s)| fails to decrease along x_grid in (0, a/2)."""
    _check_grid(x_grid)
    mp = ctx.mp
    a = mp.mpf(a)
    if not (x_grid[0] > 0 and x_grid[-1] < a / 2):
        raise ValueError("x_grid must lie inside (0, a/2)")
    vals = []
    for x in x_grid:
        s = mp.mpc(x, t)
        vals.append(1 / abs(mp.sinpi(s / a) * desc.value(s, ctx)))
    tol = ctx.eps * 10 * (len(desc.thetas) + len(desc.phis) + 2)
    return _increasing_violations(vals, tol, increasing=False)


def sin_modulus_identity_residual(x, t, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """| |sin(x + it)|^2 - (cosh 2t - cos 2x)/2 |."""
    mp = ctx.mp
    x, t = mp.mpf(x), mp.mpf(t)
    return abs(abs(mp.sin(mp.mpc(x, t))) ** 2 - (mp.cosh(2 * t) - mp.cos(2 * x)) / 2)


def sin_recip_bound(z, d, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(1/|sin z|, e^-|Im z|) for z at distance >= d from every multiple of pi."""
    mp = ctx.mp
    z = as_mpc(z, mp)
    n = mp.nint(z.real / mp.pi)
    if abs(z - n * mp.pi) < d:
        raise DomainError("z lies inside an excluded disk around a multiple of pi")
    return 1 / abs(mp.sin(z)), mp.exp(-abs(z.imag))


def fit_sin_constant(d, points, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """max over the points of (1/|sin z|) / e^-|t|: the sampled epsilon(d)."""
    best = ctx.mp.zero
    for z in points:
        lhs, env = sin_recip_bound(z, d, ctx)
        best = max(best, lhs / env)
    return best


def _b_envelope(mp, s):
    x = s.real
    return abs(s) ** (-mp.mpf(7) / 4) * (2 * mp.e * mp.pi / abs(s)) ** (x / 2)


def _b_domain(mp, s, d):
    if s.real < 0:
        raise DomainError("the b bound is stated for Re(s) >= 0")
    if abs(s.real) < mp.mpf(0.5):
        raise DomainError("s must lie in S (|Re s| >= 1/2)")
    w = mp.nint(s.real / 4)
    if abs(s - 4 * w) < d or abs(s - mp.mpf(0.5)) < d:
        raise DomainError("s lies inside an excluded disk")


def b_lower_bound_check(s, d, ctx: PrecisionContext = DEFAULT_CONTEXT, K=None):
    """(1/|b(s)|, |s|^-7/4 (2 e pi/|s|)^(x/2) K) on S outside the real pole disks.

    Without K the bare envelope (K = 1) is returned as the second entry.
    """
    mp = ctx.mp
    s = as_mpc(s, mp)
    _b_domain(mp, s, d)
    bv, _ = block_mpc("b", s, ctx)
    env = _b_envelope(mp, s)
    return 1 / abs(bv), env * (1 if K is None else K)


def calibrate_b_constant(d, points, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Fitted K'(d): the largest ratio of 1/|b| to the bare envelope over the points."""
    best = ctx.mp.zero
    for s in points:
        lhs, env = b_lower_bound_check(s, d, ctx)
        best = max(best, lhs / env)
    return best


def zeta_ratio_check(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(|zeta(1/2 - s*)| / |zeta(1/2 + s)|, (|t|/2pi)^x, relative deviation, deviation * |t|)."""
    mp = ctx.mp
    s = as_mpc(s, mp)
    half = mp.mpf(0.5)
    if s.imag == 0:
        raise DomainError("need Im(s) != 0")
    num = abs(zeta_with_err(half - mp.conj(s), ctx)[0])
    den = abs(zeta_with_err(half + s, ctx)[0])
    ratio = num / den
    model = (abs(s.imag) / (2 * mp.pi)) ** s.real
    dev = abs(ratio / model - 1)
    return ratio, model, dev, dev * abs(s.imag)


@dataclass(frozen=True)
class DRegion:
    """D(t0, K) = {x + it : t >= t0, 0 <= x <= K / log t}."""

    t0: float
    K: float

    def __post_init__(self):
        if self.t0 <= 1 or self.K < 0:
            raise ValueError("need t0 > 1 and K >= 0")

    def __contains__(self, s) -> bool:
        s = complex(s)
        return s.imag >= self.t0 and 0 <= s.real <= self.K / math.log(s.imag)


@dataclass(frozen=True)
class SPrime:
    """S'(k): the right half of the closed disk of radius 1/log(gamma_k) about i gamma_k."""

    k: int


_D_WIDE = DRegion(math.e - 1, 2.0)


def region_member(s, kind, cache: ZeroCache | None = None) -> bool:
    """Membership of s in a DRegion or SPrime(k); S'(k) members are checked to lie in D(e - 1, 2)."""
    s = complex(s)
    if isinstance(kind, DRegion):
        return s in kind
    if isinstance(kind, SPrime):
        if cache is None:
            raise IndexError("S'(k) needs a zero cache")
        g = float(cache.record(kind.k).gamma)
        inside = s.real >= 0 and abs(s - complex(0, g)) <= 1 / math.log(g) * (1 + 1e-12)
        if inside:
            assert s in _D_WIDE, f"{s} lies in S'({kind.k}) but not in D(e - 1, 2)"
        return inside
    raise TypeError("kind must be a DRegion or SPrime")


def laplace_kernel_check(z, Y, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(|int_0^Y e^(-zy) dy - 1/z|, e^(-Re(z) Y)/Re(z)) for Re z > 0; the first never exceeds the second."""
    mp = ctx.mp
    z = as_mpc(z, mp)
    if z.real <= 0:
        raise DomainError("need Re(z) > 0")
    integral = mp.quad(lambda y: mp.exp(-z * y), [0, Y])
    return abs(integral - 1 / z), mp.exp(-z.real * Y) / z.real


def f_decreasing_in_x(t, xs: Sequence, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """Pairs (x_i, x_{i+1}) of |x| increasing in [0, 2] where |f(x + it)| increases beyond roundoff."""
    _check_grid(xs)
    mp = ctx.mp
    if xs[0] < 0 or xs[-1] > 2:
        raise ValueError("xs must lie in [0, 2]")
    vals = []
    for x in xs:
        v, e = block_mpc("f", mp.mpc(x, t), ctx)
        vals.append((abs(v), e))
    bad = []
    for i in range(len(xs) - 1):
        (a, ea), (b, eb) = vals[i], vals[i + 1]
        if b > a + ea + eb:
            bad.append((xs[i], xs[i + 1]))
    return bad
