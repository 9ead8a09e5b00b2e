"""Truncated partial fraction expansions of f and the defect Delta = f - p.

    p_r(s) = c(0)/s + sum_{1<=w<=W} c(4w) (1/(s - 4w) + 1/(s + 4w))
    p_i(s) = 2 s sum_{1<=k<=N} c(i gamma_k) / (s^2 + gamma_k^2)

Also local pole terms T(s) on the disks B(4w, d) and B(i gamma_k, alpha delta_k'),
the uniform bound A' for sums of |c_z|/|s - z| off disjoint disks, the Taylor
remainder bound, and the two-sided check of the single-pole decomposition
of 1/(A B).
"""

from __future__ import annotations

import bisect
import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .coefficients import DecayFit, ImagPole, RealPole, c_at, c_tilde, fit_decay, fitted_tail
from .errors import AnalyticityWarning, CaseError, DisjointnessError, DomainError, PoleError
from .numkernel import DEFAULT_CONTEXT, ComplexValue, PrecisionContext, as_mpc, complex_derivative, zeta_with_err
from .xi_core import block_mpc
from .zero_table import ZeroCache, zeta_prime_at_zero

__all__ = [
    "ExpansionTruncation",
    "RegionTag",
    "DeltaValue",
    "TailBound",
    "DecompositionResult",
    "classify",
    "p_r_eval",
    "p_i_eval",
    "p_eval",
    "delta_eval",
    "local_term",
    "tail_bound_A_prime",
    "expansion_poles",
    "taylor_remainder_check",
    "decomposition_check",
    "arc_points",
    "strip_points",
    "max_abs_delta",
]

POLE_GUARD = 1e-3


@dataclass(frozen=True)
class ExpansionTruncation:
    """Cutoffs W (real poles) and N (imaginary poles) and the disk radii d, alpha."""

    W: int = 50
    N: int = 100
    d: float = 2.0
    alpha: float = 0.25
    tail_real: float = 0.0
    tail_imag: float = 0.0

    def __post_init__(self):
        if self.W < 0 or self.N < 0:
            raise ValueError("W and N must be nonnegative")
        if not 0 < self.d <= 2:
            raise ValueError("d must lie in (0, 2]")
        if not 0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 1/2)")


@dataclass(frozen=True)
class RegionTag:
    """kind is 'real' (disk B(4w, d)), 'imag' (disk B(i gamma_k, alpha delta_k')) or 'exterior'."""

    kind: str
    index: int | None
    S_member: bool

    def __str__(self):
        if self.kind == "exterior":
            return "exterior"
        return f"{self.kind}:{self.index}"


# ---------------------------------------------------------------------------
# cached per-table data

@functools.lru_cache(maxsize=16)
def _table(cache: ZeroCache, ctx: PrecisionContext):
    """Float ordinates, float delta', and mp ordinates of the cache."""
    mp = ctx.mp
    g = [float(r.gamma) for r in cache.records]
    dp = [float(r.delta_prime) for r in cache.records]
    gm = [mp.mpf(r.gamma) for r in cache.records]
    return g, dp, gm


@functools.lru_cache(maxsize=16)
def _imag_coeffs(cache: ZeroCache, N: int, ctx: PrecisionContext):
    return tuple(ctx.mp.mpf(c_at(ImagPole(k), cache, ctx)) for k in range(1, N + 1))


@functools.lru_cache(maxsize=16)
def _decay(cache: ZeroCache, N: int, ctx: PrecisionContext) -> DecayFit | None:
    if N < 6:
        return None
    gammas = [r.gamma for r in cache.records[:N]]
    return fit_decay(gammas, _imag_coeffs(cache, N, ctx))


# ---------------------------------------------------------------------------
# regions

def _real_disk_index(s: complex, d: float) -> int | None:
    # ties at 4w + 2 (touching disks when d = 2) go to the smaller |w|
    q = s.real / 4
    w = math.floor(q + 0.5) if q < 0 else math.ceil(q - 0.5)
    if abs(s - 4 * w) <= d:
        return w
    return None


def _imag_disk_index(s: complex, alpha: float, cache: ZeroCache, ctx) -> int | None:
    if cache is None or len(cache) == 0:
        return None
    g, dp, _ = _table(cache, ctx)
    t = abs(s.imag)
    sign = 1 if s.imag >= 0 else -1
    j = bisect.bisect_left(g, t)
    best = None
    for i in (j - 1, j):
        if 0 <= i < len(g):
            dist = abs(complex(s.real, t) - complex(0, g[i]))
            if dist <= alpha * dp[i] and (best is None or dist < best[0]):
                best = (dist, i + 1)
    return None if best is None else sign * best[1]


def classify(s, trunc: ExpansionTruncation = ExpansionTruncation(), cache: ZeroCache | None = None,
             ctx: PrecisionContext = DEFAULT_CONTEXT) -> RegionTag:
    """Locate s relative to the real and imaginary pole disks.

    Imaginary disks are only known for zeros in the cache; beyond its range
    points are reported as exterior unless they fall in a real disk.
    """
    z = complex(s)
    in_s = abs(z.real) >= 0.5
    w = _real_disk_index(z, trunc.d)
    if w is not None:
        return RegionTag("real", w, in_s)
    k = _imag_disk_index(z, trunc.alpha, cache, ctx)
    if k is not None:
        return RegionTag("imag", k, in_s)
    return RegionTag("exterior", None, in_s)


# ---------------------------------------------------------------------------
# truncated expansions

def _real_tail(mp, s, W: int, ctx):
    """Bound on sum_{w>W} |c(4w)| (1/|s-4w| + 1/|s+4w|)."""
    c1 = abs(c_tilde(W + 1, ctx)) * mp.pi ** (2 * (W + 1))
    c2 = abs(c_tilde(W + 2, ctx)) * mp.pi ** (2 * (W + 2))
    q = c2 / c1
    if q >= 1:
        return mp.inf
    x = abs(s.real)
    w_near = max(W + 1, int(mp.nint(x / 4)))
    dist = min(abs(mp.mpc(x, s.imag) - 4 * w_near), abs(mp.mpc(x, s.imag) - 4 * (W + 1)))
    if dist == 0:
        return mp.inf
    return 2 * c1 / (1 - q) / dist


def p_r_eval(s, W: int = 50, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(p_r(s) truncated at W, tail bound).  PoleError at 4w with |w| <= W."""
    mp = ctx.mp
    s = as_mpc(s, mp)
    guard = mp.mpf(10) ** (-(ctx.digits // 2))
    w0 = int(mp.nint(s.real / 4))
    if abs(w0) <= W and abs(s - 4 * w0) < guard:
        raise PoleError(f"p_r has a pole at s = {4 * w0}")
    terms = [c_tilde(0, ctx) / s]
    for w in range(1, W + 1):
        c = c_at(RealPole(w), ctx=ctx)
        terms.append(c * (2 * s) / (s * s - 16 * w * w))
    val = mp.fsum(terms)
    err = ctx.eps * mp.fsum(abs(t) for t in terms) * 4
    return ComplexValue(val.real, val.imag, err), _real_tail(mp, s, W, ctx)


def _imag_tail(mp, s, N: int, cache: ZeroCache, ctx):
    """Fitted bound on 2|s| sum_{k>N} |c(i gamma_k)| / |s^2 + gamma_k^2|."""
    fit = _decay(cache, N, ctx)
    if fit is None:
        return mp.inf
    g_n = float(cache.records[N - 1].gamma)
    a = float(abs(s))
    if a >= g_n / math.sqrt(2):
        return mp.inf
    # |s^2 + gamma^2| >= gamma^2 - |s|^2 >= gamma^2 / 2
    return mp.mpf(2 * a * fitted_tail(fit, g_n, lambda g: 2.0 / g ** 2))


def p_i_eval(s, N: int, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(p_i(s) truncated at N, fitted tail bound).  PoleError at +-i gamma_k, k <= N."""
    mp = ctx.mp
    s = as_mpc(s, mp)
    if N > len(cache):
        raise IndexError(f"cache holds {len(cache)} zeros, {N} requested")
    _, _, gm = _table(cache, ctx)
    coeffs = _imag_coeffs(cache, N, ctx)
    s2 = s * s
    guard = mp.mpf(10) ** (-(ctx.digits // 2))
    terms = []
    for c, g in zip(coeffs, gm[:N]):
        den = s2 + g * g
        if abs(den) < guard * g:
            raise PoleError(f"p_i has a pole at s = +-{mp.nstr(g, 15)} i")
        terms.append(c / den)
    val = 2 * s * mp.fsum(terms) if terms else mp.mpc(0)
    err = 2 * abs(s) * ctx.eps * mp.fsum(abs(t) for t in terms) * 4 if terms else mp.zero
    return ComplexValue(val.real, val.imag, err), (_imag_tail(mp, s, N, cache, ctx) if N else mp.inf)


def p_eval(s, trunc: ExpansionTruncation, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(p_r + p_i, combined tail)."""
    pr, tr = p_r_eval(s, trunc.W, ctx)
    pi, ti = p_i_eval(s, trunc.N, cache, ctx)
    return pr + pi, tr + ti


@dataclass(frozen=True)
class DeltaValue:
    delta: ComplexValue
    f: ComplexValue
    p: ComplexValue
    tail_budget: object

    @property
    def budget(self):
        """Tail budget plus the evaluation error of Delta."""
        return self.tail_budget + self.delta.err


def _check_pole_distance(s: complex, trunc: ExpansionTruncation, cache: ZeroCache | None, ctx):
    w = round(s.real / 4)
    if abs(w) <= trunc.W and abs(s - 4 * w) < POLE_GUARD:
        raise PoleError(f"s is within {POLE_GUARD} of the pole {4 * w}")
    if cache is not None and trunc.N:
        g, _, _ = _table(cache, ctx)
        t = abs(s.imag)
        j = bisect.bisect_left(g, t, hi=trunc.N)
        for i in (j - 1, j):
            if 0 <= i < trunc.N and abs(complex(s.real, t) - complex(0, g[i])) < POLE_GUARD:
                raise PoleError(f"s is within {POLE_GUARD} of the pole i gamma_{i + 1}")


def delta_eval(s, trunc: ExpansionTruncation, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DeltaValue:
    """Delta(s) = f(s) - p_r(s; W) - p_i(s; N) with the truncation tail budget.

    Raises PoleError within 10^-3 of any pole kept in the truncation.
    """
    mp = ctx.mp
    s = as_mpc(s, mp)
    _check_pole_distance(complex(s), trunc, cache, ctx)
    fv, ferr = block_mpc("f", s, ctx)
    f = ComplexValue(fv.real, fv.imag, ferr)
    p, tail = p_eval(s, trunc, cache, ctx)
    return DeltaValue(f - p, f, p, tail)


def local_term(s, region: RegionTag, cache: ZeroCache | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(T(s), f(s) - T(s)) for the pole owning the disk that contains s."""
    mp = ctx.mp
    s = as_mpc(s, mp)
    if region.kind == "real":
        z = mp.mpc(4 * region.index)
        c = c_at(RealPole(region.index), ctx=ctx)
    elif region.kind == "imag":
        k = region.index
        z = mp.mpc(0, cache.gamma(k))
        c = c_at(ImagPole(k), cache, ctx)
    else:
        raise DomainError("local term is only defined inside a pole disk")
    h = s - z
    if h == 0:
        raise PoleError("s coincides with the pole")
    T = c / h
    fv, ferr = block_mpc("f", s, ctx)
    Tv = ComplexValue(T.real, T.imag, abs(T) * ctx.eps * 4)
    diff = fv - T
    return Tv, ComplexValue(diff.real, diff.imag, ferr + Tv.err)


# ---------------------------------------------------------------------------
# the uniform bound A'

@dataclass(frozen=True)
class TailBound:
    """A' = sum |c_z|/d_z for a finite set of disjoint pole disks, and R(eps)."""

    centers: tuple
    radii: tuple
    weights: tuple
    A_prime: float
    eps: float | None = None
    r_eps: float | None = None
    m_eps: float | None = None
    theta: float | None = None
    R_eps: float | None = None

    def owner(self, s: complex) -> int | None:
        for i, (z, d) in enumerate(zip(self.centers, self.radii)):
            if abs(s - z) <= d:
                return i
        return None

    def G_prime(self, s) -> float:
        """sum over poles whose disk does not contain s of |c_z| / |s - z|."""
        s = complex(s)
        own = self.owner(s)
        return math.fsum(c / abs(s - z) for i, (z, c) in enumerate(zip(self.centers, self.weights)) if i != own)


def _check_disjoint(centers: Sequence[complex], radii: Sequence[float]):
    order = sorted(range(len(centers)), key=lambda i: centers[i].real - radii[i])
    active: list[int] = []
    for i in order:
        left = centers[i].real - radii[i]
        active = [j for j in active if centers[j].real + radii[j] >= left]
        for j in active:
            gap = abs(centers[i] - centers[j]) - (radii[i] + radii[j])
            # closed disks that merely touch are accepted
            if gap < -1e-12 * max(1.0, abs(centers[i])):
                raise DisjointnessError(f"disks around {centers[i]} and {centers[j]} overlap")
        active.append(i)


def tail_bound_A_prime(poles: Iterable, eps: float | None = None) -> TailBound:
    """A' for poles given as (center, radius, |coeff|) triples; with eps, also R(eps).

    R(eps) = m(eps) + 2 theta / eps where r(eps) is the least r' >= 0 with
    sum_{|z| > r'} |c_z|/d_z < eps/2, m(eps) the largest |z| <= r(eps) and
    theta = sum_{|z| <= r(eps)} |c_z|.  Then G'(s) < eps for |s| >= R(eps).
    """
    poles = [(complex(z), float(d), abs(float(c))) for z, d, c in poles]
    if any(d <= 0 for _, d, _ in poles):
        raise ValueError("radii must be positive")
    centers = tuple(p[0] for p in poles)
    radii = tuple(p[1] for p in poles)
    weights = tuple(p[2] for p in poles)
    _check_disjoint(centers, radii)
    a_prime = math.fsum(c / d for c, d in zip(weights, radii))
    if eps is None:
        return TailBound(centers, radii, weights, a_prime)
    if eps <= 0:
        raise ValueError("eps must be positive")
    mods = sorted(set(abs(z) for z in centers))
    r_eps = None
    for cand in [0.0] + mods:
        outer = math.fsum(c / d for z, d, c in poles if abs(z) > cand)
        if outer < eps / 2:
            r_eps = cand
            break
    inner = [(abs(z), c) for z, _, c in poles if abs(z) <= r_eps]
    if inner:
        m_eps = max(m for m, _ in inner)
        theta = math.fsum(c for _, c in inner)
    else:
        m_eps, theta = 0.0, 0.0
    R_eps = m_eps + 2 * theta / eps
    return TailBound(centers, radii, weights, a_prime, eps, r_eps, m_eps, theta, R_eps)


def expansion_poles(trunc: ExpansionTruncation, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """(center, radius, |c|) for every pole kept in the truncation, both signs."""
    out = [(0j, trunc.d, float(abs(c_tilde(0, ctx))))]
    for w in range(1, trunc.W + 1):
        c = float(abs(c_at(RealPole(w), ctx=ctx)))
        out += [(complex(4 * w), trunc.d, c), (complex(-4 * w), trunc.d, c)]
    _, dp, _ = _table(cache, ctx)
    for k, c in enumerate(_imag_coeffs(cache, trunc.N, ctx), start=1):
        g = float(cache.gamma(k))
        r = trunc.alpha * dp[k - 1]
        out += [(complex(0, g), r, float(abs(c))), (complex(0, -g), r, float(abs(c)))]
    return out


# ---------------------------------------------------------------------------
# Taylor remainder and the single pole decomposition

def _circle(mp, z0, radius, count, offset=0):
    return [z0 + radius * mp.expjpi(mp.mpf(2 * j + offset) / count) for j in range(count)]


def _taylor_coeffs(fn, z0, radius, n, ctx, m_start=32, m_max=2048):
    """First n Taylor coefficients of fn at z0 by the trapezoid rule on a circle."""
    mp = ctx.mp
    m = m_start
    prev = None
    while True:
        nodes = _circle(mp, z0, radius, m)
        vals = [as_mpc(fn(z), mp) for z in nodes]
        coeffs = []
        for k in range(n):
            acc = mp.fsum(v * mp.expjpi(-mp.mpf(2 * j * k) / m) for j, v in enumerate(vals))
            coeffs.append(acc / (m * radius ** k))
        if prev is not None and all(abs(a - b) <= ctx.tol * max(1, abs(a)) for a, b in zip(coeffs, prev)):
            return coeffs
        if 2 * m > m_max:
            return coeffs
        prev = coeffs
        m *= 2


def taylor_remainder_check(fn: Callable, z0, rho, r, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT, samples: int = 64):
    """(max |F_n| on |z - z0| = r, M(fn, z0, rho) / (rho^(n-1) (rho - r))).

    F_n(z) = (fn(z) - sum_{k<n} a_k (z - z0)^k) / (z - z0)^n.  If fn fails
    inside the rho-disk an AnalyticityWarning is issued and lhs is inf.
    """
    mp = ctx.mp
    z0 = as_mpc(z0, mp)
    rho, r = mp.mpf(rho), mp.mpf(r)
    if not 0 < r < rho:
        raise ValueError("need 0 < r < rho")
    if n < 1:
        raise ValueError("n must be positive")
    try:
        coeffs = _taylor_coeffs(fn, z0, (r + rho) / 2, n, ctx)
        big_m = max(abs(as_mpc(fn(z), mp)) for z in _circle(mp, z0, rho, samples))
        lhs = mp.zero
        for z in _circle(mp, z0, r, samples, offset=1):
            h = z - z0
            poly = mp.fsum(a * h ** k for k, a in enumerate(coeffs))
            lhs = max(lhs, abs((as_mpc(fn(z), mp) - poly) / h ** n))
    except (ArithmeticError, ValueError, PoleError) as exc:
        warnings.warn(f"function not analytic on the disk: {exc}", AnalyticityWarning, stacklevel=2)
        return mp.inf, mp.inf
    return lhs, big_m / (rho ** (n - 1) * (rho - r))


@dataclass(frozen=True)
class DecompositionResult:
    """Both sides of the single pole decomposition and the remainder bound."""

    lhs: object
    rhs: object
    residual: object
    tolerance: object
    delta_abs: object
    bound: object

    @property
    def identity_holds(self) -> bool:
        return self.residual <= self.tolerance

    @property
    def bound_holds(self) -> bool:
        return self.delta_abs <= self.bound * 1.01


def decomposition_check(s, pole, case: str, cache: ZeroCache | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT,
                        *, d: float = 2.0, alpha: float = 0.25, samples: int = 64) -> DecompositionResult:
    """Check Delta(s, z) = A(s)^-1 (B(s)^-1 - B'(z)^-1 (s-z)^-1) + B'(z)^-1 F_1(s, 1/A, z).

    case 'prime': pole = RealPole(w), B = sin(pi s/4), A = 2 xi(1/2 + s), r = d, rho = rho' = 3.
    case 'doubleprime': pole = ImagPole(k), B = zeta(1/2 + s), A = b(s), r = alpha delta_k',
    rho = rho' = delta_k'.  The left side is f(s) - c(z)/(s - z) with the closed form c.
    """
    mp = ctx.mp
    s = as_mpc(s, mp)
    half = mp.mpf(0.5)
    if case == "prime":
        if not isinstance(pole, RealPole):
            raise CaseError("case prime needs a RealPole")
        w = pole.w
        z = mp.mpc(4 * w)
        r, rho, rho_p = mp.mpf(d), mp.mpf(3), mp.mpf(3)

        def B(u):
            return mp.sinpi(u / 4)

        def A(u):
            v, e = block_mpc("xi", half + u, ctx)
            return 2 * v, 2 * e

        Bp = mp.pi / 4 * (-1) ** w
        Bp_err = mp.zero
        c = c_at(pole, ctx=ctx)
    elif case == "doubleprime":
        if not isinstance(pole, ImagPole) or cache is None:
            raise CaseError("case doubleprime needs an ImagPole and a zero cache")
        k = pole.k
        rec = cache.record(abs(k))
        z = mp.mpc(0, cache.gamma(k))
        dprime = mp.mpf(rec.delta_prime)
        r, rho, rho_p = alpha * dprime, dprime, dprime

        def B(u):
            return zeta_with_err(half + u, ctx)[0]

        def A(u):
            return block_mpc("b", u, ctx)

        zp = zeta_prime_at_zero(cache, k, ctx)
        Bp, Bp_err = zp.to_mpc(mp), zp.err
        c = c_at(pole, cache, ctx)
    else:
        raise CaseError(f"unknown case {case!r}")
    h = s - z
    if abs(h) > r * (1 + mp.mpf(10) ** -12):
        raise CaseError("s lies outside the disk of radius r around the pole")
    if h == 0:
        raise CaseError("s coincides with the pole")

    Av, Aerr = A(s)
    Az, Azerr = A(z)
    Bs = B(s)
    fv, ferr = block_mpc("f", s, ctx)
    lhs = fv - c / h
    # F_1(s, 1/A, z); near z the difference quotient is replaced by the derivative
    if abs(h) < mp.mpf(10) ** (-(ctx.dps // 3)):
        dA = complex_derivative(lambda u: 1 / A(u)[0], z, r, ctx).to_mpc(mp)
        F1 = dA
    else:
        F1 = (1 / Av - 1 / Az) / h
    rhs = (1 / Av) * (1 / Bs - 1 / (Bp * h)) + F1 / Bp
    residual = abs(lhs - rhs)
    scale = abs(c / h) + abs(1 / (Av * Bs)) + abs(F1 / Bp)
    tolerance = (ferr + scale * (Aerr / abs(Av) + Azerr / abs(Az) + Bp_err / abs(Bp)) + scale * ctx.eps) * 10
    tolerance += ctx.eps * 100 * scale

    # remainder bound from the Taylor estimates for F_2(s, B, z) and F_1(s, 1/A, z)
    m_B = max(abs(B(u)) for u in _circle(mp, z, rho, samples))
    m_invA = max(abs(1 / A(u)[0]) for u in _circle(mp, z, rho_p, samples))
    quot = Bs / h if abs(h) > 0 else Bp
    bound = (m_B / (rho * (rho - r) * abs(Av * quot)) + m_invA / (rho_p - r)) / abs(Bp)
    return DecompositionResult(lhs, rhs, residual, tolerance, abs(lhs), bound)


# ---------------------------------------------------------------------------
# sampling helpers for the vanishing trends

def arc_points(R: float, count: int = 64) -> list[complex]:
    """Points on the quarter arc |s| = R, Re s >= 1/2, Im s >= 0 (symmetry covers the rest)."""
    top = math.acos(0.5 / R)
    return [R * complex(math.cos(a), math.sin(a)) for a in ((j + 0.5) * top / count for j in range(count))]


def strip_points(T: float, count: int = 32) -> list[complex]:
    """Points x + iT with 0 <= x < 1/2 (|Delta| is even in x on this segment)."""
    return [complex(0.5 * j / count, T) for j in range(count)]


def max_abs_delta(points: Iterable[complex], trunc: ExpansionTruncation, cache: ZeroCache,
                  ctx: PrecisionContext = DEFAULT_CONTEXT, *, skip_imag_disks: bool = False):
    """(max |Delta|, max budget, points used), skipping points at poles (and inside B_i if asked)."""
    mp = ctx.mp
    best, budget, used = mp.zero, mp.zero, 0
    for s in points:
        if skip_imag_disks and classify(s, trunc, cache, ctx).kind == "imag":
            continue
        try:
            dv = delta_eval(s, trunc, cache, ctx)
        except PoleError:
            continue
        used += 1
        best = max(best, abs(dv.delta))
        budget = max(budget, dv.budget)
    return best, budget, used
