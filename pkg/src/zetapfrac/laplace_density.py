"""The density g_0 and a numerical check of f(s) = int e^(sy) g_0(y) dy on 0 < Re s < 4.

    lambda(y) = 2 sum_k c(i gamma_k) cos(gamma_k y)
    g_0(y)    = P_0(pi e^(-2y))                        y > 0
    g_0(y)    = lambda(y) + c(0) - P_0(pi e^(2y))        y < 0

The integral is taken by composite Gauss-Legendre quadrature in double
precision over [y_min, y_max]; the parts outside the window are bounded
analytically.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coefficients import c_tilde, fitted_tail, p0_eval
from .errors import DomainError, WindowError
from .numkernel import DEFAULT_CONTEXT, PrecisionContext, as_mpc
from .partial_fraction import _decay, _imag_coeffs, _imag_tail
from .xi_core import block_mpc
from .zero_table import ZeroCache

__all__ = ["DensityConfig", "LaplaceResult", "lambda_eval", "g0_eval", "transform_residual"]


@dataclass(frozen=True)
class DensityConfig:
    """Zeros in lambda, P_0 terms, integration window, Gauss points per panel, window tolerance."""

    N: int = 100
    Kterms: int = 60
    y_min: float = -40.0
    y_max: float = 20.0
    quad_points: int = 8
    tol: float = 1e-12

    def __post_init__(self):
        if not self.y_min < 0 < self.y_max:
            raise ValueError("the window must contain 0 in its interior")
        if self.N < 1 or self.Kterms < 2 or self.quad_points < 2:
            raise ValueError("N, Kterms and quad_points are too small")


def lambda_eval(y, N: int, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(lambda(y) truncated at N zeros, fitted bound 2 sum_{k>N} |c(i gamma_k)|)."""
    mp = ctx.mp
    y = mp.mpf(y)
    coeffs = _imag_coeffs(cache, N, ctx)
    val = 2 * mp.fsum(c * mp.cos(mp.mpf(r.gamma) * y) for c, r in zip(coeffs, cache.records[:N]))
    return val, _lambda_tail(cache, N, ctx)


def _lambda_tail(cache, N, ctx):
    fit = _decay(cache, N, ctx)
    if fit is None:
        return math.inf
    return 2 * fitted_tail(fit, float(cache.records[N - 1].gamma), lambda g: 1.0)


def g0_eval(y, config: DensityConfig, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(g_0(y), error budget).  DomainError at y = 0, where the two branches meet."""
    mp = ctx.mp
    y = mp.mpf(y)
    if y == 0:
        raise DomainError("g_0 is defined separately on y > 0 and y < 0")
    if y > 0:
        p = p0_eval(mp.pi * mp.exp(-2 * y), ctx)
        return p.re, p.err
    lam, tail = lambda_eval(y, config.N, cache, ctx)
    p = p0_eval(mp.pi * mp.exp(2 * y), ctx)
    return lam + c_tilde(0, ctx) - p.re, p.err + tail


@functools.lru_cache(maxsize=8)
def _p0_coeffs(Kterms: int, ctx: PrecisionContext) -> np.ndarray:
    return np.array([float(c_tilde(k, ctx)) for k in range(1, Kterms + 1)])


def _p0_float(z: np.ndarray, ct: np.ndarray) -> np.ndarray:
    """-sum_k ct_k (-z^2)^k by Horner's rule in q = -z^2 (z <= pi keeps the terms tame)."""
    q = -z * z
    acc = np.zeros_like(z)
    for c in ct[::-1]:
        acc = (acc + c) * q
    return -acc


def _panels(a: float, b: float, width: float) -> np.ndarray:
    n = max(1, math.ceil((b - a) / width))
    return np.linspace(a, b, n + 1)


def _gauss(edges: np.ndarray, npts: int):
    x, w = np.polynomial.legendre.leggauss(npts)
    mid = (edges[1:] + edges[:-1]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class LaplaceResult:
    integral: complex
    f_value: complex
    residual: float
    budget: float
    quad_err: float
    window_tail: float
    lambda_tail: float

    def to_dict(self) -> dict:
        return {
            "integral_re": self.integral.real,
            "integral_im": self.integral.imag,
            "f_re": self.f_value.real,
            "f_im": self.f_value.imag,
            "residual": self.residual,
            "budget": self.budget,
        }


def transform_residual(s, config: DensityConfig, cache: ZeroCache, ctx: PrecisionContext = DEFAULT_CONTEXT,
                       backend=None) -> LaplaceResult:
    """Integrate e^(sy) g_0(y) over the window and compare with f(s).

    The budget adds the quadrature error estimate (difference against a rule
    with half the points), the analytic window tails and the fitted lambda
    truncation contribution.  WindowError if the window tails exceed config.tol.
    """
    mp = ctx.mp
    sv = complex(s)
    sigma = sv.real
    if not 0 < sigma < 4:
        raise DomainError("s must lie in the strip 0 < Re s < 4")
    if config.N > len(cache):
        raise IndexError(f"cache holds {len(cache)} zeros, {config.N} requested")
    kern = kernels.get_backend(backend)
    ct = _p0_coeffs(config.Kterms, ctx)
    coeffs = np.array([2 * float(c) for c in _imag_coeffs(cache, config.N, ctx)])
    freqs = np.array([float(r.gamma) for r in cache.records[: config.N]])
    c0 = float(c_tilde(0, ctx))

    # window tails: |g_0| <= |c~(4)| pi^2 e^(-4y) (1 + small) on the right,
    # |g_0| <= sum |coeffs| + c0 + |P_0|max on the left
    right_const = 1.01 * float(ct[0]) * math.pi ** 2
    right_tail = right_const * math.exp((sigma - 4) * config.y_max) / (4 - sigma)
    left_const = float(np.abs(coeffs).sum()) + c0 + right_const
    left_tail = left_const * math.exp(sigma * config.y_min) / sigma
    window_tail = right_tail + left_tail
    if window_tail > config.tol:
        raise WindowError(f"window tails {window_tail:.3e} exceed the tolerance {config.tol:.1e}")

    def g_left(y):
        return kern.cosine_series(y, coeffs, freqs) + c0 - _p0_float(math.pi * np.exp(2 * y), ct)

    def g_right(y):
        return _p0_float(math.pi * np.exp(-2 * y), ct)

    width_left = min(0.25, 1.0 / float(freqs[-1]))
    parts = [(_panels(config.y_min, 0.0, width_left), g_left), (_panels(0.0, config.y_max, 0.25), g_right)]
    totals = []
    for npts in (config.quad_points, max(2, config.quad_points // 2)):
        acc = 0j
        for edges, g in parts:
            nodes, weights = _gauss(edges, npts)
            acc += complex(np.sum(weights * np.exp(sv * nodes) * g(nodes)))
        totals.append(acc)
    integral = totals[0]
    quad_err = abs(totals[0] - totals[1])

    fv = complex(block_mpc("f", as_mpc(sv, mp), ctx)[0])
    lam_tail = float(_imag_tail(mp, as_mpc(sv, mp), config.N, cache, ctx))
    residual = abs(integral - fv)
    budget = quad_err + window_tail + lam_tail + 1e-14 * (1 + abs(fv))
    return LaplaceResult(integral, fv, residual, budget, quad_err, window_tail, lam_tail)
