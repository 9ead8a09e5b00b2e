"""Pure-Python double precision kernels.

Same interface as the compiled ``_ckernels`` module; used when the extension
is not built or ``ZETAPFRAC_PURE=1`` is set.
"""

import cmath
import math
from fractions import Fraction

import numpy as np

_LOG_PI = math.log(math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def bernoulli_even(count):
    """Return [B_2, B_4, ..., B_{2*count}] as Fractions (Akiyama-Tanigawa)."""
    n_max = 2 * count
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return out


def _em_coefficients(count):
    # B_{2j} / (2j)!
    bs = bernoulli_even(count)
    return [float(b / math.factorial(2 * (j + 1))) for j, b in enumerate(bs)]


def _stirling_coefficients(count):
    # B_{2j} / (2j (2j-1))
    bs = bernoulli_even(count)
    return [float(b / ((2 * (j + 1)) * (2 * (j + 1) - 1))) for j, b in enumerate(bs)]


EM_COEFFS = _em_coefficients(40)
STIRLING_COEFFS = _stirling_coefficients(12)


def zeta_d(sigma, t):
    """Euler-Maclaurin zeta(sigma + i t) in double precision, sigma >= 0."""
    s = complex(sigma, t)
    n_cut = max(12, int(math.ceil((abs(s) + 40.0) / math.pi)))
    total = 0j
    for n in range(1, n_cut):
        ln = math.log(n)
        mag = math.exp(-sigma * ln)
        total += complex(mag * math.cos(t * ln), -mag * math.sin(t * ln))
    ln_n = math.log(n_cut)
    mag = math.exp(-sigma * ln_n)
    n_pow = complex(mag * math.cos(t * ln_n), -mag * math.sin(t * ln_n))
    total += n_pow * n_cut / (s - 1.0) + 0.5 * n_pow
    # Bernoulli corrections: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    poch = s
    term_pow = n_pow / n_cut
    inv_n2 = 1.0 / (n_cut * n_cut)
    for j, coeff in enumerate(EM_COEFFS):
        term = coeff * poch * term_pow
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
        poch *= (s + 2 * j + 1) * (s + 2 * j + 2)
        term_pow *= inv_n2
    return total


def loggamma_d(z):
    """log Gamma(z) for Re(z) > 0 by upward shift plus Stirling series."""
    shift = 0j
    w = z
    while w.real < 12.0:
        shift += cmath.log(w)
        w += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    acc = 0j
    p = inv
    for c in STIRLING_COEFFS:
        acc += c * p
        p *= inv2
    return (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI + acc - shift


def theta_d(t):
    """Riemann-Siegel theta function."""
    return loggamma_d(complex(0.25, 0.5 * t)).imag - 0.5 * t * _LOG_PI


def hardy_z(ts):
    """Hardy Z(t) on an array; sign(Z) = -sign(Xi) for real t."""
    ts = np.asarray(ts, dtype=float)
    out = np.empty_like(ts)
    for i, t in enumerate(ts):
        th = theta_d(t)
        out[i] = (cmath.exp(1j * th) * zeta_d(0.5, t)).real
    return out


def zeta_line(sigma, ts):
    """zeta(sigma + i t) for an array of t."""
    ts = np.asarray(ts, dtype=float)
    out = np.empty(ts.shape, dtype=complex)
    for i, t in enumerate(ts):
        out[i] = zeta_d(sigma, t)
    return out


def cosine_series(ys, coeffs, freqs):
    """sum_k coeffs[k] * cos(freqs[k] * y) for each y."""
    ys = np.asarray(ys, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    freqs = np.asarray(freqs, dtype=float)
    out = np.empty_like(ys)
    for i, y in enumerate(ys):
        acc = 0.0
        for c, g in zip(coeffs, freqs):
            acc += c * math.cos(g * y)
        out[i] = acc
    return out
