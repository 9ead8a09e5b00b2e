import math

import numpy as np
import pytest

from zetapfrac.contour_audit import (
    contour_minimum,
    contour_point,
    envelope_fit,
    exponent_estimates,
    j_k_eval,
    monotone_replacement_check,
)
from zetapfrac.errors import DomainError, InsufficientData


@pytest.fixture(scope="module")
def report(cache100, ctx):
    return exponent_estimates(100, 0.25, cache100, ctx)


def test_contour_geometry(cache100):
    g1, g2 = float(cache100.gamma(1)), float(cache100.gamma(2))
    r1 = 0.25 * float(cache100.record(1).delta_prime)
    assert contour_point((g1 + g2) / 2, 0.25, cache100) == complex(0, (g1 + g2) / 2)
    apex = contour_point(g1, 0.25, cache100)
    assert apex.real == pytest.approx(r1, rel=1e-12)
    with pytest.raises(DomainError):
        contour_point(g1 - r1, 0.25, cache100)
    with pytest.raises(DomainError):
        contour_point(float(cache100.t_max) + 1, 0.25, cache100)


@pytest.mark.parametrize("sign", [1, -1])
def test_contour_continuity(cache100, sign):
    g1 = float(cache100.gamma(1))
    r1 = 0.25 * float(cache100.record(1).delta_prime)
    # near a semicircle end x(t) behaves like sqrt(2 r |t - t_end|)
    for eps in (1e-8, -1e-8):
        t = g1 + sign * r1 + eps
        if t <= g1 - r1:
            continue
        x = contour_point(t, 0.25, cache100).real
        assert x <= math.sqrt(2 * r1 * 2e-8) + 1e-12


def test_j_k_bounds(cache100, ctx):
    for k in (1, 2, 37):
        jk = j_k_eval(k, 0.25, cache100, ctx)
        zp = abs(cache100.record(k).zeta_prime.to_mpc())
        assert 0 < jk <= zp
    assert j_k_eval(1, 0.1, cache100, ctx) >= j_k_eval(1, 0.25, cache100, ctx)


def test_contour_minimum_on_path(cache100):
    t, v = contour_minimum(10, 0.25, cache100)
    g10 = float(cache100.gamma(10))
    assert g10 - 0.25 * float(cache100.record(10).delta_prime) <= t <= float(cache100.gamma(11))
    assert v > 0


def test_envelope_fit_synthetic():
    rng = np.random.default_rng(0)
    x = np.linspace(0, 5, 200)
    y = 1.0 - 0.5 * x + rng.uniform(0, 1, 200)
    slope, intercept, se = envelope_fit(x, y)
    assert slope == pytest.approx(-0.5, abs=0.1)
    assert np.all(y >= intercept + slope * x - 1e-12)
    assert se >= 0


def test_report(report):
    d = report.to_dict()
    assert set(d["estimates"]) == {"eps0", "eps1", "eps2", "eps1tilde"}
    for est in d["estimates"].values():
        assert math.isfinite(est["value"]) and est["value"] >= 0
        assert math.isfinite(est["raw"]) and est["n_used"] == 50
    assert set(d["verdicts"]) == {"C1ii", "Cprime", "C3ii", "C4ii"}
    assert report.envelope_violations() == []
    # gaps shrink slowly: a small positive exponent
    assert 0 < report.eps2.value < 1
    v = report.verdicts["C3ii"]
    assert v.margin == pytest.approx(0.75 - report.eps1.value - report.eps2.value)


def test_audit_guards(cache100, ctx):
    with pytest.raises(InsufficientData):
        exponent_estimates(40, 0.25, cache100, ctx)
    with pytest.raises(InsufficientData):
        exponent_estimates(101, 0.25, cache100, ctx)
    with pytest.raises(ValueError):
        exponent_estimates(60, 0.6, cache100, ctx)


def test_parallel_matches_serial(cache100, ctx):
    a = exponent_estimates(50, 0.25, cache100, ctx, workers=1)
    b = exponent_estimates(50, 0.25, cache100, ctx, workers=2)
    assert a.to_dict() == b.to_dict()


def test_monotone_replacement(cache100, ctx):
    for k in (1, 5, 20):
        t = float(cache100.gamma(k)) + 0.01
        assert monotone_replacement_check(t, 0.25, cache100, ctx) == []
