import pytest

from zetapfrac.coefficients import (
    DecayFit,
    ImagPole,
    RealPole,
    build_coefficient_set,
    c_at,
    c_tilde,
    fit_decay,
    fitted_tail,
    p0_eval,
    series_constants,
)
from zetapfrac.numkernel import complex_derivative
from zetapfrac.xi_core import block_mpc


def n_prime(ctx, z, radius):
    return complex_derivative(lambda u: block_mpc("n", u, ctx)[0], z, radius, ctx, tol=1e-20).to_mpc(ctx.mp)


def test_c_tilde_zero_closed_form(ctx, mp):
    ref = 16 / (mp.power(mp.pi, 0.75) * mp.gamma(0.25) * (-mp.zeta(0.5)))
    assert abs(c_tilde(0, ctx) - ref) < ctx.tol
    assert c_at(RealPole(0), ctx=ctx) == c_tilde(0, ctx) > 0


def test_c_tilde_decay(ctx):
    c = [c_tilde(k, ctx) for k in range(8)]
    # independent evaluation of the closed form gives c~(4)/c~(0) = 0.0703292014...
    assert abs(c[1] / c[0] - ctx.mp.mpf("0.0703292014122997131650674424")) < 1e-25
    ratios = [c[k + 1] / c[k] for k in range(7)]
    assert all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))
    with pytest.raises(ValueError):
        c_tilde(-1, ctx)


def test_real_pole_signs(ctx, mp):
    assert c_at(RealPole(1), ctx=ctx) == c_tilde(1, ctx) * (-mp.pi ** 2)
    assert c_at(RealPole(1), ctx=ctx) < 0
    assert c_at(RealPole(-2), ctx=ctx) == c_at(RealPole(2), ctx=ctx)


@pytest.mark.parametrize("w", [0, 1, 2, 3])
def test_real_pole_matches_numeric_derivative(ctx, w):
    num = 1 / n_prime(ctx, 4 * w, 1)
    assert abs(num - c_at(RealPole(w), ctx=ctx)) <= 1e-10 * abs(num)


def test_imag_pole_matches_numeric_derivative(ctx, mp, cache100):
    g = cache100.gamma(1)
    num = 1 / n_prime(ctx, mp.mpc(0, g), 0.1)
    c = c_at(ImagPole(1), cache100, ctx)
    assert abs(num - c) <= 1e-10 * abs(c)
    assert abs(c - mp.mpf("-0.0109142740312")) < 1e-12
    assert c_at(ImagPole(-1), cache100, ctx) == c


def test_imag_values_from_fresh_derivatives(ctx, mp, cache100):
    # drop the stored column so c_at recomputes from zeta'
    bare = cache100.with_c_imag([None] * 3)
    for k, ref in [(2, "0.00380464088124"), (3, "-0.00232693301675")]:
        assert abs(c_at(ImagPole(k), bare, ctx) - mp.mpf(ref)) < 1e-13
    with pytest.raises(ValueError):
        c_at(ImagPole(1), None, ctx)


def test_residue_limit(ctx, mp):
    for w in range(4):
        s = 4 * w + mp.mpf("1e-6")
        lim = (s - 4 * w) * block_mpc("f", s, ctx)[0]
        c = c_at(RealPole(w), ctx=ctx)
        assert abs(lim - c) < 1e-4 * abs(c)


def test_p0(ctx, mp):
    assert abs(p0_eval(0, ctx).to_mpc(mp)) == 0
    brute = -mp.fsum(c_tilde(k, ctx) * (-mp.pi ** 2) ** k for k in range(1, 21))
    v = p0_eval(mp.pi, ctx)
    assert abs(v.to_mpc(mp) - brute) < 1e-25
    assert abs(v.re - mp.mpf("0.63156386369530855")) < 1e-15


def test_series_constants(ctx, cache100, cache200):
    one = series_constants(cache100, 1, ctx)
    assert one.A == 2 * abs(c_at(ImagPole(1), cache100, ctx))
    a100 = series_constants(cache100, 100, ctx).A
    a200 = series_constants(cache200, 200, ctx).A
    assert 0 < a200 - a100 < a100 / 10


def test_decay_fit(ctx, cache200):
    cs = build_coefficient_set(cache200, 5, 200, ctx)
    fit = cs.constants.fit
    assert 1 < fit.p < 2.5
    assert len(cs.c_real) == 5 and len(cs.c_imag) == 200
    assert cs.constants.A_tail > 0
    synth = fit_decay([10.0 * k for k in range(1, 41)], [3 * (10.0 * k) ** -1.75 for k in range(1, 41)])
    assert synth.p == pytest.approx(1.75) and synth.K == pytest.approx(3)
    assert fitted_tail(DecayFit(1.0, -1.0, 0.0, 3), 10.0, lambda g: 1.0) == float("inf")
