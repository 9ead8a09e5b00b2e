import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetapfrac.asymptotics_monotonicity import (
    DRegion,
    ProductDescriptor,
    SPrime,
    b_lower_bound_check,
    calibrate_b_constant,
    complete_monotone_check,
    f_decreasing_in_x,
    factor_identity_residual,
    fit_sin_constant,
    hadamard_xi,
    h_factor,
    laplace_kernel_check,
    monotone_profile,
    region_member,
    sin_modulus_identity_residual,
    sin_product_decrease,
    sin_recip_bound,
    xi_monotone_profile,
    zeta_ratio_check,
)
from zetapfrac.errors import DomainError, StepError
from zetapfrac.numkernel import PrecisionContext
from zetapfrac.xi_core import block_mpc

V_GRID = [0.01 + 0.08 * i for i in range(50)]
X_GRID = [0.02 + 0.039 * i for i in range(50)]


@pytest.fixture(scope="module")
def xi_desc(cache100, ctx):
    return ProductDescriptor.from_zeros(cache100, 100, ctx)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        ProductDescriptor(0)
    with pytest.raises(ValueError):
        ProductDescriptor(1, (0,))
    with pytest.raises(ValueError):
        ProductDescriptor(1, (), (-1,))
    assert ProductDescriptor(1, (), (3, 1)).thetas == (1, 3)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 10), st.floats(-50, 50), st.floats(0.1, 50))
def test_factor_identity(v, t, r):
    ctx = PrecisionContext(20)
    assert factor_identity_residual(v, t, r, ctx) <= 1e-18 * (1 + h_factor(v, t, r, ctx.mp))


def test_hadamard(cache200, ctx, mp):
    val, gap = hadamard_xi(0, 10, cache200, ctx)
    assert val.to_mpc(mp) == block_mpc("xi", 0.5, ctx)[0]
    gaps = [hadamard_xi(1, K, cache200, ctx)[1] for K in (50, 100, 200)]
    assert gaps[0] > gaps[1] > gaps[2]


@pytest.mark.parametrize("t", [0, 5, 14.2, 30])
def test_xi_increasing_in_x_squared(ctx, t):
    assert xi_monotone_profile(t, V_GRID, ctx) == []


def test_product_increasing(xi_desc, ctx):
    assert monotone_profile(xi_desc, 5, V_GRID, ctx) == []
    assert monotone_profile(xi_desc, 5, V_GRID, ctx, reciprocal=True) == []
    # a single off-axis factor is not monotone in x: the check must see it
    bent = ProductDescriptor(1, (complex(2, 0),))
    with pytest.raises(TypeError):
        monotone_profile(bent, 0, V_GRID, ctx)


def test_complete_monotone_rows(xi_desc, ctx):
    rows = complete_monotone_check(xi_desc, 3, 1, 0.1, 4, ctx, tol=1e-10)
    assert [r.j for r in rows] == [0, 1, 2, 3, 4]
    assert all(r.ok for r in rows)
    # a single factor 1/(1 + v) is completely monotone in v
    rows = complete_monotone_check(ProductDescriptor(1, (), (1,)), 0, 1, 0.1, 4, ctx)
    assert all(r.ok for r in rows)


def test_complete_monotone_detects_violation(ctx, mp):
    # g(v) = 1/h(v, 0, 1) = 1/(v + 1) is fine; g = h itself is increasing, so row 1 flips sign
    class Bad(ProductDescriptor):
        def rho(self, v, t, ctx=ctx):
            return 1 + mp.mpf(v)

    rows = complete_monotone_check(Bad(1), 0, 1, 0.1, 2, ctx)
    assert rows[0].ok and not rows[1].ok


def test_complete_monotone_guards(xi_desc, ctx):
    with pytest.raises(StepError):
        complete_monotone_check(xi_desc, 3, 1, 0.2, 4, ctx)
    with pytest.raises(ValueError):
        complete_monotone_check(xi_desc, 3, 1, 0.01, 7, ctx)


@pytest.mark.parametrize("t", [0, 5, 10, 14.2, 30])
def test_sin_product_decreasing(xi_desc, ctx, t):
    assert sin_product_decrease(4, xi_desc, t, X_GRID, ctx) == []


def test_sin_identities(ctx):
    assert sin_modulus_identity_residual(1, 2, ctx) < 1e-30
    lhs, env = sin_recip_bound(10j, 1, ctx)
    assert lhs == pytest.approx(1 / math.sinh(10), rel=1e-12)
    assert lhs < 2.1 * env
    with pytest.raises(DomainError):
        sin_recip_bound(math.pi + 0.1, 1, ctx)
    pts = [complex(x, y) for x in (1.5, 4.7) for y in (0.5, 3, 20)]
    assert fit_sin_constant(1, pts, ctx) > 0


def test_b_bound(ctx):
    lhs, env = b_lower_bound_check(0.5 + 100j, 2, ctx)
    k = calibrate_b_constant(2, [complex(x, y) for x in (0.5, 2.5, 6.5) for y in (30, 100, 300)], ctx)
    assert lhs <= env * k * 1.000001
    # symmetry under t -> -t
    assert b_lower_bound_check(2.5 - 40j, 2, ctx)[0] == pytest.approx(float(b_lower_bound_check(2.5 + 40j, 2, ctx)[0]))
    # super-exponential decay in x at fixed t
    pairs = [b_lower_bound_check(complex(x, 7), 2, ctx) for x in (10.5, 20.5, 40.5)]
    vals = [lhs for lhs, _ in pairs]
    assert vals[0] > vals[1] > vals[2]
    # the left side follows the envelope, which itself falls by 10^-9 over the range
    assert all(lhs <= env for lhs, env in pairs)
    assert pairs[2][1] / pairs[0][1] < 1e-9
    for bad in (-1 + 10j, 0.2 + 10j, 4.5, 0.6):
        with pytest.raises(DomainError):
            b_lower_bound_check(bad, 2, ctx)


@pytest.mark.parametrize("x", [0.1, 0.3])
def test_zeta_ratio(ctx, mp, x):
    s = mp.mpc(x, 500)
    ratio, model, dev, scaled = zeta_ratio_check(s, ctx)
    assert dev < 1e-2
    ref = abs(mp.zeta(0.5 - mp.conj(s))) / abs(mp.zeta(0.5 + s))
    assert abs(ratio - ref) < 1e-20
    with pytest.raises(DomainError):
        zeta_ratio_check(2, ctx)


def test_zeta_ratio_bounded_on_region(ctx, mp):
    rng = np.random.default_rng(5)
    ratios = []
    for t in rng.uniform(20, 200, 10):
        x = rng.uniform(0, 2 / math.log(t))
        assert complex(x, t) in DRegion(math.e - 1, 2)
        ratio, model, _, _ = zeta_ratio_check(mp.mpc(x, t), ctx)
        ratios.append(float(ratio / model))
    assert max(ratios) >= 1 and max(ratios) < 3


def test_regions(cache100):
    assert 50j in DRegion(30, 1)
    assert 1 + 5j not in DRegion(30, 1)
    with pytest.raises(ValueError):
        DRegion(0.5, 1)
    g = float(cache100.gamma(1))
    assert region_member(complex(1 / math.log(g), g), SPrime(1), cache100)
    rng = np.random.default_rng(1)
    g5 = float(cache100.gamma(5))
    r = 1 / math.log(g5)
    for _ in range(100):
        rad, ang = r * math.sqrt(rng.uniform()), rng.uniform(-math.pi / 2, math.pi / 2)
        s = complex(rad * math.cos(ang), g5 + rad * math.sin(ang))
        assert region_member(s, SPrime(5), cache100)
        assert s in DRegion(math.e - 1, 2)
    with pytest.raises(TypeError):
        region_member(1j, "D")


def test_laplace_kernel(ctx):
    for z, Y in ((1 + 1j, 10), (0.5 - 3j, 20)):
        err, bound = laplace_kernel_check(z, Y, ctx)
        assert err <= bound * 1.000001
    with pytest.raises(DomainError):
        laplace_kernel_check(-1, 5, ctx)


def test_f_decreasing(ctx):
    assert f_decreasing_in_x(10, [0.04 * i for i in range(51)], ctx) == []
    with pytest.raises(ValueError):
        f_decreasing_in_x(10, [0, 3], ctx)
