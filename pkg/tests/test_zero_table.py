import json
import warnings

import mpmath
import pytest

from zetapfrac.errors import ChecksumError, MissedZeroWarning, PrecisionWarning, SchemaError
from zetapfrac.numkernel import PrecisionContext
from zetapfrac.zero_table import (
    cache_io,
    gap_stats,
    load_cache,
    locate_zeros,
    save_cache,
    scan_brackets,
    smooth_zero_count,
    zeta_prime_at_zero,
)
from zetapfrac.xi_core import big_xi


@pytest.fixture(scope="module")
def small(ctx):
    return locate_zeros(n=12, ctx=ctx)


def test_first_zeros_match_mpmath(small, mp):
    with mpmath.workdps(40):
        for k in range(1, 13):
            assert abs(small.gamma(k) - mpmath.zetazero(k).imag) < 1e-25
    assert abs(small.gamma(1) - mp.mpf("14.134725141734693790457")) < 1e-20
    assert abs(small.gamma(2) - mp.mpf("21.022039638771554992628")) < 1e-20
    assert small.gamma(-1) == -small.gamma(1)


def test_gaps(small, mp):
    r = small.record(1)
    assert abs(r.delta - (small.gamma(2) - small.gamma(1))) < 1e-25
    assert abs(r.delta_prime - 1 / mp.log(small.gamma(1))) < 1e-25
    assert float(r.delta_prime) == pytest.approx(0.3777, abs=1e-3)
    assert gap_stats(small, 1) == (r.delta, r.delta_prime)
    with pytest.raises(IndexError):
        gap_stats(small, 12)


def test_xi_vanishes_at_zeros(cache100, ctx):
    for k in (1, 17, 50, 100):
        v, err = big_xi(cache100.gamma(k), ctx)
        assert abs(v) < 1e-20 * max(err, 1) or abs(v) < 1e-25


def test_cache_matches_mpmath(cache100):
    with mpmath.workdps(40):
        for k in (1, 33, 64, 100):
            assert abs(cache100.gamma(k) - mpmath.zetazero(k).imag) < 1e-22


def test_zeta_prime(small, ctx, mp):
    zp = zeta_prime_at_zero(small, 1, ctx)
    ref = mp.zeta(mp.mpc(0.5, small.gamma(1)), derivative=1)
    assert abs(zp.to_mpc(mp) - ref) < 1e-20
    assert abs(abs(ref) - 0.7932) < 1e-3
    conj = zeta_prime_at_zero(small, -1, ctx)
    assert abs(conj.to_mpc(mp) - ref.conjugate()) < 1e-20


def test_derivatives_nonvanishing(cache100):
    assert min(abs(r.zeta_prime.to_mpc()) for r in cache100) > 1e-3


def test_t_max_mode(ctx):
    c = locate_zeros(t_max=40, ctx=ctx, derivatives=False)
    assert len(c) == 6 and c.t_max == 40
    with pytest.raises(ValueError):
        locate_zeros(ctx=ctx)


def test_scan_steps_agree(ctx):
    a = scan_brackets(10, 60, 0.05, ctx)
    b = scan_brackets(10, 60, 0.025, ctx)
    assert len(a) == len(b) == 13
    assert [round(x, 1) for x, _ in a][:3] == [14.1, 21.0, 25.0]


def test_smooth_count():
    assert smooth_zero_count(0) == 0
    assert abs(smooth_zero_count(236.6) - 100) < 2


def test_round_trip(small, tmp_path, ctx):
    path = save_cache(small, tmp_path / "z.csv", ctx)
    back = load_cache(path, ctx)
    for r, q in zip(back.records, small.records):
        assert (r.k, r.gamma, r.delta, r.delta_prime) == (q.k, q.gamma, q.delta, q.delta_prime)
        assert r.zeta_prime.to_mpc() == q.zeta_prime.to_mpc()
    assert back.t_max == small.t_max
    assert cache_io(None, path, "load", ctx).gammas == small.gammas
    with pytest.raises(ValueError):
        cache_io(small, path, "sideways")


def test_precision_warning(small, tmp_path, ctx):
    path = save_cache(small, tmp_path / "z.csv", ctx)
    with pytest.warns(PrecisionWarning):
        load_cache(path, PrecisionContext(40))


def test_corruption_detected(small, tmp_path, ctx):
    path = save_cache(small, tmp_path / "z.csv", ctx)
    lines = path.read_text().splitlines(keepends=True)
    lines[3] = lines[3].replace("1", "2", 1)
    path.write_text("".join(lines))
    with pytest.raises(ChecksumError):
        load_cache(path, ctx)


def test_schema_mismatch(small, tmp_path, ctx):
    path = save_cache(small, tmp_path / "z.csv", ctx)
    side = path.with_name(path.name + ".json")
    meta = json.loads(side.read_text())
    meta["schema"] = 99
    side.write_text(json.dumps(meta))
    with pytest.raises(SchemaError):
        load_cache(path, ctx)


def test_truncated(cache100):
    c = cache100.truncated(50)
    assert len(c) == 50
    assert c.gamma(50) < c.t_max < cache100.gamma(51)
    with pytest.raises(IndexError):
        cache100.truncated(101)


def test_count_check_warns():
    from zetapfrac.zero_table import _check_count

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        _check_count(100, 236.6)
    with pytest.warns(MissedZeroWarning):
        _check_count(90, 236.6)


def test_pickle_round_trip(cache100):
    import pickle

    back = pickle.loads(pickle.dumps(cache100))
    assert back.gammas == cache100.gammas
    assert back.records[5].zeta_prime.to_mpc() == cache100.records[5].zeta_prime.to_mpc()
    assert back.t_max == cache100.t_max and back.digits == cache100.digits
