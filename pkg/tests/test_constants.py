import math

import pytest

from hardylab.constants import (
    all_constants,
    brezis_vazquez,
    hardy_constant,
    lorentz_alpha,
    prop_log_volume,
    thm1_constant,
    thm1_weighted_constant,
    thm2_constant,
    thm2_range,
    thm4_constants,
    thm5_constant,
    thm5_formula,
    thm5_range,
)
from hardylab.errors import InvalidArgumentError
from hardylab.radial import Domain

B3 = Domain.ball(3)


def test_hardy_constant():
    assert [hardy_constant(n) for n in (3, 4, 5)] == [0.25, 1.0, 2.25]
    with pytest.raises(InvalidArgumentError):
        hardy_constant(2)


def test_thm1_readings_differ_by_omega_power():
    for n, vol in [(3, 1.0), (4, 2.5), (7, 0.3)]:
        d = Domain(n, vol)
        assert thm1_constant(d) / thm1_weighted_constant(d) == pytest.approx(d.omega_n ** (1 / n), rel=1e-14)
    # on the ball of radius V0 the weighted reading is exactly 1
    assert thm1_weighted_constant(Domain.ball(3, 1.4457964907366962)) == pytest.approx(1.0, rel=1e-14)


def test_thm2_values():
    assert thm2_range(3) == (1.0, 6.0)
    # p = 2: a = 1, constant 2 / (N |Ω|^(2/N)) ω^(2/N)
    assert thm2_constant(B3, 2.0) == pytest.approx(2 / 3, rel=1e-14)
    # p = 1: a = 5/2, constant 2 a³ / (3 ω)
    assert thm2_constant(B3, 1.0) == pytest.approx(31.25 / (4 * math.pi), rel=1e-14)
    for bad in (0.99, 6.0):
        with pytest.raises(InvalidArgumentError):
            thm2_constant(B3, bad)


def test_thm4_variants():
    text, stmt = thm4_constants(B3)
    assert text == pytest.approx(9 / (16 * B3.omega_n), rel=1e-14)
    assert math.floor(text * 1e5) / 1e5 == 0.13428
    assert round(stmt, 5) == 0.03206
    assert text / stmt == pytest.approx(B3.omega_n, rel=1e-14)


def test_thm5_range_and_continuity_at_p1():
    lo, hi = thm5_range(3)
    assert lo == pytest.approx(6 / 7) and hi == 1.0
    assert thm5_range(10)[0] == pytest.approx(10 / 11)
    assert lorentz_alpha(3, 0.9) == pytest.approx(1 / 3)
    # the formula at p -> 1 meets the q = 1 gradient constant
    for n in (3, 4, 6):
        d = Domain(n, 1.7)
        assert thm5_formula(n, d.volume, 1.0) == pytest.approx(thm4_constants(d)[0], rel=1e-14)
    assert thm5_constant(Domain(3, 1.0), 0.9) == pytest.approx((11 / 9) ** 3 / 4 * (2.7 / 2.1) ** 2, rel=1e-14)
    with pytest.raises(InvalidArgumentError, match=r"\(6/7, 1\)"):
        thm5_constant(B3, 0.5)


def test_brezis_vazquez_unit_disk_value():
    assert brezis_vazquez(B3) == pytest.approx(5.783185962946784, rel=1e-12)
    assert brezis_vazquez(Domain.ball(3, 2.0)) == pytest.approx(5.783185962946784 / 4, rel=1e-12)


def test_all_constants_listing():
    ids = [c.id for c in all_constants(B3)]
    assert ids == ["hardy", "brezis_vazquez", "thm1", "thm1", "thm4_text", "thm4_stmt", "prop_log"]
    assert "thm2" in [c.id for c in all_constants(B3, p=1.5)]
    assert "thm5" in [c.id for c in all_constants(B3, p=0.9)]
    assert "thm4_text" not in [c.id for c in all_constants(B3, q=1.5)]
    with pytest.raises(InvalidArgumentError, match=r"\(6/7, 1\)"):
        all_constants(B3, p=0.5)
    with pytest.raises(InvalidArgumentError):
        all_constants(B3, q=2.0)
    assert prop_log_volume(3) == pytest.approx(B3.omega_n / math.e**3)
