import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_lab.local_field import (
    PrecisionError,
    make_field,
    smallest_nonresidue,
    TRIVIAL,
    UNRAMIFIED,
    RAMIFIED,
)

ALL_KINDS = [TRIVIAL, UNRAMIFIED, RAMIFIED]


def fields(p=3, k=8):
    return [make_field(p, kind, k) for kind in ALL_KINDS]


# -- make_field ----------------------------------------------------------------


def test_make_field_trivial():
    f = make_field(3, "trivial", 8)
    assert (f.e, f.q, f.precision_k) == (1, 3, 8)


def test_make_field_ramified_uniformizer():
    f = make_field(3, "ramified", 8)
    assert (f.e, f.q) == (2, 3)
    pi = f.pi_E()
    # pi^e is a uniformizer of F: exact valuation 1, and equals pi_F here
    sq = pi * pi
    assert sq.valuation() == 1
    assert sq == f.pi_F()


def test_make_field_unramified_residue():
    f = make_field(5, "unram", 8)
    assert (f.e, f.q) == (1, 25)
    w = f.gen()
    assert w * w == f.scalar(smallest_nonresidue(5))


def test_make_field_rejects_two():
    for kind in ALL_KINDS:
        with pytest.raises(ValueError):
            make_field(2, kind, 8)


def test_make_field_rejects_nonprime():
    with pytest.raises(ValueError):
        make_field(9, "trivial", 8)
    with pytest.raises(ValueError):
        make_field(1, "trivial", 8)


def test_make_field_rejects_bad_precision():
    with pytest.raises(ValueError):
        make_field(3, "trivial", 0)


# -- scalar arithmetic -----------------------------------------------------------


def test_one_plus_minus_one_is_zero():
    for f in fields():
        z = f.one() + f.scalar(-1)
        assert z.is_zero()


def test_uniformizer_products():
    for f in fields():
        assert (f.pi_F() * f.pi_F()).valuation() == 2
        assert f.pi_E().valuation() == Fraction(1, f.e)


def test_inverse_examples():
    for f in fields():
        assert f.one().inv() == 1
        assert f.pi_F().inv().valuation() == -1
        x = f.one() + f.pi_F()
        assert x.inv() * x == 1


def test_inverse_matches_geometric_series():
    # independent oracle: 1/(1+p) = sum (-p)^j, truncated
    f = make_field(5, "trivial", 10)
    geo = f.zero()
    for j in range(10):
        geo = geo + f.scalar((-5) ** j)
    assert (f.one() + f.pi_F()).inv() == geo


def test_inv_of_zero_is_precision_error():
    for f in fields():
        with pytest.raises(PrecisionError):
            f.zero().inv()


def test_owner_mismatch():
    a = make_field(3, "trivial", 8).one()
    b = make_field(5, "trivial", 8).one()
    with pytest.raises(ValueError):
        a + b


@given(st.integers(-500, 500), st.integers(-500, 500))
@settings(max_examples=60, deadline=None)
def test_trivial_add_matches_integers(m, n):
    f = make_field(7, "trivial", 10)
    assert f.scalar(m) + f.scalar(n) == f.scalar(m + n)
    assert f.scalar(m) * f.scalar(n) == f.scalar(m * n)


@given(
    st.fractions(min_value=-50, max_value=50, max_denominator=40),
    st.fractions(min_value=-50, max_value=50, max_denominator=40),
)
@settings(max_examples=60, deadline=None)
def test_trivial_fraction_arithmetic(x, y):
    f = make_field(3, "trivial", 12)
    assert f.scalar(x) + f.scalar(y) == f.scalar(x + y)
    assert f.scalar(x) * f.scalar(y) == f.scalar(x * y)


def test_valuation_of_fraction():
    f = make_field(3, "trivial", 10)
    assert f.scalar(Fraction(9, 2)).valuation() == 2
    assert f.scalar(Fraction(2, 27)).valuation() == -3


# -- ultrametric and automorphism properties ----------------------------------------


def _random_nonzero(f, rng):
    while True:
        s = f.random_integral(rng)
        if not s.is_zero():
            return s


def test_ultrametric_and_val_multiplicativity():
    rng = random.Random(11)
    for f in fields(p=5, k=10):
        for _ in range(200):
            a = _random_nonzero(f, rng)
            b = _random_nonzero(f, rng)
            s = a + b
            m = a * b
            assert m.valuation() == a.valuation() + b.valuation()
            bound = min(a.valuation(), b.valuation())
            assert s.val_lower_bound() >= bound
            if a.valuation() != b.valuation():
                assert s.valuation() == bound


def test_conj_is_involution_and_automorphism():
    rng = random.Random(12)
    for f in fields(p=5, k=10)[1:]:
        for _ in range(100):
            a = _random_nonzero(f, rng)
            b = _random_nonzero(f, rng)
            assert a.conj().conj() == a
            assert (a + b).conj() == a.conj() + b.conj()
            assert (a * b).conj() == a.conj() * b.conj()
        # fixes F
        x = f.scalar(Fraction(7, 5))
        assert x.conj() == x
        assert f.gen().conj() == -f.gen()


def test_conj_trivial_is_identity():
    f = make_field(3, "trivial", 8)
    x = f.scalar(7)
    assert x.conj() is x


# -- precision behaviour --------------------------------------------------------------


def test_add_mul_never_gain_precision():
    rng = random.Random(13)
    for f in fields(p=3, k=9):
        for _ in range(100):
            a = _random_nonzero(f, rng)
            b = _random_nonzero(f, rng)
            assert (a + b).prec >= min(a.prec, b.prec)
            assert (a + b).prec <= max(a.prec, b.prec)
            assert (a * b).prec == min(a.prec + b.vdig, b.prec + a.vdig)


def test_precision_soundness_across_k():
    # recomputing at higher precision agrees on all digits claimed at lower
    for kind in ALL_KINDS:
        lo = make_field(5, kind, 6)
        hi = make_field(5, kind, 14)

        def expr(f):
            x = f.scalar(Fraction(7, 3)) + f.pi_E() * f.scalar(4)
            y = (f.one() + f.pi_F() * f.scalar(2)).inv()
            return x * y - f.scalar(11).inv()

        a = expr(lo)
        b = expr(hi)
        assert b.key_at(a.prec) == a.key_at(a.prec)


def test_digit_access_beyond_precision_raises():
    f = make_field(3, "trivial", 4)
    x = f.scalar(5)
    with pytest.raises(PrecisionError):
        x.digit(4)


def test_zero_to_precision_propagates():
    f = make_field(3, "trivial", 6)
    z = f.one() - f.one()
    assert z.is_zero() and z.prec == 6
    deep = z * f.pi_F()
    assert deep.is_zero() and deep.prec == 7
    assert (z + f.pi_F()).valuation() == 1


def test_json_shape():
    f = make_field(3, "ramified", 6)
    d = (f.pi_E() * f.scalar(2)).to_json()
    assert d["val"] == [1, 2]
    assert all(isinstance(x, int) for x in d["digits"])
