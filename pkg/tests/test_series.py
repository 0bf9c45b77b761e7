from fractions import Fraction

import pytest

from moravak.errors import DomainError, IntegralityError, NonUnitDivision, StructuralError
from moravak.series import (
    PLocalScalar,
    SeriesSpace,
    compositional_inverse,
    laurent_divide,
    reduce_mod_ideal,
    residue,
    substitute,
)


def tspace(T, p=2, laurent=False, floor=0):
    return SeriesSpace(p, (("t", 1),), T, "t" if laurent else None, floor)


def xy(T, p=2, extra=()):
    return SeriesSpace(p, tuple(extra) + (("x", 1), ("y", 1)), T)


def test_plocal_scalar_normalizes():
    a = PLocalScalar(2, Fraction(6, 9))
    assert a.numerator == 2 and a.denominator == 3
    assert PLocalScalar(3, 0).denominator == 1


def test_plocal_scalar_rejects_p_in_denominator():
    with pytest.raises(IntegralityError):
        PLocalScalar(2, Fraction(1, 2))


def test_plocal_unit_and_valuation():
    a = PLocalScalar(2, Fraction(12, 5))
    assert a.valuation() == 2 and not a.is_unit()
    assert a.unit_part() == PLocalScalar(2, Fraction(3, 5))
    assert PLocalScalar(3, Fraction(2, 5)).inverse() == PLocalScalar(3, Fraction(5, 2))


def test_add_examples():
    S = tspace(4)
    t = S.var("t")
    assert (t + (-t)).is_zero()
    assert S.parse("t + 1/2*t^2") + S.parse("1/2*t^2") == S.parse("t + t^2")
    X = SeriesSpace(2, (("x", 1),), 3)
    assert (X.parse("3*x") + X.parse("1/3*x")).coefficient({"x": 1}) == Fraction(10, 3)


def test_mul_examples():
    S = tspace(2)
    assert S.parse("1 + t") * S.parse("1 - t") == S.parse("1 - t^2")
    assert (tspace(1).var("t") * tspace(1).var("t")).is_zero()
    X = xy(2)
    assert (X.parse("x + y") ** 2).render() == "x^2 + 2*x*y + y^2"


def test_mismatched_spaces_are_structural_errors():
    with pytest.raises(StructuralError):
        tspace(3).var("t") + tspace(4).var("t")
    with pytest.raises(StructuralError):
        tspace(3, p=2).var("t") * tspace(3, p=3).var("t")


def test_substitute_examples():
    S = tspace(4)
    t = S.var("t")
    assert substitute(S.parse("t + t^2"), {"t": t}, S) == S.parse("t + t^2")
    X = xy(4)
    assert substitute(X.parse("x + y"), {"x": t, "y": t * t}, S) == S.parse("t + t^2")
    assert substitute(S.parse("t^2"), {"t": S.parse("t + t^2")}, S) == S.parse("t^2 + 2*t^3 + t^4")


def test_substitute_constant_term_into_power_series_slot():
    S = tspace(4)
    with pytest.raises(DomainError):
        substitute(S.parse("t"), {"t": S.parse("1 + t")}, S)


def test_compositional_inverse_examples():
    S3, S5 = tspace(3), tspace(5)
    assert compositional_inverse(S3.var("t")) == S3.var("t")
    assert compositional_inverse(S3.parse("t + 1/2*t^2")) == S3.parse("t - 1/2*t^2 + 1/2*t^3")
    assert compositional_inverse(S5.parse("t + t^3")) == S5.parse("t - t^3 + 3*t^5")


def test_compositional_inverse_rejects_bad_leading_term():
    S = tspace(4)
    with pytest.raises(DomainError):
        compositional_inverse(S.parse("2*t + t^2"))
    with pytest.raises(DomainError):
        compositional_inverse(S.parse("1 + t"))


def test_reduce_mod_ideal_examples():
    X = xy(3)
    assert reduce_mod_ideal(X.parse("3*x + 2*y + x^2"), 2, [{"x": 2}]) == X.parse("x")
    V = xy(3, extra=(("v", -1),))
    got = reduce_mod_ideal(V.parse("x + y - v*x*y"), 2, ["x^2", "y^2"])
    assert got.render() == "x + y + v*x*y"
    S = tspace(3)
    assert reduce_mod_ideal(S.parse("4*t + 6*t^2"), 4) == S.parse("2*t^2")
    assert reduce_mod_ideal(S.parse("4*t + 6*t^2"), 0) == S.parse("4*t + 6*t^2")


def test_residue_examples():
    S = SeriesSpace(2, (("v", -1), ("t", 1)), 3, "t", -3)
    dt = S.one()
    assert residue(S.parse("v*t^-1 + 1 + t"), dt) == S.without("t").var("v")
    assert residue(S.parse("t^-2"), dt).is_zero()
    R = SeriesSpace(2, (("x", -1), ("y", -1), ("t", 1)), 3, "t", -3)
    got = residue(R.parse("x*t^-1 + y*t^-2") * R.parse("1 + t"), R.one())
    assert got.render() == "x + y"


def test_laurent_divide_examples():
    S = SeriesSpace(2, (("t", 1),), 3, "t", -2)
    assert laurent_divide(S.parse("t^2"), S.parse("t")) == S.parse("t")
    assert laurent_divide(S.one(), S.parse("1 - t")) == S.parse("1 + t + t^2 + t^3")
    V = SeriesSpace(2, (("v", -1), ("t", 1)), 3, "t", -3)
    num, den = V.parse("v^2 + v*t^-1"), V.parse("v*t + t^2")
    q = laurent_divide(num, den)
    assert q.coefficient_of("t", -2) == V.without("t").one()
    back = q * den - num
    assert residue(back, V.one()).is_zero()


def test_laurent_divide_non_unit():
    S = SeriesSpace(2, (("t", 1),), 3, "t", -2)
    with pytest.raises(NonUnitDivision):
        laurent_divide(S.one(), S.parse("2*t + t^2"))


def test_render_format():
    S = tspace(3)
    assert S.parse("1/2*t^2 - t").render() == "-t + 1/2*t^2"
    assert S.zero().render() == "0"
    L = SeriesSpace(2, (("t", 1),), 3, "t", -3)
    assert L.parse("t^-2").render() == "t^-2"
