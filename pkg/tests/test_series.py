from fractions import Fraction

import pytest
import sympy as sp
from conftest import MANY
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from jacobi_gmd import jacobi_series as js
from jacobi_gmd.jacobi_series import QSeries, YFrac

Z = sp.symbols("zeta")


def to_sympy(y):
    num = sum(sp.Rational(c.numerator, c.denominator) * Z**i for i, c in enumerate(y.num))
    den = sum(sp.Rational(c.numerator, c.denominator) * Z**i for i, c in enumerate(y.den))
    return Z**y.shift * num / den


def divisor_sum(k, n):
    return int(sp.divisor_sigma(n, k))


# -- YFrac ---------------------------------------------------------------------

def test_yfrac_canonical_form():
    y = YFrac((1, 1), (-1, 1))  # (1 + zeta)/(zeta - 1)
    assert y.den[0] == 1
    assert YFrac((0, 0, 2), (0, 4)) == YFrac((1,), (1,), 1) * Fraction(1, 2)
    # common factor (zeta - 1) cancels
    assert YFrac((-1, 0, 1), (-1, 1)) == YFrac((1, 1))
    assert YFrac(()) == js.ZERO_Y


def test_yfrac_derivative_oracle():
    y = js.j1_series(0)[0]
    want = sp.simplify(Z * sp.diff(to_sympy(y), Z))
    assert sp.simplify(to_sympy(y.zeta_derive()) - want) == 0
    assert YFrac.laurent({1: 1, -1: 1}).zeta_derive() == YFrac.laurent({1: 1, -1: -1})
    assert YFrac.const(5).zeta_derive() == js.ZERO_Y


laurents = st.dictionaries(st.integers(-3, 3), st.fractions(-3, 3, max_denominator=3), max_size=4)
dens = st.sampled_from([(1,), (1, -1), (1, -2, 1), (2, 1), (1, 0, 1)])


@st.composite
def yfracs(draw):
    t = draw(laurents)
    base = YFrac.laurent(t)
    if not base:
        return base
    return base * YFrac((1,), draw(dens))


@settings(max_examples=300, deadline=None)
@given(yfracs(), yfracs())
def test_yfrac_arithmetic_against_sympy(x, y):
    sx, sy = to_sympy(x), to_sympy(y)
    assert sp.cancel(to_sympy(x * y) - sx * sy) == 0
    assert sp.cancel(to_sympy(x + y) - (sx + sy)) == 0
    assert sp.cancel(to_sympy(x.invert()) - sx.subs(Z, 1 / Z)) == 0


# -- generators ------------------------------------------------------------------

def test_eisenstein_examples():
    assert js.eisenstein(2, 1) == QSeries.from_rationals([1, -24], 2)
    assert js.eisenstein(4, 2) == QSeries.from_rationals([1, 240, 2160], 4)
    assert js.eisenstein(6, 0) == QSeries.from_rationals([1], 6)
    assert js.eisenstein(6, 1)[1] == -504
    for k, f in ((2, -24), (4, 240), (6, -504)):
        E = js.eisenstein(k, 12)
        assert [E[n] for n in range(1, 13)] == [YFrac.const(f * divisor_sum(k - 1, n)) for n in range(1, 13)]
    with pytest.raises(ValueError):
        js.eisenstein(8, 2)


def test_j1_examples():
    J = js.j1_series(3)
    y = -Z
    assert sp.simplify(to_sympy(J[0]) - sp.Rational(1, 2) * (y - 1) / (y + 1)) == 0
    assert sp.simplify(to_sympy(J[1]) - (y - 1 / y)) == 0
    assert J[0].evaluate(0) == Fraction(-1, 2)
    assert J.weight == 1


def test_j1_against_product_formula():
    """Expand y d/dy log of the theta quotient with sympy and compare."""
    N = 4
    q, y = sp.symbols("q y")
    logder = sp.Rational(1, 2) * (y - 1) / (y + 1)
    for m in range(1, N + 1):
        logder += y * q**m / (1 + y * q**m) - q**m / y / (1 + q**m / y)
    ser = sp.series(logder, q, 0, N + 1).removeO()
    J = js.j1_series(N)
    for n in range(N + 1):
        want = sp.simplify(ser.coeff(q, n).subs(y, -Z))
        assert sp.simplify(to_sympy(J[n]) - want) == 0, n


def test_derivatives():
    s = QSeries.from_rationals([1, 1], 0)
    assert js.q_derive(s) == QSeries.from_rationals([0, 1], 2)
    assert js.q_derive(QSeries.from_rationals([3, 0, 0], 0)).is_zero()
    E2 = js.eisenstein(2, 5)
    assert js.q_derive(E2) == QSeries.from_rationals([0] + [-24 * n * divisor_sum(1, n) for n in range(1, 6)], 4)
    assert js.z_derive(E2).is_zero() and js.z_derive(E2).weight == 3


def test_weight_mismatch_is_refused():
    with pytest.raises(js.WeightMismatch):
        js.eisenstein(2, 2) + js.eisenstein(4, 2)


def test_mixed_orders_truncate():
    s = js.eisenstein(2, 5) * js.eisenstein(2, 2)
    assert s.order == 2


def test_tuple_constant_terms():
    tup = js.normalized_tuple(3)
    assert tup.t1[0] == Fraction(-1, 12)
    assert tup.t2[0] == Fraction(1, 12)
    assert tup.t2.is_zeta_free() and tup.t3.is_zeta_free()
    assert not tup.a.is_zeta_free() and not tup.b.is_zeta_free() and not tup.c.is_zeta_free()
    assert [s.weight for s in (tup.a, tup.b, tup.c, tup.t1, tup.t2, tup.t3)] == [2, 3, 1, 2, 4, 6]


def test_wp_constant_term():
    w0 = js.named_series("wp", 0)[0]
    assert w0.den == (1, -2, 1)
    assert sp.simplify(to_sympy(w0) - (sp.Rational(1, 12) + Z / (1 - Z) ** 2)) == 0


def test_signs_are_pinned_up_to_the_b_c_reflection():
    sols = js.pin_signs(5)
    assert js.PINNED_SIGNS in sols
    assert len(sols) == 2
    other = [s for s in sols if s != js.PINNED_SIGNS][0]
    assert other == js.Signs(js.PINNED_SIGNS.eps_tau, -js.PINNED_SIGNS.eps_z, -js.PINNED_SIGNS.c_sign)


def test_residual_examples():
    res = js.ode_residuals(js.normalized_tuple(6))
    assert res["z:a"].is_zero() and res["tau:t1"].is_zero() and res["z:b"].is_zero()
    assert res["cubic"].is_zero()


def test_verify_small_orders():
    for n in (0, 1, 8):
        rep = js.verify_all(n)
        assert rep["ok"], rep
        assert len(rep["residuals"]) == 11


def test_fault_injection_names_offending_power():
    tup = js.normalized_tuple(6)
    cs = list(tup.t2.coeffs)
    cs[3] = cs[3] + 1
    bad = tup.replace(t2=QSeries(tuple(cs), tup.t2.weight))
    rep = js.verify_all(6, bad)
    assert not rep["ok"]
    assert not rep["residuals"]["tau:t2"]["ok"]
    assert rep["residuals"]["tau:t2"]["first_nonzero"] == 3


def test_wrong_signs_fail():
    rep = js.verify_all(4, js.normalized_tuple(4, js.Signs(1, 1, -1)))
    assert not rep["ok"]


# -- properties ----------------------------------------------------------------

@MANY
@given(st.integers(0, 8), st.sampled_from(["a", "b", "c", "t1", "t2", "t3"]))
def test_truncation_stability(n, name):
    small = getattr(js.normalized_tuple(n), name)
    big = getattr(js.normalized_tuple(2 * n), name)
    assert big.coeffs[: n + 1] == small.coeffs


@MANY
@given(st.integers(1, 12), st.fractions(-7, 7, max_denominator=7))
def test_zeta_parity(n, zeta):
    assume(zeta != 0)
    tup = js.normalized_tuple(12)
    for s, sign in ((tup.a, 1), (tup.b, -1), (tup.c, -1)):
        y = s[n]
        assert y.evaluate(1 / zeta) == sign * y.evaluate(zeta)


def test_zeta_parity_is_exact():
    tup = js.normalized_tuple(12)
    for n in range(1, 13):
        assert tup.a[n].invert() == tup.a[n]
        assert tup.b[n].invert() == -tup.b[n]


def test_zeta_degree_bounded_by_q_power():
    tup = js.normalized_tuple(12)
    for s in (tup.a, tup.b, tup.c):
        for n in range(1, 13):
            lo, hi = s[n].zeta_span()
            assert s[n].is_laurent() and -n <= lo and hi <= n
