import itertools
import json
from fractions import Fraction

import pytest
import sympy as sp
from conftest import nonzero_q, points, small_q
from hypothesis import given, settings
from hypothesis import strategies as st
from test_algebra import SDELTA, SYMS, to_sympy

from jacobi_gmd import gauss_manin as gm
from jacobi_gmd.algebra import DELTA, DELTA_POLY, ONE, T3, VARS, ZERO, RingElem, gens, parse
from jacobi_gmd.vector_fields import R_tau, R_z, VectorField

a, b, c, t1, t2 = gens()
SA, SB, SC, ST1, ST2 = SYMS.values()


@pytest.fixture(scope="module")
def A():
    return gm.build_A()


@pytest.fixture(scope="module")
def B():
    return gm.build_B()


@pytest.fixture(scope="module")
def sympy_A():
    """Change of frame done entirely in sympy from the omega-basis entries."""
    t3 = 4 * SA**3 - ST2 * SA - SB**2
    D = SDELTA
    V = list(SYMS.values())

    def d(f):
        return sp.Matrix([sp.diff(f, v) for v in V])

    al = 3 * t3 * d(ST2) - 2 * ST2 * d(t3)
    g1 = (-2 * SA**2 * ST2**2 + 3 * SA * ST2 * t3 + 9 * t3**2) / (4 * SA * SB)
    g2 = (18 * SA**2 * t3 - SA * ST2**2 - 3 * ST2 * t3) / (2 * SA * SB)
    g3 = (6 * SA**2 * ST2 * t3 + (18 * t3**2 - ST2**3) * SA - ST2**2 * t3) / (8 * SA * SB)
    z = sp.zeros(5, 1)
    grid = [
        [z, z, z],
        [g1 * d(ST2) + g2 * d(t3) - D / SB * d(SA), -d(D) / 12, sp.Rational(3, 2) * al],
        [g3 * d(ST2) + g1 * d(t3) - SA * D / SB * d(SA) + D * d(SB / (2 * SA)), -ST2 / 8 * al, d(D) / 12],
    ]
    S = sp.Matrix([[1, 0, 0], [0, 1, 0], [SC - SB / (2 * SA), ST1, 1]])
    Si = S.inv()
    out = {}
    for k, v in enumerate(V):
        Bv = sp.Matrix(3, 3, lambda i, j: grid[i][j][k] / D)
        out[str(v)] = (S.diff(v) * Si + S * Bv * Si).applyfunc(sp.cancel)
    return out


def test_change_basis_matches_closed_forms(A, B):
    assert gm.change_basis(B, gm.frame_change()) == A


def test_closed_forms_match_independent_sympy_frame_change(A, sympy_A):
    for v in VARS:
        for i in range(3):
            for j in range(3):
                assert sp.cancel(to_sympy(A[v][i][j]) - sympy_A[v][i, j]) == 0, (v, i, j)


def test_first_rows_vanish(A, B):
    assert A.first_row_zero() and B.first_row_zero()


def test_omega_basis_has_no_dc_or_dt1(B):
    assert gm.is_zero_matrix(B["c"]) and gm.is_zero_matrix(B["t1"])


def test_omega_23_dt2_coefficient(B):
    assert B["t2"][1][2] == Fraction(3, 2) * (3 * T3 + 2 * t2 * a) / DELTA


def test_omega_21_da_coefficient(B):
    _, g2, _ = gm.g_functions()
    assert B["a"][1][0] * DELTA == g2 * (12 * a**2 - t2) - DELTA / b


def test_decomposed_blocks_match_displayed_entries(A):
    parts = gm.decompose(A)
    _, g2, _ = gm.g_functions()
    cc = c - b / (2 * a)
    assert parts["a"][1][0] == (g2 + 3 * t2 * cc) * (12 * a**2 - t2) - DELTA / b
    assert parts["a"][1][2] == 3 * t2**2 - 36 * a**2 * t2
    assert parts["b"][1][2] == 6 * b * t2


def test_change_basis_identity_frame(B):
    assert gm.change_basis(B, gm.FrameChange(gm.identity())) == B


def test_entry_relations(A, B):
    cc = c - b / (2 * a)
    for v in VARS:
        assert A[v][1][2] == B[v][1][2]
        assert A[v][1][1] == B[v][1][1] - t1 * B[v][1][2]
        assert A[v][1][0] == B[v][1][0] - cc * B[v][1][2]


def test_dc_coefficient_is_a_single_one(A):
    want = gm.mat([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    assert A["c"] == want


def test_decompose_single_entries(A):
    parts = gm.decompose(A)
    assert parts["c"] == gm.mat([[0, 0, 0], [0, 0, 0], [DELTA, 0, 0]])
    assert parts["t1"] == gm.mat([[0, 0, 0], [0, 0, 0], [0, DELTA, 0]])
    assert gm.recompose(parts) == A
    for v in VARS:
        for row in parts[v]:
            assert all(x.r == 0 for x in row)


def test_contract(A):
    assert gm.contract(A, R_tau()) == gm.mat(gm.C_TAU)
    assert gm.contract(A, R_z()) == gm.mat(gm.C_Z)
    assert gm.is_zero_matrix(gm.contract(A, VectorField.zero()))


def test_flatness_pins_a_single_sign(A, B):
    assert gm.pin_curvature_sign(A) == gm.CURVATURE_SIGN == 1
    assert gm.is_flat(A) and gm.is_flat(B)
    assert not gm.is_flat(A, -gm.CURVATURE_SIGN)


def test_curvature_trivial_cases():
    assert gm.is_flat(gm.ConnectionMatrix.zero())
    N = gm.mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    coeff = {v: gm.zeros() for v in VARS}
    coeff["a"] = N
    assert gm.is_flat(gm.ConnectionMatrix(coeff))


def test_curvature_detects_a_wrong_entry(A):
    coeff = dict(A.coeff)
    rows = [list(r) for r in coeff["t2"]]
    rows[1][1] = rows[1][1] + t1 / DELTA
    coeff["t2"] = tuple(tuple(r) for r in rows)
    assert not gm.is_flat(gm.ConnectionMatrix(coeff))


def test_tau_locus_constants():
    c_tau, c_z = gm.tau_locus_constants()
    assert c_tau == ((0, 0, 0), (0, 0, -1), (0, 0, 0))
    assert c_z == ((0, 0, 0), (-1, 0, 0), (0, 0, 0))
    assert all(isinstance(x, Fraction) for M in (c_tau, c_z) for r in M for x in r)


def test_tau_locus_against_sympy():
    tau, z = sp.symbols("tau z")
    P = sp.Matrix([[-1, z, 0], [0, tau, -1], [0, 1, 0]])
    want = [P.diff(s).T * P.inv().T for s in (tau, z)]
    got = gm.tau_locus_constants()
    for W, G in zip(want, got):
        assert sp.Matrix(G) == W.applyfunc(sp.simplify)


def test_pairing_table():
    phi = gm.pairing_table()
    assert phi[1][2] == 1 and phi[2][1] == -1
    assert all(x == 0 for x in phi[0]) and all(r[0] == 0 for r in phi)
    assert gm.frame_change().preserves_pairing()


def test_admissible_targets():
    assert gm.admissible(gm.C_TAU) and gm.admissible(gm.C_Z)
    # the transposed form C^T Phi + Phi C = 0 rejects C_z, although C_z is realised by R_z
    Cz = [[Fraction(x) for x in r] for r in gm.C_Z]
    lhs = gm._qmul(gm._qT(Cz), gm.PHI)
    rhs = gm._qmul(gm.PHI, Cz)
    assert any(lhs[i][j] + rhs[i][j] for i in range(3) for j in range(3))


@settings(max_examples=25, deadline=None)
@given(points())
def test_connection_values_are_admissible(pt):
    """A(v) at a point, for each coordinate direction, satisfies C Phi + Phi C^T = 0."""
    A = gm.build_A()
    for v in VARS:
        M = [[A[v][i][j].evaluate(pt) for j in range(3)] for i in range(3)]
        assert gm.admissible(M)


# -- group action --------------------------------------------------------------

def test_group_examples():
    t = (1, 1, 0, 0, 0)
    assert gm.group_act(t, gm.IDENTITY_ELEMENT) == tuple(Fraction(x) for x in t)
    assert gm.group_act(t, gm.GroupElement(2)) == (Fraction(1, 4), Fraction(1, 8), 0, 0, 0)


def test_group_rejects_degenerate_point():
    with pytest.raises(gm.DegenerateCurve):
        gm.group_act((1, 0, 0, 0, 3), gm.GroupElement(2))
    with pytest.raises(ValueError):
        gm.GroupElement(0)


group_elems = st.builds(gm.GroupElement, nonzero_q, small_q, small_q)


@settings(max_examples=200, deadline=None)
@given(points(), group_elems, group_elems)
def test_action_axioms(t, g1, g2):
    assert gm.group_act(t, gm.IDENTITY_ELEMENT) == tuple(t)
    assert gm.group_act(gm.group_act(t, g1), g2) == gm.group_act(t, g1 * g2)


@settings(max_examples=200, deadline=None)
@given(group_elems, group_elems)
def test_group_law_is_matrix_product(g1, g2):
    M1 = sp.Matrix(g1.matrix())
    M2 = sp.Matrix(g2.matrix())
    assert sp.Matrix((g1 * g2).matrix()) == M1 * M2
    assert g1.preserves_pairing()


@settings(max_examples=200, deadline=None)
@given(points(), group_elems)
def test_discriminant_scales(t, g):
    assert DELTA_POLY.evaluate(gm.group_act(t, g)) == DELTA_POLY.evaluate(t) / g.k**12


@settings(max_examples=200, deadline=None)
@given(points(), nonzero_q, small_q)
def test_weight_law_on_diagonal(t, k, v):
    a_, b_, c_, t1_, t2_ = gm.group_act(t, gm.GroupElement(k, 0, v))
    assert (a_, b_, t1_, t2_) == (t[0] / k**2, t[1] / k**3, t[3] / k**2, t[4] / k**4)
    assert c_ == t[2] / k + v


def test_json_round_trip(A, golden_dir):
    data = json.loads((golden_dir / "gm_alpha.json").read_text())["matrix"]
    for v in VARS:
        assert [[parse(s) for s in row] for row in data[v]] == [list(r) for r in A[v]]
