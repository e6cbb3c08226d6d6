"""Gauss-Manin connection of the two-pointed Weierstrass family.

A connection is stored as five 3x3 coefficient matrices, one per differential
da, db, dc, dt1, dt2, so that A = sum_v coeff[v] * dv and nabla(alpha) = A alpha.
The global 1/Delta is absorbed into the entries.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import DELTA, ONE, T3, VARS, ZERO, RingElem, gens

# Sign in dA - sigma * (A ^ A) = 0. Found by pin_curvature_sign(): with
# nabla(alpha) = A alpha the flat sign is +1.
CURVATURE_SIGN = 1

PHI = ((0, 0, 0), (0, 0, 1), (0, -1, 0))


class DegenerateCurve(ValueError):
    """Delta vanishes at the point, so it does not lie on the moduli space."""


# -- 3x3 matrix helpers over RingElem ----------------------------------------

def zeros():
    return tuple(tuple(ZERO for _ in range(3)) for _ in range(3))


def identity():
    return tuple(tuple(ONE if i == j else ZERO for j in range(3)) for i in range(3))


def mat(rows):
    return tuple(tuple(x if isinstance(x, RingElem) else RingElem.const(Fraction(x)) for x in r) for r in rows)


def mat_add(X, Y):
    return tuple(tuple(X[i][j] + Y[i][j] for j in range(3)) for i in range(3))


def mat_sub(X, Y):
    return tuple(tuple(X[i][j] - Y[i][j] for j in range(3)) for i in range(3))


def mat_scale(X, s):
    return tuple(tuple(X[i][j] * s for j in range(3)) for i in range(3))


def mat_mul(X, Y):
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = ZERO
            for k in range(3):
                if X[i][k] and Y[k][j]:
                    acc = acc + X[i][k] * Y[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_T(X):
    return tuple(tuple(X[j][i] for j in range(3)) for i in range(3))


def mat_derive(X, v):
    return tuple(tuple(x.derive(v) for x in r) for r in X)


def is_zero_matrix(X):
    return all(not x for r in X for x in r)


def mat_str(X):
    return [[str(x) for x in r] for r in X]


# -- one-forms ----------------------------------------------------------------

def d(f):
    """Exterior derivative of a function as a 5-tuple of coefficients."""
    return tuple(f.derive(v) for v in VARS)


def form(**kw):
    return tuple(kw.get(v, ZERO) for v in VARS)


def fadd(*forms):
    return tuple(sum((f[i] for f in forms), ZERO) for i in range(5))


def fscale(s, f):
    return tuple(s * x for x in f)


ZERO_FORM = (ZERO,) * 5


# -- data types ---------------------------------------------------------------

@dataclass(frozen=True)
class ConnectionMatrix:
    coeff: dict

    @classmethod
    def from_entries(cls, entries):
        """Build from a 3x3 grid of one-forms."""
        coeff = {}
        for k, v in enumerate(VARS):
            coeff[v] = tuple(tuple(entries[i][j][k] for j in range(3)) for i in range(3))
        return cls(coeff)

    @classmethod
    def zero(cls):
        return cls({v: zeros() for v in VARS})

    def __getitem__(self, v):
        return self.coeff[v]

    def entry(self, i, j):
        """The (i, j) one-form, 0-indexed."""
        return tuple(self.coeff[v][i][j] for v in VARS)

    def __eq__(self, other):
        if not isinstance(other, ConnectionMatrix):
            return NotImplemented
        return all(self.coeff[v] == other.coeff[v] for v in VARS)

    def __hash__(self):
        return hash(tuple(self.coeff[v] for v in VARS))

    def first_row_zero(self):
        return all(not x for v in VARS for x in self.coeff[v][0])

    def to_json(self):
        return {v: mat_str(self.coeff[v]) for v in VARS}


@dataclass(frozen=True)
class FrameChange:
    S: tuple

    def inverse(self):
        # unit lower triangular: invert by forward substitution
        S = self.S
        inv = [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]
        for i in range(3):
            for j in range(i):
                acc = ZERO
                for k in range(j, i):
                    acc = acc + S[i][k] * inv[k][j]
                inv[i][j] = -acc
        return tuple(tuple(r) for r in inv)

    def preserves_pairing(self, phi=PHI):
        P = mat(phi)
        return mat_mul(mat_mul(self.S, P), mat_T(self.S)) == P


@dataclass(frozen=True)
class GroupElement:
    k: Fraction
    kp: Fraction = Fraction(0)
    v: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("k", "kp", "v"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.k == 0:
            raise ValueError("k must be nonzero")

    def matrix(self):
        k, kp, v = self.k, self.kp, self.v
        return ((Fraction(1), Fraction(0), v), (Fraction(0), k, kp), (Fraction(0), Fraction(0), 1 / k))

    def __mul__(self, other):
        M = _qmul(self.matrix(), other.matrix())
        return GroupElement(M[1][1], M[1][2], M[0][2])

    def preserves_pairing(self):
        g = self.matrix()
        return _qmul(_qmul(_qT(g), PHI), g) == tuple(tuple(Fraction(x) for x in r) for r in PHI)


IDENTITY_ELEMENT = GroupElement(1, 0, 0)


def _qmul(X, Y):
    n, m, p = len(X), len(Y), len(Y[0])
    return tuple(tuple(sum((Fraction(X[i][k]) * Y[k][j] for k in range(m)), Fraction(0)) for j in range(p)) for i in range(n))


def _qT(X):
    return tuple(tuple(X[j][i] for j in range(len(X))) for i in range(len(X[0])))


# -- building blocks -----------------------------------------------------------

@lru_cache(maxsize=None)
def _symbols():
    a, b, c, t1, t2 = gens()
    t3 = T3
    g1 = (-2 * a**2 * t2**2 + 3 * a * t2 * t3 + 9 * t3**2) / (4 * a * b)
    g2 = (18 * a**2 * t3 - a * t2**2 - 3 * t2 * t3) / (2 * a * b)
    g3 = (6 * a**2 * t2 * t3 + (18 * t3**2 - t2**3) * a - t2**2 * t3) / (8 * a * b)
    dt3 = d(t3)
    alpha = fadd(fscale(3 * t3, d(t2)), fscale(-2 * t2, dt3))
    return dict(a=a, b=b, c=c, t1=t1, t2=t2, t3=t3, g1=g1, g2=g2, g3=g3,
                dt3=dt3, alpha=alpha, dDelta=d(DELTA))


def g_functions():
    s = _symbols()
    return s["g1"], s["g2"], s["g3"]


def alpha_form():
    return _symbols()["alpha"]


def frame_change():
    s = _symbols()
    a, b, c, t1 = s["a"], s["b"], s["c"], s["t1"]
    return FrameChange(mat([[1, 0, 0], [0, 1, 0], [c - b / (2 * a), t1, 1]]))


@lru_cache(maxsize=None)
def build_B():
    """Connection matrix in the omega basis."""
    s = _symbols()
    a, b, t2 = s["a"], s["b"], s["t2"]
    g1, g2, g3, dt3, al, dD = s["g1"], s["g2"], s["g3"], s["dt3"], s["alpha"], s["dDelta"]
    da, dt2 = d(a), d(t2)
    h = Fraction(1, 12)
    B21 = fadd(fscale(g1, dt2), fscale(g2, dt3), fscale(-DELTA / b, da))
    B31 = fadd(fscale(g3, dt2), fscale(g1, dt3), fscale(-a * DELTA / b, da), fscale(DELTA, d(b / (2 * a))))
    B22 = fscale(RingElem.const(-h), dD)
    B23 = fscale(RingElem.const(Fraction(3, 2)), al)
    B32 = fscale(-t2 / 8, al)
    B33 = fscale(RingElem.const(h), dD)
    inv = 1 / DELTA
    grid = [[ZERO_FORM] * 3, [B21, B22, B23], [B31, B32, B33]]
    grid = [[fscale(inv, e) for e in row] for row in grid]
    return ConnectionMatrix.from_entries(grid)


@lru_cache(maxsize=None)
def build_A():
    """Connection matrix in the alpha basis, typed from the closed forms."""
    s = _symbols()
    a, b, c, t1, t2 = s["a"], s["b"], s["c"], s["t1"], s["t2"]
    g1, g2, g3, dt3, al, dD = s["g1"], s["g2"], s["g3"], s["dt3"], s["alpha"], s["dDelta"]
    da, dt2, dc, dt1 = d(a), d(t2), d(c), d(t1)
    cc = c - b / (2 * a)
    h = Fraction(1, 12)
    A21 = fadd(fscale(g1, dt2), fscale(g2, dt3), fscale(cc * Fraction(-3, 2), al), fscale(-DELTA / b, da))
    A22 = fadd(fscale(t1 * Fraction(-3, 2), al), fscale(RingElem.const(-h), dD))
    A23 = fscale(RingElem.const(Fraction(3, 2)), al)
    A31 = fadd(
        fscale(t1 * g1 + g3, dt2),
        fscale(t1 * g2 + g1, dt3),
        fscale(-(a + t1) * DELTA / b, da),
        fscale(-cc * (t1 * Fraction(3, 2)), al),
        fscale(-cc * h, dD),
        fscale(DELTA, dc),
    )
    A32 = fadd(fscale(DELTA, dt1), fscale(t1 * Fraction(-1, 6), dD), fscale(-(t1**2 * Fraction(3, 2) + t2 / 8), al))
    A33 = fadd(fscale(t1 * Fraction(3, 2), al), fscale(RingElem.const(h), dD))
    inv = 1 / DELTA
    grid = [[ZERO_FORM] * 3, [A21, A22, A23], [A31, A32, A33]]
    grid = [[fscale(inv, e) for e in row] for row in grid]
    return ConnectionMatrix.from_entries(grid)


def change_basis(B, S):
    """A = dS S^-1 + S B S^-1."""
    Si = S.inverse()
    coeff = {}
    for v in VARS:
        dS = mat_derive(S.S, v)
        coeff[v] = mat_add(mat_mul(dS, Si), mat_mul(mat_mul(S.S, B[v]), Si))
    return ConnectionMatrix(coeff)


def decompose(A):
    """The five matrices A_v with A = (1/Delta) sum_v A_v dv."""
    return {v: mat_scale(A[v], DELTA) for v in VARS}


def recompose(parts):
    inv = 1 / DELTA
    return ConnectionMatrix({v: mat_scale(parts[v], inv) for v in VARS})


def contract(A, field):
    """A evaluated on a vector field given as a 5-sequence (or mapping) of coefficients."""
    if isinstance(field, dict):
        field = [field.get(v, ZERO) for v in VARS]
    else:
        field = list(getattr(field, "coeffs", field))
    out = zeros()
    for v, u in zip(VARS, field):
        if u:
            out = mat_add(out, mat_scale(A[v], u))
    return out


def curvature(A, sign=None):
    """dA - sign*(A ^ A), one matrix per pair of variables u < v."""
    if sign is None:
        sign = CURVATURE_SIGN
    out = {}
    for u, v in itertools.combinations(VARS, 2):
        Au, Av = A[u], A[v]
        comm = mat_sub(mat_mul(Au, Av), mat_mul(Av, Au))
        out[(u, v)] = mat_sub(mat_sub(mat_derive(Av, u), mat_derive(Au, v)), mat_scale(comm, sign))
    return out


def is_flat(A, sign=None):
    return all(is_zero_matrix(m) for m in curvature(A, sign).values())


def pin_curvature_sign(A=None):
    """The unique sign for which A is flat."""
    A = build_A() if A is None else A
    winners = [s for s in (1, -1) if is_flat(A, s)]
    if len(winners) != 1:
        raise ArithmeticError(f"curvature sign not determined: {winners}")
    return winners[0]


def pairing_table():
    return tuple(tuple(Fraction(x) for x in r) for r in PHI)


def admissible(C, phi=PHI):
    """C Phi + Phi C^T = 0, the condition satisfied by every A(v)."""
    C = [[Fraction(x) for x in r] for r in C]
    lhs = _qmul(C, phi)
    rhs = _qmul(phi, _qT(C))
    return all(lhs[i][j] + rhs[i][j] == 0 for i in range(3) for j in range(3))


# -- the group action ----------------------------------------------------------

def group_act(t, g):
    """Right action t . g on a point (a, b, c, t1, t2)."""
    from .algebra import DELTA_POLY

    a, b, c, t1, t2 = (Fraction(x) for x in t)
    if DELTA_POLY.evaluate([a, b, c, t1, t2]) == 0:
        raise DegenerateCurve("Delta(t) = 0")
    k, kp, v = g.k, g.kp, g.v
    return (a / k**2, b / k**3, v + c / k, kp / k + t1 / k**2, t2 / k**4)


# -- tau-locus -----------------------------------------------------------------

class _BiPoly:
    """Integer polynomial in (tau, z); just enough for 3x3 matrix algebra."""

    __slots__ = ("t",)

    def __init__(self, t=None):
        self.t = {k: v for k, v in (t or {}).items() if v}

    @classmethod
    def const(cls, n):
        return cls({(0, 0): n})

    def __add__(self, o):
        t = dict(self.t)
        for k, v in o.t.items():
            t[k] = t.get(k, 0) + v
        return _BiPoly(t)

    def __neg__(self):
        return _BiPoly({k: -v for k, v in self.t.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        t = {}
        for (i, j), x in self.t.items():
            for (k, l), y in o.t.items():
                t[(i + k, j + l)] = t.get((i + k, j + l), 0) + x * y
        return _BiPoly(t)

    def derive(self, idx):
        t = {}
        for e, x in self.t.items():
            if e[idx]:
                e2 = list(e)
                e2[idx] -= 1
                t[tuple(e2)] = x * e[idx]
        return _BiPoly(t)

    def constant(self):
        if any(k != (0, 0) for k in self.t):
            raise ValueError("depends on tau or z")
        return self.t.get((0, 0), 0)


def _bmul(X, Y):
    return [[sum((X[i][k] * Y[k][j] for k in range(3)), _BiPoly()) for j in range(3)] for i in range(3)]


def _bdet(X):
    return (X[0][0] * (X[1][1] * X[2][2] - X[1][2] * X[2][1])
            - X[0][1] * (X[1][0] * X[2][2] - X[1][2] * X[2][0])
            + X[0][2] * (X[1][0] * X[2][1] - X[1][1] * X[2][0]))


def _badj(X):
    def minor(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        return X[r[0]][c[0]] * X[r[1]][c[1]] - X[r[0]][c[1]] * X[r[1]][c[0]]
    return [[minor(j, i) if (i + j) % 2 == 0 else -minor(j, i) for j in range(3)] for i in range(3)]


def tau_period_matrix():
    one, zero = _BiPoly.const(1), _BiPoly()
    tau, z = _BiPoly({(1, 0): 1}), _BiPoly({(0, 1): 1})
    return [[-one, z, zero], [zero, tau, -one], [zero, one, zero]]


def tau_locus_constants():
    """(C_tau, C_z): A(d/dtau) and A(d/dz) = (dP)^T (P^-1)^T along the tau-locus."""
    P = tau_period_matrix()
    det = _bdet(P).constant()
    if abs(det) != 1:
        raise ArithmeticError("period matrix is not unimodular")
    adj = _badj(P)
    Pinv = [[x * _BiPoly.const(det) for x in r] for r in adj]  # 1/det == det for det = +-1
    PinvT = [[Pinv[j][i] for j in range(3)] for i in range(3)]
    out = []
    for idx in (0, 1):
        dPT = [[P[j][i].derive(idx) for j in range(3)] for i in range(3)]
        M = _bmul(dPT, PinvT)
        out.append(tuple(tuple(Fraction(x.constant()) for x in r) for r in M))
    return tuple(out)


C_TAU = ((0, 0, 0), (0, 0, -1), (0, 0, 0))
C_Z = ((0, 0, 0), (-1, 0, 0), (0, 0, 0))
