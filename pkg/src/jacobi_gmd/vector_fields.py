"""Modular vector fields, their brackets, and Serre-type derivatives."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import gauss_manin as gm
from .algebra import (
    T3,
    VARS,
    ZERO,
    InconsistentSystem,
    NotInvertible,
    RingElem,
    SingularSystem,
    gens,
    linsolve_rect,
)


class NoSolution(InconsistentSystem):
    pass


class NonUnique(SingularSystem):
    pass


class NotPolynomial(ArithmeticError):
    pass


class _NotHomogeneous:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NotHomogeneous"

    def __bool__(self):
        return False


NOT_HOMOGENEOUS = _NotHomogeneous()


@dataclass(frozen=True)
class VectorField:
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(x if isinstance(x, RingElem) else RingElem.const(Fraction(x)) for x in self.coeffs)
        if len(cs) != len(VARS):
            raise ValueError("a vector field needs five coefficients")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def zero(cls):
        return cls((ZERO,) * 5)

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d.get(v, ZERO) for v in VARS))

    def __getitem__(self, v):
        return self.coeffs[VARS.index(v) if isinstance(v, str) else v]

    def is_zero(self):
        return all(not x for x in self.coeffs)

    def is_polynomial(self):
        return all(x.is_polynomial() for x in self.coeffs)

    def __add__(self, other):
        return VectorField(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return VectorField(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def scale(self, s):
        return VectorField(tuple(x * s for x in self.coeffs))

    def __call__(self, f):
        return apply(self, f)

    def to_json(self):
        return {v: str(x) for v, x in zip(VARS, self.coeffs)}


def apply(v, f):
    """The derivation v acting on f."""
    f = f if isinstance(f, RingElem) else RingElem.const(Fraction(f))
    out = ZERO
    for var, u in zip(VARS, v.coeffs):
        if u:
            df = f.derive(var)
            if df:
                out = out + u * df
    return out


def lie_bracket(v, w):
    return VectorField(tuple(apply(v, wc) - apply(w, vc) for vc, wc in zip(v.coeffs, w.coeffs)))


def solve_modular(C, A=None, require_polynomial=True):
    """The unique field v with A(v) = C, from all nine matrix entries."""
    A = gm.build_A() if A is None else A
    C = [[Fraction(x) for x in row] for row in C]
    rows, rhs = [], []
    for i in range(3):
        for j in range(3):
            rows.append([A[var][i][j] for var in VARS])
            rhs.append(RingElem.const(C[i][j]))
    try:
        sol = linsolve_rect(rows, rhs)
    except SingularSystem as e:
        raise NonUnique(str(e)) from None
    except InconsistentSystem as e:
        raise NoSolution(str(e)) from None
    try:
        field = VectorField(tuple(x.to_ring_elem() for x in sol))
    except NotInvertible as e:
        raise NotPolynomial(str(e)) from None
    # every equation, not only the pivots, must hold
    got = gm.contract(A, field)
    if any(got[i][j] != RingElem.const(C[i][j]) for i in range(3) for j in range(3)):
        raise NoSolution("solution does not satisfy all nine equations")
    if require_polynomial and not field.is_polynomial():
        raise NotPolynomial("solution has a, b or Delta in a denominator")
    return field


@lru_cache(maxsize=None)
def R_tau():
    return solve_modular(gm.C_TAU)


@lru_cache(maxsize=None)
def R_z():
    return solve_modular(gm.C_Z)


def R_tau_closed():
    """The coefficients as displayed in closed form, for cross-checking."""
    a, b, c, t1, t2 = gens()
    return VectorField((
        -2 * a**2 + 2 * a * t1 + b * c + t2 / 3,
        6 * a**2 * c - c * t2 / 2 - 3 * a * b + 3 * b * t1,
        a * c + c * t1 - b / 2,
        t1**2 - t2 / 12,
        4 * t1 * t2 - 6 * T3,
    ))


def R_z_closed():
    a, b, c, t1, t2 = gens()
    return VectorField((b, 6 * a**2 - t2 / 2, a + t1, ZERO, ZERO))


# -- weights and Serre derivatives ------------------------------------------------

def weight_of(f):
    """Common weight of f, or NOT_HOMOGENEOUS. The zero element has no weight."""
    if not f:
        raise ValueError("zero has no well-defined weight")
    ws = f.weight()
    if len(ws) != 1:
        return NOT_HOMOGENEOUS
    return next(iter(ws))


@dataclass(frozen=True)
class GradedPoly:
    value: RingElem
    weight: int
    t1_depth: int = 0
    c_depth: int = 0

    @classmethod
    def of(cls, f, weight=None):
        """Wrap f, reading depths off the numerator and the weight from f unless given."""
        if weight is None:
            weight = weight_of(f)
            if weight is NOT_HOMOGENEOUS:
                raise ValueError(f"{f} is not weight-homogeneous")
        return cls(f, weight, max(f.num.degree("t1"), 0), max(f.num.degree("c"), 0))

    def to_json(self):
        return {"value": str(self.value), "weight": self.weight,
                "t1_depth": self.t1_depth, "c_depth": self.c_depth}


def serre_derivative(f):
    """R_tau f - (w - s) t1 f with s the t1-depth."""
    _, _, _, t1, _ = gens()
    val = apply(R_tau(), f.value) - t1 * f.value * (f.weight - f.t1_depth)
    return _graded(val, f.weight + 2)


def serre_jacobi(f):
    """R_tau f - (w - s) t1 f - c R_z f."""
    _, _, c, t1, _ = gens()
    val = apply(R_tau(), f.value) - t1 * f.value * (f.weight - f.t1_depth) - c * apply(R_z(), f.value)
    return _graded(val, f.weight + 2)


def _graded(val, weight):
    if val:
        w = weight_of(val)
        if w != weight:
            raise ArithmeticError(f"weight bookkeeping broke: expected {weight}, got {w}")
        return GradedPoly.of(val, weight)
    return GradedPoly(val, weight, 0, 0)
