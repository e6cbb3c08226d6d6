"""Exact arithmetic over Q[a, b, c, t1, t2] localized at a, b and Delta.

Scalars are :class:`fractions.Fraction`. Polynomials are sparse and keyed by a
packed monomial integer whose natural integer order *is* graded lex order with
a > b > c > t1 > t2, so products of monomials are integer additions and the
leading term is ``max(keys)``.

t3 = 4a^3 - t2*a - b^2 and Delta = 27*t3^2 - t2^3 are derived values, never
ring variables.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from functools import reduce

VARS = ("a", "b", "c", "t1", "t2")
NVARS = len(VARS)
WEIGHTS = (2, 3, 1, 2, 4)

_BITS = 16
_MASK = (1 << _BITS) - 1
_SHIFTS = tuple((NVARS - 1 - i) * _BITS for i in range(NVARS))
_DEG_SHIFT = NVARS * _BITS
_FIELDS_MASK = (1 << _DEG_SHIFT) - 1


def _pack(exps):
    m = sum(e << s for e, s in zip(exps, _SHIFTS))
    return m | (sum(exps) << _DEG_SHIFT)


def _unpack(m):
    return tuple((m >> s) & _MASK for s in _SHIFTS)


def _var_unit(i):
    return (1 << _SHIFTS[i]) | (1 << _DEG_SHIFT)


def _divides(m1, m2):
    """True when monomial m1 divides monomial m2."""
    return all(((m2 >> s) & _MASK) >= ((m1 >> s) & _MASK) for s in _SHIFTS)


def var_index(v):
    if isinstance(v, int):
        if not 0 <= v < NVARS:
            raise IndexError(v)
        return v
    try:
        return VARS.index(v)
    except ValueError:
        raise ValueError(f"unknown variable {v!r}; expected one of {VARS}") from None


class DivisionByZero(ZeroDivisionError):
    """A localized factor (a, b or Delta) vanished at an evaluation point."""

    def __init__(self, factor):
        super().__init__(f"{factor} vanishes at this point")
        self.factor = factor


class NotInvertible(ArithmeticError):
    pass


class LinearSystemError(ArithmeticError):
    pass


class SingularSystem(LinearSystemError):
    pass


class InconsistentSystem(LinearSystemError):
    pass


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class Poly:
    """Sparse polynomial in a, b, c, t1, t2 with rational coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for e, cf in terms.items():
                cf = _as_fraction(cf)
                if cf:
                    m = e if isinstance(e, int) else _pack(e)
                    t[m] = t.get(m, 0) + cf
                    if not t[m]:
                        del t[m]
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t):
        p = object.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def const(cls, x):
        x = _as_fraction(x)
        return cls._raw({0: x} if x else {})

    @classmethod
    def var(cls, v):
        return cls._raw({_var_unit(var_index(v)): Fraction(1)})

    # -- inspection --------------------------------------------------------
    def terms(self):
        """(exponent tuple, coefficient) pairs in descending grlex order."""
        return [(_unpack(m), self._t[m]) for m in sorted(self._t, reverse=True)]

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self):
        return not self._t

    def is_constant(self):
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self._t.get(0, Fraction(0))

    def leading(self):
        m = max(self._t)
        return m, self._t[m]

    def degree(self, v=None):
        if not self._t:
            return -1
        if v is None:
            return max(self._t) >> _DEG_SHIFT
        s = _SHIFTS[var_index(v)]
        return max((m >> s) & _MASK for m in self._t)

    def min_exponent(self, v):
        s = _SHIFTS[var_index(v)]
        return min((m >> s) & _MASK for m in self._t) if self._t else 0

    def weights(self):
        """Set of weighted degrees of the monomials."""
        return {sum(w * e for w, e in zip(WEIGHTS, _unpack(m))) for m in self._t}

    # -- arithmetic --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other._t) > len(self._t):
            big, small = other._t, self._t
        else:
            big, small = self._t, other._t
        t = dict(big)
        for m, cf in small.items():
            s = t.get(m)
            if s is None:
                t[m] = cf
            else:
                s += cf
                if s:
                    t[m] = s
                else:
                    del t[m]
        return Poly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -cf for m, cf in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, x):
        x = _as_fraction(x)
        if not x:
            return Poly._raw({})
        return Poly._raw({m: cf * x for m, cf in self._t.items()})

    def shift(self, mono):
        """Multiply by the monomial with packed key ``mono``."""
        return Poly._raw({m + mono: cf for m, cf in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        t = {}
        get = t.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = m1 + m2
                t[m] = get(m, 0) + c1 * c2
        return Poly._raw({m: cf for m, cf in t.items() if cf})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative int")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derive(self, v):
        i = var_index(v)
        s = _SHIFTS[i]
        unit = _var_unit(i)
        t = {}
        for m, cf in self._t.items():
            e = (m >> s) & _MASK
            if e:
                t[m - unit] = cf * e
        return Poly._raw(t)

    def divide_var(self, v, k=1):
        """Exact division by v**k; caller guarantees divisibility."""
        unit = _var_unit(var_index(v)) * k
        return Poly._raw({m - unit: cf for m, cf in self._t.items()})

    def exact_div(self, d):
        """Quotient self / d, or None when d does not divide self."""
        if not d._t:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._t:
            return Poly._raw({})
        if len(d._t) == 1:
            (dm, dc), = d._t.items()
            if not all(_divides(dm, m) for m in self._t):
                return None
            return Poly._raw({m - dm: cf / dc for m, cf in self._t.items()})
        dm, dc = d.leading()
        dterms = [(m, cf) for m, cf in d._t.items() if m != dm]
        r = dict(self._t)
        q = {}
        while r:
            m = max(r)
            if not _divides(dm, m):
                return None
            qc = r.pop(m) / dc
            qm = m - dm
            q[qm] = qc
            for m2, c2 in dterms:
                k = m2 + qm
                v = r.get(k, 0) - qc * c2
                if v:
                    r[k] = v
                else:
                    r.pop(k, None)
        return Poly._raw(q)

    def evaluate(self, point):
        point = [_as_fraction(x) for x in point]
        if len(point) != NVARS:
            raise ValueError(f"expected {NVARS} coordinates")
        total = Fraction(0)
        for m, cf in self._t.items():
            v = cf
            for x, s in zip(point, _SHIFTS):
                e = (m >> s) & _MASK
                if e:
                    v *= x**e
            total += v
        return total

    def substitute(self, values):
        """Evaluate with ring-like values (anything supporting + and *)."""
        total = None
        for e, cf in self.terms():
            term = None
            for x, k in zip(values, e):
                if k:
                    xk = x**k
                    term = xk if term is None else term * xk
            term = cf if term is None else term * cf
            total = term if total is None else total + term
        return total

    # -- printing ----------------------------------------------------------
    def __str__(self):
        if not self._t:
            return "0"
        out = []
        for e, cf in self.terms():
            mono = "*".join(
                (name if k == 1 else f"{name}^{k}") for name, k in zip(VARS, e) if k
            )
            sign = "-" if cf < 0 else "+"
            mag = abs(cf)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Poly({self})"


_A, _B, _C, _T1, _T2 = (Poly.var(v) for v in VARS)
T3_POLY = _A**3 * 4 - _T2 * _A - _B**2
DELTA_POLY = T3_POLY**2 * 27 - _T2**3

_delta_pows = [Poly.const(1)]


def _delta_pow(k):
    while len(_delta_pows) <= k:
        _delta_pows.append(_delta_pows[-1] * DELTA_POLY)
    return _delta_pows[k]


class RingElem:
    """num / (a^p * b^q * Delta^r) in canonical form.

    Canonical: num is not divisible by a when p > 0, by b when q > 0, by Delta
    when r > 0; zero is 0/1.
    """

    __slots__ = ("num", "p", "q", "r")

    def __init__(self, num, p=0, q=0, r=0):
        if isinstance(num, (int, Fraction)):
            num = Poly.const(num)
        if min(p, q, r) < 0:
            raise ValueError("denominator exponents must be non-negative")
        num, p, q, r = _canonical(num, p, q, r)
        self.num, self.p, self.q, self.r = num, p, q, r

    @classmethod
    def _raw(cls, num, p, q, r):
        x = object.__new__(cls)
        x.num, x.p, x.q, x.r = num, p, q, r
        return x

    @classmethod
    def var(cls, v):
        return cls._raw(Poly.var(v), 0, 0, 0)

    @classmethod
    def const(cls, x):
        return cls._raw(Poly.const(x), 0, 0, 0)

    def __setattr__(self, name, value):
        if hasattr(self, "r"):
            raise AttributeError("RingElem is immutable")
        object.__setattr__(self, name, value)

    # -- inspection --------------------------------------------------------
    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self):
        return self.p == self.q == self.r == 0

    def is_constant(self):
        return self.is_polynomial() and self.num.is_constant()

    def constant_value(self):
        if not self.is_polynomial():
            raise ValueError("not a constant")
        return self.num.constant_value()

    def denominator(self):
        return (self.p, self.q, self.r)

    def __eq__(self, other):
        other = _coerce_ring(other)
        if other is None:
            return NotImplemented
        return (self.p, self.q, self.r) == (other.p, other.q, other.r) and self.num == other.num

    def __hash__(self):
        return hash((self.num, self.p, self.q, self.r))

    # -- arithmetic --------------------------------------------------------
    def _lift(self, p, q, r):
        n = self.num
        if r > self.r:
            n = n * _delta_pow(r - self.r)
        shift = (p - self.p) * _var_unit(0) + (q - self.q) * _var_unit(1)
        if shift:
            n = n.shift(shift)
        return n

    def __add__(self, other):
        other = _coerce_ring(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        p, q, r = max(self.p, other.p), max(self.q, other.q), max(self.r, other.r)
        return RingElem(self._lift(p, q, r) + other._lift(p, q, r), p, q, r)

    __radd__ = __add__

    def __neg__(self):
        return RingElem._raw(-self.num, self.p, self.q, self.r)

    def __sub__(self, other):
        other = _coerce_ring(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElem._raw(self.num.scale(other), self.p, self.q, self.r) if other else ZERO
        other = _coerce_ring(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        return RingElem(self.num * other.num, self.p + other.p, self.q + other.q, self.r + other.r)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RingElem(self.num**n, self.p * n, self.q * n, self.r * n)

    def inverse(self):
        """Inverse in the localized ring; only units c*a^i*b^j*Delta^k qualify."""
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.num
        i = n.min_exponent("a")
        j = n.min_exponent("b")
        if i:
            n = n.divide_var("a", i)
        if j:
            n = n.divide_var("b", j)
        k = 0
        while not n.is_constant():
            qt = n.exact_div(DELTA_POLY)
            if qt is None:
                raise NotInvertible(f"{self} is not a unit of the localized ring")
            n, k = qt, k + 1
        cst = n.constant_value()
        # self = cst * a^i b^j Delta^k / (a^p b^q Delta^r)
        num = Poly.const(1 / cst).shift(self.p * _var_unit(0) + self.q * _var_unit(1))
        num = num * _delta_pow(self.r)
        return RingElem(num, i, j, k)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        other = _coerce_ring(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce_ring(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def derive(self, v):
        """Partial derivative, quotient rule through the localized denominator."""
        i = var_index(v)
        out = RingElem(self.num.derive(i), self.p, self.q, self.r)
        if self.p and i == 0:
            out = out - RingElem(self.num.scale(self.p), self.p + 1, self.q, self.r)
        if self.q and i == 1:
            out = out - RingElem(self.num.scale(self.q), self.p, self.q + 1, self.r)
        if self.r:
            dd = DELTA_POLY.derive(i)
            if dd:
                out = out - RingElem(self.num * dd.scale(self.r), self.p, self.q, self.r + 1)
        return out

    def evaluate(self, point):
        point = [_as_fraction(x) for x in point]
        a, b = point[0], point[1]
        if self.p and a == 0:
            raise DivisionByZero("a")
        if self.q and b == 0:
            raise DivisionByZero("b")
        den = a**self.p * b**self.q
        if self.r:
            dv = DELTA_POLY.evaluate(point)
            if dv == 0:
                raise DivisionByZero("Delta")
            den *= dv**self.r
        return self.num.evaluate(point) / den

    def weight(self):
        """Weights of the numerator monomials shifted by the denominator weight."""
        shift = 2 * self.p + 3 * self.q + 12 * self.r
        return {w - shift for w in self.num.weights()}

    def degree(self, v):
        i = var_index(v)
        if i in (2, 3):
            return self.num.degree(i)
        raise ValueError("degree is only meaningful for c and t1 (free of the denominator)")

    def __str__(self):
        s = str(self.num)
        suffix = ""
        for name, k in (("a", self.p), ("b", self.q), ("Delta", self.r)):
            if k:
                suffix += f"/{name}" if k == 1 else f"/{name}^{k}"
        if suffix:
            return f"({s}){suffix}"
        return s

    def __repr__(self):
        return f"RingElem({self})"


def _coerce_ring(x):
    if isinstance(x, RingElem):
        return x
    if isinstance(x, (int, Fraction)):
        return RingElem.const(x)
    if isinstance(x, Poly):
        return RingElem._raw(x, 0, 0, 0)
    return None


def _canonical(num, p, q, r):
    if num.is_zero():
        return num, 0, 0, 0
    if p:
        k = min(p, num.min_exponent("a"))
        if k:
            num, p = num.divide_var("a", k), p - k
    if q:
        k = min(q, num.min_exponent("b"))
        if k:
            num, q = num.divide_var("b", k), q - k
    while r:
        qt = num.exact_div(DELTA_POLY)
        if qt is None:
            break
        num, r = qt, r - 1
    return num, p, q, r


ZERO = RingElem._raw(Poly.const(0), 0, 0, 0)
ONE = RingElem._raw(Poly.const(1), 0, 0, 0)


def gens():
    """The coordinate functions a, b, c, t1, t2 as RingElems."""
    return tuple(RingElem.var(v) for v in VARS)


T3 = RingElem._raw(T3_POLY, 0, 0, 0)
DELTA = RingElem._raw(DELTA_POLY, 0, 0, 0)


# ---------------------------------------------------------------------------
# Module-level operation names


def ring_add(x, y):
    return _coerce_ring(x) + y


def ring_mul(x, y):
    return _coerce_ring(x) * y


def ring_derive(x, v):
    return _coerce_ring(x).derive(v)


def ring_eval(x, point):
    return _coerce_ring(x).evaluate(point)


# ---------------------------------------------------------------------------
# Parsing canonical strings and small expressions


_NAMES = {"t3": lambda: T3, "Delta": lambda: DELTA}


def parse(text):
    """Parse an expression over a, b, c, t1, t2, t3, Delta into a RingElem.

    Accepts the canonical serialization, e.g. ``(a^2 - 1/3*t2)/b/Delta^2``.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    return _coerce_ring(_eval_node(tree.body))


def _eval_node(node):
    if isinstance(node, ast.BinOp):
        left, right = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(left, Fraction) and isinstance(right, Fraction):
                return left / right
            return _coerce_ring(left) / right
        if isinstance(node.op, ast.Pow):
            if not isinstance(right, Fraction) or right.denominator != 1:
                raise ValueError("exponents must be integers")
            return left ** int(right)
    elif isinstance(node, ast.UnaryOp):
        v = _eval_node(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    elif isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    elif isinstance(node, ast.Name):
        if node.id in VARS:
            return RingElem.var(node.id)
        if node.id in _NAMES:
            return _NAMES[node.id]()
        raise ValueError(f"unknown symbol {node.id!r}")
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


parse_ring = parse


# ---------------------------------------------------------------------------
# Rational functions and linear solving


class RatFun:
    """num/den with Poly parts; a transient value used by the linear solver."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif isinstance(den, (int, Fraction)):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Poly.const(1)
        elif den.is_constant():
            num, den = num.scale(1 / den.constant_value()), Poly.const(1)
        else:
            qt = num.exact_div(den)
            if qt is not None:
                num, den = qt, Poly.const(1)
        self.num, self.den = num, den

    @classmethod
    def from_ring(cls, x):
        x = _coerce_ring(x)
        den = _delta_pow(x.r).shift(x.p * _var_unit(0) + x.q * _var_unit(1))
        return cls(x.num, den)

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        other = _coerce_ratfun(other)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_coerce_ratfun(other))

    def __mul__(self, other):
        other = _coerce_ratfun(other)
        return RatFun(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = _coerce_ratfun(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = _coerce_ratfun(other)
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def to_ring_elem(self):
        """Rewrite as a RingElem; raises NotInvertible if the denominator has
        a factor other than a, b, Delta that does not cancel."""
        num, den = self.num, self.den
        p, q, r = den.min_exponent("a"), den.min_exponent("b"), 0
        if p:
            den = den.divide_var("a", p)
        if q:
            den = den.divide_var("b", q)
        while not den.is_constant():
            qt = den.exact_div(DELTA_POLY)
            if qt is None:
                break
            den, r = qt, r + 1
        if not den.is_constant():
            qt = num.exact_div(den)
            if qt is None:
                raise NotInvertible("denominator is not a unit of the localized ring")
            num, den = qt, Poly.const(1)
        return RingElem(num.scale(1 / den.constant_value()), p, q, r)

    def __str__(self):
        if self.den == Poly.const(1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _coerce_ratfun(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, (int, Fraction, Poly)):
        return RatFun(x)
    if isinstance(x, RingElem):
        return RatFun.from_ring(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a rational function")


def _clear_row(row):
    """Scale a row of RatFuns to Polys by the product of distinct denominators."""
    dens = []
    for x in row:
        if not x.den.is_constant() and all(x.den != d for d in dens):
            dens.append(x.den)
    common = reduce(lambda u, v: u * v, dens, Poly.const(1))
    out = []
    for x in row:
        f = common.exact_div(x.den)
        out.append(x.num * f)
    return out


def linsolve(M, rhs):
    """Solve the square system M u = rhs exactly (fraction-free elimination)."""
    n = len(M)
    if any(len(row) != n for row in M) or len(rhs) != n:
        raise ValueError("linsolve needs a square system")
    return linsolve_rect(M, rhs)


def linsolve_rect(M, rhs):
    """Unique solution of a possibly overdetermined system, as RatFuns.

    Columns holding a single nonzero entry are peeled off first and solved by
    back substitution; the remaining core goes through fraction-free
    Gauss-Jordan elimination, whose surplus rows must reduce to 0 = 0.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    if len(rhs) != m or any(len(row) != n for row in M):
        raise ValueError("shape mismatch")
    rows = [_clear_row([_coerce_ratfun(x) for x in M[i]] + [_coerce_ratfun(rhs[i])]) for i in range(m)]

    active_rows = [i for i in range(m) if any(not x.is_zero() for x in rows[i])]
    for i in range(m):
        if i not in active_rows:
            continue
        if all(x.is_zero() for x in rows[i][:n]):
            raise InconsistentSystem(f"equation {i} reads 0 = {rows[i][n]}")
    active_cols = list(range(n))
    peeled = []
    progress = True
    while progress:
        progress = False
        for j in active_cols:
            hits = [i for i in active_rows if not rows[i][j].is_zero()]
            if len(hits) == 1:
                peeled.append((hits[0], j))
                active_rows.remove(hits[0])
                active_cols.remove(j)
                progress = True
                break
            if not hits:
                raise SingularSystem(f"unknown {j} does not appear in the system")

    core = {}
    if active_cols:
        core = _gauss_jordan([rows[i] for i in active_rows], active_cols, n)
    elif active_rows:
        for i in active_rows:
            raise InconsistentSystem(f"equation {i} has no unknowns left but is not satisfied")

    sol = dict(core)
    for i, j in reversed(peeled):
        acc = RatFun(rows[i][n])
        for k in range(n):
            if k != j and not rows[i][k].is_zero():
                acc = acc - RatFun(rows[i][k]) * sol[k]
        sol[j] = acc / RatFun(rows[i][j])
    return [sol[j] for j in range(n)]


def _gauss_jordan(rows, cols, rhs_col):
    rows = [list(r) for r in rows]
    prev = Poly.const(1)
    pivots = []
    used = set()
    for j in cols:
        cands = [i for i in range(len(rows)) if i not in used and not rows[i][j].is_zero()]
        if not cands:
            continue
        k = min(cands, key=lambda i: (len(rows[i][j]), i))
        used.add(k)
        pivots.append((k, j))
        pk = rows[k][j]
        for i in range(len(rows)):
            if i == k:
                continue
            f = rows[i][j]
            new = []
            for jj in range(len(rows[i])):
                v = rows[i][jj] * pk - f * rows[k][jj]
                if not v.is_zero():
                    qt = v.exact_div(prev)
                    if qt is None:
                        raise ArithmeticError("fraction-free step lost exactness")
                    v = qt
                new.append(v)
            rows[i] = new
        prev = pk
    for i in range(len(rows)):
        if i not in used and not rows[i][rhs_col].is_zero():
            raise InconsistentSystem("overdetermined system has no solution")
    if len(pivots) < len(cols):
        raise SingularSystem("system is rank deficient")
    return {j: RatFun(rows[k][rhs_col], rows[k][j]) for k, j in pivots}
