import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jacobi_gmd.algebra import DELTA_POLY, VARS, WEIGHTS, Poly, RingElem

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")

MANY = settings(max_examples=1000, deadline=None)

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
nonzero_q = small_q.filter(lambda x: x != 0)

exps = st.tuples(*(st.integers(0, 2) for _ in VARS))


@st.composite
def polys(draw, max_terms=3):
    terms = draw(st.dictionaries(exps, nonzero_q, max_size=max_terms))
    return Poly(terms)


@st.composite
def ring_elems(draw, max_terms=3, max_r=1):
    num = draw(polys(max_terms))
    p = draw(st.integers(0, 1))
    q = draw(st.integers(0, 1))
    r = draw(st.integers(0, max_r))
    return RingElem(num, p, q, r)


@st.composite
def points(draw):
    """Rational points where a, b and Delta are all nonzero."""
    pt = draw(st.tuples(nonzero_q, nonzero_q, small_q, small_q, small_q))
    if DELTA_POLY.evaluate(pt) == 0:
        pt = (pt[0], pt[1], pt[2], pt[3], pt[4] + 1)
    from hypothesis import assume

    assume(DELTA_POLY.evaluate(pt) != 0)
    return pt


def monomials_of_weight(w, allowed):
    """Exponent tuples over VARS of weighted degree w using only `allowed` variables."""
    idx = [VARS.index(v) for v in allowed]
    out = []
    bounds = [w // WEIGHTS[i] for i in idx]
    for es in itertools.product(*(range(b + 1) for b in bounds)):
        if sum(e * WEIGHTS[i] for e, i in zip(es, idx)) == w:
            full = [0] * len(VARS)
            for e, i in zip(es, idx):
                full[i] = e
            out.append(tuple(full))
    return out


def random_homogeneous(rng, w, allowed=VARS, max_terms=4):
    monos = monomials_of_weight(w, allowed)
    if not monos:
        return None
    chosen = rng.sample(monos, min(max_terms, len(monos)))
    terms = {}
    for m in chosen:
        c = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        terms[m] = c or Fraction(1)
    return RingElem(Poly(terms))


@st.composite
def homogeneous(draw, allowed=VARS, wmin=1, wmax=8):
    seed = draw(st.integers(0, 2**32 - 1))
    w = draw(st.integers(wmin, wmax))
    rng = random.Random(seed)
    f = random_homogeneous(rng, w, allowed)
    from hypothesis import assume

    assume(f is not None)
    return f, w


@pytest.fixture(scope="session")
def golden_dir():
    import pathlib

    return pathlib.Path(__file__).parent / "golden"
