import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from linkwb.ideals import (
    GradedRing, IdealHandle, NotHomogeneousError, buchberger, eliminate, hilbert_data,
    hilbert_numerator, ideal_colon, ideal_intersection, ideal_ops, leading_monomials,
    normal_form,
)
from linkwb.poly import Polynomial, PolyRing, monomials_of_degree

from oracles import GradedPiece, hilbert_function, intersection_dim, staircase_dim

FIVE_LINES = ["x*y", "y*z", "z*t", "x*t+y*t+t^2", "x^2+x*z+x*t"]


@pytest.fixture(scope="module")
def R5():
    return GradedRing.poly("x,y,z,t").quotient(FIVE_LINES)


def _is_reduced_gb(G):
    leads = [g.terms[0][0] for g in G]
    for i, g in enumerate(G):
        assert g.terms[0][1] == 1
        for j, e in enumerate(leads):
            for m, _ in g.terms:
                if i != j and all(a >= b for a, b in zip(m, e)):
                    return False
    return True


# --- buchberger / normal forms ------------------------------------------

def test_gb_of_variables():
    P = GradedRing.poly("x,y")
    # canonical output order: ascending leading term
    assert [str(g) for g in buchberger([P.parse("x"), P.parse("y")])] == ["y", "x"]
    assert buchberger([P.base.zero()]) == []
    assert buchberger([]) == []


def test_example_relations_gb(R5):
    G = R5.gb_of_relations
    assert _is_reduced_gb(G)
    I = R5.ambient.ideal(*FIVE_LINES)
    assert I.contains(I.ring.parse("x*y"))
    assert I.normal_form(I.ring.parse("x*t+y*t+t^2")).is_zero()
    assert not I.contains(I.ring.parse("x^2"))


def test_cube_of_x_is_not_in_example_ideal(R5):
    # (1, 0, 0, -1) is a zero of every relation but not of x^3
    I = R5.ambient.ideal(*FIVE_LINES)
    pt = (1, 0, 0, -1)
    for g in FIVE_LINES:
        f = I.ring.parse(g)
        assert sum(c * _eval(e, pt) for e, c in f.terms) % I.ring.p == 0
    assert not I.contains(I.ring.parse("x^3"))
    assert I.normal_form(I.ring.parse("x^3")) == I.normal_form(I.ring.parse("x*z^2 + x*t^2"))


def _eval(e, pt):
    out = 1
    for a, v in zip(e, pt):
        out *= v ** a
    return out


def test_gb_members_reduce_to_zero(R5):
    I = R5.ideal("x", "z")
    for g in I.gb:
        assert I.normal_form(g).is_zero()


def test_normal_form_matches_dense_oracle():
    # k[x,y]/(x^2): NF of every monomial of degree <= 4
    R = GradedRing.poly("x,y").quotient(["x^2"])
    I = R.ideal("x*y^2 + y^3")
    polys = list(I.gb)
    for d in range(5):
        piece = GradedPiece(R.base, polys, d)
        for e in monomials_of_degree((1, 1), d):
            f = R.base.monomial(e)
            nf = I.normal_form(f)
            assert nf.to_dict() == piece.remainder(f)


def test_normal_form_is_k_linear():
    R = GradedRing.poly("x,y,z")
    I = R.ideal("x^2 - y*z", "x*y")
    rng = random.Random(3)
    mons = monomials_of_degree((1, 1, 1), 3)
    for _ in range(20):
        f = Polynomial.from_dict(R.base, {m: rng.randrange(R.p) for m in rng.sample(mons, 4)})
        g = Polynomial.from_dict(R.base, {m: rng.randrange(R.p) for m in rng.sample(mons, 4)})
        a = rng.randrange(1, R.p)
        assert I.normal_form(f + g.scale(a)) == I.normal_form(f) + I.normal_form(g).scale(a)


def test_inhomogeneous_generators_rejected():
    R = GradedRing.poly("x,y")
    with pytest.raises(NotHomogeneousError):
        R.ideal("x + x^2")


# --- ideal operations ----------------------------------------------------

def test_sum_and_equality(R5):
    P = GradedRing.poly("x,y")
    I = P.ideal("x^2", "x*y")
    assert ideal_ops("sum", I, P.zero_ideal()) == I
    assert ideal_ops("sum", P.ideal("x"), P.ideal("y")) == P.ideal("x", "y")
    assert ideal_ops("equality", P.ideal("x", "y"), P.ideal("x + y", "x - y"))
    assert R5.ideal("x", "z") + R5.ideal("y") == R5.ideal("x", "y", "z")
    assert str(R5.ideal("x", "z") + R5.ideal("y")) == "(x, y, z)"


def test_ring_mismatch():
    with pytest.raises(ValueError):
        ideal_ops("sum", GradedRing.poly("x,y").ideal("x"), GradedRing.poly("a,b").ideal("a"))


def test_intersection_examples(R5):
    P = GradedRing.poly("x,y")
    I = P.ideal("x^2", "y^3")
    assert ideal_intersection(I, I) == I
    assert ideal_intersection(P.ideal("x"), P.ideal("y")) == P.ideal("x*y")
    assert ideal_intersection(R5.ideal("x", "z"), R5.ideal("y")).is_zero()


def test_intersection_brute_force_bidegrees():
    P = GradedRing.poly("x,y")
    K = ideal_intersection(P.ideal("x"), P.ideal("y"))
    for a, b in itertools.product(range(4), repeat=2):
        f = P.base.monomial((a, b))
        assert K.contains(f) == (a >= 1 and b >= 1)


def test_colon_examples(R5):
    P = GradedRing.poly("x,y")
    I = P.ideal("x^2", "x*y")
    assert ideal_colon(I, P.unit_ideal()) == I
    assert ideal_colon(P.ideal("x*y"), P.ideal("x")) == P.ideal("y")
    assert ideal_colon(R5.zero_ideal(), R5.ideal("y")) == R5.ideal("x", "z")
    assert ideal_colon(R5.zero_ideal(), R5.ideal("x", "z")) == R5.ideal("y")
    assert ideal_colon(I, P.zero_ideal()).is_unit()


def test_colon_degree_bounded_brute_force():
    P = GradedRing.poly("x,y")
    Q = ideal_colon(P.ideal("x*y"), P.ideal("x"))
    target = P.ideal("x*y")
    for d in range(4):
        for e in monomials_of_degree((1, 1), d):
            f = P.base.monomial(e)
            assert Q.contains(f) == target.contains(f * P.parse("x"))


def test_eliminate_examples():
    P = GradedRing.poly("x,y,t")
    I = P.ideal("x*y", "t^2")
    assert eliminate(I, []).generators == I.generators
    got = eliminate([P.parse("t*x"), P.parse("y - t*y")], ["t"])
    assert got.ring.names == ("x", "y")
    assert got == got.ring.ideal("x*y")
    Q = GradedRing.poly("x,y")
    assert eliminate([Q.parse("x - y^2")], ["x"]).is_zero()


def test_auxiliary_variable_never_leaks():
    P = GradedRing.poly("x,y")
    K = ideal_intersection(P.ideal("x"), P.ideal("y"))
    assert K.ring == P
    assert all(g.ring == P.base for g in K.generators)


# --- Hilbert series and dimension -----------------------------------------

def test_dimension_examples(R5):
    P = GradedRing.poly("x,y")
    assert P.dim == 2
    assert P.quotient(["x*y"]).dim == 1
    assert R5.dim == 1
    assert hilbert_data(P.unit_ideal()).krull_dim == -1
    h = hilbert_data(P.ideal("x*y"))
    assert (h.krull_dim, h.multiplicity) == (1, 2)
    assert h.series_coefficients(0, 4) == [1, 2, 2, 2, 2]


def test_hilbert_function_matches_dense_oracle(R5):
    I = R5.ambient.ideal(*FIVE_LINES)
    h = hilbert_data(I)
    got = h.series_coefficients(0, 5)
    want = [hilbert_function(I.ring.base, list(I.generators), d) for d in range(6)]
    assert got == want


def test_weighted_hilbert_series():
    R = GradedRing.poly("x,y", degrees=[1, 2])
    h = hilbert_data(R.ideal("x^2"))
    want = [hilbert_function(R.base, [R.parse("x^2")], d) for d in range(7)]
    assert h.series_coefficients(0, 6) == want


# --- randomized properties ------------------------------------------------

R3 = GradedRing.poly("x,y,z")
MONS = {d: monomials_of_degree((1, 1, 1), d) for d in (1, 2)}


@st.composite
def small_ideals(draw, max_gens=3):
    n = draw(st.integers(1, max_gens))
    gens = []
    for _ in range(n):
        d = draw(st.sampled_from([1, 2]))
        terms = draw(st.dictionaries(st.sampled_from(MONS[d]), st.integers(-3, 3),
                                     min_size=1, max_size=3))
        f = Polynomial.from_dict(R3.base, terms)
        if f.terms:
            gens.append(f)
    return gens or [R3.parse("x")]


@given(small_ideals())
def test_gb_idempotent_and_reduced(gens):
    G = buchberger(gens)
    assert buchberger(G) == G
    assert _is_reduced_gb(G)


@given(small_ideals(), small_ideals())
def test_intersection_matches_graded_linear_algebra(A, B):
    I, J = IdealHandle(R3, A), IdealHandle(R3, B)
    K = ideal_intersection(I, J)
    for g in K.generators:
        assert I.contains(g) and J.contains(g)
    for d in range(5):
        assert GradedPiece(R3.base, list(K.gb), d).dim == intersection_dim(R3.base, A, B, d)


@given(small_ideals(), st.data())
def test_membership_of_random_combinations(gens, data):
    I = IdealHandle(R3, gens)
    f = R3.base.zero()
    for g in gens:
        m = data.draw(st.sampled_from(MONS[2]))
        c = data.draw(st.integers(-5, 5))
        f = f + g.mul_monomial(m, c)
    assert I.normal_form(f).is_zero()


@given(small_ideals())
def test_dimension_matches_staircase(gens):
    I = IdealHandle(R3, gens)
    assert hilbert_data(I).krull_dim == staircase_dim(leading_monomials(I), 3)


@given(small_ideals())
def test_hilbert_series_matches_dense_oracle(gens):
    I = IdealHandle(R3, gens)
    want = [hilbert_function(R3.base, gens, d) for d in range(5)]
    assert hilbert_data(I).series_coefficients(0, 4) == want


def test_hilbert_numerator_monomial_cases():
    assert hilbert_numerator([], (1, 1)) == {0: 1}
    assert hilbert_numerator([(1, 0)], (1, 1)) == {0: 1, 1: -1}
    assert hilbert_numerator([(0, 0)], (1, 1)) == {}


def test_gb_deterministic():
    P = GradedRing.poly("x,y,z")
    gens = ["x^2 - y*z", "x*y - z^2", "y^2 - x*z"]
    a = [str(g) for g in P.ideal(*gens).gb]
    b = [str(g) for g in P.ideal(*reversed(gens)).gb]
    assert a == b


def test_normal_form_function_alias():
    P = GradedRing.poly("x,y")
    assert normal_form(P.parse("x*y"), P.ideal("x")).is_zero()


def test_lex_order_ring():
    P = GradedRing.poly("x,y,z", order="lex")
    I = P.ideal("x - y", "y - z")
    assert [str(g) for g in I.gb] == ["y - z", "x - z"]
    assert isinstance(P.base, PolyRing)
