import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gradedber.algebra import (
    GeneratorSpec,
    clifford,
    custom,
    degree_of,
    format_element,
    grassmann,
    invert,
    parse_element,
    preset,
    quaternion,
)
from gradedber.errors import NonHomogeneous, NotInvertible, ParseError, PresentationError, UndefinedDegree
from gradedber.gmatrix import random_element
from gradedber.grading import Degree, scalar_product

H = quaternion()
G3 = grassmann(3)
PRESETS = [G3, clifford(2), H, custom(2, [("c", (1, 1), 1), ("s1", (0, 1), 0), ("s2", (1, 0), 0)])]


def homogeneous(alg):
    degs = sorted(set(alg.mono_degree))
    return st.builds(
        lambda seed, k: random_element(alg, degs[k % len(degs)], random.Random(seed), allow_zero=False),
        st.integers(0, 2 ** 32), st.integers(0, 64),
    )


def element(alg):
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(st.integers(0, alg.dim - 1), coeffs, max_size=alg.dim).map(alg.element)


# oracle examples


def test_quaternion_table():
    i, j = H.gen("i"), H.gen("j")
    k = i * j
    assert i * i == -1 and j * j == -1 and k * k == -1
    assert j * i == -k
    assert j * k == i
    assert k * i == j


@pytest.mark.parametrize("word, expected", [
    (["j", "i"], "-i*j"),
    (["i", "i"], "-1"),
    (["i", "j", "i"], "j"),
])
def test_quaternion_normal_form(word, expected):
    assert H.normal_form(word) == H.parse(expected)


def test_odd_generator_squares_to_zero():
    assert G3.normal_form(["t1", "t1"]) == 0
    assert G3.normal_form(["t2", "t1", "t2"]) == 0


def test_grassmann_product_example():
    a = G3.parse("1 + t1*t2")
    b = G3.parse("1 - t1*t2")
    assert a * b == 1
    assert a * G3.one() == a


def test_add_sub_scale():
    i = H.gen("i")
    assert i + H.zero() == i
    assert (i - i).is_zero
    assert i.scale(2) == H.parse("2*i")


@pytest.mark.parametrize("text, bits", [("i*j", (1, 1, 0)), ("1", (0, 0, 0)), ("3*j", (1, 0, 1))])
def test_degree_of_quaternions(text, bits):
    assert degree_of(H.parse(text)) == Degree(bits)


def test_degree_errors():
    with pytest.raises(NonHomogeneous):
        degree_of(G3.parse("1 + t1"))
    with pytest.raises(UndefinedDegree):
        degree_of(G3.zero())


def test_invert_examples():
    assert invert(H.one()) == 1
    assert invert(H.gen("i")) == -H.gen("i")
    assert invert(G3.parse("1 + t1*t2")) == G3.parse("1 - t1*t2")
    with pytest.raises(NotInvertible):
        invert(G3.gen("t1"))
    with pytest.raises(NotInvertible):
        invert(G3.zero())


def test_invert_matches_geometric_series():
    # 1 + N with N nilpotent: the inverse is 1 - N + N^2 - ...
    a = G3.parse("2 + t1*t2 - 3*t2*t3")
    N = a.scale(Fraction(1, 2)) - 1
    series = G3.one() - N + N * N
    assert invert(a) == series.scale(Fraction(1, 2))


def test_invert_non_homogeneous_clifford():
    C = clifford(1, [1])
    a = C.parse("2 + e1")
    b = invert(a)
    assert a * b == 1 and b * a == 1
    with pytest.raises(NotInvertible):
        invert(C.parse("1 + e1"))  # (1+e)(1-e) = 0


# presentations


def test_odd_generator_must_square_to_zero():
    with pytest.raises(PresentationError):
        GeneratorSpec("x", Degree((1,)), 1)


def test_duplicate_names_rejected():
    with pytest.raises(PresentationError):
        custom(1, [("a", (1,), 0), ("a", (1,), 0)])


def test_clifford_degrees():
    C = clifford(3, [1, -1, 1])
    assert [g.degree for g in C.generators] == [Degree((1, 0, 0, 1)), Degree((0, 1, 0, 1)), Degree((0, 0, 1, 1))]
    assert C.gen("e2") * C.gen("e2") == -1
    assert all(g.degree.is_even for g in C.generators)


def test_preset_dispatch():
    assert preset("grassmann", 2).dim == 4
    assert preset("quaternion").dim == 4
    with pytest.raises(PresentationError):
        preset("octonion")


# grammar


@pytest.mark.parametrize("text", ["1/2 + 3*i*j - 2*j", "-i", "+ 7", "0", "2*i*j*i"])
def test_parse_format_round_trip(text):
    a = parse_element(H, text)
    assert parse_element(H, format_element(a)) == a


@pytest.mark.parametrize("text", ["", "i +", "i * 2", "q", "1/0", "i j", "*i"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_element(H, text)


# properties


@pytest.mark.parametrize("alg", PRESETS, ids=lambda a: a.label)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_graded_commutativity(alg, data):
    a = data.draw(homogeneous(alg))
    b = data.draw(homogeneous(alg))
    sign = -1 if scalar_product(a.degree(), b.degree()) else 1
    assert a * b == (b * a).scale(sign)
    if (a * b).terms:
        assert (a * b).degree() == a.degree() + b.degree()


@pytest.mark.parametrize("alg", PRESETS, ids=lambda a: a.label)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_ring_axioms(alg, data):
    a, b, c = (data.draw(element(alg)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert parse_element(alg, format_element(a)) == a


@pytest.mark.parametrize("alg", PRESETS, ids=lambda a: a.label)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_inverse_is_two_sided(alg, data):
    a = data.draw(element(alg))
    try:
        b = invert(a)
    except NotInvertible:
        return
    assert a * b == 1 and b * a == 1
