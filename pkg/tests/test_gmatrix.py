import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from gradedber.algebra import grassmann, quaternion
from gradedber.errors import DegreeViolation, DimensionError, NotInvertible
from gradedber.gmatrix import (
    from_json,
    graded_commutator,
    graded_trace,
    graded_transpose,
    identity,
    invert_matrix,
    is_block_diagonal,
    new_matrix,
    random_block_diagonal,
    random_decomposable,
    random_element,
    random_matrix,
    random_unitriangular,
    scalar_mul,
)
from gradedber.grading import Degree, standard_order
from gradedber.suites import matrix_configs

G2 = grassmann(2)
G3 = grassmann(3)
H = quaternion()
CONFIGS = matrix_configs()


def pairs():
    """(alg, ranks, S, T) with random homogeneous S, T."""
    @st.composite
    def build(draw):
        A, ranks = draw(st.sampled_from(CONFIGS))
        rng = random.Random(draw(st.integers(0, 2 ** 32)))
        degs = standard_order(A.n)
        S = random_matrix(A, rng.choice(degs), ranks, rng=rng)
        T = random_matrix(A, rng.choice(degs), ranks, rng=rng)
        return A, ranks, S, T
    return build()


def test_identity_over_quaternions_is_valid():
    I = identity(H, [1, 0, 0, 0, 0, 0, 0, 1])
    assert graded_trace(I) == 0  # one even, one odd basis vector


def test_block_rule_accepts_and_rejects():
    T = new_matrix(G2, [0], [1, 1], [1, 1], [["1", "t1"], ["t2", "1"]])
    assert T.shape == (2, 2)
    with pytest.raises(DegreeViolation) as exc:
        new_matrix(G2, [0], [1, 1], [1, 1], [["t1", "0"], ["0", "1"]])
    assert (exc.value.i, exc.value.j) == (0, 0)


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        new_matrix(G2, [0], [1, 1], [1, 1], [["1", "0"]])


def test_product_examples():
    q = lambda s: new_matrix(H, Degree.from_mask(H.parse(s).degree_mask(), 3), [1] + [0] * 7, [1] + [0] * 7, [[s]])
    assert (q("i") @ q("j")) == q("i*j")
    T = random_matrix(G3, Degree((0,)), [2, 1], rng=random.Random(1))
    assert T @ identity(G3, [2, 1]) == T


def test_scalar_mul_signs():
    theta = G2.gen("t1")
    I = identity(G2, [1, 1])
    out = scalar_mul(theta, I)
    assert out.entries[0][0] == theta
    assert out.entries[1][1] == -theta
    assert out.degree == Degree((1,))
    assert scalar_mul(G2.one(), I) == I


def test_supertranspose_n1():
    T = new_matrix(G3, [0], [1, 1], [1, 1], [["2", "t1"], ["t2", "t1*t2 + 1"]])
    Tt = graded_transpose(T)
    assert Tt.to_strings() == [["2", "t2"], ["-t1", "1 + t1*t2"]]


@pytest.mark.parametrize("p, q", [(1, 1), (2, 1), (3, 2), (0, 2)])
def test_supertrace_of_identity(p, q):
    assert graded_trace(identity(G3, [p, q])) == p - q


def test_trace_of_even_identity_over_quaternions():
    assert graded_trace(identity(H, [1, 2, 0, 1, 0, 0, 0, 0])) == 4


def test_commutator_examples():
    A, ranks = CONFIGS[0]
    rng = random.Random(3)
    T = random_matrix(A, Degree((1,)), ranks, rng=rng)
    assert graded_commutator(T, T) == (T @ T).scale(2)
    S = random_matrix(A, Degree((0,)), ranks, rng=rng)
    assert graded_commutator(S, identity(A, ranks)).is_zero


def test_invert_examples():
    T = new_matrix(G2, [0], [1, 1], [1, 1], [["1", "t1"], ["t2", "1"]])
    Ti = invert_matrix(T)
    I = identity(G2, [1, 1])
    assert T @ Ti == I and Ti @ T == I
    assert Ti == new_matrix(G2, [0], [1, 1], [1, 1], [["1 + t1*t2", "-t1"], ["-t2", "1 + t2*t1"]])
    Q = new_matrix(H, [0, 0, 0], [1, 1, 0, 0, 0, 0, 0, 0], [1, 1, 0, 0, 0, 0, 0, 0], [["1", "i"], ["i", "1"]])
    Qi = invert_matrix(Q)
    assert Q @ Qi == identity(H, Q.row_ranks)
    with pytest.raises(NotInvertible):
        invert_matrix(new_matrix(H, [0, 0, 0], [1, 1, 0, 0, 0, 0, 0, 0], [1, 1, 0, 0, 0, 0, 0, 0],
                                 [["1", "i"], ["-i", "1"]]))


def test_random_generators():
    A, ranks = CONFIGS[1]
    X = random_block_diagonal(A, ranks, 5)
    assert is_block_diagonal(X)
    assert random_block_diagonal(A, ranks, 5) == X
    U = random_unitriangular(A, ranks, 5, upper=True)
    for i, b in enumerate(ranks.block_of()):
        for j, c in enumerate(ranks.block_of()):
            if c < b or (b == c and i != j):
                assert U.entries[i][j].is_zero
    invert_matrix(random_decomposable(A, ranks, 9))


def test_json_round_trip():
    A, ranks = CONFIGS[2]
    T = random_matrix(A, Degree((0, 1, 1)), ranks, rng=random.Random(7))
    back = from_json(A, json.loads(json.dumps(T.to_json())))
    assert back == T


@settings(max_examples=60, deadline=None)
@given(pairs())
def test_transpose_of_product(case):
    A, ranks, S, T = case
    lhs = graded_transpose(S @ T)
    rhs = graded_transpose(T) @ graded_transpose(S)
    assert lhs == (-rhs if S.degree.dot(T.degree) else rhs)


@settings(max_examples=60, deadline=None)
@given(pairs())
def test_transpose_of_commutator(case):
    A, ranks, S, T = case
    assert graded_commutator(graded_transpose(S), graded_transpose(T)) == -graded_transpose(graded_commutator(S, T))


@settings(max_examples=60, deadline=None)
@given(pairs())
def test_trace_kills_commutators(case):
    A, ranks, S, T = case
    assert graded_trace(graded_commutator(S, T)).is_zero


@settings(max_examples=40, deadline=None)
@given(pairs(), st.integers(0, 2 ** 32))
def test_scalar_action_is_associative(case, seed):
    A, ranks, S, T = case
    rng = random.Random(seed)
    degs = sorted(set(A.mono_degree))
    a = random_element(A, rng.choice(degs), rng, allow_zero=False)
    b = random_element(A, rng.choice(degs), rng, allow_zero=False)
    if (a * b).is_zero:
        return
    assert scalar_mul(a * b, T) == scalar_mul(a, scalar_mul(b, T))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CONFIGS), st.integers(0, 2 ** 32))
def test_inverse_two_sided(config, seed):
    A, ranks = config
    T = random_decomposable(A, ranks, seed)
    Ti = invert_matrix(T)
    I = identity(A, ranks)
    assert T @ Ti == I and Ti @ T == I
