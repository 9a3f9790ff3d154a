import random

import pytest
from hypothesis import given, settings, strategies as st

from gradedber.algebra import grassmann, quaternion
from gradedber.berezinian import det_commutative, gber
from gradedber.errors import DecompositionFailed, DifferentialNotInvariant, DimensionError, UnsupportedDegree
from gradedber.gmatrix import (
    graded_commutator,
    graded_trace,
    identity,
    new_matrix,
    random_block_diagonal,
    random_decomposable,
    random_matrix,
)
from gradedber.grading import Degree, RankVector, scalar_product, standard_order
from gradedber.koszul import (
    KoszulContext,
    apply_substitution,
    check_d_invariance,
    cohomology_ranks,
    default_pi,
    derivation,
    derivation_action_class,
    differential,
    group_action_class,
    group_action_images,
    homotopy_bracket,
    k_mul,
    rho,
)
from gradedber.suites import koszul_configs, mixed_n2, mixed_n3, unitriangular_example_4x4, random_koszul

CONFIGS = koszul_configs()
IDS = ["n1", "n2", "n3"]


@pytest.fixture(params=CONFIGS, ids=IDS)
def ctx(request):
    A, ranks = request.param
    return KoszulContext(A, ranks)


# variables


def test_default_pi():
    assert default_pi(1) == Degree((1,))
    assert default_pi(3) == Degree((1, 1, 1))
    assert default_pi(2) == Degree((1, 0))


def test_pi_must_be_odd():
    with pytest.raises(DimensionError):
        KoszulContext(grassmann(1), [1, 1], Degree((0,)))


def test_variable_degrees(ctx):
    for i in range(ctx.r):
        assert Degree.from_mask(ctx.x_deg[i], ctx.alg.n).is_even
        assert Degree.from_mask(ctx.xi_deg[i], ctx.alg.n).is_odd
        assert ctx.xi_deg[i] == ctx.x_deg[i] ^ ctx.pi.mask


def test_xi_squares_to_zero_and_anticommute(ctx):
    for i in range(ctx.r):
        assert (ctx.xi(i) * ctx.xi(i)).is_zero
        for j in range(ctx.r):
            sign = -1 if scalar_product(*(Degree.from_mask(ctx.xi_deg[k], ctx.alg.n) for k in (i, j))) else 1
            assert ctx.xi(i) * ctx.xi(j) == (ctx.xi(j) * ctx.xi(i)).scale(sign)


def test_x_commutes_with_homogeneous(ctx):
    rng = random.Random(1)
    for _ in range(20):
        Q = random_koszul(ctx, rng, terms=1)
        if len(Q.degree_masks()) != 1:
            continue
        (qd,) = Q.degree_masks()
        for i in range(ctx.r):
            sign = -1 if bin(ctx.x_deg[i] & qd).count("1") & 1 else 1
            assert ctx.x(i) * Q == (Q * ctx.x(i)).scale(sign)


def test_coefficients_move_with_sign():
    ctx = KoszulContext(grassmann(2), [1, 1])
    t1 = ctx.alg.gen("t1")
    # xi_0 has odd degree, t1 is odd: t1 xi_0 = - xi_0 t1
    assert ctx.const(t1) * ctx.xi(0) == -(ctx.xi(0) * t1)


# differential and homotopy


def test_d_of_one(ctx):
    assert differential(ctx.one()) == ctx.d_element()
    assert ctx.d_element() == ctx.d_element_pe_eps()


def test_top_cocycle(ctx):
    top = ctx.top_cocycle()
    assert differential(top).is_zero
    assert top.weights() == {ctx.r}
    for i in range(ctx.r):
        assert (ctx.xi(i) * top).is_zero
    (deg,) = top.degree_masks()
    assert deg == ctx.top_degree().mask


def test_rho_examples(ctx):
    assert rho(ctx.one()).is_zero
    P = ctx.xi(0) * ctx.x(0)
    assert rho(P) == ctx.one()
    assert homotopy_bracket(P) == P.scale(ctx.r + 1 - 1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(CONFIGS))), st.integers(0, 2 ** 32))
def test_d_squared_is_zero(which, seed):
    ctx = KoszulContext(*CONFIGS[which])
    P = random_koszul(ctx, random.Random(seed), max_weight=4)
    assert differential(differential(P)).is_zero


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(CONFIGS))), st.integers(0, 2 ** 32))
def test_homotopy_identity(which, seed):
    ctx = KoszulContext(*CONFIGS[which])
    rng = random.Random(seed)
    k = rng.randint(0, ctx.r)
    w = rng.randint(0, 3)
    alpha, beta = rng.choice(ctx.monomials(k, w))
    a = ctx.alg.element({rng.randrange(ctx.alg.dim): rng.randint(1, 5)})
    P = ctx.mono(alpha, beta, a)
    assert homotopy_bracket(P) == P.scale(ctx.r + w - k)


def test_k_mul_is_associative(ctx):
    rng = random.Random(4)
    for _ in range(15):
        P, Q, R = (random_koszul(ctx, rng, terms=2) for _ in range(3))
        assert k_mul(k_mul(P, Q), R) == k_mul(P, k_mul(Q, R))


# group action


def test_substitution_fixes_d(ctx):
    rng = random.Random(5)
    D = ctx.d_element()
    for _ in range(5):
        T = random_decomposable(ctx.alg, ctx.ranks, rng)
        xi_img, x_img = group_action_images(T, ctx)
        assert apply_substitution(D, xi_img, x_img) == D


def test_class_of_unitriangular_example():
    T = unitriangular_example_4x4()
    assert group_action_class(T) == 1


def test_class_of_block_diagonal_n1():
    A = grassmann(3)
    X = random_block_diagonal(A, [2, 1], 3)
    detA = det_commutative(X.block(0, 0))
    detB = det_commutative(X.block(1, 1))
    assert group_action_class(X) == detA * detB.invert()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(range(len(CONFIGS))), st.integers(0, 2 ** 32))
def test_class_equals_berezinian(which, seed):
    A, ranks = CONFIGS[which]
    T = random_decomposable(A, ranks, seed)
    assert group_action_class(T) == gber(T)


def test_class_is_multiplicative(ctx):
    rng = random.Random(6)
    S = random_decomposable(ctx.alg, ctx.ranks, rng)
    T = random_decomposable(ctx.alg, ctx.ranks, rng)
    assert group_action_class(S @ T, ctx) == group_action_class(S, ctx) * group_action_class(T, ctx)


def test_class_of_undecomposable_matrix():
    A = mixed_n2()
    T = new_matrix(A, [0, 0], [1, 1, 0, 0], [1, 1, 0, 0], [["0", "c"], ["c", "0"]])
    with pytest.raises(DecompositionFailed):
        gber(T)
    # the cohomological route needs only T^-1; T swaps two even basis vectors
    value = group_action_class(T)
    assert value == -1
    assert group_action_class(T @ T) == 1


# Lie algebra action


def test_invariance_examples():
    H = quaternion()
    ranks = RankVector.of([1, 1, 0, 0, 1, 0, 0, 0])
    rng = random.Random(7)
    for pi in [(0, 0, 1), (1, 1, 1), (0, 1, 0)]:
        S = random_matrix(H, Degree((0, 0, 0)), ranks, rng=rng)
        assert check_d_invariance(S, KoszulContext(H, ranks, Degree(pi)))
    S = random_matrix(H, Degree((1, 1, 0)), ranks, rng=rng, density=1.0)
    assert check_d_invariance(S, KoszulContext(H, ranks, Degree((1, 1, 1))))
    A = mixed_n2()
    ranks2 = RankVector.of([1, 1, 1, 1])
    S = random_matrix(A, Degree((1, 1)), ranks2, rng=rng, density=1.0)
    ctx = KoszulContext(A, ranks2, Degree((0, 1)))
    assert not check_d_invariance(S, ctx)
    with pytest.raises(DifferentialNotInvariant):
        derivation_action_class(S, ctx)


def test_odd_matrices_are_unsupported():
    A = mixed_n2()
    ranks = RankVector.of([1, 1, 1, 1])
    S = random_matrix(A, Degree((0, 1)), ranks, rng=random.Random(0), density=1.0)
    with pytest.raises(UnsupportedDegree):
        check_d_invariance(S, KoszulContext(A, ranks))


def test_trace_of_identity_action(ctx):
    I = identity(ctx.alg, ctx.ranks)
    assert derivation_action_class(I, ctx) == graded_trace(I)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(range(len(CONFIGS))), st.integers(0, 2 ** 32), st.data())
def test_degree_zero_action_is_trace(which, seed, data):
    A, ranks = CONFIGS[which]
    n = A.n
    pi = data.draw(st.sampled_from(standard_order(n)[2 ** (n - 1):]))
    ctx = KoszulContext(A, ranks, pi)
    S = random_matrix(A, Degree.zero(n), ranks, rng=random.Random(seed))
    assert derivation_action_class(S, ctx) == graded_trace(S)


@pytest.mark.parametrize("alg, ranks", [
    (quaternion(), [1, 1, 0, 0, 1, 0, 0, 0]),
    (mixed_n3(), [1, 1, 0, 0, 1, 1, 0, 0]),
], ids=["quaternion", "mixed3"])
@pytest.mark.parametrize("deg", [(0, 1, 1), (1, 0, 1), (1, 1, 0)])
def test_even_action_is_trace(alg, ranks, deg):
    ctx = KoszulContext(alg, ranks, Degree((1, 1, 1)))
    rng = random.Random(hash(deg) & 0xFFFF)
    for _ in range(3):
        S = random_matrix(alg, Degree(deg), ranks, rng=rng)
        assert derivation_action_class(S, ctx) == graded_trace(S)


def test_derivations_form_a_lie_algebra_morphism(ctx):
    rng = random.Random(8)
    degs = standard_order(ctx.alg.n)
    for _ in range(4):
        S = random_matrix(ctx.alg, rng.choice(degs), ctx.ranks, rng=rng)
        T = random_matrix(ctx.alg, rng.choice(degs), ctx.ranks, rng=rng)
        LS, LT = derivation(S, ctx), derivation(T, ctx)
        P = random_koszul(ctx, rng)
        a, b = LS(LT(P)), LT(LS(P))
        lhs = a + b if S.degree.dot(T.degree) else a - b
        assert lhs == derivation(graded_commutator(S, T), ctx)(P)


# cohomology


def test_cohomology_n1():
    ctx = KoszulContext(grassmann(3), [1, 1])
    rep = cohomology_ranks(ctx, 3)
    assert rep.level_dim(0) == rep.level_dim(1) == 0
    assert rep.level_rank(2) == 1
    # the surviving class sits at x-weight 0
    assert rep.cells[2, 0] == ctx.alg.dim
    assert all(rep.cells[2, w] == 0 for w in range(1, 4))
    assert (0, 3) in rep.unsafe and (1, 3) in rep.unsafe and (2, 3) not in rep.unsafe


def test_cohomology_with_algebra_agrees():
    ctx = KoszulContext(mixed_n2(), [1, 1, 0, 1])
    a = cohomology_ranks(ctx, 2)
    b = cohomology_ranks(ctx, 2, with_algebra=True)
    assert a.cells == b.cells


def test_cohomology_ranks_do_not_depend_on_pi():
    A = mixed_n3()
    ranks = [1, 1, 0, 0, 1, 0, 0, 0]
    reports = [cohomology_ranks(KoszulContext(A, ranks, Degree(pi)), 2).cells
               for pi in [(1, 1, 1), (0, 0, 1), (1, 0, 0)]]
    assert reports[0] == reports[1] == reports[2]


def test_cohomology_rejects_bad_bound(ctx):
    with pytest.raises(DimensionError):
        cohomology_ranks(ctx, 0)
