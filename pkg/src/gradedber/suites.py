"""Randomized invariant suites shared by ``gradedber verify`` and the test suite.

Every suite takes a :class:`random.Random` and returns a :class:`SuiteResult`
listing one :class:`Check` per identity, with pass/fail counts and the first
counterexample found.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import algebra as alg_mod
from .algebra import AlgebraPresentation, custom, grassmann, quaternion
from .berezinian import (
    det_commutative,
    gber,
    ber_of_diagonal,
    study_det_oracle,
    super_ber_oracle,
    udl_decompose,
)
from .errors import DifferentialNotInvariant, GradedError
from .gmatrix import (
    GradedMatrix,
    graded_commutator,
    graded_trace,
    graded_transpose,
    identity,
    invert_matrix,
    new_matrix,
    random_block_diagonal,
    random_decomposable,
    random_element,
    random_matrix,
    random_unitriangular,
)
from .grading import Degree, RankVector, scalar_product, standard_order
from .koszul import (
    KoszulContext,
    apply_substitution,
    check_d_invariance,
    cohomology_ranks,
    derivation,
    derivation_action_class,
    differential,
    group_action_class,
    group_action_images,
    homotopy_bracket,
)

SUITES = ("signs", "transpose", "trace", "ber", "koszul", "trace-action")


@dataclass
class Check:
    name: str
    passed: int = 0
    failed: int = 0
    counterexample: str | None = None

    def record(self, ok: bool, detail=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = detail() if callable(detail) else str(detail)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0


@dataclass
class SuiteResult:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    elapsed: float = 0.0
    # seconds spent in named parts of a suite
    sections: dict = field(default_factory=dict)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        c = Check(name)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "ok": self.ok,
            "elapsed_s": round(self.elapsed, 3),
            "sections_s": {k: round(v, 3) for k, v in self.sections.items()},
            "checks": [
                {"name": c.name, "passed": c.passed, "failed": c.failed,
                 "counterexample": c.counterexample}
                for c in self.checks
            ],
        }


# standard configurations


def mixed_n2() -> AlgebraPresentation:
    """n = 2: one even generator of degree (1,1) squaring to 1, two odd ones."""
    return custom(2, [("c", (1, 1), 1), ("s1", (0, 1), 0), ("s2", (1, 0), 0)])


def mixed_n3() -> AlgebraPresentation:
    """Quaternions plus an odd generator of degree (0,0,1)."""
    return custom(3, [("i", (0, 1, 1), -1), ("j", (1, 0, 1), -1), ("s", (0, 0, 1), 0)])


def matrix_configs():
    """(algebra, ranks) per n used by the matrix identity suites."""
    return [
        (grassmann(3), RankVector.of([2, 1])),
        (mixed_n2(), RankVector.of([1, 1, 1, 1])),
        (mixed_n3(), RankVector.of([1, 1, 0, 0, 1, 1, 0, 0])),
    ]


def koszul_configs():
    return [
        (grassmann(3), RankVector.of([1, 1])),
        (mixed_n2(), RankVector.of([1, 1, 1, 1])),
        (quaternion(), RankVector.of([1, 1, 0, 0, 1, 0, 0, 0])),
    ]


def random_degree(n: int, rng: random.Random, even: bool | None = None) -> Degree:
    pool = standard_order(n)
    if even is True:
        pool = pool[: len(pool) // 2]
    elif even is False:
        pool = pool[len(pool) // 2:]
    return rng.choice(pool)


def random_homogeneous(alg: AlgebraPresentation, rng: random.Random):
    """A nonzero homogeneous element of a random degree that occurs in the algebra."""
    degs = sorted(set(alg.mono_degree))
    d = rng.choice(degs)
    return random_element(alg, d, rng, allow_zero=False)


def unitriangular_example_4x4() -> GradedMatrix:
    """The n = 2, ranks (1,1,1,1) upper unitriangular example with entries a, b and stars."""
    A = mixed_n2()
    return new_matrix(
        A, [0, 0], [1, 1, 1, 1], [1, 1, 1, 1],
        [
            ["1", "2*c", "s1", "-3*s2"],
            ["0", "1", "s2", "c*s2"],
            ["0", "0", "1", "-c"],
            ["0", "0", "0", "1"],
        ],
    )


def _fmt_pair(*mats):
    return " | ".join(repr(m) + "\n" + str(m) for m in mats)


# suites


def suite_signs(rng: random.Random, pairs: int = 200) -> SuiteResult:
    res = SuiteResult("signs", 0)
    presets = [grassmann(3), alg_mod.clifford(2), quaternion()]
    comm = res.check("graded commutativity")
    assoc = res.check("associativity")
    deg_add = res.check("degree additivity")
    inv = res.check("two-sided inverse")
    for A in presets:
        gens = [A.gen(g.name) for g in A.generators]
        samples = [(a, b) for a in gens for b in gens]
        samples += [(random_homogeneous(A, rng), random_homogeneous(A, rng)) for _ in range(pairs)]
        for a, b in samples:
            sign = -1 if scalar_product(a.degree(), b.degree()) else 1
            comm.record(a * b == (b * a).scale(sign), lambda: f"{A.label}: a={a}, b={b}")
            ab = a * b
            if ab.terms:
                deg_add.record(ab.degree() == a.degree() + b.degree(), lambda: f"{A.label}: {a}, {b}")
        for _ in range(pairs // 4):
            a, b, c = (random_homogeneous(A, rng) for _ in range(3))
            assoc.record((a * b) * c == a * (b * c), lambda: f"{A.label}: {a}, {b}, {c}")
            try:
                ai = a.invert()
            except GradedError:
                continue
            inv.record(a * ai == 1 and ai * a == 1, lambda: f"{A.label}: {a}")
    H = quaternion()
    i, j = H.gen("i"), H.gen("j")
    k = i * j
    table = res.check("quaternion table")
    for name, ok in [
        ("i^2=-1", i * i == -1), ("j^2=-1", j * j == -1), ("k^2=-1", k * k == -1),
        ("ij=k", i * j == k), ("ji=-k", j * i == -k), ("jk=i", j * k == i), ("ki=j", k * i == j),
    ]:
        table.record(ok, name)
    return res


def suite_transpose(rng: random.Random, pairs: int = 100) -> SuiteResult:
    res = SuiteResult("transpose", 0)
    for A, ranks in matrix_configs():
        n = A.n
        prod = res.check(f"transpose of product [n={n}]")
        brk = res.check(f"transpose of commutator [n={n}]")
        valid = res.check(f"block rule preserved [n={n}]")
        for _ in range(pairs):
            S = random_matrix(A, random_degree(n, rng), ranks, rng=rng)
            T = random_matrix(A, random_degree(n, rng), ranks, rng=rng)
            lhs = graded_transpose(S @ T)
            rhs = graded_transpose(T) @ graded_transpose(S)
            if S.degree.dot(T.degree):
                rhs = -rhs
            prod.record(lhs == rhs, lambda: _fmt_pair(S, T))
            brk.record(
                graded_commutator(graded_transpose(S), graded_transpose(T))
                == -graded_transpose(graded_commutator(S, T)),
                lambda: _fmt_pair(S, T),
            )
            Tt = graded_transpose(T)
            valid.record(Tt.degree == T.degree and Tt.row_ranks == T.col_ranks, lambda: str(T))
    # n = 1 against the textbook supertranspose [[A, B], [C, D]] -> [[A^t, C^t], [-B^t, D^t]]
    st = res.check("n=1 supertranspose")
    A, ranks = matrix_configs()[0]
    for _ in range(pairs):
        T = random_matrix(A, A.grading.zero(), ranks, rng=rng)
        Tt = graded_transpose(T)
        p = ranks[0]
        ok = True
        for i in range(ranks.total):
            for j in range(ranks.total):
                want = T.entries[j][i]
                if i >= p and j < p:
                    want = -want
                ok &= Tt.entries[i][j] == want
        st.record(ok, lambda: str(T))
    return res


def suite_trace(rng: random.Random, pairs: int = 100) -> SuiteResult:
    res = SuiteResult("trace", 0)
    for A, ranks in matrix_configs():
        n = A.n
        comm = res.check(f"trace of commutator vanishes [n={n}]")
        cyc = res.check(f"graded cyclicity [n={n}]")
        for _ in range(pairs):
            S = random_matrix(A, random_degree(n, rng), ranks, rng=rng)
            T = random_matrix(A, random_degree(n, rng), ranks, rng=rng)
            comm.record(graded_trace(graded_commutator(S, T)).is_zero, lambda: _fmt_pair(S, T))
            sign = -1 if S.degree.dot(T.degree) else 1
            cyc.record(graded_trace(S @ T) == graded_trace(T @ S).scale(sign), lambda: _fmt_pair(S, T))
    sup = res.check("supertrace of identity")
    G = grassmann(3)
    for p, q in [(1, 1), (2, 1), (3, 2)]:
        sup.record(graded_trace(identity(G, [p, q])) == p - q, f"ranks ({p},{q})")
    return res


def suite_ber(rng: random.Random, products: int = 100, oracle: int = 100, quaternionic: int = 50) -> SuiteResult:
    res = SuiteResult("ber", 0)
    uni = res.check("unitriangular has Berezinian 1")
    diag = res.check("block-diagonal formula")
    recompose = res.check("factorization recomposes")
    mult = res.check("multiplicativity")
    inverse = res.check("Ber(T^-1) = Ber(T)^-1")
    for A, ranks in matrix_configs():
        q = A.grading.q
        for _ in range(max(1, products // 10)):
            U = random_unitriangular(A, ranks, rng, upper=rng.random() < 0.5)
            uni.record(gber(U) == 1, lambda: str(U))
            X = random_block_diagonal(A, ranks, rng)
            blocks = [X.block(u, u) for u in range(len(ranks))]
            want = A.one()
            for u, B in enumerate(blocks):
                if B:
                    d = det_commutative(B)
                    want = want * (d if u < q else d.invert())
            diag.record(gber(X) == want, lambda: str(X))
        for _ in range(products):
            S = random_decomposable(A, ranks, rng)
            T = random_decomposable(A, ranks, rng)
            f = udl_decompose(S)
            recompose.record(f.recompose() == S, lambda: str(S))
            mult.record(gber(S @ T) == gber(S) * gber(T), lambda: _fmt_pair(S, T))
        for _ in range(max(1, products // 10)):
            S = random_decomposable(A, ranks, rng)
            inverse.record(gber(invert_matrix(S)) == gber(S).invert(), lambda: str(S))
    sup = res.check("super closed form (grassmann(3))")
    G = grassmann(3)
    for _ in range(oracle):
        ranks = RankVector.of([rng.randint(1, 2), rng.randint(1, 2)])
        T = random_decomposable(G, ranks, rng)
        sup.record(gber(T) == super_ber_oracle(T), lambda: str(T))
    study = res.check("Study determinant (quaternions, |err| <= 1e-9)")
    H = quaternion()
    for _ in range(quaternionic):
        ranks = RankVector.of([rng.randint(0, 1) for _ in range(4)] + [0, 0, 0, 0])
        if ranks.total == 0:
            ranks = RankVector.of([1, 1, 1, 0, 0, 0, 0, 0])
        T = random_decomposable(H, ranks, rng)
        g = gber(T).rational()
        s = study_det_oracle(T)
        study.record(g is not None and abs(abs(float(g)) - s) <= 1e-9, lambda: f"{g} vs {s}\n{T}")
    return res


def suite_koszul(rng: random.Random, elements: int = 100, substitutions: int = 20,
                 classes: int = 50, max_x_weight: int = 3, weight_bound: int = 3) -> SuiteResult:
    res = SuiteResult("koszul", 0)
    for A, ranks in koszul_configs():
        ctx = KoszulContext(A, ranks)
        tag = f" [n={A.n}]"
        dd = res.check("d o d = 0" + tag)
        alphabet = res.check("sum Pi e_i eps^i = sum xi_i x_i" + tag)
        top = res.check("top cocycle is closed" + tag)
        homotopy = res.check("[rho, d] = (r + |beta| - k) id" + tag)
        basis = res.check("substitution fixes sum xi_i x_i" + tag)
        coh = res.check("truncated cohomology concentrated in top level" + tag)
        phi = res.check("cohomological class = Berezinian" + tag)
        phi_mult = res.check("class is multiplicative" + tag)
        r = ctx.r
        alphabet.record(ctx.d_element() == ctx.d_element_pe_eps(), repr(ctx))
        top.record(differential(ctx.top_cocycle()).is_zero, repr(ctx))
        for _ in range(elements):
            P = random_koszul(ctx, rng, max_weight=min(4, r), max_x=2)
            dd.record(differential(differential(P)).is_zero, lambda: f"{ctx}: {P}")
        for k in range(r + 1):
            for w in range(max_x_weight + 1):
                for mono in ctx.monomials(k, w):
                    for am in range(A.dim):
                        P = ctx.mono(mono[0], mono[1], A.element({am: 1}))
                        homotopy.record(homotopy_bracket(P) == P.scale(r + w - k),
                                        lambda: f"{ctx}: {P}")
        D = ctx.d_element()
        for _ in range(substitutions):
            T = random_decomposable(A, ranks, rng)
            xi_img, x_img = group_action_images(T, ctx)
            basis.record(apply_substitution(D, xi_img, x_img) == D, lambda: f"{ctx}\n{T}")
        rep = cohomology_ranks(ctx, weight_bound)
        ok = all(rep.level_dim(k) == 0 for k in rep.safe_levels() if k != r)
        ok &= rep.level_rank(r) == 1
        coh.record(ok, lambda: f"{ctx}: {rep.to_json()}")
        start = time.perf_counter()
        for _ in range(classes):
            T = random_decomposable(A, ranks, rng)
            phi.record(group_action_class(T, ctx) == gber(T), lambda: f"{ctx}\n{T}")
        for _ in range(max(1, classes // 10)):
            S = random_decomposable(A, ranks, rng)
            T = random_decomposable(A, ranks, rng)
            phi_mult.record(
                group_action_class(S @ T, ctx) == group_action_class(S, ctx) * group_action_class(T, ctx),
                lambda: f"{ctx}\n{_fmt_pair(S, T)}",
            )
        res.sections["cross-validation"] = res.sections.get("cross-validation", 0.0) + time.perf_counter() - start
    start = time.perf_counter()
    example = res.check("reference 4x4 unitriangular example")
    T = unitriangular_example_4x4()
    ctx = KoszulContext(T.alg, T.row_ranks)
    example.record(group_action_class(T, ctx) == 1 and gber(T) == 1, str(T))
    res.sections["cross-validation"] += time.perf_counter() - start
    return res


def random_koszul(ctx: KoszulContext, rng: random.Random, max_weight: int = 4, max_x: int = 2, terms: int = 3):
    out = ctx.element()
    for _ in range(terms):
        k = rng.randint(0, min(max_weight, ctx.r))
        w = rng.randint(0, max_x)
        mono = rng.choice(ctx.monomials(k, w))
        a = random_homogeneous(ctx.alg, rng)
        out = out + ctx.mono(mono[0], mono[1], a)
    return out


def suite_trace_action(rng: random.Random, samples: int = 50) -> SuiteResult:
    res = SuiteResult("trace-action", 0)
    case1 = res.check("degree-0 S, random odd pi: class = trace")
    case2 = res.check("even S, n=3, pi=(1,1,1): class = trace")
    neg = res.check("n=2, pi=(0,1), deg S=(1,1) is not d-invariant")
    equiv = res.check("d-invariance iff <deg S, pi> = 0")
    lie = res.check("[L_S, L_T] = L_[S,T]")
    linear = res.check("class is linear")
    for A, ranks in koszul_configs():
        n = A.n
        odd = standard_order(n)[1 << (n - 1):]
        for _ in range(samples):
            pi = rng.choice(odd)
            ctx = KoszulContext(A, ranks, pi)
            S = random_matrix(A, A.grading.zero(), ranks, rng=rng)
            case1.record(derivation_action_class(S, ctx) == graded_trace(S), lambda: f"{ctx}\n{S}")
        ctx = KoszulContext(A, ranks)
        for _ in range(max(1, samples // 10)):
            S1 = random_matrix(A, A.grading.zero(), ranks, rng=rng)
            S2 = random_matrix(A, A.grading.zero(), ranks, rng=rng)
            linear.record(
                derivation_action_class(S1 + S2, ctx)
                == derivation_action_class(S1, ctx) + derivation_action_class(S2, ctx),
                lambda: _fmt_pair(S1, S2),
            )
    for A, ranks in [(quaternion(), RankVector.of([1, 1, 0, 0, 1, 0, 0, 0])),
                     (mixed_n3(), RankVector.of([1, 1, 0, 0, 1, 1, 0, 0]))]:
        ctx = KoszulContext(A, ranks, Degree((1, 1, 1)))
        for _ in range(samples // 2 + 1):
            S = random_matrix(A, random_degree(3, rng, even=True), ranks, rng=rng)
            case2.record(derivation_action_class(S, ctx) == graded_trace(S), lambda: f"{ctx}\n{S}")
    A, ranks = mixed_n2(), RankVector.of([1, 1, 1, 1])
    ctx = KoszulContext(A, ranks, Degree((0, 1)))
    for _ in range(5):
        S = random_matrix(A, Degree((1, 1)), ranks, rng=rng)
        if S.is_zero:
            continue
        raised = False
        try:
            derivation_action_class(S, ctx)
        except DifferentialNotInvariant:
            raised = True
        neg.record(not check_d_invariance(S, ctx) and raised, lambda: str(S))
    # exhaustive over even degrees and odd pi for n <= 3
    for A, ranks in [(grassmann(2), RankVector.of([1, 1])), (mixed_n2(), RankVector.of([1, 1, 1, 1])),
                     (mixed_n3(), RankVector.of([1, 1, 0, 0, 1, 1, 0, 0]))]:
        n = A.n
        order = standard_order(n)
        for pi in order[1 << (n - 1):]:
            ctx = KoszulContext(A, ranks, pi)
            for d in order[: 1 << (n - 1)]:
                S = random_matrix(A, d, ranks, rng=rng, density=1.0)
                if S.is_zero:
                    continue
                equiv.record(check_d_invariance(S, ctx) == (d.dot(pi) == 0), lambda: f"{ctx} deg S={d}")
    for A, ranks in koszul_configs():
        n = A.n
        ctx = KoszulContext(A, ranks)
        for _ in range(max(1, samples // 5)):
            S = random_matrix(A, random_degree(n, rng), ranks, rng=rng)
            T = random_matrix(A, random_degree(n, rng), ranks, rng=rng)
            LS, LT, LST = derivation(S, ctx), derivation(T, ctx), derivation(graded_commutator(S, T), ctx)
            P = random_koszul(ctx, rng)
            lhs = LS(LT(P))
            rhs = LT(LS(P))
            lhs = lhs + rhs if S.degree.dot(T.degree) else lhs - rhs
            lie.record(lhs == LST(P), lambda: f"{ctx}\n{_fmt_pair(S, T)}\nP={P}")
    return res


RUNNERS = {
    "signs": suite_signs,
    "transpose": suite_transpose,
    "trace": suite_trace,
    "ber": suite_ber,
    "koszul": suite_koszul,
    "trace-action": suite_trace_action,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    rng = random.Random(seed)
    start = time.perf_counter()
    res = RUNNERS[name](rng)
    res.seed = seed
    res.elapsed = time.perf_counter() - start
    return res


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [run_suite(name, seed) for name in SUITES]
