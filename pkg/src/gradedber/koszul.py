"""The graded Koszul complex S_A(Pi M + M*) and its cohomological invariants.

Variables: for a free module M with standard basis e_1..e_r, the polynomial
algebra has generators Pi e_i (degree deg e_i + pi) and eps^i (degree deg e_i).
They are renamed to even variables x_i and odd variables xi_i:

    i <= r':  x_i = eps^i,   xi_i = Pi e_i
    i >  r':  x_i = Pi e_i,  xi_i = -(-1)^<deg e_i, pi> eps^i

Elements are stored as ``xi^alpha x^beta a`` with the algebra coefficient
``a`` written on the right.  ``alpha`` is a bitmask, ``beta`` an exponent tuple.
Indices are 0-based in code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import AlgebraElement, AlgebraPresentation
from .errors import DifferentialNotInvariant, DimensionError, UnsupportedDegree
from .gmatrix import GradedMatrix, invert_matrix
from .grading import Degree, RankVector, sp_mask, standard_order
from .linalg import rank as q_rank

Mono = tuple  # (xi_mask: int, beta: tuple[int, ...])


class KoszulContext:
    def __init__(self, alg: AlgebraPresentation, ranks, pi: Degree | None = None):
        self.alg = alg
        self.ranks = ranks if isinstance(ranks, RankVector) else RankVector.of(ranks)
        if self.ranks.n != alg.n:
            raise DimensionError(f"rank vector {self.ranks.ranks} does not match n={alg.n}")
        n = alg.n
        self.pi_defaulted = pi is None
        if pi is None:
            pi = default_pi(n)
        elif not isinstance(pi, Degree):
            pi = alg.grading.degree(pi)
        if pi.n != n:
            raise DimensionError(f"pi {pi} does not have length {n}")
        if pi.is_even:
            raise DimensionError(f"pi must be odd, got {pi}")
        self.pi = pi
        self.r = self.ranks.total
        self.r_even = self.ranks.even_total
        self.e_deg = [d.mask for d in self.ranks.basis_degrees(alg.grading)]
        p = pi.mask
        self.x_deg = [
            self.e_deg[i] if i < self.r_even else self.e_deg[i] ^ p for i in range(self.r)
        ]
        self.xi_deg = [d ^ p for d in self.x_deg]
        # sign c_i with xi_i = c_i eps^i (hence eps^i = c_i xi_i) for odd basis elements
        self.eps_sign = [
            1 if i < self.r_even else (1 if sp_mask(self.e_deg[i], p) else -1)
            for i in range(self.r)
        ]
        self.zero_beta = (0,) * self.r
        self.full = (1 << self.r) - 1
        self._mono_cache: dict = {}

    def __repr__(self):
        return f"KoszulContext({self.alg.label}, ranks={self.ranks.ranks}, pi={self.pi})"

    # monomials

    def mono_degree(self, mono: Mono) -> int:
        alpha, beta = mono
        d = 0
        for i in range(self.r):
            if alpha >> i & 1:
                d ^= self.xi_deg[i]
            if beta[i] & 1:
                d ^= self.x_deg[i]
        return d

    def mono_mul(self, m1: Mono, m2: Mono):
        """Product of canonical monomials as ``(mono, sign)``; ``None`` if it vanishes."""
        key = (m1, m2)
        if key in self._mono_cache:
            return self._mono_cache[key]
        a1, b1 = m1
        a2, b2 = m2
        if a1 & a2:
            self._mono_cache[key] = None
            return None
        r = self.r
        # degree of the x-part of m1 restricted to indices > k, for each k
        x_suffix = [0] * (r + 1)
        for k in range(r - 1, -1, -1):
            x_suffix[k] = x_suffix[k + 1] ^ (self.x_deg[k] if b1[k] & 1 else 0)
        xi_suffix = [0] * (r + 1)
        for k in range(r - 1, -1, -1):
            xi_suffix[k] = xi_suffix[k + 1] ^ (self.xi_deg[k] if a1 >> k & 1 else 0)
        parity = 0
        for k in range(r):
            if a2 >> k & 1:
                # xi_k moves left past larger xi's and every x of m1
                parity ^= sp_mask(self.xi_deg[k], xi_suffix[k + 1] ^ x_suffix[0])
            if b2[k] & 1:
                parity ^= sp_mask(self.x_deg[k], x_suffix[k + 1])
        res = ((a1 | a2, tuple(p + q for p, q in zip(b1, b2))), -1 if parity else 1)
        self._mono_cache[key] = res
        return res

    # element constructors

    def element(self, terms: Mapping[Mono, AlgebraElement] | None = None) -> KoszulElement:
        return KoszulElement(self, terms or {})

    def const(self, a) -> KoszulElement:
        if not isinstance(a, AlgebraElement):
            a = self.alg.scalar(Fraction(a))
        return KoszulElement(self, {(0, self.zero_beta): a})

    def one(self) -> KoszulElement:
        return self.const(1)

    def mono(self, alpha: int, beta=None, coeff=None) -> KoszulElement:
        beta = tuple(beta) if beta is not None else self.zero_beta
        coeff = self.alg.one() if coeff is None else coeff
        return KoszulElement(self, {(alpha, beta): coeff})

    def xi(self, i: int) -> KoszulElement:
        return self.mono(1 << i)

    def x(self, i: int, power: int = 1) -> KoszulElement:
        beta = [0] * self.r
        beta[i] = power
        return self.mono(0, beta)

    def pi_e(self, i: int) -> KoszulElement:
        """Pi e_i written in the x/xi variables."""
        return self.xi(i) if i < self.r_even else self.x(i)

    def eps(self, i: int) -> KoszulElement:
        """eps^i written in the x/xi variables."""
        return self.x(i) if i < self.r_even else self.xi(i).scale(self.eps_sign[i])

    def d_element(self) -> KoszulElement:
        """sum_i xi_i x_i."""
        out = self.element()
        for i in range(self.r):
            out = out + self.xi(i) * self.x(i)
        return out

    def d_element_pe_eps(self) -> KoszulElement:
        """sum_i Pi e_i eps^i, built in the original alphabet."""
        out = self.element()
        for i in range(self.r):
            out = out + self.pi_e(i) * self.eps(i)
        return out

    def top_cocycle(self) -> KoszulElement:
        return self.mono(self.full)

    def top_degree(self) -> Degree:
        """r' pi + sum_u gamma_u r_u."""
        d = self.pi.mask if self.r_even & 1 else 0
        for e in self.e_deg:
            d ^= e
        return Degree.from_mask(d, self.alg.n)

    def monomials(self, k: int, w: int) -> list[Mono]:
        """All variable monomials with k xi's and total x-weight w."""
        out = []
        for alpha_bits in itertools.combinations(range(self.r), k):
            alpha = sum(1 << i for i in alpha_bits)
            for beta in _compositions(w, self.r):
                out.append((alpha, beta))
        return out


def _compositions(w: int, r: int):
    if r == 0:
        if w == 0:
            yield ()
        return
    for c in itertools.combinations_with_replacement(range(r), w):
        beta = [0] * r
        for i in c:
            beta[i] += 1
        yield tuple(beta)


def default_pi(n: int) -> Degree:
    """(1,...,1) when n is odd, otherwise the last odd degree in standard order."""
    if n & 1:
        return Degree((1,) * n)
    return standard_order(n)[-1]


class KoszulElement:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: KoszulContext, terms: Mapping[Mono, AlgebraElement]):
        self.ctx = ctx
        self.terms = {m: a for m, a in terms.items() if a.terms}

    def _check(self, other: KoszulElement):
        if other.ctx is not self.ctx:
            raise DimensionError("Koszul elements from different contexts")

    def __add__(self, other: KoszulElement) -> KoszulElement:
        self._check(other)
        terms = dict(self.terms)
        for m, a in other.terms.items():
            terms[m] = terms[m] + a if m in terms else a
        return KoszulElement(self.ctx, terms)

    def __neg__(self):
        return KoszulElement(self.ctx, {m: -a for m, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> KoszulElement:
        return KoszulElement(self.ctx, {m: a.scale(q) for m, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return KoszulElement(self.ctx, {m: a * other for m, a in self.terms.items()})
        return k_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return k_mul(self.ctx.const(other), self)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, KoszulElement):
            return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> set[int]:
        return {alpha.bit_count() for alpha, _ in self.terms}

    def degree_masks(self) -> set[int]:
        out = set()
        for m, a in self.terms.items():
            md = self.ctx.mono_degree(m)
            out |= {md ^ d for d in a.degree_masks()}
        return out

    def coefficient(self, alpha: int, beta=None) -> AlgebraElement:
        beta = self.ctx.zero_beta if beta is None else tuple(beta)
        return self.terms.get((alpha, beta), self.ctx.alg.zero())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (alpha, beta), a in sorted(self.terms.items(), key=lambda t: (t[0][0].bit_count(), t[0])):
            vars_ = [f"xi{i + 1}" for i in range(self.ctx.r) if alpha >> i & 1]
            vars_ += [f"x{i + 1}" + (f"^{b}" if b > 1 else "") for i, b in enumerate(beta) if b]
            parts.append(("*".join(vars_) or "1") + f" ({a})")
        return " + ".join(parts)

    __repr__ = __str__


def k_mul(P: KoszulElement, Q: KoszulElement) -> KoszulElement:
    """Product in the Koszul algebra.

    (m1 a1)(m2 a2) = (-1)^<deg a1, deg m2> (m1 m2)(a1 a2), with each algebra
    monomial of a1 handled separately since only those are homogeneous.
    """
    P._check(Q)
    ctx = P.ctx
    alg = ctx.alg
    out: dict[Mono, dict[int, Fraction]] = {}
    qdeg = {m2: ctx.mono_degree(m2) for m2 in Q.terms}
    for m1, a1 in P.terms.items():
        for m2, a2 in Q.terms.items():
            prod = ctx.mono_mul(m1, m2)
            if prod is None:
                continue
            mono, sign = prod
            acc = out.setdefault(mono, {})
            for u, cu in a1.terms.items():
                s = -sign if sp_mask(alg.mono_degree[u], qdeg[m2]) else sign
                for v, cv in a2.terms.items():
                    w, c = alg.mono_mul(u, v)
                    if c:
                        acc[w] = acc.get(w, 0) + s * c * cu * cv
    return KoszulElement(ctx, {m: alg.element(t) for m, t in out.items()})


def differential(P: KoszulElement) -> KoszulElement:
    """Left multiplication by sum_i xi_i x_i."""
    return k_mul(P.ctx.d_element(), P)


# graded partial derivatives and the homotopy


def d_dxi(P: KoszulElement, i: int) -> KoszulElement:
    ctx = P.ctx
    out = {}
    for (alpha, beta), a in P.terms.items():
        if not alpha >> i & 1:
            continue
        before = 0
        for j in range(i):
            if alpha >> j & 1:
                before ^= ctx.xi_deg[j]
        s = -1 if sp_mask(ctx.xi_deg[i], before) else 1
        out[(alpha & ~(1 << i), beta)] = a.scale(s)
    return KoszulElement(ctx, out)


def d_dx(P: KoszulElement, i: int) -> KoszulElement:
    ctx = P.ctx
    out: dict = {}
    for (alpha, beta), a in P.terms.items():
        b = beta[i]
        if not b:
            continue
        before = 0
        for j in range(ctx.r):
            if alpha >> j & 1:
                before ^= ctx.xi_deg[j]
        for j in range(i):
            if beta[j] & 1:
                before ^= ctx.x_deg[j]
        s = -b if sp_mask(ctx.x_deg[i], before) else b
        nb = beta[:i] + (b - 1,) + beta[i + 1:]
        key = (alpha, nb)
        out[key] = out[key] + a.scale(s) if key in out else a.scale(s)
    return KoszulElement(ctx, out)


def rho(P: KoszulElement) -> KoszulElement:
    """sum_i d/dx_i d/dxi_i; lowers the xi-weight by one."""
    out = P.ctx.element()
    for i in range(P.ctx.r):
        out = out + d_dx(d_dxi(P, i), i)
    return out


def homotopy_bracket(P: KoszulElement) -> KoszulElement:
    """[rho, d](P) = rho d P - (-1)^<pi, pi> d rho P = rho d P + d rho P."""
    return rho(differential(P)) + differential(rho(P))


def top_cocycle(ctx: KoszulContext) -> KoszulElement:
    return ctx.top_cocycle()


# substitutions (the GL^0 action)


def _linear(ctx: KoszulContext, parts: Iterable[tuple[KoszulElement, AlgebraElement]]) -> KoszulElement:
    out = ctx.element()
    for var, coeff in parts:
        if coeff.terms:
            out = out + var * coeff
    return out


def group_action_images(T: GradedMatrix, ctx: KoszulContext, Tinv: GradedMatrix | None = None):
    """Images of xi_i and x_i under the substitution induced by T.

    Pi e_i -> sum_j Pi e_j t^j_i and
    eps^i -> sum_k eps^k (-1)^<deg e_k + deg e_i, deg e_k> (T^-1)^i_k.

    The sign pairs with deg e_k: that is the choice for which
    sum_i Pi e_i eps^i is invariant.
    """
    _check_square(T, ctx)
    if not T.degree.is_zero:
        raise DimensionError("the group action needs a degree-0 matrix")
    Tinv = invert_matrix(T) if Tinv is None else Tinv
    r = ctx.r
    e = ctx.e_deg
    pe_img = [_linear(ctx, ((ctx.pi_e(j), T.entries[j][i]) for j in range(r))) for i in range(r)]
    eps_img = []
    for i in range(r):
        parts = []
        for k in range(r):
            c = Tinv.entries[i][k]
            if sp_mask(e[k] ^ e[i], e[k]):
                c = -c
            parts.append((ctx.eps(k), c))
        eps_img.append(_linear(ctx, parts))
    xi_img = [pe_img[i] if i < ctx.r_even else eps_img[i].scale(ctx.eps_sign[i]) for i in range(r)]
    x_img = [eps_img[i] if i < ctx.r_even else pe_img[i] for i in range(r)]
    return xi_img, x_img


def apply_substitution(P: KoszulElement, xi_img, x_img) -> KoszulElement:
    """Apply the degree-0 algebra morphism fixing A and sending variables to the given images."""
    ctx = P.ctx
    out = ctx.element()
    for (alpha, beta), a in P.terms.items():
        acc = ctx.one()
        for i in range(ctx.r):
            if alpha >> i & 1:
                acc = acc * xi_img[i]
        for i in range(ctx.r):
            for _ in range(beta[i]):
                acc = acc * x_img[i]
        out = out + acc * a
    return out


def _xi_part(P: KoszulElement) -> KoszulElement:
    z = P.ctx.zero_beta
    return KoszulElement(P.ctx, {m: a for m, a in P.terms.items() if m[1] == z})


def class_coefficient(P: KoszulElement, side: str = "right") -> AlgebraElement:
    """Coefficient of the x-free top monomial, read as ``xi_1..xi_r * B`` or ``B * xi_1..xi_r``."""
    ctx = P.ctx
    B = P.coefficient(ctx.full)
    if side == "right" or not B.terms:
        return B
    top = ctx.mono_degree((ctx.full, ctx.zero_beta))
    alg = ctx.alg
    return alg.element({m: (-c if sp_mask(alg.mono_degree[m], top) else c) for m, c in B.terms.items()})


def group_action_class(T: GradedMatrix, ctx: KoszulContext | None = None, pi=None) -> AlgebraElement:
    """B with phi(xi_1 ... xi_r) = xi_1 ... xi_r B in top cohomology."""
    ctx = ctx or KoszulContext(T.alg, T.row_ranks, pi)
    xi_img, _ = group_action_images(T, ctx)
    # x-containing terms can never lose their x's again, so drop them as we go
    acc = ctx.one()
    for i in range(ctx.r):
        acc = _xi_part(acc * _xi_part(xi_img[i]))
    return class_coefficient(acc, "right")


# derivations (the Lie algebra action)


@dataclass
class Derivation:
    """An A-linear graded derivation of the Koszul algebra given on generators."""

    ctx: KoszulContext
    degree: int
    xi_img: list = field(default_factory=list)
    x_img: list = field(default_factory=list)

    def __call__(self, P: KoszulElement) -> KoszulElement:
        ctx = self.ctx
        out = ctx.element()
        for (alpha, beta), a in P.terms.items():
            word = [("xi", i) for i in range(ctx.r) if alpha >> i & 1]
            word += [("x", i) for i in range(ctx.r) for _ in range(beta[i])]
            prefix_deg = 0
            for p, (kind, i) in enumerate(word):
                img = self.xi_img[i] if kind == "xi" else self.x_img[i]
                if not img.is_zero:
                    term = _word_element(ctx, word[:p]) * img * _word_element(ctx, word[p + 1:]) * a
                    out = out - term if sp_mask(self.degree, prefix_deg) else out + term
                prefix_deg ^= ctx.xi_deg[i] if kind == "xi" else ctx.x_deg[i]
        return out


def _word_element(ctx: KoszulContext, word) -> KoszulElement:
    alpha = 0
    beta = [0] * ctx.r
    for kind, i in word:
        if kind == "xi":
            alpha |= 1 << i
        else:
            beta[i] += 1
    return ctx.mono(alpha, beta)


def _check_square(S: GradedMatrix, ctx: KoszulContext):
    if S.alg is not ctx.alg or not S.is_square or S.row_ranks != ctx.ranks:
        raise DimensionError("matrix does not act on this module")


def derivation(S: GradedMatrix, ctx: KoszulContext) -> Derivation:
    """L_S: Pi e_i -> sum_k Pi e_k s^k_i, eps^i -> -sum_k eps^k (-1)^<e_i + e_k, S + e_k> s^i_k."""
    _check_square(S, ctx)
    r = ctx.r
    e = ctx.e_deg
    sdeg = S.degree.mask
    pe_img = [_linear(ctx, ((ctx.pi_e(k), S.entries[k][i]) for k in range(r))) for i in range(r)]
    eps_img = []
    for i in range(r):
        parts = []
        for k in range(r):
            c = S.entries[i][k]
            if not sp_mask(e[i] ^ e[k], sdeg ^ e[k]):
                c = -c
            parts.append((ctx.eps(k), c))
        eps_img.append(_linear(ctx, parts))
    xi_img = [pe_img[i] if i < ctx.r_even else eps_img[i].scale(ctx.eps_sign[i]) for i in range(r)]
    x_img = [eps_img[i] if i < ctx.r_even else pe_img[i] for i in range(r)]
    return Derivation(ctx, sdeg, xi_img, x_img)


def _check_even(S: GradedMatrix):
    if S.degree.is_odd:
        raise UnsupportedDegree(f"only even matrices act on the cohomology, got degree {S.degree}")


def check_d_invariance(S: GradedMatrix, ctx: KoszulContext) -> bool:
    """Whether L_S annihilates sum_i xi_i x_i, i.e. commutes with d."""
    _check_even(S)
    return derivation(S, ctx)(ctx.d_element()).is_zero


def derivation_action_class(S: GradedMatrix, ctx: KoszulContext) -> AlgebraElement:
    """B with L_S[xi_1 ... xi_r] = B [xi_1 ... xi_r] (scalar acting from the left)."""
    _check_even(S)
    L = derivation(S, ctx)
    if not L(ctx.d_element()).is_zero:
        raise DifferentialNotInvariant(
            f"<deg S, pi> = <{S.degree}, {ctx.pi}> = 1: L_S does not commute with d"
        )
    return class_coefficient(L(ctx.top_cocycle()), "left")


# brute-force cohomology on a truncation


@dataclass
class CohomologyReport:
    weight_bound: int
    algebra_dim: int
    # (k, w) -> dimension over Q of ker/im restricted to that cell
    cells: dict = field(default_factory=dict)
    unsafe: set = field(default_factory=set)

    def level_dim(self, k: int) -> int:
        return sum(v for (kk, w), v in self.cells.items() if kk == k and (kk, w) not in self.unsafe)

    def level_rank(self, k: int) -> Fraction:
        return Fraction(self.level_dim(k), self.algebra_dim)

    def levels(self) -> list[int]:
        return sorted({k for k, _ in self.cells})

    def safe_levels(self) -> list[int]:
        return [k for k in self.levels() if any((k, w) not in self.unsafe for kk, w in self.cells if kk == k)]

    def to_json(self) -> dict:
        return {
            "weight_bound": self.weight_bound,
            "levels": {
                str(k): {
                    "dim_Q": self.level_dim(k),
                    "rank_A": str(self.level_rank(k)),
                    "unsafe_x_weights": sorted(w for kk, w in self.unsafe if kk == k),
                }
                for k in self.levels()
            },
        }


def _d_matrix(ctx: KoszulContext, k: int, w: int, with_algebra: bool):
    """Rows of d restricted to the cell (k, w); columns index the cell (k+1, w+1)."""
    alg = ctx.alg
    src = ctx.monomials(k, w)
    tgt = {m: idx for idx, m in enumerate(ctx.monomials(k + 1, w + 1))}
    D = ctx.d_element()
    algebra_basis = range(alg.dim) if with_algebra else [0]
    rows = []
    for mono in src:
        for am in algebra_basis:
            img = k_mul(D, ctx.mono(mono[0], mono[1], alg.element({am: 1})))
            row = {}
            for m, a in img.terms.items():
                for bm, c in a.terms.items():
                    col = tgt[m] * (alg.dim if with_algebra else 1) + (bm if with_algebra else 0)
                    row[col] = c
            rows.append(row)
    return len(src) * len(algebra_basis), rows


def cohomology_ranks(ctx: KoszulContext, weight_bound: int = 3, with_algebra: bool = False) -> CohomologyReport:
    """Dimensions of H^k cell by cell on the span of monomials with x-weight <= W.

    d moves cell (k, w) to (k+1, w+1), so each cell's cohomology is exact.
    A cell at w = W whose outgoing d leaves the materialized span is flagged
    unsafe (except at k = r where d vanishes).  Since d has coefficients in Q
    it commutes with right multiplication by A, so by default the computation
    runs over variable monomials only and scales by dim A; ``with_algebra``
    materializes the full Q-span instead.
    """
    if weight_bound < 1:
        raise DimensionError("weight bound must be at least 1")
    W = weight_bound
    r = ctx.r
    factor = 1 if with_algebra else ctx.alg.dim
    ranks: dict = {}
    dims: dict = {}
    for k in range(r + 1):
        for w in range(W + 1):
            if k < r and w < W:
                size, rows = _d_matrix(ctx, k, w, with_algebra)
            else:
                # d vanishes at the top level; at w = W its image leaves the span
                size = len(ctx.monomials(k, w)) * (ctx.alg.dim if with_algebra else 1)
                rows = []
            dims[k, w] = size
            ranks[k, w] = q_rank(rows) if rows else 0
    report = CohomologyReport(W, ctx.alg.dim)
    for k in range(r + 1):
        for w in range(W + 1):
            incoming = ranks.get((k - 1, w - 1), 0)
            report.cells[k, w] = factor * (dims[k, w] - ranks[k, w] - incoming)
            if w == W and k < r:
                report.unsafe.add((k, w))
    return report
