"""Graded Berezinian of invertible degree-0 matrices.

The Berezinian is the group morphism GL^0 -> (A^0)^x that is 1 on block
unitriangular matrices and prod det(X_uu) (even blocks) times prod det(X_uu)^-1
(odd blocks) on block-diagonal ones.  We factor a matrix into those two
families by block Gaussian elimination and read the value off the middle
factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import AlgebraElement, invert
from .errors import DecompositionFailed, DimensionError, NotInvertible
from .gmatrix import GradedMatrix, invert_matrix

Block = list  # list[list[AlgebraElement]]


def det_commutative(block: Block) -> AlgebraElement:
    """Division-free determinant of a square block with degree-0 entries.

    Degree-0 elements commute, so the Leibniz formula is meaningful; it is
    evaluated by dynamic programming over column subsets (O(k 2^k) products).
    """
    k = len(block)
    if any(len(row) != k for row in block):
        raise DimensionError("determinant needs a square block")
    if k == 0:
        raise DimensionError("empty block has no algebra to take a determinant in")
    alg = block[0][0].alg
    for i, row in enumerate(block):
        for j, e in enumerate(row):
            if e.terms and e.degree_masks() != {0}:
                raise DimensionError(f"entry ({i}, {j}) is not of degree 0")
    partial = {0: alg.one()}
    for row in block:
        nxt: dict[int, AlgebraElement] = {}
        for cols, val in partial.items():
            for c, e in enumerate(row):
                if cols >> c & 1 or not e.terms:
                    continue
                # columns already used that sit to the right of c are inversions
                inv = (cols >> (c + 1)).bit_count()
                term = val * e
                if inv & 1:
                    term = -term
                key = cols | (1 << c)
                nxt[key] = nxt[key] + term if key in nxt else term
        partial = nxt
    return partial.get((1 << k) - 1, alg.zero())


def _det_or_one(block: Block, alg) -> AlgebraElement:
    return det_commutative(block) if block else alg.one()


# block helpers


def _mm(X: Block, Y: Block, alg) -> Block:
    inner = len(Y)
    cols = len(Y[0]) if Y else 0
    out = []
    for row in X:
        out_row = []
        for c in range(cols):
            acc = alg.zero()
            for k in range(inner):
                a, b = row[k], Y[k][c]
                if a.terms and b.terms:
                    acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def _sub(X: Block, Y: Block) -> Block:
    return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(X, Y)]


def _block_inverse(T: GradedMatrix, u: int, block: Block) -> Block:
    ranks = [0] * len(T.row_ranks)
    ranks[u] = len(block)
    P = GradedMatrix(T.alg, T.alg.grading.zero(), ranks, ranks, block)
    return [list(row) for row in invert_matrix(P).entries]


def _assemble(T: GradedMatrix, blocks: dict[tuple[int, int], Block], unit: bool) -> GradedMatrix:
    alg = T.alg
    r = T.shape[0]
    one, zero = alg.one(), alg.zero()
    out = [[(one if unit and i == j else zero) for j in range(r)] for i in range(r)]
    sl = T.row_ranks.block_slices()
    for (u, v), B in blocks.items():
        for a, i in enumerate(range(sl[u].start, sl[u].stop)):
            for b, j in enumerate(range(sl[v].start, sl[v].stop)):
                out[i][j] = B[a][b]
    return GradedMatrix(alg, alg.grading.zero(), T.row_ranks, T.col_ranks, out)


@dataclass(frozen=True)
class UDLFactors:
    """``upper @ diag @ lower`` (order "udl") or ``lower @ diag @ upper`` (order "ldu")."""

    upper: GradedMatrix
    diag: GradedMatrix
    lower: GradedMatrix
    order: str = "udl"

    def recompose(self) -> GradedMatrix:
        if self.order == "udl":
            return self.upper @ self.diag @ self.lower
        return self.lower @ self.diag @ self.upper

    def diagonal_blocks(self) -> list[Block]:
        return [self.diag.block(u, u) for u in range(len(self.diag.row_ranks))]


def _eliminate(T: GradedMatrix, order: str) -> UDLFactors:
    alg = T.alg
    nonempty = [u for u, r in enumerate(T.row_ranks) if r]
    W = {(u, v): T.block(u, v) for u in nonempty for v in nonempty}
    upper: dict = {}
    lower: dict = {}
    diag: dict = {}
    seq = list(reversed(nonempty)) if order == "udl" else list(nonempty)
    remaining = list(seq)
    for p in seq:
        remaining.remove(p)
        P = W[p, p]
        try:
            Pinv = _block_inverse(T, p, P)
        except NotInvertible:
            raise DecompositionFailed(f"pivot block {p + 1} is not invertible ({order})") from None
        diag[p, p] = P
        for u in remaining:
            left = _mm(W[u, p], Pinv, alg)   # eliminates column p in row block u
            right = _mm(Pinv, W[p, u], alg)  # eliminates row p in column block u
            if order == "udl":
                upper[u, p] = left
                lower[p, u] = right
            else:
                lower[u, p] = left
                upper[p, u] = right
        for u in remaining:
            for v in remaining:
                W[u, v] = _sub(W[u, v], _mm(_mm(W[u, p], Pinv, alg), W[p, v], alg))
    return UDLFactors(
        upper=_assemble(T, upper, unit=True),
        diag=_assemble(T, diag, unit=False),
        lower=_assemble(T, lower, unit=True),
        order=order,
    )


def _check_gl0(T: GradedMatrix):
    if not T.is_square:
        raise DimensionError("the Berezinian needs a square matrix")
    if not T.degree.is_zero:
        raise DimensionError(f"the Berezinian is only defined in degree 0, got {T.degree}")


def udl_decompose(T: GradedMatrix) -> UDLFactors:
    """Factor T as upper-unitriangular @ block-diagonal @ lower-unitriangular.

    Pivots are taken from the last block backwards; if a pivot block is
    singular, the opposite order (lower @ diag @ upper) is tried.
    """
    _check_gl0(T)
    errors = []
    for order in ("udl", "ldu"):
        try:
            f = _eliminate(T, order)
        except DecompositionFailed as exc:
            errors.append(str(exc))
            continue
        if f.recompose() != T:
            raise AssertionError("block elimination did not reproduce the input")
        return f
    raise DecompositionFailed("; ".join(errors))


def ber_of_diagonal(blocks: list[Block], alg, q: int) -> AlgebraElement:
    """prod det over even blocks times prod det^-1 over odd blocks."""
    val = alg.one()
    for u, B in enumerate(blocks):
        if not B:
            continue
        d = det_commutative(B)
        val = val * (d if u < q else invert(d))
    return val


def gber(T: GradedMatrix) -> AlgebraElement:
    f = udl_decompose(T)
    return ber_of_diagonal(f.diagonal_blocks(), T.alg, T.alg.grading.q)


def adjugate(block: Block) -> Block:
    k = len(block)
    alg = block[0][0].alg
    if k == 1:
        return [[alg.one()]]
    adj = [[alg.zero()] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[block[a][b] for b in range(k) if b != j] for a in range(k) if a != i]
            c = det_commutative(minor)
            adj[j][i] = -c if (i + j) & 1 else c
    return adj


def super_ber_oracle(T: GradedMatrix) -> AlgebraElement:
    """Classical closed form det(A - B D^-1 C) det(D)^-1 for n = 1.

    D^-1 comes from the adjugate, independent of the elimination code path.
    """
    _check_gl0(T)
    alg = T.alg
    if alg.n != 1:
        raise DimensionError("the super closed form needs n = 1")
    p, q = T.row_ranks.ranks
    if q == 0:
        return det_commutative(T.block(0, 0))
    D = T.block(1, 1)
    det_d = det_commutative(D)
    inv_det_d = invert(det_d)
    if p == 0:
        return inv_det_d
    Dinv = [[e * inv_det_d for e in row] for row in adjugate(D)]
    A, B, C = T.block(0, 0), T.block(0, 1), T.block(1, 0)
    schur = _sub(A, _mm(_mm(B, Dinv, alg), C, alg))
    return det_commutative(schur) * inv_det_d


def is_quaternion(alg) -> bool:
    return (
        alg.n == 3
        and [g.name for g in alg.generators] == ["i", "j"]
        and all(g.square == -1 for g in alg.generators)
    )


def study_det_oracle(T: GradedMatrix) -> float:
    """Dieudonne determinant via the 2x2 complex embedding of quaternions."""
    if not is_quaternion(T.alg):
        raise DimensionError("the Study determinant needs the quaternion preset")
    rows, cols = T.shape
    if rows != cols:
        raise DimensionError("the Study determinant needs a square matrix")
    M = np.zeros((2 * rows, 2 * cols), dtype=complex)
    for r, row in enumerate(T.entries):
        for c, e in enumerate(row):
            a, b, cj, d = (float(e.terms.get(m, 0)) for m in (0, 1, 2, 3))
            M[2 * r:2 * r + 2, 2 * c:2 * c + 2] = [
                [complex(a, b), complex(cj, d)],
                [complex(-cj, d), complex(a, -b)],
            ]
    return math.sqrt(abs(np.linalg.det(M))) if rows else 1.0


def as_rational(a: AlgebraElement) -> Fraction | None:
    return a.rational()
