"""Graded matrices over a graded-commutative algebra.

Modules are free with a standard basis; elements are column vectors of right
coordinates and a morphism acts by left matrix multiplication.  The entries
of block (u, v) of a matrix of degree t must be homogeneous of degree
gamma_u + gamma_v + t; this is checked whenever a matrix is built.
"""

from __future__ import annotations

import random as _random
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraElement, AlgebraPresentation, parse_element
from .errors import DegreeViolation, DimensionError, NotInvertible
from .grading import Degree, RankVector, sp_mask
from .linalg import solve


class GradedMatrix:
    __slots__ = ("alg", "degree", "row_ranks", "col_ranks", "entries", "_row_deg", "_col_deg")

    def __init__(
        self,
        alg: AlgebraPresentation,
        degree: Degree,
        row_ranks: RankVector,
        col_ranks: RankVector,
        entries: Sequence[Sequence[AlgebraElement]],
    ):
        self.alg = alg
        if not isinstance(row_ranks, RankVector):
            row_ranks = RankVector.of(row_ranks)
        if not isinstance(col_ranks, RankVector):
            col_ranks = RankVector.of(col_ranks)
        for rv in (row_ranks, col_ranks):
            if rv.n != alg.n:
                raise DimensionError(f"rank vector {rv.ranks} does not have length 2^{alg.n}")
        if degree.n != alg.n:
            raise DimensionError(f"matrix degree {degree} does not have length {alg.n}")
        self.degree = degree
        self.row_ranks = row_ranks
        self.col_ranks = col_ranks
        rows = [tuple(r) for r in entries]
        if len(rows) != row_ranks.total or any(len(r) != col_ranks.total for r in rows):
            raise DimensionError(
                f"entries must be {row_ranks.total} x {col_ranks.total}"
            )
        self.entries = tuple(rows)
        self._row_deg = [d.mask for d in row_ranks.basis_degrees(alg.grading)]
        self._col_deg = [d.mask for d in col_ranks.basis_degrees(alg.grading)]
        self._validate()

    def _validate(self):
        t = self.degree.mask
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if e.alg is not self.alg:
                    raise DimensionError(f"entry ({i}, {j}) belongs to another algebra")
                if not e.terms:
                    continue
                want = self._row_deg[i] ^ self._col_deg[j] ^ t
                degs = e.degree_masks()
                if degs != {want}:
                    found = (
                        str(Degree.from_mask(next(iter(degs)), self.alg.n))
                        if len(degs) == 1
                        else "non-homogeneous"
                    )
                    raise DegreeViolation(i, j, str(Degree.from_mask(want, self.alg.n)), found)

    # shape helpers

    @property
    def shape(self) -> tuple[int, int]:
        return (self.row_ranks.total, self.col_ranks.total)

    @property
    def is_square(self) -> bool:
        return self.row_ranks == self.col_ranks

    def row_degree(self, i: int) -> int:
        return self._row_deg[i]

    def col_degree(self, j: int) -> int:
        return self._col_deg[j]

    def block(self, u: int, v: int) -> list[list[AlgebraElement]]:
        rs, cs = self.row_ranks.block_slices()[u], self.col_ranks.block_slices()[v]
        return [list(row[cs]) for row in self.entries[rs]]

    def _like(self, degree: Degree, entries) -> GradedMatrix:
        return GradedMatrix(self.alg, degree, self.row_ranks, self.col_ranks, entries)

    # arithmetic

    def _check_same(self, other: GradedMatrix, op: str):
        if other.alg is not self.alg:
            raise DimensionError(f"cannot {op} matrices over different algebras")
        if (self.row_ranks, self.col_ranks) != (other.row_ranks, other.col_ranks):
            raise DimensionError(f"cannot {op} matrices of different shapes")
        if self.degree != other.degree:
            raise DimensionError(
                f"cannot {op} matrices of degrees {self.degree} and {other.degree}"
            )

    def __add__(self, other: GradedMatrix) -> GradedMatrix:
        self._check_same(other, "add")
        return self._like(
            self.degree,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: GradedMatrix) -> GradedMatrix:
        self._check_same(other, "subtract")
        return self._like(
            self.degree,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __neg__(self) -> GradedMatrix:
        return self._like(self.degree, [[-a for a in row] for row in self.entries])

    def scale(self, q) -> GradedMatrix:
        q = Fraction(q)
        return self._like(self.degree, [[a.scale(q) for a in row] for row in self.entries])

    def __matmul__(self, other: GradedMatrix) -> GradedMatrix:
        if other.alg is not self.alg:
            raise DimensionError("cannot multiply matrices over different algebras")
        if self.col_ranks != other.row_ranks:
            raise DimensionError(
                f"shape mismatch: columns {self.col_ranks.ranks} vs rows {other.row_ranks.ranks}"
            )
        zero = self.alg.zero()
        cols = list(zip(*other.entries)) if other.entries else [()] * other.col_ranks.total
        out = []
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if a.terms]
            out_row = []
            for col in cols:
                acc = zero
                for k, a in nz:
                    b = col[k]
                    if b.terms:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return GradedMatrix(self.alg, self.degree + other.degree, self.row_ranks, other.col_ranks, out)

    __mul__ = __matmul__

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (
            self.alg is other.alg
            and self.degree == other.degree
            and self.row_ranks == other.row_ranks
            and self.col_ranks == other.col_ranks
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.degree, self.row_ranks, self.col_ranks, self.entries))

    @property
    def is_zero(self) -> bool:
        return all(not a.terms for row in self.entries for a in row)

    def __repr__(self):
        return f"GradedMatrix(degree={self.degree}, ranks={self.row_ranks.ranks}x{self.col_ranks.ranks})"

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in row] for row in self.entries]

    def to_json(self) -> dict:
        return {
            "degree": self.degree.to_json(),
            "row_ranks": list(self.row_ranks.ranks),
            "col_ranks": list(self.col_ranks.ranks),
            "entries": self.to_strings(),
        }

    def __str__(self):
        cells = self.to_strings()
        if not cells:
            return "[]"
        width = max(len(c) for row in cells for c in row) if cells[0] else 0
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def new_matrix(alg, degree, row_ranks, col_ranks, entries) -> GradedMatrix:
    """Build and validate a matrix; entries may be elements, rationals or expression strings."""
    if not isinstance(degree, Degree):
        degree = alg.grading.degree(degree)

    def conv(e):
        if isinstance(e, AlgebraElement):
            return e
        if isinstance(e, str):
            return parse_element(alg, e)
        return alg.scalar(Fraction(e))

    return GradedMatrix(alg, degree, row_ranks, col_ranks, [[conv(e) for e in row] for row in entries])


def from_json(alg: AlgebraPresentation, obj: dict) -> GradedMatrix:
    try:
        degree = obj["degree"]
        row_ranks = obj["row_ranks"]
        col_ranks = obj.get("col_ranks", row_ranks)
        entries = obj["entries"]
    except KeyError as exc:
        raise DimensionError(f"matrix object is missing field {exc}") from None
    return new_matrix(alg, degree, row_ranks, col_ranks, entries)


def identity(alg: AlgebraPresentation, ranks) -> GradedMatrix:
    ranks = ranks if isinstance(ranks, RankVector) else RankVector.of(ranks)
    r = ranks.total
    one, zero = alg.one(), alg.zero()
    return GradedMatrix(alg, alg.grading.zero(), ranks, ranks,
                        [[one if i == j else zero for j in range(r)] for i in range(r)])


def zeros(alg: AlgebraPresentation, degree: Degree, row_ranks, col_ranks=None) -> GradedMatrix:
    row_ranks = row_ranks if isinstance(row_ranks, RankVector) else RankVector.of(row_ranks)
    col_ranks = row_ranks if col_ranks is None else col_ranks
    col_ranks = col_ranks if isinstance(col_ranks, RankVector) else RankVector.of(col_ranks)
    zero = alg.zero()
    return GradedMatrix(alg, degree, row_ranks, col_ranks,
                        [[zero] * col_ranks.total for _ in range(row_ranks.total)])


def scalar_mul(a: AlgebraElement, T: GradedMatrix) -> GradedMatrix:
    """The module action of a homogeneous scalar: row block u picks up (-1)^<deg a, gamma_u>."""
    d = a.degree_mask()
    out = []
    for i, row in enumerate(T.entries):
        s = -1 if sp_mask(d, T.row_degree(i)) else 1
        out.append([(a * e).scale(s) if e.terms else e for e in row])
    return GradedMatrix(T.alg, T.degree + Degree.from_mask(d, T.alg.n), T.row_ranks, T.col_ranks, out)


def graded_transpose(T: GradedMatrix) -> GradedMatrix:
    t = T.degree.mask
    rows, cols = T.shape
    out = []
    for j in range(cols):
        gj = T.col_degree(j)
        out_row = []
        for i in range(rows):
            e = T.entries[i][j]
            if e.terms and sp_mask(T.row_degree(i) ^ gj, t ^ gj):
                e = -e
            out_row.append(e)
        out.append(out_row)
    return GradedMatrix(T.alg, T.degree, T.col_ranks, T.row_ranks, out)


def graded_trace(T: GradedMatrix) -> AlgebraElement:
    if not T.is_square:
        raise DimensionError("graded trace needs a square matrix")
    t = T.degree.mask
    acc = T.alg.zero()
    for i in range(T.shape[0]):
        g = T.row_degree(i)
        e = T.entries[i][i]
        acc = acc - e if sp_mask(g ^ t, g) else acc + e
    return acc


def graded_commutator(S: GradedMatrix, T: GradedMatrix) -> GradedMatrix:
    if not (S.is_square and T.is_square and S.row_ranks == T.row_ranks):
        raise DimensionError("graded commutator needs square matrices of equal shape")
    ST, TS = S @ T, T @ S
    return ST + TS if S.degree.dot(T.degree) else ST - TS


def invert_matrix(T: GradedMatrix) -> GradedMatrix:
    """Inverse of a degree-0 square matrix through the regular representation.

    Left multiplication by T is a Q-linear operator on A^r.  It preserves
    degrees, so the column of T^-1 solving T x = e_k lives in the homogeneous
    component of degree deg e_k; only that component is materialized.
    """
    if not T.is_square:
        raise DimensionError("only square matrices can be inverted")
    if not T.degree.is_zero:
        raise DimensionError("invert_matrix expects a degree-0 matrix")
    alg = T.alg
    r = T.shape[0]
    dim = alg.dim
    by_degree: dict[int, list[int]] = {}
    for k in range(r):
        by_degree.setdefault(T.row_degree(k), []).append(k)
    X = [[alg.zero() for _ in range(r)] for _ in range(r)]
    for delta, ks in by_degree.items():
        unknowns = []
        columns = []
        for j in range(r):
            want = T.col_degree(j) ^ delta
            for mono in range(dim):
                if alg.mono_degree[mono] != want:
                    continue
                unknowns.append((j, mono))
                col: dict[int, Fraction] = {}
                for i in range(r):
                    for m, c in T.entries[i][j].terms.items():
                        out, s = alg.mono_mul(m, mono)
                        if s:
                            key = i * dim + out
                            col[key] = col.get(key, 0) + s * c
                columns.append(col)
        for k in ks:
            x = solve(columns, {k * dim: Fraction(1)}, r * dim)
            if x is None:
                raise NotInvertible("matrix is singular")
            terms: dict[int, dict[int, Fraction]] = {}
            for (j, mono), v in zip(unknowns, x):
                if v:
                    terms.setdefault(j, {})[mono] = v
            for j, t in terms.items():
                X[j][k] = alg.element(t)
    inv = GradedMatrix(alg, T.degree, T.col_ranks, T.row_ranks, X)
    I = identity(alg, T.row_ranks)
    if T @ inv != I or inv @ T != I:
        raise NotInvertible("matrix has only a one-sided inverse")
    return inv


def is_block_diagonal(T: GradedMatrix) -> bool:
    blocks = T.row_ranks.block_of()
    cblocks = T.col_ranks.block_of()
    return all(
        not e.terms
        for i, row in enumerate(T.entries)
        for j, e in enumerate(row)
        if blocks[i] != cblocks[j]
    )


# random test data


def random_element(alg: AlgebraPresentation, degree: Degree | int, rng: _random.Random,
                   density: float = 0.7, bound: int = 3, allow_zero: bool = True) -> AlgebraElement:
    """A random homogeneous element with small integer coefficients."""
    mask = degree if isinstance(degree, int) else degree.mask
    monos = [m for m in range(alg.dim) if alg.mono_degree[m] == mask]
    while True:
        terms = {}
        for m in monos:
            if rng.random() < density:
                c = rng.randint(-bound, bound)
                if c:
                    terms[m] = c
        if terms or allow_zero or not monos:
            return alg.element(terms)


def random_matrix(alg: AlgebraPresentation, degree: Degree, row_ranks, col_ranks=None,
                  rng: _random.Random | None = None, density: float = 0.7, bound: int = 3) -> GradedMatrix:
    rng = rng or _random.Random()
    row_ranks = row_ranks if isinstance(row_ranks, RankVector) else RankVector.of(row_ranks)
    col_ranks = row_ranks if col_ranks is None else col_ranks
    col_ranks = col_ranks if isinstance(col_ranks, RankVector) else RankVector.of(col_ranks)
    rd = [d.mask for d in row_ranks.basis_degrees(alg.grading)]
    cd = [d.mask for d in col_ranks.basis_degrees(alg.grading)]
    t = degree.mask
    entries = [[random_element(alg, rd[i] ^ cd[j] ^ t, rng, density, bound) for j in range(len(cd))]
               for i in range(len(rd))]
    return GradedMatrix(alg, degree, row_ranks, col_ranks, entries)


def _rng(seed) -> _random.Random:
    return seed if isinstance(seed, _random.Random) else _random.Random(seed)


def random_block_diagonal(alg: AlgebraPresentation, ranks, seed=None, tries: int = 100) -> GradedMatrix:
    """Random invertible degree-0 block-diagonal matrix."""
    rng = _rng(seed)
    ranks = ranks if isinstance(ranks, RankVector) else RankVector.of(ranks)
    blocks = ranks.block_of()
    for _ in range(tries):
        T = random_matrix(alg, alg.grading.zero(), ranks, rng=rng)
        entries = [[e if blocks[i] == blocks[j] else alg.zero() for j, e in enumerate(row)]
                   for i, row in enumerate(T.entries)]
        T = GradedMatrix(alg, T.degree, ranks, ranks, entries)
        try:
            invert_matrix(T)
        except NotInvertible:
            continue
        return T
    raise NotInvertible(f"no invertible block-diagonal matrix found in {tries} tries")


def random_unitriangular(alg: AlgebraPresentation, ranks, seed=None, upper: bool = True) -> GradedMatrix:
    """Identity diagonal blocks, random valid entries strictly above (or below) the block diagonal."""
    rng = _rng(seed)
    ranks = ranks if isinstance(ranks, RankVector) else RankVector.of(ranks)
    blocks = ranks.block_of()
    T = random_matrix(alg, alg.grading.zero(), ranks, rng=rng)
    one, zero = alg.one(), alg.zero()
    entries = []
    for i, row in enumerate(T.entries):
        out = []
        for j, e in enumerate(row):
            bi, bj = blocks[i], blocks[j]
            if bi == bj:
                out.append(one if i == j else zero)
            elif (bi < bj) == upper:
                out.append(e)
            else:
                out.append(zero)
        entries.append(out)
    return GradedMatrix(alg, T.degree, ranks, ranks, entries)


def random_decomposable(alg: AlgebraPresentation, ranks, seed=None, factors: int = 3) -> GradedMatrix:
    """Product of random block-diagonal and block-unitriangular factors."""
    rng = _rng(seed)
    T = random_block_diagonal(alg, ranks, rng)
    for _ in range(factors - 1):
        kind = rng.randrange(3)
        if kind == 0:
            F = random_block_diagonal(alg, ranks, rng)
        else:
            F = random_unitriangular(alg, ranks, rng, upper=kind == 1)
        T = T @ F if rng.random() < 0.5 else F @ T
    return T
