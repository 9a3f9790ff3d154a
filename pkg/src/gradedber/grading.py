"""The grading group (Z_2)^n with its standard scalar product."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DimensionError


@dataclass(frozen=True)
class Degree:
    """An element of (Z_2)^n, stored as a tuple of bits (leftmost first)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise DimensionError(f"degree entries must be 0 or 1, got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def zero(cls, n: int) -> Degree:
        return cls((0,) * n)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> Degree:
        return cls(tuple((mask >> (n - 1 - i)) & 1 for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.bits)

    @cached_property
    def mask(self) -> int:
        # leftmost bit is most significant, so integer order == lexicographic order
        m = 0
        for b in self.bits:
            m = (m << 1) | b
        return m

    def _check(self, other: Degree):
        if len(self.bits) != len(other.bits):
            raise DimensionError(
                f"degrees of different length: {self.bits} vs {other.bits}"
            )

    def __add__(self, other: Degree) -> Degree:
        self._check(other)
        return Degree(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    __sub__ = __add__

    def dot(self, other: Degree) -> int:
        self._check(other)
        return sum(a & b for a, b in zip(self.bits, other.bits)) & 1

    @property
    def is_even(self) -> bool:
        return self.dot(self) == 0

    @property
    def is_odd(self) -> bool:
        return not self.is_even

    @property
    def is_zero(self) -> bool:
        return not any(self.bits)

    def __str__(self):
        return "(" + ",".join(map(str, self.bits)) + ")"

    def to_json(self) -> list[int]:
        return list(self.bits)


def scalar_product(a: Degree, b: Degree) -> int:
    """Standard mod-2 scalar product of two degrees."""
    return a.dot(b)


def parity(a: Degree) -> str:
    return "even" if a.is_even else "odd"


def sp_mask(a: int, b: int) -> int:
    """Scalar product on bitmask-encoded degrees."""
    return (a & b).bit_count() & 1


def standard_order(n: int) -> list[Degree]:
    """All 2^n degrees: even ones lexicographically, then odd ones lexicographically."""
    if n < 1:
        raise DimensionError("n must be at least 1")
    degrees = [Degree.from_mask(m, n) for m in range(1 << n)]
    return [d for d in degrees if d.is_even] + [d for d in degrees if d.is_odd]


def degree_index(d: Degree) -> int:
    """1-based position of ``d`` in :func:`standard_order`."""
    return Grading(d.n).index(d) + 1


class Grading:
    """Session context fixing n; every degree it hands out has length n."""

    def __init__(self, n: int):
        if n < 1:
            raise DimensionError("n must be at least 1")
        self.n = n
        self.order = standard_order(n)
        self._index = {d.mask: u for u, d in enumerate(self.order)}

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def q(self) -> int:
        return 1 << (self.n - 1)

    def zero(self) -> Degree:
        return Degree.zero(self.n)

    def degree(self, bits: Iterable[int]) -> Degree:
        d = Degree(tuple(bits))
        if d.n != self.n:
            raise DimensionError(f"degree {list(d.bits)} does not have length {self.n}")
        return d

    def index(self, d: Degree) -> int:
        """0-based position of d in the standard order."""
        if d.n != self.n:
            raise DimensionError(f"degree {d} does not have length {self.n}")
        return self._index[d.mask]

    def __eq__(self, other):
        return isinstance(other, Grading) and other.n == self.n

    def __hash__(self):
        return hash(("Grading", self.n))

    def __repr__(self):
        return f"Grading(n={self.n})"


@dataclass(frozen=True)
class RankVector:
    """Block sizes (r_1, ..., r_N) of a free graded module, in standard order."""

    ranks: tuple[int, ...]

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        if any(r < 0 for r in ranks):
            raise DimensionError(f"ranks must be non-negative: {ranks}")
        N = len(ranks)
        if N < 2 or N & (N - 1):
            raise DimensionError(f"rank vector length {N} is not 2^n with n >= 1")
        object.__setattr__(self, "ranks", ranks)

    @classmethod
    def of(cls, ranks: Sequence[int]) -> RankVector:
        return cls(tuple(ranks))

    @property
    def n(self) -> int:
        return len(self.ranks).bit_length() - 1

    @property
    def total(self) -> int:
        return sum(self.ranks)

    @property
    def even_total(self) -> int:
        """r', the number of even basis elements."""
        return sum(self.ranks[: len(self.ranks) // 2])

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for r in self.ranks:
            out.append(acc)
            acc += r
        return out

    def block_slices(self) -> list[slice]:
        return [slice(o, o + r) for o, r in zip(self.offsets(), self.ranks)]

    def block_of(self) -> list[int]:
        """Block index (0-based, standard order) of every basis element."""
        return [u for u, r in enumerate(self.ranks) for _ in range(r)]

    def basis_degrees(self, grading: Grading | None = None) -> list[Degree]:
        grading = grading or Grading(self.n)
        if grading.n != self.n:
            raise DimensionError(f"rank vector of length {len(self.ranks)} does not match n={grading.n}")
        return [grading.order[u] for u in self.block_of()]

    def __len__(self):
        return len(self.ranks)

    def __iter__(self):
        return iter(self.ranks)

    def __getitem__(self, u):
        return self.ranks[u]
