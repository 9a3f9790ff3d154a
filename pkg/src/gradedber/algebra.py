"""(Z_2)^n-graded-commutative algebras given by generators that square to scalars.

A presentation lists generators ``g_1, ..., g_m`` with degrees and squares.
Generators (anti)commute according to the sign rule
``g_i g_j = (-1)^<deg g_i, deg g_j> g_j g_i`` and ``g_i^2 = square_i``, so the
square-free monomials (encoded as bitmasks over generator indices) form a
basis of dimension 2^m.  Coefficients are exact :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    NonHomogeneous,
    NotInvertible,
    ParseError,
    PresentationError,
    UndefinedDegree,
)
from .grading import Degree, Grading, sp_mask
from .linalg import solve

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: Degree
    square: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "square", Fraction(self.square))
        if not _NAME.match(self.name):
            raise PresentationError(f"invalid generator name {self.name!r}")
        if self.degree.is_odd and self.square != 0:
            raise PresentationError(
                f"odd generator {self.name} must square to 0, got {self.square}"
            )


class AlgebraPresentation:
    """An immutable generator-square presentation with cached structure constants."""

    def __init__(self, n: int, generators: Sequence[GeneratorSpec], label: str = "custom"):
        self.grading = Grading(n)
        self.n = n
        self.generators = tuple(generators)
        self.label = label
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError(f"duplicate generator names in {names}")
        for g in self.generators:
            if g.degree.n != n:
                raise PresentationError(
                    f"generator {g.name} has degree {g.degree} of length {g.degree.n}, expected {n}"
                )
        self.m = len(self.generators)
        self.dim = 1 << self.m
        self.index = {g.name: k for k, g in enumerate(self.generators)}
        self._gdeg = [g.degree.mask for g in self.generators]
        self._squares = [g.square for g in self.generators]
        # degree mask of every basis monomial
        self.mono_degree = [0] * self.dim
        for mono in range(1, self.dim):
            low = (mono & -mono).bit_length() - 1
            self.mono_degree[mono] = self.mono_degree[mono & (mono - 1)] ^ self._gdeg[low]
        self._table: dict[tuple[int, int], tuple[int, Fraction]] = {}

    # structure constants

    def normal_form_word(self, word: Sequence[int], coefficient=1) -> dict[int, Fraction]:
        """Canonicalize a product of generators given by their indices.

        Bubble-sorts the word by index, picking up ``(-1)^<deg g, deg h>`` per
        adjacent swap, and collapses ``g g`` to ``square(g)``.
        """
        coeff = Fraction(coefficient)
        word = list(word)
        changed = True
        while changed and coeff:
            changed = False
            k = 0
            out: list[int] = []
            while k < len(word):
                if k + 1 < len(word) and word[k] == word[k + 1]:
                    coeff *= self._squares[word[k]]
                    k += 2
                    changed = True
                    continue
                out.append(word[k])
                k += 1
            word = out
            for k in range(len(word) - 1):
                a, b = word[k], word[k + 1]
                if a > b:
                    word[k], word[k + 1] = b, a
                    if sp_mask(self._gdeg[a], self._gdeg[b]):
                        coeff = -coeff
                    changed = True
        if not coeff:
            return {}
        mono = 0
        for g in word:
            mono |= 1 << g
        return {mono: coeff}

    def mono_mul(self, a: int, b: int) -> tuple[int, Fraction]:
        key = (a, b)
        hit = self._table.get(key)
        if hit is None:
            word = [k for k in range(self.m) if a >> k & 1] + [k for k in range(self.m) if b >> k & 1]
            res = self.normal_form_word(word)
            hit = next(iter(res.items())) if res else (0, Fraction(0))
            self._table[key] = hit
        return hit

    # element constructors

    def element(self, terms: Mapping[int, object] | None = None) -> AlgebraElement:
        return AlgebraElement(self, terms or {})

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {0: 1})

    def scalar(self, q) -> AlgebraElement:
        return AlgebraElement(self, {0: q})

    def gen(self, name: str) -> AlgebraElement:
        try:
            return AlgebraElement(self, {1 << self.index[name]: 1})
        except KeyError:
            raise ParseError(f"unknown generator {name!r}") from None

    def normal_form(self, word: Sequence[str | int], coefficient=1) -> AlgebraElement:
        idx = [w if isinstance(w, int) else self.index[w] for w in word]
        return AlgebraElement(self, self.normal_form_word(idx, coefficient))

    def monomials_of_degree(self, degree: Degree) -> list[int]:
        return [mono for mono in range(self.dim) if self.mono_degree[mono] == degree.mask]

    def mono_name(self, mono: int) -> str:
        return "*".join(self.generators[k].name for k in range(self.m) if mono >> k & 1)

    def parse(self, text: str) -> AlgebraElement:
        return parse_element(self, text)

    def describe(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "dimension": self.dim,
            "generators": [
                {"name": g.name, "degree": g.degree.to_json(), "square": str(g.square)}
                for g in self.generators
            ],
        }

    def __repr__(self):
        return f"AlgebraPresentation({self.label}, n={self.n}, m={self.m})"


class AlgebraElement:
    """Exact linear combination of canonical square-free monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: AlgebraPresentation, terms: Mapping[int, object]):
        self.alg = alg
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}

    def _coerce(self, other) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            if other.alg is not self.alg:
                raise PresentationError("elements belong to different presentations")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraElement(self.alg, {0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return AlgebraElement(self.alg, terms)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> AlgebraElement:
        q = Fraction(q)
        return AlgebraElement(self.alg, {m: c * q for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, Fraction] = {}
        mul = self.alg.mono_mul
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                m, s = mul(a, b)
                if s:
                    out[m] = out.get(m, 0) + s * ca * cb
        return AlgebraElement(self.alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement(self.alg, {0: other})
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree_masks(self) -> set[int]:
        return {self.alg.mono_degree[m] for m in self.terms}

    def degree_mask(self) -> int:
        if not self.terms:
            raise UndefinedDegree("the zero element has no degree")
        degs = self.degree_masks()
        if len(degs) != 1:
            raise NonHomogeneous(f"{self} mixes {len(degs)} homogeneous components")
        return degs.pop()

    def degree(self) -> Degree:
        return Degree.from_mask(self.degree_mask(), self.alg.n)

    def is_homogeneous(self) -> bool:
        return len(self.degree_masks()) <= 1

    def components(self) -> dict[int, AlgebraElement]:
        """Homogeneous components keyed by degree mask."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(self.alg.mono_degree[m], {})[m] = c
        return {d: AlgebraElement(self.alg, t) for d, t in out.items()}

    def rational(self) -> Fraction | None:
        """The value if this is a scalar multiple of 1, else ``None``."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {0}:
            return self.terms[0]
        return None

    def invert(self) -> AlgebraElement:
        return invert(self)

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"AlgebraElement({format_element(self)!r})"


def degree_of(a: AlgebraElement) -> Degree:
    return a.degree()


def invert(a: AlgebraElement) -> AlgebraElement:
    """Two-sided inverse via the regular representation.

    Solves ``a * b = 1`` as an exact linear system on the monomial basis.  For
    homogeneous ``a`` the unknown is restricted to the degree of ``a`` (the
    inverse of a homogeneous element is homogeneous of the same degree), which
    shrinks the system by a factor 2^n.  The answer is checked on both sides.
    """
    alg = a.alg
    if a.is_zero:
        raise NotInvertible("zero is not invertible")
    degs = a.degree_masks()
    if len(degs) == 1:
        (d,) = degs
        unknowns = [m for m in range(alg.dim) if alg.mono_degree[m] == d]
    else:
        unknowns = list(range(alg.dim))
    columns = []
    for b in unknowns:
        col: dict[int, Fraction] = {}
        for m, c in a.terms.items():
            mono, s = alg.mono_mul(m, b)
            if s:
                col[mono] = col.get(mono, 0) + s * c
        columns.append(col)
    x = solve(columns, {0: Fraction(1)}, alg.dim)
    if x is None:
        raise NotInvertible(f"{a} is not invertible")
    b = AlgebraElement(alg, {m: v for m, v in zip(unknowns, x)})
    if a * b != 1 or b * a != 1:
        raise NotInvertible(f"{a} has only a one-sided inverse")
    return b


# presets


def grassmann(k: int) -> AlgebraPresentation:
    odd = Degree((1,))
    gens = [GeneratorSpec(f"t{i + 1}", odd, 0) for i in range(k)]
    return AlgebraPresentation(1, gens, label=f"grassmann({k})")


def clifford(p: int, signs: Sequence[int] | None = None) -> AlgebraPresentation:
    """Clifford algebra on p generators, graded by (Z_2)^(p+1).

    Generator i has a 1 in position i and in the last position.
    """
    if p < 1:
        raise PresentationError("clifford needs at least one generator")
    signs = list(signs) if signs is not None else [1] * p
    if len(signs) != p or any(s not in (1, -1) for s in signs):
        raise PresentationError(f"clifford signs must be {p} values in {{+1,-1}}")
    gens = []
    for i in range(p):
        bits = [0] * (p + 1)
        bits[i] = bits[p] = 1
        gens.append(GeneratorSpec(f"e{i + 1}", Degree(tuple(bits)), signs[i]))
    return AlgebraPresentation(p + 1, gens, label=f"clifford({p},{signs})")


def quaternion() -> AlgebraPresentation:
    """The quaternions with deg i = (0,1,1), deg j = (1,0,1); k is i*j."""
    gens = [
        GeneratorSpec("i", Degree((0, 1, 1)), -1),
        GeneratorSpec("j", Degree((1, 0, 1)), -1),
    ]
    return AlgebraPresentation(3, gens, label="quaternion")


def custom(n: int, generators: Iterable[GeneratorSpec | tuple]) -> AlgebraPresentation:
    gens = []
    for g in generators:
        if not isinstance(g, GeneratorSpec):
            name, degree, square = (tuple(g) + (0,))[:3]
            g = GeneratorSpec(name, degree if isinstance(degree, Degree) else Degree(tuple(degree)), square)
        gens.append(g)
    return AlgebraPresentation(n, gens, label="custom")


def preset(kind: str, *args) -> AlgebraPresentation:
    """Build a presentation by name: grassmann(k), clifford(p, signs), quaternion, custom."""
    if kind == "grassmann":
        return grassmann(*args)
    if kind == "clifford":
        return clifford(*args)
    if kind == "quaternion":
        return quaternion()
    if kind == "custom":
        return custom(*args)
    raise PresentationError(f"unknown preset {kind!r}")


# expression grammar

_TOKEN = re.compile(r"\s*(?:(\d+)(?:\s*/\s*(\d+))?|([A-Za-z_][A-Za-z0-9_]*)|([+\-*]))")


def _tokens(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos} in {text!r}")
        pos = m.end()
        num, den, name, op = m.groups()
        if num is not None:
            if den is not None and int(den) == 0:
                raise ParseError(f"zero denominator in {text!r}")
            yield ("num", Fraction(int(num), int(den) if den else 1))
        elif name is not None:
            yield ("gen", name)
        else:
            yield ("op", op)


def parse_element(alg: AlgebraPresentation, text: str) -> AlgebraElement:
    """Parse ``expr := term (('+'|'-') term)*`` with ``term := rational ('*' gen)* | gen ('*' gen)*``."""
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty expression")
    result = alg.zero()
    k = 0
    sign = 1
    expect_term = True
    if toks[0] == ("op", "-"):
        sign, k = -1, 1
    elif toks[0] == ("op", "+"):
        k = 1
    while k < len(toks):
        coeff = Fraction(sign)
        word: list[int] = []
        kind, val = toks[k]
        if kind == "num":
            coeff *= val
            k += 1
        elif kind == "gen":
            if val not in alg.index:
                raise ParseError(f"unknown generator {val!r} in {text!r}")
            word.append(alg.index[val])
            k += 1
        else:
            raise ParseError(f"expected a term in {text!r}")
        while k < len(toks) and toks[k] == ("op", "*"):
            if k + 1 >= len(toks) or toks[k + 1][0] != "gen":
                raise ParseError(f"expected a generator after '*' in {text!r}")
            name = toks[k + 1][1]
            if name not in alg.index:
                raise ParseError(f"unknown generator {name!r} in {text!r}")
            word.append(alg.index[name])
            k += 2
        result = result + AlgebraElement(alg, alg.normal_form_word(word, coeff))
        expect_term = False
        if k < len(toks):
            kind, val = toks[k]
            if kind != "op" or val not in "+-":
                raise ParseError(f"expected '+' or '-' in {text!r}")
            sign = 1 if val == "+" else -1
            k += 1
            expect_term = True
    if expect_term:
        raise ParseError(f"dangling operator in {text!r}")
    return result


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_element(a: AlgebraElement) -> str:
    if not a.terms:
        return "0"
    parts = []
    for mono in sorted(a.terms, key=lambda m: (m.bit_count(), [k for k in range(a.alg.m) if m >> k & 1])):
        c = a.terms[mono]
        neg = c < 0
        c = abs(c)
        if mono == 0:
            body = _fmt_q(c)
        elif c == 1:
            body = a.alg.mono_name(mono)
        else:
            body = f"{_fmt_q(c)}*{a.alg.mono_name(mono)}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)
