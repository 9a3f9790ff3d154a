"""JSON problem files.

A problem file looks like::

    {
      "n": 3,
      "algebra": "quaternion",
      "ranks": [1, 1, 0, 0, 1, 0, 0, 0],
      "pi": [1, 1, 1],
      "matrices": {"T": {"degree": [0, 0, 0], "entries": [["1", "i"], ...]}}
    }

``algebra`` is a preset name (``"quaternion"``, ``"grassmann(3)"``,
``"clifford(2)"``), an object ``{"preset": "clifford", "args": [2, [1, -1]]}``,
or an object ``{"generators": [{"name": "c", "degree": [1, 1], "square": 1}, ...]}``.
Matrices default to ``row_ranks = col_ranks = ranks``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import algebra as alg_mod
from .algebra import AlgebraPresentation, GeneratorSpec
from .errors import DegreeViolation, GradedError, InputError, ParseError
from .gmatrix import GradedMatrix, from_json
from .grading import Degree, RankVector

_PRESET = re.compile(r"^\s*([a-z]+)\s*(?:\((.*)\))?\s*$")


@dataclass
class ProblemFile:
    n: int
    algebra: AlgebraPresentation
    ranks: RankVector | None = None
    pi: Degree | None = None
    matrices: dict[str, GradedMatrix] = field(default_factory=dict)
    source: str = "<memory>"

    def matrix(self, name: str) -> GradedMatrix:
        try:
            return self.matrices[name]
        except KeyError:
            known = ", ".join(sorted(self.matrices)) or "none"
            raise InputError(f"{self.source}: no matrix named {name!r} (known: {known})") from None


def _field_error(where: str, exc: Exception) -> InputError:
    err = ParseError(f"{where}: {exc}")
    err.__cause__ = exc
    return err


def parse_degree(obj, n: int, where: str = "degree") -> Degree:
    """Accepts [0,1,1], "011", "0,1,1" or "(0,1,1)"."""
    if isinstance(obj, str):
        bits = [c for c in obj if c in "01"]
        if len(bits) != len(re.sub(r"[\s,()\[\]]", "", obj)):
            raise ParseError(f"{where}: degree {obj!r} must consist of 0/1 digits")
        obj = [int(c) for c in bits]
    if not isinstance(obj, (list, tuple)) or any(b not in (0, 1) for b in obj):
        raise ParseError(f"{where}: degree must be an array of 0/1, got {obj!r}")
    if len(obj) != n:
        raise ParseError(f"{where}: degree {list(obj)} has length {len(obj)}, expected n = {n}")
    return Degree(tuple(obj))


def _preset(kind, args) -> AlgebraPresentation:
    try:
        return alg_mod.preset(kind, *args)
    except TypeError:
        raise ParseError(f"algebra: bad arguments {args!r} for preset {kind!r}") from None


def parse_algebra(obj, n: int | None) -> AlgebraPresentation:
    if isinstance(obj, str):
        m = _PRESET.match(obj)
        if not m:
            raise ParseError(f"algebra: cannot read preset {obj!r}")
        try:
            args = json.loads(f"[{m.group(2)}]") if m.group(2) else []
        except json.JSONDecodeError:
            raise ParseError(f"algebra: cannot read preset arguments in {obj!r}") from None
        alg = _preset(m.group(1), args)
    elif isinstance(obj, dict) and "preset" in obj:
        alg = _preset(obj["preset"], obj.get("args", []))
    elif isinstance(obj, dict) and "generators" in obj:
        if n is None:
            raise ParseError("algebra: a custom generator list needs the top-level field n")
        gens = []
        for k, g in enumerate(obj["generators"]):
            where = f"algebra.generators[{k}]"
            try:
                gens.append(GeneratorSpec(g["name"], parse_degree(g["degree"], n, where + ".degree"),
                                          g.get("square", 0)))
            except KeyError as exc:
                raise ParseError(f"{where}: missing field {exc}") from None
        alg = alg_mod.custom(n, gens)
    else:
        raise ParseError(f"algebra: expected a preset name or object, got {obj!r}")
    if n is not None and alg.n != n:
        raise ParseError(f"algebra: preset has n = {alg.n} but the file declares n = {n}")
    return alg


def load_problem(data: dict, source: str = "<memory>") -> ProblemFile:
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    n = data.get("n")
    if n is not None and (not isinstance(n, int) or n < 1):
        raise ParseError(f"{source}: n must be a positive integer")
    if "algebra" not in data:
        raise ParseError(f"{source}: missing field 'algebra'")
    try:
        alg = parse_algebra(data["algebra"], n)
    except GradedError as exc:
        raise _field_error(f"{source}: algebra", exc) from None
    n = alg.n
    ranks = None
    if "ranks" in data:
        try:
            ranks = RankVector.of(data["ranks"])
        except (GradedError, TypeError, ValueError) as exc:
            raise _field_error(f"{source}: ranks", exc) from None
        if len(ranks) != 1 << n:
            raise ParseError(f"{source}: ranks has {len(ranks)} entries, expected 2^n = {1 << n}")
    pi = parse_degree(data["pi"], n, f"{source}: pi") if data.get("pi") is not None else None
    matrices = {}
    for name, obj in (data.get("matrices") or {}).items():
        where = f"{source}: matrices.{name}"
        if not isinstance(obj, dict):
            raise ParseError(f"{where}: expected an object")
        obj = dict(obj)
        if "row_ranks" not in obj:
            if ranks is None:
                raise ParseError(f"{where}: no row_ranks and no top-level ranks")
            obj["row_ranks"] = list(ranks.ranks)
        if "degree" in obj:
            obj["degree"] = list(parse_degree(obj["degree"], n, where + ".degree").bits)
        try:
            matrices[name] = from_json(alg, obj)
        except DegreeViolation:
            raise
        except GradedError as exc:
            raise _field_error(where, exc) from None
    return ProblemFile(n, alg, ranks, pi, matrices, source)


def read_problem(path) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return load_problem(data, str(path))


def dump_problem(p: ProblemFile) -> dict:
    out = {"n": p.n}
    if p.algebra.label == "quaternion" or p.algebra.label.startswith("grassmann("):
        out["algebra"] = p.algebra.label
    else:
        out["algebra"] = {"generators": [
            {"name": g.name, "degree": g.degree.to_json(),
             "square": int(g.square) if g.square.denominator == 1 else str(g.square)}
            for g in p.algebra.generators
        ]}
    if p.ranks is not None:
        out["ranks"] = list(p.ranks.ranks)
    if p.pi is not None:
        out["pi"] = p.pi.to_json()
    out["matrices"] = {k: m.to_json() for k, m in p.matrices.items()}
    return out
