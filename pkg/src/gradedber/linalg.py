"""Exact rational linear algebra on sparse rows.

Rows are ``dict[int, Fraction]`` mapping column index to a nonzero value.
Sizes here are a few hundred at most, and the matrices coming out of the
algebra are very sparse, so plain Gauss-Jordan on dict rows is plenty.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Row = dict


def _eliminate(rows: list[dict], ncols: int | None = None):
    """Reduce ``rows`` in place to reduced row echelon form.

    Returns the list of ``(pivot_col, row)`` pairs.  Rows may carry extra
    bookkeeping columns beyond ``ncols``; those are never chosen as pivots.
    """
    pivots: list[tuple[int, dict]] = []
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        for col, prow in pivots:
            v = row.get(col)
            if v:
                for c, pv in prow.items():
                    nv = row.get(c, 0) - v * pv
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        cands = [c for c in row if ncols is None or c < ncols]
        if not cands:
            if row:
                pivots.append((None, row))
            continue
        col = min(cands)
        inv = 1 / Fraction(row[col])
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into earlier pivots to keep things reduced
        for k, (pc, prow) in enumerate(pivots):
            v = prow.get(col)
            if v:
                for c, rv in row.items():
                    nv = prow.get(c, 0) - v * rv
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivots.append((col, row))
    return pivots


def rank(rows: Iterable[dict]) -> int:
    return sum(1 for col, _ in _eliminate([dict(r) for r in rows]) if col is not None)


def solve(columns: Sequence[dict], rhs: dict, nrows: int) -> list[Fraction] | None:
    """Solve ``sum_j x_j * columns[j] == rhs`` exactly.

    ``columns[j]`` maps row index to value.  Returns one solution (free
    variables set to zero) or ``None`` if the system is inconsistent.
    """
    ncols = len(columns)
    # transpose into row form with the right-hand side as column ``ncols``
    rows = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows[i][j] = Fraction(v)
    for i, v in rhs.items():
        if v:
            rows[i][ncols] = Fraction(v)
    pivots = _eliminate(rows, ncols)
    x = [Fraction(0)] * ncols
    for col, row in pivots:
        if col is None:
            if row.get(ncols):
                return None
            continue
        x[col] = row.get(ncols, Fraction(0))
    return x


def dense_rank(matrix: Sequence[Sequence]) -> int:
    return rank({j: Fraction(v) for j, v in enumerate(r) if v} for r in matrix)
