"""Sparse exact linear algebra over Fraction.

Vectors are dicts ``{column: Fraction}`` with no stored zeros.  Only the two
things the Hom solver needs live here: a kernel basis and an incremental
rank counter.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Vec = dict


def _axpy(y: Vec, a: Fraction, x: Vec) -> Vec:
    """y + a*x, dropping cancellations."""
    out = dict(y)
    for k, v in x.items():
        s = out.get(k, 0) + a * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


class Echelon:
    """Rows kept in reduced echelon form; ``add`` reports whether a row was new."""

    def __init__(self):
        self.pivots: dict[int, Vec] = {}

    def reduce(self, v: Vec) -> Vec:
        v = {k: Fraction(x) for k, x in v.items() if x}
        # pivot rows are fully reduced against each other, so one pass suffices
        for col in [k for k in v if k in self.pivots]:
            a = v.get(col)
            if a:
                v = _axpy(v, -a, self.pivots[col])
        return v

    def add(self, v: Vec) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        col = min(v)
        inv = 1 / v[col]
        v = {k: x * inv for k, x in v.items()}
        for c, row in list(self.pivots.items()):
            a = row.get(col)
            if a:
                self.pivots[c] = _axpy(row, -a, v)
        self.pivots[col] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows: Iterable[Vec]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def nullspace(rows: Iterable[Vec], ncols: int) -> list[Vec]:
    """Basis of ``{u : r.u = 0 for every row r}`` in ``Q^ncols``."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    basis = []
    for free in range(ncols):
        if free in ech.pivots:
            continue
        u = {free: Fraction(1)}
        for col, row in ech.pivots.items():
            a = row.get(free)
            if a:
                u[col] = -a
        basis.append(u)
    return basis
