"""Closed-form reduction and insertion functors on catalog objects.

``reduce_closed(B, j)`` goes from X(p1, p2, p3) to X(p1, p2, p3 - 1) and
``insert_closed(B, j)`` to X(p1, p2, p3 + 1).  Any integer index is accepted;
it is first moved into the window where the case split is stated and the
remaining multiple of the period becomes a twist by x3 on the target.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import catalog
from .catalog import BundleSum, ExtensionBundle, LineBundle, as_sum, canonical_sum
from .cycles import Unrecognized, insert_at, recognize, reduce_at, shift
from .lattice import WeightType

REDUCE, INSERT = "reduce", "insert"


def _window(j: int, lo: int, period: int) -> tuple[int, int]:
    """Write ``j = j0 + n*period`` with ``lo <= j0 < lo + period``."""
    n, r = divmod(j - lo, period)
    return lo + r, n


def _target(wt: WeightType, direction: str) -> WeightType:
    p3 = wt.p[-1]
    if direction == REDUCE:
        if p3 < 2:
            raise ValueError(f"cannot reduce the last weight of {wt}")
        return wt.with_last(p3 - 1)
    if direction == INSERT:
        return wt.with_last(p3 + 1)
    raise ValueError(f"direction must be {REDUCE!r} or {INSERT!r}")


def _reduce_one(B, j: int) -> list:
    wt = B.wt
    tgt = _target(wt, REDUCE)
    p3 = wt.p[-1]
    x1, x2, x3, c = tgt.x(1), tgt.x(2), tgt.x(3), tgt.c()
    y = B.y.reweigh(tgt)
    k3 = B.y.residues[-1]
    if isinstance(B, LineBundle):
        j0, n = _window(j, 0, p3)
        out = [LineBundle(y if j0 < p3 - k3 else y - x3)]
    else:
        l1, l2, l3 = B.x.residues
        j0, n = _window(j, 1 - k3, p3)
        x = B.x.reweigh(tgt)
        if l3 == 0 and j0 == p3 - k3:
            out = [LineBundle(c - x1 - x2 - x3 + y), LineBundle(x + y - x3)]
        elif l3 == p3 - 2 and j0 == 1 - k3:
            out = [LineBundle(c - x1 + x2 * l2 - x3 + y), LineBundle(c + x1 * l1 - x2 - x3 + y)]
        elif j0 < p3 - l3 - k3:
            out = [ExtensionBundle(x, y)]
        else:
            out = [ExtensionBundle(x - x3, y)]
    return [b.twist(x3 * (-n)) for b in out]


def _insert_one(B, j: int) -> list:
    wt = B.wt
    tgt = _target(wt, INSERT)
    p3 = wt.p[-1]
    x3 = tgt.x(3)
    y = B.y.reweigh(tgt)
    k3 = B.y.residues[-1]
    if isinstance(B, LineBundle):
        j0, n = _window(j, 0, p3)
        out = LineBundle(y if j0 < p3 - k3 else y + x3)
    else:
        j0, n = _window(j, 1 - k3, p3)
        x = B.x.reweigh(tgt)
        l3 = B.x.residues[-1]
        out = ExtensionBundle(x if j0 < p3 - l3 - k3 else x + x3, y)
    return [out.twist(x3 * n)]


def reduce_closed(B, j: int) -> BundleSum:
    B = as_sum(B)
    tgt = _target(B.wt, REDUCE)
    return BundleSum.of(tgt, [r for b in B.summands() for r in _reduce_one(b, j)])


def insert_closed(B, j: int) -> BundleSum:
    B = as_sum(B)
    tgt = _target(B.wt, INSERT)
    return BundleSum.of(tgt, [r for b in B.summands() for r in _insert_one(b, j)])


def apply_closed(B, j: int, direction: str) -> BundleSum:
    return reduce_closed(B, j) if direction == REDUCE else insert_closed(B, j)


def apply_sequence(B, J: Sequence[int], direction: str, stable: bool = False) -> BundleSum:
    """Composite functor over an index sequence.

    Insertions ``psi_J = psi_{j_q} ... psi_{j_1}`` apply ``j_1`` first;
    reductions ``psi^J = psi^{j_1} ... psi^{j_q}`` apply ``j_q`` first.  With
    ``stable=True`` line bundles are dropped after every step, which is the
    functor induced on the stable category.
    """
    B = as_sum(B)
    order = list(J) if direction == INSERT else list(reversed(J))
    for j in order:
        B = apply_closed(B, j, direction)
        if stable:
            B = B.only_extensions()
    return B


# ---------------------------------------------------------------------------
# chain-level route


def engine_apply(C, j: int, direction: str):
    """The chain-level functor with an arbitrary integer index.

    Reduction: ``psi^{j0 + n p} = shift^{-n} psi^{j0}`` with ``p`` the source period.
    Insertion: ``psi_{j0 + n P} = psi_{j0} shift^n`` with ``P`` the target period.
    """
    p = C.period
    if direction == REDUCE:
        n, j0 = divmod(j, p)
        return shift(reduce_at(C, j0), -n)
    n, j0 = divmod(j, p + 1)
    return insert_at(shift(C, n), j0)


@dataclass(frozen=True)
class CrossCheck:
    agree: bool
    closed: BundleSum
    engine: object
    detail: str

    def as_dict(self) -> dict:
        return {"agree": self.agree, "closed": str(self.closed), "engine": str(self.engine),
                "detail": self.detail}


def crosscheck(B, j: int, direction: str) -> CrossCheck:
    B = as_sum(B)
    closed = apply_closed(B, j, direction)
    got = recognize(engine_apply(catalog.to_pcycle(B), j, direction))
    if isinstance(got, Unrecognized):
        return CrossCheck(False, closed, got, f"engine output unrecognized: {got.reason}")
    if got.wt != closed.wt:
        return CrossCheck(False, closed, got, f"weight types differ: {got.wt} vs {closed.wt}")
    ok = canonical_sum(got) == canonical_sum(closed)
    return CrossCheck(ok, closed, got, "same objects" if ok else "objects differ")


def crosscheck_sweep(objs: Iterable, indices: Iterable[int], direction: str) -> list[tuple]:
    """Failures of ``crosscheck`` over a grid, as (object, j, report) triples."""
    indices = list(indices)
    bad = []
    for B in objs:
        for j in indices:
            r = crosscheck(B, j, direction)
            if not r.agree:
                bad.append((B, j, r))
    return bad
