"""Catalog objects: line bundles, extension bundles and their formal sums.

Objects are identified by their parameters.  Every object knows its p-cycle
over the two-weight base, which is what the engine and the Hom solver use.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .cycles import PCycle, direct_sum, shift, twist_pointwise
from .lattice import LElement, WeightMismatch, WeightType, phi
from .polys import MonomialMatrix, Poly, canonical_poly, identity, twist_c


class CatalogError(ValueError):
    pass


def compact(x: LElement) -> str:
    """Short parseable rendering that skips zero terms, e.g. ``1*x3 - 1*c``."""
    parts = [(r, f"x{i}") for i, r in enumerate(x.residues, start=1) if r]
    if x.c:
        parts.append((x.c, "c"))
    if not parts:
        return "0"
    out = ""
    for n, name in parts:
        if not out:
            out = f"{n}*{name}"
        else:
            out += f" - {-n}*{name}" if n < 0 else f" + {n}*{name}"
    return out


@dataclass(frozen=True)
class LineBundle:
    y: LElement

    @property
    def wt(self) -> WeightType:
        return self.y.wt

    def twist(self, eta: LElement) -> "LineBundle":
        return LineBundle(self.y + eta)

    def sort_key(self):
        return (0, (), self.y.sort_key())

    def __str__(self):
        return f"O({compact(self.y)})"


@dataclass(frozen=True)
class ExtensionBundle:
    x: LElement
    y: LElement

    def __post_init__(self):
        wt = self.x.wt
        if self.y.wt != wt:
            raise WeightMismatch(f"{wt} vs {self.y.wt}")
        if wt.t != 3 or any(p < 2 for p in wt.p):
            raise CatalogError(f"extension bundles need three weights >= 2, got {wt}")
        if self.x.c != 0 or any(l > p - 2 for l, p in zip(self.x.residues, wt.p)):
            raise CatalogError(f"{compact(self.x)} is outside the cuboid 0 <= x <= delta of {wt}")

    @classmethod
    def auslander(cls, y: LElement) -> "ExtensionBundle":
        return cls(y.wt.zero(), y)

    @property
    def wt(self) -> WeightType:
        return self.x.wt

    @property
    def is_auslander(self) -> bool:
        return self.x.is_zero()

    def twist(self, eta: LElement) -> "ExtensionBundle":
        return ExtensionBundle(self.x, self.y + eta)

    def sort_key(self):
        return (1, self.x.residues, self.y.sort_key())

    def __str__(self):
        if self.is_auslander:
            return f"A({compact(self.y)})"
        tail = "" if self.y.is_zero() else f"({compact(self.y)})"
        return f"E<{compact(self.x)}>{tail}"


Bundle = Union[LineBundle, ExtensionBundle]


@dataclass(frozen=True)
class BundleSum:
    """Finite multiset of catalog objects over one weight type."""

    wt: WeightType
    items: tuple[tuple[Bundle, int], ...]

    @classmethod
    def of(cls, wt: WeightType, objs: Iterable[Bundle]) -> "BundleSum":
        counts = Counter()
        for b in objs:
            if isinstance(b, BundleSum):
                if b.wt != wt:
                    raise WeightMismatch(f"{b.wt} vs {wt}")
                for item, m in b.items:
                    counts[item] += m
                continue
            if b.wt != wt:
                raise WeightMismatch(f"{b.wt} vs {wt}")
            counts[b] += 1
        items = tuple(sorted(counts.items(), key=lambda kv: kv[0].sort_key()))
        return cls(wt, items)

    def __add__(self, other: "BundleSum") -> "BundleSum":
        return BundleSum.of(self.wt, [self, other])

    def summands(self) -> list[Bundle]:
        return [b for b, m in self.items for _ in range(m)]

    def distinct(self) -> list[Bundle]:
        return [b for b, _ in self.items]

    def __len__(self):
        return sum(m for _, m in self.items)

    def __iter__(self):
        return iter(self.summands())

    def only_extensions(self) -> "BundleSum":
        return BundleSum(self.wt, tuple((b, m) for b, m in self.items if isinstance(b, ExtensionBundle)))

    def __str__(self):
        if not self.items:
            return "0"
        return " + ".join(str(b) if m == 1 else f"{m}*{b}" for b, m in self.items)


def as_sum(obj, wt: WeightType | None = None) -> BundleSum:
    if isinstance(obj, BundleSum):
        return obj
    return BundleSum.of(wt or obj.wt, [obj])


# ---------------------------------------------------------------------------
# p-cycle forms


def line_to_pcycle(L: LineBundle) -> PCycle:
    y = L.y
    wt = y.wt
    P, k3 = wt.p[-1], y.residues[-1]
    b = phi(y)
    c = b.wt.c()
    step = P - k3 - 1
    entries, maps = [], []
    for i in range(P):
        d = b if i <= step else b + c
        entries.append((d,))
        if i == step:
            maps.append(MonomialMatrix((d,), (d + c,), ((canonical_poly(b.wt),),)))
        else:
            maps.append(identity((d,)))
    return PCycle(b.wt, tuple(entries), tuple(maps))


def cuboid_params(wt: WeightType) -> list[LElement]:
    return [wt.elem(list(l)) for l in itertools.product(*(range(p - 1) for p in wt.p))]


@lru_cache(maxsize=None)
def ext_base_cycle(x: LElement) -> PCycle:
    """The untwisted cycle of E<x>, before the base twist and the shift."""
    wt = x.wt
    base = wt.base()
    p1, p2, P = wt.p
    l1, l2, l3 = x.residues
    x1, x2, c = base.x(1), base.x(2), base.c()
    e0 = (-x1 + x2 * l2, x1 * l1 - x2)
    mid = (c - x1 - x2, x1 * l1 + x2 * l2)
    s = P - l3 - 1
    y0 = ((Poly.mono(0, p2 - l2 - 1), Poly.mono(p1 - l1 - 1, 0, -1)),
          (Poly.mono(l1 + 1, 0), Poly.mono(0, l2 + 1, -1)))
    ys = ((Poly.mono(0, l2 + 1), Poly.mono(p1 - l1 - 1, 0, -1)),
          (Poly.mono(l1 + 1, 0), Poly.mono(0, p2 - l2 - 1, -1)))
    top = twist_c(e0)
    entries, maps = [], []
    for i in range(P):
        if i == 0:
            entries.append(e0)
            maps.append(MonomialMatrix(e0, mid, y0))
        elif i < s:
            entries.append(mid)
            maps.append(identity(mid))
        elif i == s:
            entries.append(mid)
            maps.append(MonomialMatrix(mid, top, ys))
        else:
            entries.append(top)
            maps.append(identity(top))
    return PCycle(base, tuple(entries), tuple(maps))


@lru_cache(maxsize=None)
def shifted_base_cycle(x: LElement, k3: int) -> PCycle:
    return shift(ext_base_cycle(x), k3)


def ext_to_pcycle(E: ExtensionBundle) -> PCycle:
    # the base twist commutes with the shift
    y = E.y
    return twist_pointwise(shifted_base_cycle(E.x, y.residues[-1]), phi(y))


def to_pcycle(obj) -> PCycle:
    if isinstance(obj, LineBundle):
        return line_to_pcycle(obj)
    if isinstance(obj, ExtensionBundle):
        return ext_to_pcycle(obj)
    if isinstance(obj, BundleSum):
        parts = [to_pcycle(b) for b in obj.summands()]
        if not parts:
            raise CatalogError("the zero object has no p-cycle in this representation")
        return direct_sum(parts)
    raise TypeError(f"no p-cycle for {type(obj).__name__}")


# ---------------------------------------------------------------------------
# operations on sums


def aliases(E: Bundle) -> frozenset:
    """All parameter pairs naming the same bundle as ``E``.

    Reflecting two cuboid coordinates at once, ``l_i -> p_i - 2 - l_i`` and
    ``l_j -> p_j - 2 - l_j``, with the twist moved by
    ``(l_i + 1) x_i + (l_j + 1) x_j - c``, gives an isomorphic bundle.  The
    three such moves and the identity form a Klein four-group orbit.
    """
    if isinstance(E, LineBundle):
        return frozenset([E])
    wt = E.wt
    out = {E}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        l = list(E.x.residues)
        shift_ = -wt.c()
        for k in (i, j):
            shift_ = shift_ + wt.x(k + 1, l[k] + 1)
            l[k] = wt.p[k] - 2 - l[k]
        out.add(ExtensionBundle(wt.elem(l), E.y + shift_))
    return frozenset(out)


def canonical(E: Bundle) -> Bundle:
    return min(aliases(E), key=lambda b: b.sort_key())


def canonical_sum(B: BundleSum) -> BundleSum:
    return BundleSum.of(B.wt, [canonical(b) for b in B.summands()])


def same_object(a: Bundle, b: Bundle) -> bool:
    return canonical(a) == canonical(b)


def twist_object(B, eta: LElement):
    if isinstance(B, BundleSum):
        return BundleSum.of(B.wt, [b.twist(eta) for b in B.summands()])
    return B.twist(eta)


def tau(B):
    wt = B.wt
    return twist_object(B, wt.omega())


def add_membership(S: BundleSum, T: BundleSum, up_to_iso: bool = False) -> bool:
    """Every item of ``S`` occurs in ``T``; by parameters, or by alias orbit."""
    if S.wt != T.wt:
        raise WeightMismatch(f"{S.wt} vs {T.wt}")
    norm = canonical if up_to_iso else (lambda b: b)
    have = {norm(b) for b in T.distinct()}
    return all(norm(b) in have for b in S.distinct())


FAMILIES = ("cuboid", "auslander-T1", "auslander-T2", "thmB-T1k", "thmB-T2k")


def _need_p1_two(wt: WeightType, kind: str):
    if wt.t != 3 or wt.p[0] != 2 or min(wt.p) < 2:
        raise CatalogError(f"{kind} lives on weight types (2, p2, p3), got {wt}")


def family(kind: str, wt: WeightType, q: int | None = None, k: int | None = None) -> BundleSum:
    if kind == "cuboid":
        if wt.t != 3 or min(wt.p) < 2:
            raise CatalogError(f"cuboid needs three weights >= 2, got {wt}")
        return BundleSum.of(wt, [ExtensionBundle(x, wt.zero()) for x in cuboid_params(wt)])
    _need_p1_two(wt, kind)
    _, p2, p3 = wt.p
    xb = {i: wt.xbar(i) for i in (1, 2, 3)}
    A = ExtensionBundle.auslander
    if kind in ("auslander-T1", "auslander-T2"):
        g = xb[2] if kind == "auslander-T1" else xb[1]
        return BundleSum.of(wt, [A(g * i + xb[3] * j) for i in range(p3 - 1) for j in range(p2 - 1)])
    if kind not in ("thmB-T1k", "thmB-T2k"):
        raise CatalogError(f"unknown family {kind!r}; choose from {', '.join(FAMILIES)}")
    if q is None or not 1 <= q <= p3 - 2:
        raise CatalogError(f"q must satisfy 1 <= q <= p3 - 2 = {p3 - 2}, got {q}")
    if k not in (1, 2):
        raise CatalogError(f"k must be 1 or 2, got {k}")
    x3, c = wt.x(3), wt.c()
    if kind == "thmB-T1k":
        return BundleSum.of(wt, [A(xb[k] * i + xb[3] * j - x3 + c)
                                 for i in range(q) for j in range(p2 - 1)])
    out = []
    for j in range(p2 - 1):
        shift_ = xb[3] * j - x3 * (q + 1) + c
        out.append(ExtensionBundle(x3 * q, shift_))
        out.extend(A(xb[k] * i + shift_) for i in range(1, p3 - q - 1))
    return BundleSum.of(wt, out)


def primed_family(which: int, wt: WeightType, q: int, k: int) -> BundleSum:
    """The smaller tilting objects that the recollement glues into thmB-T1k/T2k.

    ``which = 1`` lives on (2, p2, q+1), ``which = 2`` on (2, p2, p3-q); ``wt``
    is the big weight type (2, p2, p3).
    """
    _need_p1_two(wt, "primed family")
    _, p2, p3 = wt.p
    if not 1 <= q <= p3 - 2 or k not in (1, 2):
        raise CatalogError(f"bad parameters q={q}, k={k} for {wt}")
    small = wt.with_last(q + 1) if which == 1 else wt.with_last(p3 - q)
    xb = {i: small.xbar(i) for i in (1, 2, 3)}
    x3 = small.x(3)
    A = ExtensionBundle.auslander
    if which == 1:
        return BundleSum.of(small, [A(xb[k] * i + xb[3] * j + x3 * q)
                                    for i in range(q) for j in range(p2 - 1)])
    return BundleSum.of(small, [A(xb[k] * i + xb[3] * j + x3 * (p3 - q - 1))
                                for i in range(p3 - q - 1) for j in range(p2 - 1)])
