"""Homogeneous morphisms between sums of line bundles on the two-weight base.

The base curve has the free bigraded coordinate ring ``k[x1, x2]`` with
``deg x_i = x_i`` in L(p1, p2), so Hom(O(a), O(b)) is spanned by the monomials
of degree ``b - a``.  Coefficients are exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import LElement, WeightMismatch, WeightType, normal_form

Exp = tuple[int, int]


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    exponents: Exp

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("monomial coefficient must be nonzero")

    def degree(self, wt: WeightType) -> LElement:
        return exp_degree(self.exponents, wt)

    def __str__(self):
        a1, a2 = self.exponents
        return f"{self.coeff} * x1^{a1} * x2^{a2}"


def exp_degree(e: Exp, wt: WeightType) -> LElement:
    return normal_form(list(e), 0, wt)


class Poly:
    """Sparse polynomial in x1, x2 with Fraction coefficients; immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean: dict[Exp, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                if c:
                    clean[tuple(e)] = clean.get(tuple(e), Fraction(0)) + Fraction(c)
        self.terms = {e: c for e, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def mono(cls, a1: int, a2: int, c=1) -> "Poly":
        return cls({(a1, a2): Fraction(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return len(self.terms) == 1 and (0, 0) in self.terms

    def scalar(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_scalar():
            raise ValueError("not a scalar")
        return self.terms[(0, 0)]

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Fraction(other)
            return Poly({e: c * other for e, c in self.terms.items()})
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def key(self):
        return tuple(sorted(self.terms.items()))

    def monomials(self) -> list[Monomial]:
        return [Monomial(c, e) for e, c in sorted(self.terms.items())]

    def leading_coeff(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[max(self.terms)]

    def ratio_to(self, other: "Poly"):
        """The scalar ``s`` with ``self == s * other``, or None."""
        if self.is_zero() or other.is_zero():
            return Fraction(1) if self.is_zero() and other.is_zero() else None
        if self.terms.keys() != other.terms.keys():
            return None
        e0 = next(iter(self.terms))
        s = self.terms[e0] / other.terms[e0]
        for e, c in self.terms.items():
            if c != s * other.terms[e]:
                return None
        return s

    def is_homogeneous_of(self, deg: LElement) -> bool:
        return all(exp_degree(e, deg.wt) == deg for e in self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(str(m) for m in self.monomials())

    def __repr__(self):
        return f"Poly({self.key()})"


ZERO = Poly()
ONE = Poly.const(1)


def canonical_poly(wt: WeightType) -> Poly:
    """``x2^p2 - x1^p1``: the map O -> O(c) at the ordinary point 1."""
    p1, p2 = wt.p
    return Poly({(0, p2): Fraction(1), (p1, 0): Fraction(-1)})


def y_hom_basis(a: LElement, b: LElement) -> list[Monomial]:
    """Monomial basis of Hom(O(a), O(b)) on the two-weight base."""
    if a.wt != b.wt:
        raise WeightMismatch(f"{a.wt} vs {b.wt}")
    if a.wt.t != 2:
        raise ValueError("the monomial basis is for two-weight bases")
    d = b - a
    (k1, k2), k = d.residues, d.c
    p1, p2 = a.wt.p
    return [Monomial(Fraction(1), (k1 + s * p1, k2 + (k - s) * p2)) for s in range(k + 1)]


def hom_exponents(a: LElement, b: LElement) -> list[Exp]:
    return [m.exponents for m in y_hom_basis(a, b)]


@dataclass(frozen=True)
class MonomialMatrix:
    """Matrix of homogeneous polynomials; entry (i, j) maps source j to target i."""

    source: tuple[LElement, ...]
    target: tuple[LElement, ...]
    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "entries", tuple(tuple(r) for r in self.entries))
        if len(self.entries) != len(self.target):
            raise ValueError("row count must match target length")
        for row in self.entries:
            if len(row) != len(self.source):
                raise ValueError("column count must match source length")

    @property
    def wt(self) -> WeightType:
        seq = self.source or self.target
        if not seq:
            raise ValueError("empty matrix has no weight type")
        return seq[0].wt

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target), len(self.source)

    def check_homogeneous(self) -> bool:
        for i, t in enumerate(self.target):
            for j, s in enumerate(self.source):
                e = self.entries[i][j]
                if e.is_zero():
                    continue
                d = t - s
                if not d.is_effective() or not e.is_homogeneous_of(d):
                    return False
        return True

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def twist(self, eta: LElement) -> "MonomialMatrix":
        return MonomialMatrix(tuple(d + eta for d in self.source),
                              tuple(d + eta for d in self.target), self.entries)

    def is_identity(self) -> bool:
        if self.source != self.target:
            return False
        n = len(self.source)
        return all(self.entries[i][j] == (ONE if i == j else ZERO)
                   for i in range(n) for j in range(n))

    def key(self):
        return (self.source, self.target, tuple(tuple(e.key() for e in r) for r in self.entries))

    def __str__(self):
        rows = ["[" + ", ".join(str(e) for e in r) + "]" for r in self.entries]
        return "[" + ", ".join(rows) + "]"


def identity(degrees: Sequence[LElement]) -> MonomialMatrix:
    n = len(degrees)
    return MonomialMatrix(tuple(degrees), tuple(degrees),
                          tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))


def diagonal(degrees: Sequence[LElement], targets: Sequence[LElement], polys: Sequence[Poly]) -> MonomialMatrix:
    n = len(degrees)
    return MonomialMatrix(tuple(degrees), tuple(targets),
                          tuple(tuple(polys[i] if i == j else ZERO for j in range(n)) for i in range(n)))


def matrix(source: Sequence[LElement], target: Sequence[LElement], rows: Iterable[Iterable[Poly]]) -> MonomialMatrix:
    return MonomialMatrix(tuple(source), tuple(target), tuple(tuple(r) for r in rows))


def compose(g: MonomialMatrix, f: MonomialMatrix) -> MonomialMatrix:
    """``g o f``; requires ``source(g) == target(f)``."""
    if g.source != f.target:
        raise DegreeMismatch("inner degree sequences differ")
    n_in = len(g.source)
    rows = []
    for i in range(len(g.target)):
        row = []
        for j in range(len(f.source)):
            acc = ZERO
            for k in range(n_in):
                a, b = g.entries[i][k], f.entries[k][j]
                if a.terms and b.terms:
                    acc = acc + a * b
            row.append(acc)
        rows.append(row)
    return MonomialMatrix(f.source, g.target, tuple(tuple(r) for r in rows))


def _find_scalar(entries: list[list[Poly]]):
    n_rows = len(entries)
    n_cols = len(entries[0]) if entries else 0
    for j in range(n_cols):
        for i in range(n_rows):
            if entries[i][j].is_scalar():
                return i, j
    return None


def unit_split(m: MonomialMatrix) -> tuple[MonomialMatrix, int]:
    """Split off identity summands carried by scalar entries.

    Returns the reduced matrix and the number of pivots removed.
    """
    src, tgt = list(m.source), list(m.target)
    ent = [list(r) for r in m.entries]
    count = 0
    while True:
        pos = _find_scalar(ent)
        if pos is None:
            break
        r, c = pos
        s = ent[r][c].scalar()
        for i in range(len(ent)):
            if i != r and not ent[i][c].is_zero():
                f = ent[i][c] * (1 / s)
                ent[i] = [ent[i][k] - f * ent[r][k] for k in range(len(src))]
        for k in range(len(src)):
            if k != c and not ent[r][k].is_zero():
                g = ent[r][k] * (1 / s)
                for i in range(len(ent)):
                    ent[i][k] = ent[i][k] - ent[i][c] * g
        del ent[r]
        for row in ent:
            del row[c]
        del src[c]
        del tgt[r]
        count += 1
    return MonomialMatrix(tuple(src), tuple(tgt), tuple(tuple(r) for r in ent)), count


def twist_c(degrees: Sequence[LElement]) -> tuple[LElement, ...]:
    return tuple(d + d.wt.c() for d in degrees)
