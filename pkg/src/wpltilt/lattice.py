"""The string group L(p1, ..., pt) and its normal forms.

Every element is stored as residues ``l_i`` in ``[0, p_i)`` on the generators
``x_i`` plus an unbounded integer coefficient on the canonical element ``c``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence


class WeightMismatch(ValueError):
    pass


@dataclass(frozen=True)
class WeightType:
    p: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(v) for v in self.p)
        if not p:
            raise ValueError("a weight type needs at least one weight")
        if any(v < 1 for v in p):
            raise ValueError(f"weights must be >= 1, got {p}")
        object.__setattr__(self, "p", p)

    @classmethod
    def of(cls, *p: int) -> "WeightType":
        if len(p) == 1 and not isinstance(p[0], int):
            p = tuple(p[0])
        return cls(tuple(p))

    @property
    def t(self) -> int:
        return len(self.p)

    def __len__(self):
        return len(self.p)

    def __getitem__(self, i):
        return self.p[i]

    def __str__(self):
        return "(" + ",".join(str(v) for v in self.p) + ")"

    def with_last(self, p_last: int) -> "WeightType":
        return WeightType(self.p[:-1] + (p_last,))

    def base(self) -> "WeightType":
        """The weight type with the last weight dropped."""
        return WeightType(self.p[:-1])

    def volume(self) -> int:
        out = 1
        for v in self.p:
            out *= v
        return out

    # element constructors

    def zero(self) -> "LElement":
        return LElement(self, (0,) * self.t, 0)

    def elem(self, coeffs: Sequence[int], c: int = 0) -> "LElement":
        return normal_form(coeffs, c, self)

    def x(self, i: int, times: int = 1) -> "LElement":
        """``times * x_i`` with 1-based ``i``."""
        raw = [0] * self.t
        raw[i - 1] = times
        return normal_form(raw, 0, self)

    def c(self, times: int = 1) -> "LElement":
        return LElement(self, (0,) * self.t, times)

    def omega(self) -> "LElement":
        return normal_form([-1] * self.t, self.t - 2, self)

    def delta(self) -> "LElement":
        if self.t != 3:
            raise ValueError("delta is defined for weight triples")
        return normal_form([v - 2 for v in self.p], 0, self)

    def xbar(self, i: int) -> "LElement":
        if self.t != 3:
            raise ValueError("xbar is defined for weight triples")
        return self.x(i) + self.omega()

    def elements(self, c_range: Iterable[int]) -> list["LElement"]:
        """All normal forms whose c-coefficient lies in ``c_range``."""
        out = []
        for c in c_range:
            for res in itertools.product(*(range(v) for v in self.p)):
                out.append(LElement(self, tuple(res), c))
        return out


def normal_form(raw: Sequence[int], c: int, wt: WeightType) -> "LElement":
    if len(raw) != wt.t:
        raise ValueError(f"expected {wt.t} coefficients, got {len(raw)}")
    res = []
    carry = int(c)
    for a, p in zip(raw, wt.p):
        q, r = divmod(int(a), p)
        res.append(r)
        carry += q
    return LElement(wt, tuple(res), carry)


@dataclass(frozen=True)
class LElement:
    wt: WeightType
    residues: tuple[int, ...]
    c: int

    def __post_init__(self):
        if len(self.residues) != self.wt.t:
            raise ValueError("residue count does not match the weight type")
        for r, p in zip(self.residues, self.wt.p):
            if not 0 <= r < p:
                raise ValueError(f"residue {r} out of range for weight {p}; use normal_form")

    def _check(self, other: "LElement"):
        if not isinstance(other, LElement):
            return NotImplemented
        if other.wt != self.wt:
            raise WeightMismatch(f"{self.wt} vs {other.wt}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return normal_form([a + b for a, b in zip(self.residues, other.residues)],
                           self.c + other.c, self.wt)

    def __neg__(self):
        return normal_form([-a for a in self.residues], -self.c, self.wt)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        return normal_form([a * n for a in self.residues], self.c * n, self.wt)

    __rmul__ = __mul__

    def is_effective(self) -> bool:
        return self.c >= 0

    def __le__(self, other: "LElement") -> bool:
        return (other - self).is_effective()

    def __ge__(self, other: "LElement") -> bool:
        return (self - other).is_effective()

    def is_zero(self) -> bool:
        return self.c == 0 and not any(self.residues)

    def coeff(self, i: int) -> int:
        """Residue on ``x_i`` (1-based)."""
        return self.residues[i - 1]

    def raw(self) -> tuple[tuple[int, ...], int]:
        return self.residues, self.c

    def reweigh(self, wt: WeightType) -> "LElement":
        """Re-read the same normal-form coefficients in another group of equal length."""
        if wt.t != self.wt.t:
            raise WeightMismatch(f"cannot move {self.wt} element to {wt}")
        return normal_form(self.residues, self.c, wt)

    def sort_key(self):
        return (self.c, self.residues)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"LElement({self.wt}, {self.residues}, c={self.c})"


def render(x: LElement) -> str:
    """Canonical text ``l1*x1 + l2*x2 + l3*x3 + l*c``."""
    parts = [f"{r}*x{i}" for i, r in enumerate(x.residues, start=1)]
    parts.append(f"{x.c}*c")
    return " + ".join(parts).replace("+ -", "- ")


def phi(x: LElement) -> LElement:
    """Drop the last generator's term of the normal form."""
    if x.wt.t < 2:
        raise ValueError("phi needs at least two weights")
    return LElement(x.wt.base(), x.residues[:-1], x.c)


def lift(base: LElement, last: int, wt: WeightType) -> LElement:
    """Inverse of ``phi`` on normal forms: append ``last * x_t`` to a base element."""
    if wt.base() != base.wt:
        raise WeightMismatch(f"{base.wt} is not the base of {wt}")
    return normal_form(base.residues + (last,), base.c, wt)


def constants(wt: WeightType) -> dict[str, LElement]:
    out = {"c": wt.c(), "w": wt.omega()}
    if wt.t == 3:
        out["d"] = wt.delta()
        for i in (1, 2, 3):
            out[f"xb{i}"] = wt.xbar(i)
    return out


def enumerate_interval(a: LElement, b: LElement) -> list[LElement]:
    """All ``xi`` with ``a <= xi <= b``, sorted."""
    if a.wt != b.wt:
        raise WeightMismatch(f"{a.wt} vs {b.wt}")
    span = (b - a).c
    if span < 0:
        return []
    out = []
    for d in a.wt.elements(range(0, span + 1)):
        if (d <= b - a):
            out.append(a + d)
    out.sort(key=LElement.sort_key)
    return out
