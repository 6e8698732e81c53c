"""Hom and Ext dimensions between p-cycles, and the stable quotient.

Coherent Hom is the kernel of the commuting-square system; the stable Hom
divides out everything that factors through a line bundle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import catalog
from .catalog import ExtensionBundle, LineBundle, as_sum
from .cycles import PCycle, require_valid, twist_cycle, twist_pointwise
from .lattice import LElement, WeightType, enumerate_interval
from .linalg import Echelon, nullspace
from .polys import MonomialMatrix, Poly, compose, hom_exponents


class WindowInstability(AssertionError):
    """Padding the mediating window changed a stable Hom dimension."""


class UnsupportedWeight(ValueError):
    pass


# ---------------------------------------------------------------------------
# line bundles


def hom_dim_line(a: LElement, b: LElement, mode: str = "closed") -> int:
    if a.wt != b.wt:
        raise ValueError(f"{a.wt} vs {b.wt}")
    d = b - a
    if mode == "closed":
        return max(0, d.c + 1)
    if mode != "oracle":
        raise ValueError("mode is 'closed' or 'oracle'")
    # count x1^a1 x2^a2 x3^a3 with a3 < p3; x3^p3 rewrites through the relation
    wt = a.wt
    p1, p2, p3 = wt.p
    bound = max(0, d.c + 2)
    count = 0
    for a3 in range(p3):
        for a1 in range(p1 * bound + p1):
            for a2 in range(p2 * bound + p2):
                if wt.elem([a1, a2, a3]) == d:
                    count += 1
    return count


# ---------------------------------------------------------------------------
# coherent Hom between cycles


@dataclass
class HomReport:
    source: str
    target: str
    mode: str
    dimension: int
    basis: Optional[list] = None
    window: Optional[int] = None
    stable_window_check: Optional[bool] = None
    coherent_dimension: Optional[int] = None

    def as_dict(self) -> dict:
        out = {"source": self.source, "target": self.target, "mode": self.mode,
               "dimension": self.dimension, "window": self.window,
               "stable_window_check": self.stable_window_check}
        if self.coherent_dimension is not None:
            out["coherent_dimension"] = self.coherent_dimension
        return out


def _unknowns(E: PCycle, F: PCycle):
    index = {}
    for i in range(E.period):
        for a, t in enumerate(F.entries[i]):
            for b, s in enumerate(E.entries[i]):
                for e in hom_exponents(s, t):
                    index[(i, a, b, e)] = len(index)
    return index


def _equations(E: PCycle, F: PCycle, index: dict) -> list[dict]:
    p = E.period
    by_entry: dict = {}
    for (i, a, b, e), v in index.items():
        by_entry.setdefault((i, a, b), []).append((e, v))
    rows: dict = {}

    def put(key, v, coeff):
        row = rows.setdefault(key, {})
        row[v] = row.get(v, 0) + coeff

    for i in range(p):
        nxt = (i + 1) % p
        xE, xF = E.maps[i], F.maps[i]
        nE, nF = len(E.entries[i]), len(F.entries[i])
        nE1 = len(E.entries[nxt])
        # u_{i+1} x_i
        for r in range(nF):
            for t in range(nE1):
                for e, v in by_entry.get((nxt, r, t), ()):
                    for s in range(nE):
                        for f, alpha in xE.entries[t][s].terms.items():
                            put((i, r, s, (e[0] + f[0], e[1] + f[1])), v, alpha)
        # - x'_i u_i
        for r in range(len(F.entries[nxt])):
            for t in range(nF):
                for f, alpha in xF.entries[r][t].terms.items():
                    for s in range(nE):
                        for e, v in by_entry.get((i, t, s), ()):
                            put((i, r, s, (e[0] + f[0], e[1] + f[1])), v, -alpha)
    return [{k: c for k, c in row.items() if c} for row in rows.values()]


def _vec_to_chain(E: PCycle, F: PCycle, index: dict, vec: dict) -> tuple:
    mats = []
    for i in range(E.period):
        ent = [[{} for _ in E.entries[i]] for _ in F.entries[i]]
        mats.append(ent)
    for (i, a, b, e), v in index.items():
        c = vec.get(v)
        if c:
            mats[i][a][b][e] = c
    return tuple(MonomialMatrix(E.entries[i], F.entries[i],
                                tuple(tuple(Poly(d) for d in row) for row in mats[i]))
                 for i in range(E.period))


def _chain_to_vec(u: tuple) -> dict:
    vec = {}
    for i, m in enumerate(u):
        for a, row in enumerate(m.entries):
            for b, poly in enumerate(row):
                for e, c in poly.terms.items():
                    vec[(i, a, b, e)] = c
    return vec


@lru_cache(maxsize=200_000)
def _solve_normalized(E: PCycle, F: PCycle):
    index = _unknowns(E, F)
    if not index:
        return index, []
    return index, nullspace(_equations(E, F, index), len(index))


def _check_pair(E: PCycle, F: PCycle):
    if E.base != F.base or E.period != F.period:
        raise ValueError("cycles must share the base and the period")


def _normalize(E: PCycle, F: PCycle):
    if E.rank == 0:
        return E, F, None
    eta = E.entries[0][0]
    return twist_pointwise(E, -eta), twist_pointwise(F, -eta), eta


def hom_dim(E: PCycle, F: PCycle) -> int:
    _check_pair(E, F)
    En, Fn, _ = _normalize(E, F)
    return len(_solve_normalized(En, Fn)[1])


def hom_basis(E: PCycle, F: PCycle) -> list[tuple]:
    """Basis of Hom(E, F) as chain maps ``(u_0, ..., u_{p-1})``."""
    _check_pair(E, F)
    En, Fn, eta = _normalize(E, F)
    index, null = _solve_normalized(En, Fn)
    out = []
    for vec in null:
        u = _vec_to_chain(En, Fn, index, vec)
        out.append(tuple(m.twist(eta) for m in u) if eta is not None else u)
    return out


def is_chain_map(E: PCycle, F: PCycle, u: tuple) -> bool:
    p = E.period
    for i in range(p):
        nxt = u[i + 1] if i < p - 1 else u[0].twist(E.base.c())
        if compose(nxt, E.maps[i]).key()[2] != compose(F.maps[i], u[i]).key()[2]:
            return False
    return True


def _cycle(obj) -> PCycle:
    if isinstance(obj, PCycle):
        return obj
    return catalog.to_pcycle(obj)


def _label(obj) -> str:
    return "<p-cycle>" if isinstance(obj, PCycle) else str(obj)


def hom_space(E, F, with_basis: bool = False) -> HomReport:
    CE, CF = _cycle(E), _cycle(F)
    require_valid(CE)
    require_valid(CF)
    if with_basis:
        basis = hom_basis(CE, CF)
        return HomReport(_label(E), _label(F), "coherent", len(basis), basis=basis)
    return HomReport(_label(E), _label(F), "coherent", hom_dim(CE, CF))


def twist_any(obj, eta: LElement):
    if isinstance(obj, PCycle):
        return twist_cycle(obj, eta)
    return catalog.twist_object(obj, eta)


def ext1_dim(X, Y) -> int:
    """dim Ext^1(X, Y) through Serre duality, as dim Hom(Y, X(w))."""
    CX = _cycle(X)
    w = CX.weight().omega()
    return hom_dim(_cycle(Y), twist_cycle(CX, w))


# ---------------------------------------------------------------------------
# stable Hom


def filtration_degrees(B) -> list[LElement]:
    """Degrees of line bundles in a filtration of ``B`` with line-bundle factors."""
    out = []
    for b in as_sum(B).distinct():
        if isinstance(b, LineBundle):
            out.append(b.y)
        else:
            out.extend([b.wt.omega() + b.y, b.x + b.y])
    return out


def mediating_window(E, F, pad: int = 0) -> list[LElement]:
    """Line-bundle degrees through which a map E -> F can factor, padded by ``pad`` c-steps."""
    wt = E.wt
    c = wt.c()
    seen = set()
    for s in filtration_degrees(E):
        for q in filtration_degrees(F):
            for xi in enumerate_interval(s - c * pad, q + c * pad):
                seen.add(xi)
    return sorted(seen, key=LElement.sort_key)


def _factoring_rank(CE: PCycle, CF: PCycle, window, target: int, ech: Echelon) -> int:
    for xi in window:
        L = catalog.line_to_pcycle(LineBundle(xi))
        left = hom_basis(CE, L)
        if not left:
            continue
        right = hom_basis(L, CF)
        for f, g in itertools.product(left, right):
            comp = tuple(compose(g[i], f[i]) for i in range(CE.period))
            ech.add(_chain_to_vec(comp))
            if ech.rank >= target:
                return ech.rank
    return ech.rank


def _stable_pair(E, F) -> tuple[int, int, bool, int]:
    """(stable dim, coherent dim, window check, window size) for indecomposable catalog objects."""
    if isinstance(E, LineBundle) or isinstance(F, LineBundle):
        return 0, hom_dim(catalog.to_pcycle(E), catalog.to_pcycle(F)), True, 0
    eta = -E.y
    return _stable_normalized(E.twist(eta), F.twist(eta))


def _factors_can_meet(E, F) -> bool:
    # a nonzero map E -> F is nonzero on some pair of filtration factors
    return any((q - s).is_effective() for s in filtration_degrees(E) for q in filtration_degrees(F))


@lru_cache(maxsize=200_000)
def _stable_normalized(E: ExtensionBundle, F: ExtensionBundle):
    if not _factors_can_meet(E, F):
        return 0, 0, True, 0
    CE, CF = catalog.to_pcycle(E), catalog.to_pcycle(F)
    total = hom_dim(CE, CF)
    if total == 0:
        return 0, 0, True, 0
    window = mediating_window(E, F)
    ech = Echelon()
    r = _factoring_rank(CE, CF, window, total, ech)
    if r == total:
        return 0, total, True, len(window)
    # the padded window may only confirm the result
    inner = set(window)
    extra = [xi for xi in mediating_window(E, F, pad=1) if xi not in inner]
    r2 = _factoring_rank(CE, CF, extra, total, ech)
    if r2 != r:
        raise WindowInstability(f"stable Hom({E}, {F}) moved from {total - r} to {total - r2} "
                                "after padding the window")
    return total - r, total, True, len(window)


def stable_hom(E, F) -> HomReport:
    """Hom in the stable category of vector bundles, for catalog objects."""
    A, B = as_sum(E), as_sum(F)
    dim = coh = 0
    size = 0
    for a, ma in A.items:
        for b, mb in B.items:
            s, t, _, w = _stable_pair(a, b)
            dim += s * ma * mb
            coh += t * ma * mb
            size += w
    return HomReport(str(E), str(F), "stable", dim, window=size, stable_window_check=True,
                     coherent_dimension=coh)


def stable_dim(E, F) -> int:
    return stable_hom(E, F).dimension


def stable_basis(E: ExtensionBundle, F: ExtensionBundle) -> tuple[list, Echelon]:
    """Coherent basis of Hom(E, F) together with the echelon of factoring maps.

    Reducing a chain map against the echelon gives its class in the stable Hom.
    """
    CE, CF = catalog.to_pcycle(E), catalog.to_pcycle(F)
    basis = hom_basis(CE, CF)
    ech = Echelon()
    if basis and not (isinstance(E, LineBundle) or isinstance(F, LineBundle)):
        _factoring_rank(CE, CF, mediating_window(E, F, pad=1), len(basis), ech)
    return basis, ech


# ---------------------------------------------------------------------------
# suspension and the Auslander criterion


def _need_two(wt: WeightType):
    if wt.p[0] != 2:
        raise UnsupportedWeight(f"suspension is only available when p1 = 2, got {wt}")


def suspend(B, n: int):
    """The shift [n], realized as the twist by n*x1 when p1 = 2."""
    wt = B.wt
    _need_two(wt)
    return catalog.twist_object(B, wt.x(1, n))


def _twist_param(obj) -> LElement:
    if isinstance(obj, LElement):
        return obj
    if isinstance(obj, ExtensionBundle) and obj.is_auslander:
        return obj.y
    raise ValueError(f"{obj} is not an Auslander bundle")


def criterion_set(wt: WeightType) -> list[LElement]:
    return [wt.zero()] + [wt.xbar(i) for i in (1, 2, 3)]


def auslander_vanishing(a, b, n: int = 0) -> str:
    """'nonzero' iff stable Hom(E(a), E(b)[n]) is nonzero, by the difference criterion."""
    a, b = _twist_param(a), _twist_param(b)
    wt = a.wt
    _need_two(wt)
    d = b + wt.x(1, n) - a
    return "nonzero" if d in criterion_set(wt) else "zero"


def solve_all_n(a, b) -> list[int]:
    """All n with stable Hom(E(a), E(b)[n]) nonzero; n*x1 = t - (b - a) has at most one root per t."""
    a, b = _twist_param(a), _twist_param(b)
    wt = a.wt
    _need_two(wt)
    out = set()
    for t in criterion_set(wt):
        r = t - (b - a)
        if any(r.residues[1:]):
            continue
        out.add(2 * r.c + r.residues[0])
    return sorted(out)
