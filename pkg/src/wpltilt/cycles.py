"""p-cycles over the two-weight base and the chain-level functors on them.

A p-cycle ``E_0 -> E_1 -> ... -> E_{p-1} -> E_0(c)`` is stored as its entry
degree sequences and the p matrices between them.  The full composite must be
``(x2^p2 - x1^p1) * Id``, the canonical map at the ordinary point 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import LElement, WeightType, lift, phi
from .polys import ZERO, MonomialMatrix, Poly, canonical_poly, compose, identity, twist_c


class InvalidCycle(ValueError):
    pass


@dataclass(frozen=True)
class PCycle:
    base: WeightType
    entries: tuple[tuple[LElement, ...], ...]
    maps: tuple[MonomialMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        object.__setattr__(self, "maps", tuple(self.maps))
        if self.base.t != 2:
            raise ValueError("p-cycles live over a two-weight base")
        if len(self.entries) != len(self.maps) or not self.entries:
            raise ValueError("need one map per entry and at least one entry")

    @property
    def period(self) -> int:
        return len(self.entries)

    @property
    def rank(self) -> int:
        return len(self.entries[0])

    def weight(self) -> WeightType:
        return WeightType(self.base.p + (self.period,))

    def key(self):
        return (self.base, self.entries, tuple(m.key() for m in self.maps))

    def __eq__(self, other):
        if not isinstance(other, PCycle):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return render_cycle(self)


@dataclass(frozen=True)
class Unrecognized:
    reason: str

    def __bool__(self):
        return False


def _adjacent_ok(C: PCycle) -> bool:
    p = C.period
    for i, m in enumerate(C.maps):
        if m.source != C.entries[i]:
            return False
        want = C.entries[i + 1] if i < p - 1 else twist_c(C.entries[0])
        if m.target != want:
            return False
        if not m.check_homogeneous():
            return False
    return True


def wrap_product(C: PCycle) -> MonomialMatrix:
    acc = C.maps[0]
    for m in C.maps[1:]:
        acc = compose(m, acc)
    return acc


def validate(C: PCycle) -> bool:
    if not _adjacent_ok(C):
        return False
    if C.rank == 0:
        return True
    prod = wrap_product(C)
    can = canonical_poly(C.base)
    n = C.rank
    return all(prod.entries[i][j] == (can if i == j else ZERO) for i in range(n) for j in range(n))


def require_valid(C: PCycle):
    if not validate(C):
        raise InvalidCycle("cycle fails adjacency or wrap-around check")


def _shift_once(C: PCycle) -> PCycle:
    c = C.base.c()
    entries = C.entries[1:] + (twist_c(C.entries[0]),)
    maps = C.maps[1:] + (C.maps[0].twist(c),)
    return PCycle(C.base, entries, maps)


def _unshift_once(C: PCycle) -> PCycle:
    mc = -C.base.c()
    last = tuple(d + mc for d in C.entries[-1])
    entries = (last,) + C.entries[:-1]
    maps = (C.maps[-1].twist(mc),) + C.maps[:-1]
    return PCycle(C.base, entries, maps)


def twist_pointwise(C: PCycle, eta: LElement) -> PCycle:
    if eta.wt != C.base:
        raise ValueError(f"twist must live in L{C.base}")
    if eta.is_zero():
        return C
    return PCycle(C.base, tuple(tuple(d + eta for d in e) for e in C.entries),
                  tuple(m.twist(eta) for m in C.maps))


def shift(C: PCycle, k: int) -> PCycle:
    """Apply the shift automorphism ``k`` times; ``shift(C, p)`` twists by c."""
    q, r = divmod(k, C.period)
    out = twist_pointwise(C, C.base.c(q)) if q else C
    for _ in range(r):
        out = _shift_once(out)
    return out


def reduce_at(C: PCycle, j: int) -> PCycle:
    """Delete entry ``j`` and compose the two maps through it."""
    p = C.period
    if p < 2:
        raise ValueError("cannot reduce a 1-cycle")
    if not 0 <= j < p:
        raise ValueError(f"reduction index {j} outside [0, {p - 1}]")
    if j == 0:
        wrap = compose(C.maps[0].twist(C.base.c()), C.maps[-1])
        return PCycle(C.base, C.entries[1:], C.maps[1:-1] + (wrap,))
    merged = compose(C.maps[j], C.maps[j - 1])
    return PCycle(C.base, C.entries[:j] + C.entries[j + 1:],
                  C.maps[:j - 1] + (merged,) + C.maps[j + 1:])


def insert_at(C: PCycle, j: int) -> PCycle:
    """Duplicate entry ``j`` with an identity between the copies.

    ``j`` ranges over ``[0, p]`` where ``p`` is the source period; ``j = p``
    duplicates ``E_0(c)`` across the wrap-around.
    """
    p = C.period
    if not 0 <= j <= p:
        raise ValueError(f"insertion index {j} outside [0, {p}]")
    if j == p:
        top = twist_c(C.entries[0])
        return PCycle(C.base, C.entries + (top,), C.maps + (identity(top),))
    e = C.entries[j]
    return PCycle(C.base, C.entries[:j + 1] + (e,) + C.entries[j + 1:],
                  C.maps[:j] + (identity(e),) + C.maps[j:])


def direct_sum(cycles: Sequence[PCycle]) -> PCycle:
    cycles = list(cycles)
    if not cycles:
        raise ValueError("empty direct sum needs an explicit base and period")
    base, p = cycles[0].base, cycles[0].period
    if any(C.base != base or C.period != p for C in cycles):
        raise ValueError("summands must share base and period")
    entries = tuple(tuple(d for C in cycles for d in C.entries[i]) for i in range(p))
    maps = []
    for i in range(p):
        src = entries[i]
        tgt = entries[i + 1] if i < p - 1 else twist_c(entries[0])
        rows = []
        offset = 0
        for C in cycles:
            m = C.maps[i]
            for r in m.entries:
                rows.append((ZERO,) * offset + r + (ZERO,) * (len(src) - offset - len(r)))
            offset += C.rank
        maps.append(MonomialMatrix(src, tgt, tuple(rows)))
    return PCycle(base, entries, tuple(maps))


# ---------------------------------------------------------------------------
# gauge normalization and components


def _row_op(m: MonomialMatrix, dst: int, src: int, f: Poly) -> MonomialMatrix:
    """row_dst += f * row_src"""
    rows = [list(r) for r in m.entries]
    rows[dst] = [rows[dst][k] + f * rows[src][k] for k in range(len(m.source))]
    return MonomialMatrix(m.source, m.target, tuple(tuple(r) for r in rows))


def _col_op(m: MonomialMatrix, dst: int, src: int, f: Poly) -> MonomialMatrix:
    """col_dst += col_src * f"""
    rows = [list(r) for r in m.entries]
    for r in rows:
        r[dst] = r[dst] + r[src] * f
    return MonomialMatrix(m.source, m.target, tuple(tuple(r) for r in rows))


def gauge_reduce(C: PCycle) -> PCycle:
    """Use scalar entries as pivots to clear their rows and columns.

    Each elimination is a change of basis at one position, compensated on the
    neighbouring map, so the result is an isomorphic cycle.  One sweep over the
    maps, leftmost-topmost pivot first.
    """
    p = C.period
    maps = list(C.maps)
    for i in range(p):
        done = set()
        while True:
            m = maps[i]
            pivot = None
            for b in range(len(m.source)):
                for a in range(len(m.target)):
                    if (a, b) in done or not m.entries[a][b].is_scalar():
                        continue
                    others = any(not m.entries[k][b].is_zero() for k in range(len(m.target)) if k != a) or \
                        any(not m.entries[a][k].is_zero() for k in range(len(m.source)) if k != b)
                    if others:
                        pivot = (a, b)
                        break
                    done.add((a, b))
                if pivot:
                    break
            if pivot is None:
                break
            a, b = pivot
            s = m.entries[a][b].scalar()
            nxt = (i + 1) % p
            prv = (i - 1) % p
            for k in range(len(m.target)):
                f = maps[i].entries[k][b]
                if k == a or f.is_zero():
                    continue
                f = f * (1 / s)
                # change of basis at position i+1: row_k -= f row_a; compensate on the next map
                maps[i] = _row_op(maps[i], k, a, -f)
                if p > 1 or nxt != i:
                    maps[nxt] = _col_op(maps[nxt], a, k, f)
            for k in range(len(m.source)):
                g = maps[i].entries[a][k]
                if k == b or g.is_zero():
                    continue
                g = g * (1 / s)
                # change of basis at position i: col_k -= col_b g; compensate on the previous map
                maps[i] = _col_op(maps[i], k, b, -g)
                maps[prv] = _row_op(maps[prv], b, k, g)
            done.add((a, b))
    return PCycle(C.base, C.entries, tuple(maps))


def components(C: PCycle) -> list[list[tuple[int, ...]]]:
    """Split summand indices into connected blocks; one index tuple per position."""
    p, n = C.period, C.rank
    parent = {(i, a): (i, a) for i in range(p) for a in range(n)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, m in enumerate(C.maps):
        nxt = (i + 1) % p
        for a in range(n):
            for b in range(n):
                if not m.entries[a][b].is_zero():
                    ra, rb = find((nxt, a)), find((i, b))
                    if ra != rb:
                        parent[ra] = rb
    groups: dict = {}
    for i in range(p):
        for a in range(n):
            groups.setdefault(find((i, a)), [[] for _ in range(p)])[i].append(a)
    out = [[tuple(g) for g in groups[r]] for r in sorted(groups, key=lambda r: (r[0], r[1]))]
    return out


def restrict(C: PCycle, idx: Sequence[tuple[int, ...]]) -> PCycle:
    p = C.period
    entries = tuple(tuple(C.entries[i][a] for a in idx[i]) for i in range(p))
    maps = []
    for i, m in enumerate(C.maps):
        rows_i = idx[(i + 1) % p]
        cols_i = idx[i]
        maps.append(MonomialMatrix(entries[i],
                                   entries[i + 1] if i < p - 1 else twist_c(entries[0]),
                                   tuple(tuple(m.entries[a][b] for b in cols_i) for a in rows_i)))
    return PCycle(C.base, entries, tuple(maps))


def scaling_iso(C: PCycle, D: PCycle) -> bool:
    """True iff ``C`` and ``D`` agree up to summand permutation and diagonal rescaling.

    Summands at each position are matched by degree; repeated degrees make the
    matching ambiguous and the answer is False.
    """
    if C.base != D.base or C.period != D.period or C.rank != D.rank:
        return False
    p, n = C.period, C.rank
    perms = []
    for i in range(p):
        if sorted(C.entries[i], key=LElement.sort_key) != sorted(D.entries[i], key=LElement.sort_key):
            return False
        if len(set(C.entries[i])) != n:
            return False
        perms.append([D.entries[i].index(d) for d in C.entries[i]])
    # unknown scalars v[(i, a)] with v[(p, a)] == v[(0, a)]; edges v[i+1, a] = v[i, b] / r
    edges: dict = {}
    for i in range(p):
        nxt = (i + 1) % p
        cm, dm = C.maps[i], D.maps[i]
        for a in range(n):
            for b in range(n):
                ce = cm.entries[a][b]
                de = dm.entries[perms[nxt][a]][perms[i][b]]
                if ce.is_zero() and de.is_zero():
                    continue
                r = ce.ratio_to(de)
                if r is None or r == 0:
                    return False
                edges.setdefault((i, b), []).append(((nxt, a), 1 / r))
                edges.setdefault((nxt, a), []).append(((i, b), r))
    value: dict = {}
    for start in [(i, a) for i in range(p) for a in range(n)]:
        if start in value:
            continue
        value[start] = Fraction(1)
        stack = [start]
        while stack:
            u = stack.pop()
            for v, r in edges.get(u, ()):
                want = value[u] * r
                if v in value:
                    if value[v] != want:
                        return False
                else:
                    value[v] = want
                    stack.append(v)
    return True


def recognize(C: PCycle):
    """Identify a valid cycle as a sum of catalog bundles, or return Unrecognized.

    Extension bundles come back as the canonical member of their alias orbit
    (see ``catalog.aliases``).
    """
    from . import catalog

    require_valid(C)
    wt = C.weight()
    R = gauge_reduce(C)
    items = []
    for comp in components(R):
        sub = restrict(R, comp)
        if sub.rank == 1:
            found = _match_line(sub, wt)
        elif sub.rank == 2:
            found = _match_extension(sub, wt)
        else:
            return Unrecognized(f"indecomposable block of rank {sub.rank}")
        if found is None:
            return Unrecognized(f"rank-{sub.rank} block matches no catalog shape")
        items.append(found)
    return catalog.BundleSum.of(wt, items)


def _match_line(sub: PCycle, wt: WeightType):
    from . import catalog

    steps = [i for i, m in enumerate(sub.maps) if not m.entries[0][0].is_scalar()]
    if len(steps) != 1:
        return None
    k3 = sub.period - steps[0] - 1
    y = lift(sub.entries[0][0], k3, wt)
    cand = catalog.LineBundle(y)
    return cand if scaling_iso(sub, catalog.to_pcycle(cand)) else None


def extension_matches(sub: PCycle, wt: WeightType, first: bool = False) -> list:
    """Every extension bundle whose cycle is a rescaled copy of the rank-2 cycle ``sub``."""
    from . import catalog

    if any(v < 2 for v in wt.p):
        return []
    key = LElement.sort_key
    observed = [sorted(e, key=key) for e in sub.entries]
    matches = []
    for x in catalog.cuboid_params(wt):
        for k3 in range(sub.period):
            shifted = catalog.shifted_base_cycle(x, k3)
            d1, d2 = shifted.entries[0]
            seen = set()
            for e1, e2 in ((observed[0][0], observed[0][1]), (observed[0][1], observed[0][0])):
                z = e1 - d1
                if e2 - d2 != z or z in seen:
                    continue
                seen.add(z)
                # cheap degree screen before the full comparison
                if any(sorted((d + z for d in e), key=key) != o
                       for e, o in zip(shifted.entries[1:], observed[1:])):
                    continue
                if scaling_iso(sub, twist_pointwise(shifted, z)):
                    matches.append(catalog.ExtensionBundle(x, lift(z, k3, wt)))
                    if first:
                        return matches
    return matches


def _match_extension(sub: PCycle, wt: WeightType):
    from . import catalog

    found = extension_matches(sub, wt, first=True)
    return catalog.canonical(found[0]) if found else None


def render_cycle(C: PCycle) -> str:
    """Aligned text table of entry degrees and maps, one row per position."""
    lines = [f"p-cycle over L{C.base}, period {C.period}, rank {C.rank}"]
    col = max((len(" (+) ".join(str(d) for d in e)) for e in C.entries), default=0)
    for i, (e, m) in enumerate(zip(C.entries, C.maps)):
        deg = " (+) ".join(str(d) for d in e)
        tag = "id" if m.is_identity() else str(m)
        lines.append(f"  E{i:<2} {deg:<{col}}  --x{i}-->  {tag}")
    return "\n".join(lines)


def twist_cycle(C: PCycle, eta: LElement) -> PCycle:
    """Twist by an element of the full string group: the base part pointwise, x3 by shifting."""
    if eta.wt != C.weight():
        raise ValueError(f"twist must live in L{C.weight()}")
    return shift(twist_pointwise(C, phi(eta)), eta.residues[-1])
