"""The reproduction suite behind ``wpltilt verify-paper`` and the acceptance tests.

Each criterion is a function taking an optional list of weight types and
returning a ``Result``.  ``run_suite`` runs them in order and records timings.
"""
from __future__ import annotations

import contextlib
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import catalog, functors
from .catalog import ExtensionBundle, LineBundle, canonical, cuboid_params, family, primed_family, twist_object
from .cycles import recognize, validate
from .functors import INSERT, REDUCE, apply_sequence, crosscheck, engine_apply
from .homs import auslander_vanishing, hom_dim, hom_dim_line, stable_dim
from .lattice import WeightType, normal_form
from .tilting import (
    check_rigidity,
    endomorphism_quiver,
    expected_count,
    i_star,
    j_star,
    quiver_dot,
    verify_cuboid_induction,
)

W = WeightType.of


@dataclass
class Result:
    number: int
    name: str
    passed: Optional[bool]
    detail: str = ""
    seconds: float = 0.0
    evidence: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "skip" if self.passed is None else ("pass" if self.passed else "fail")

    def line(self) -> str:
        return f"[{self.status.upper()}] criterion {self.number}: {self.name} ({self.seconds:.1f}s) {self.detail}"

    def as_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "status": self.status,
                "detail": self.detail, "seconds": round(self.seconds, 3), "evidence": self.evidence}


def _pick(weights, default, need=lambda wt: True):
    pool = default if weights is None else [w for w in weights]
    return [w for w in pool if need(w)]


def _two(wt):
    return wt.t == 3 and wt.p[0] == 2 and min(wt.p) >= 2


def _triple(wt):
    return wt.t == 3 and min(wt.p) >= 2


# ---------------------------------------------------------------------------


def c1_group_laws(weights=None, samples: int = 10_000) -> Result:
    ws = _pick(weights, [W(2, 3, 4), W(3, 3, 4), W(2, 4, 5)])
    rng = random.Random(20240601)
    bad = 0
    for wt in ws:
        def rnd():
            return wt.elem([rng.randint(-9, 9) for _ in wt.p], rng.randint(-5, 5))
        for _ in range(samples):
            a, b, c = rnd(), rnd(), rnd()
            if (a + b) + c != a + (b + c) or a + b != b + a or a + (-a) != wt.zero():
                bad += 1
            if normal_form(a.residues, a.c, wt) != a:
                bad += 1
    w = W(2, 3, 4).omega()
    ok_w = (w.residues, w.c) == ((1, 2, 3), -2)
    return Result(1, "string-group laws", bad == 0 and ok_w,
                  f"{samples} triples on {len(ws)} weight types, violations={bad}, omega(2,3,4)={w}")


def c2_line_hom(weights=None) -> Result:
    ws = _pick(weights, [W(2, 3, 4), W(2, 3, 5), W(3, 3, 4)], lambda wt: wt.t == 3)
    bad = checked = 0
    for wt in ws:
        for a in (wt.zero(), wt.x(3), wt.omega()):
            for d in wt.elements(range(-4, 5)):
                checked += 1
                if hom_dim_line(a, a + d, "closed") != hom_dim_line(a, a + d, "oracle"):
                    bad += 1
    wt = W(2, 3, 4)
    two = hom_dim_line(wt.zero(), wt.c(), "closed")
    return Result(2, "line Hom closed form vs lattice count", bad == 0 and two == 2,
                  f"{checked} pairs, mismatches={bad}, dim Hom(O, O(c))={two}")


def c3_cycle_validity(weights=None) -> Result:
    ws = _pick(weights, [W(2, 3, 4), W(2, 3, 5), W(3, 3, 4), W(2, 2, 2)], _triple)
    bad = n = 0
    for wt in ws:
        for y in wt.elements(range(-1, 2)):
            objs = [LineBundle(y)] + [ExtensionBundle(x, y) for x in cuboid_params(wt)]
            for b in objs:
                n += 1
                if not validate(catalog.to_pcycle(b)):
                    bad += 1
    return Result(3, "p-cycle wrap-around invariant", bad == 0, f"{n} catalog cycles, invalid={bad}")


def c4_crosscheck(weights=None) -> Result:
    ws = _pick(weights, [W(2, 3, 4), W(2, 3, 5)], _triple)
    fails, n, special = [], 0, 0
    for wt in ws:
        ys = wt.elements(range(-1, 2))
        objs = [LineBundle(y) for y in ys] + [ExtensionBundle(x, y) for x in cuboid_params(wt) for y in ys]
        p3 = wt.p[-1]
        for direction, js in ((REDUCE, range(p3)), (INSERT, range(p3 + 1))):
            for b in objs:
                for j in js:
                    r = crosscheck(b, j, direction)
                    n += 1
                    if isinstance(b, ExtensionBundle) and any(isinstance(o, LineBundle) for o in r.closed.distinct()):
                        special += 1
                    if not r.agree:
                        fails.append(f"{direction} j={j} {b} @ {wt}: closed {r.closed} engine {r.engine}")
    ok = not fails and (special > 0 or not ws)
    detail = f"{n} checks, disagreements={len(fails)}, exceptional splittings exercised={special}"
    if fails:
        detail += f"; first: {fails[0]}"
    return Result(4, "closed forms vs chain-level engine", ok, detail)


def c5_proof_steps(weights=None) -> Result:
    problems = []
    n = 0
    for p3 in (3, 4, 5):
        wt = W(2, 2, p3)
        E = family("cuboid", W(2, 2, 2))
        Jc = list(range(2, p3))
        up = apply_sequence(E, Jc, INSERT, stable=True)
        want = catalog.BundleSum.of(wt, [ExtensionBundle(wt.x(3, p3 - 2), wt.zero())])
        # the same composite through the chain-level engine
        C = catalog.to_pcycle(E)
        for j in Jc:
            C = engine_apply(C, j, INSERT)
        n += 2
        if up != want:
            problems.append(f"psi_Jc(E) on (2,2,{p3}) gave {up}")
        if recognize(C) != catalog.canonical_sum(want):
            problems.append(f"engine psi_Jc(E) on (2,2,{p3}) gave {recognize(C)}")
        down = apply_sequence(up, [2], REDUCE, stable=True)
        small = W(2, 2, p3 - 1)
        want2 = catalog.BundleSum.of(small, [ExtensionBundle(small.x(3, p3 - 3), small.zero())])
        n += 1
        if down != want2:
            problems.append(f"psi^2 psi_Jc(E) on (2,2,{p3}) gave {down}")
    ws = _pick(weights, [W(2, 3, 4), W(2, 4, 5)], _two)
    for wt in ws:
        p3 = wt.p[-1]
        for q in range(1, p3 - 1):
            for k in (1, 2):
                n += 2
                if i_star(primed_family(1, wt, q, k), p3, q) != family("thmB-T1k", wt, q, k):
                    problems.append(f"i_*(T'_1{k}) on {wt}, q={q}")
                if j_star(primed_family(2, wt, q, k), p3, q) != family("thmB-T2k", wt, q, k):
                    problems.append(f"j_*(T'_2{k}) on {wt}, q={q}")
    return Result(5, "proof-step reproduction", not problems,
                  f"{n} identities, failures={len(problems)}" + (f"; first: {problems[0]}" if problems else ""))


def c6_cuboid(weights=None) -> Result:
    ws = _pick(weights, [W(2, 2, 3), W(2, 3, 4), W(3, 3, 4), W(2, 3, 5)], _triple)
    rows = []
    ok = True
    for wt in ws:
        r = verify_cuboid_induction(wt)
        good = r["verdict"] == "pass" and r["summands"] == expected_count(wt)
        ok &= good
        rows.append(f"{wt}:{r['verdict']}/{r['summands']}")
    return Result(6, "cuboid induction replay", ok, ", ".join(rows))


def _corruptions(wt):
    """Families with one summand moved so that a shift lands in the criterion set."""
    A = ExtensionBundle.auslander
    x1 = wt.x(1)
    yield catalog.BundleSum.of(wt, [A(wt.zero()), A(wt.xbar(1) + x1)])
    T1 = family("auslander-T1", wt)
    first = T1.distinct()[0]
    yield catalog.BundleSum.of(wt, T1.distinct() + [first.twist(wt.xbar(2) + x1)])


def c7_rigidity(weights=None, window: Optional[int] = None) -> Result:
    ws = _pick(weights, [W(2, 3, 4), W(2, 3, 5)], _two)
    fails, n = [], 0
    for wt in ws:
        objs = [("T1", family("auslander-T1", wt)), ("T2", family("auslander-T2", wt))]
        for q in range(1, wt.p[-1] - 1):
            for i in (1, 2):
                for j in (1, 2):
                    objs.append((f"T1{i}+T2{j} q={q}",
                                 family("thmB-T1k", wt, q, i) + family("thmB-T2k", wt, q, j)))
        for name, T in objs:
            r = check_rigidity(T, window)
            n += 1
            if not r.passed:
                fails.append(f"{name} @ {wt}: {r.witness}")
        for T in _corruptions(wt):
            r = check_rigidity(T, window)
            n += 1
            if r.witness is None:
                fails.append(f"corrupted {T} @ {wt} was not caught")
    return Result(7, "rigidity of the tilting families", not fails,
                  f"{n} objects checked, failures={len(fails)}" + (f"; first: {fails[0]}" if fails else ""))


def c8_criterion(weights=None) -> Result:
    ws = _pick(weights, [W(2, 3, 4)], _two)
    bad = pairs = 0
    oracle: dict = {}
    A = ExtensionBundle.auslander
    for wt in ws:
        twists = wt.elements(range(-2, 3))
        x1 = wt.x(1)
        for a in twists:
            for b in twists:
                for n in range(-6, 7):
                    d = b + x1 * n - a
                    if d not in oracle:
                        oracle[d] = stable_dim(A(wt.zero()), A(d)) > 0
                    pairs += 1
                    if (auslander_vanishing(a, b, n) == "nonzero") != oracle[d]:
                        bad += 1
    return Result(8, "Auslander criterion vs stable Hom", bad == 0,
                  f"{pairs} (pair, n) cells, {len(oracle)} distinct differences solved, mismatches={bad}")


EXAMPLE_ARROWS = [("E(x3)", "E(x3+xb3)"), ("E<x3>", "E(x3)"), ("E<x3>", "E(xb2)"), ("E<x3>", "E<x3>(xb3)"),
                  ("E(xb2)", "E(xb1)"), ("E<x3>(xb3)", "E(x3+xb3)"), ("E<x3>(xb3)", "E(xb1)")]


def example_vertices(wt):
    A = ExtensionBundle.auslander
    x3, xb = wt.x(3), wt.xbar
    return {"E(x3)": A(x3), "E(x3+xb3)": A(x3 + xb(3)), "E(xb1)": A(xb(1)), "E(xb2)": A(xb(2)),
            "E<x3>": ExtensionBundle(x3, wt.zero()), "E<x3>(xb3)": ExtensionBundle(x3, xb(3))}


def example_object(wt=None):
    wt = wt or W(2, 3, 4)
    T = family("thmB-T1k", wt, 1, 1) + family("thmB-T2k", wt, 1, 2)
    return twist_object(T, wt.x(3, -2))


def c9_quiver(weights=None) -> Result:
    wt = W(2, 3, 4)
    if weights is not None and wt not in weights:
        return Result(9, "endomorphism quiver of the example", None, "needs (2,3,4)")
    T = example_object(wt)
    names = {str(canonical(v)): k for k, v in example_vertices(wt).items()}
    q = endomorphism_quiver(T)
    got_vertices = {names.get(v, v) for v in q["vertices"]}
    got = sorted((names.get(a["source"]), names.get(a["target"])) for a in q["arrows"] for _ in range(a["count"]))
    ok = got_vertices == set(names.values()) and got == sorted(EXAMPLE_ARROWS)
    return Result(9, "endomorphism quiver of the example", ok,
                  f"{len(q['vertices'])} vertices, {len(got)} arrows",
                  evidence={"dot": quiver_dot(q, "Example"), "arrows": got})


def adjunction_grid(size: int = 20, seed: int = 11):
    big, small = W(2, 3, 4), W(2, 3, 3)
    rng = random.Random(seed)

    def pick(wt):
        y = rng.choice(wt.elements(range(-1, 2)))
        if rng.random() < 0.3:
            return LineBundle(y)
        return ExtensionBundle(rng.choice(cuboid_params(wt)), y)

    return [(pick(big), pick(small)) for _ in range(size)]


def adjunction_survey(j: int, pairs) -> dict:
    """Test both candidate identities for psi^j and psi_j over the given pairs."""
    left = right = 0
    for E, F in pairs:
        cE, cF = catalog.to_pcycle(E), catalog.to_pcycle(F)
        rE, iF = engine_apply(cE, j, REDUCE), engine_apply(cF, j, INSERT)
        left += hom_dim(rE, cF) == hom_dim(cE, iF)
        right += hom_dim(iF, cE) == hom_dim(cF, rE)
    n = len(pairs)
    if left == n and right < n:
        direction = "Hom(psi^j E, F) = Hom(E, psi_j F)"
    elif right == n and left < n:
        direction = "Hom(psi_j F, E) = Hom(F, psi^j E)"
    elif left == n:
        direction = "both"
    else:
        direction = "mixed"
    return {"j": j, "left_holds": left, "right_holds": right, "pairs": n, "direction": direction}


def c10_adjunction(weights=None) -> Result:
    if weights is not None and W(2, 3, 4) not in weights:
        return Result(10, "adjunction dimension identity", None, "needs (2,3,4)")
    pairs = adjunction_grid()
    rows = [adjunction_survey(j, pairs) for j in range(4)]
    ok = all(r["direction"] not in ("mixed", "both") for r in rows)
    dirs = sorted({r["direction"] for r in rows})
    cells = "; ".join(f"j={r['j']}: {r['left_holds']}/{r['pairs']} vs {r['right_holds']}/{r['pairs']}" for r in rows)
    return Result(10, "adjunction dimension identity", ok, f"{' | '.join(dirs)} ({cells})",
                  evidence={"rows": rows, "directions": dirs})


CRITERIA: list[Callable] = [c1_group_laws, c2_line_hom, c3_cycle_validity, c4_crosscheck, c5_proof_steps,
                            c6_cuboid, c7_rigidity, c8_criterion, c9_quiver, c10_adjunction]


@contextlib.contextmanager
def corrupted(name: Optional[str]):
    """Test hook: swap in a deliberately wrong formula for the duration of a run."""
    if name is None:
        yield
        return
    if name != "insertion":
        raise ValueError(f"unknown corruption {name!r}; available: insertion")
    original = functors._insert_one

    def wrong(B, j):
        out = original(B, j)
        return [b.twist(b.wt.x(3)) if isinstance(b, ExtensionBundle) else b for b in out]

    functors._insert_one = wrong
    try:
        yield
    finally:
        functors._insert_one = original


def run_suite(weights=None, only=None, corrupt: Optional[str] = None, echo=None) -> list[Result]:
    results = []
    with corrupted(corrupt):
        for k, fn in enumerate(CRITERIA, start=1):
            if only and k not in only:
                continue
            t = time.perf_counter()
            r = fn(weights)
            r.seconds = time.perf_counter() - t
            results.append(r)
            if echo:
                echo(r.line())
    return results
