import pytest

from wpltilt.catalog import BundleSum, ExtensionBundle, LineBundle, canonical, family, primed_family, twist_object
from wpltilt.homs import UnsupportedWeight
from wpltilt.lattice import WeightType
from wpltilt.suite import EXAMPLE_ARROWS, example_object, example_vertices
from wpltilt.tilting import (
    assemble_recollement,
    check_add_condition,
    check_rigidity,
    default_window,
    endomorphism_quiver,
    i_star,
    j_star,
    ladder_indices,
    quiver_dot,
    verify_cuboid_induction,
)

W234 = WeightType.of(2, 3, 4)
A = ExtensionBundle.auslander


def test_default_window(monkeypatch):
    monkeypatch.delenv("WPL_RIGIDITY_WINDOW", raising=False)
    assert default_window() == 12
    monkeypatch.setenv("WPL_RIGIDITY_WINDOW", "5")
    assert default_window() == 5
    monkeypatch.setenv("WPL_RIGIDITY_WINDOW", "0")
    with pytest.raises(ValueError):
        default_window()


def test_auslander_family_rigid():
    r = check_rigidity(family("auslander-T1", W234), window=6)
    assert r.passed and r.summand_count == 6 and r.exact_pairs == 36 and r.window_pairs == 0


def test_rigidity_failure_witness():
    T = BundleSum.of(W234, [A(W234.zero()), A(W234.xbar(1) + W234.x(1))])
    r = check_rigidity(T, window=4)
    assert not r.passed
    assert r.witness["n"] == -1
    assert r.witness["target"] == str(A(W234.xbar(1) + W234.x(1)))


def test_thmb_example_rigid():
    T = family("thmB-T1k", W234, 1, 1) + family("thmB-T2k", W234, 1, 2)
    r = check_rigidity(T, window=6)
    assert r.passed and r.summand_count == 6 and r.window_pairs > 0
    boundary = [c for c in r.rigidity if abs(c["n"]) == 6]
    assert boundary and all(c["dim"] == 0 and c["mode"] == "window-verified" for c in boundary)


def test_line_bundles_and_duplicates_noted():
    T = family("auslander-T1", W234)
    doubled = T + BundleSum.of(W234, [T.summands()[0], LineBundle(W234.zero())])
    r = check_rigidity(doubled, window=2)
    assert r.summand_count == 6
    assert any("line bundles" in n for n in r.notes)


def test_rigidity_needs_p1_two():
    with pytest.raises(UnsupportedWeight):
        check_rigidity(family("cuboid", WeightType.of(3, 3, 4)), window=2)


def test_ladder_indices():
    assert ladder_indices(5, 2) == ([1, 2], [3, 4], [2, 3])


def test_add_condition_cuboid_step():
    for p3 in (3, 4, 5):
        Tp = family("cuboid", WeightType.of(2, 2, 2))
        Ts = family("cuboid", WeightType.of(2, 2, p3 - 1))
        ok = check_add_condition(Tp, Ts, q=1)
        assert ok.passed and ok.by_parameters
        keep = [b for b in Ts.summands() if b.x != Ts.wt.x(3, p3 - 3)]
        short = BundleSum.of(Ts.wt, keep)
        bad = check_add_condition(Tp, short, q=1)
        assert not bad.passed and bad.missing


@pytest.mark.parametrize("q", [1, 2])
def test_assembly_reproduces_thmb(q):
    wt = WeightType.of(2, 3, 5)
    for k in (1, 2):
        Tp, Ts = primed_family(1, wt, q, k), primed_family(2, wt, q, k)
        p3 = wt.p[2]
        assert i_star(Tp, p3, q) == family("thmB-T1k", wt, q, k)
        assert j_star(Ts, p3, q) == family("thmB-T2k", wt, q, k)
        a = assemble_recollement(Tp, Ts, q)
        assert a.passed
        assert a.object == family("thmB-T1k", wt, q, k) + family("thmB-T2k", wt, q, k)


def test_assembly_swapped_arguments_fail():
    Tp, Ts = primed_family(1, W234, 1, 1), primed_family(2, W234, 1, 1)
    a = assemble_recollement(Ts, Tp, 1)
    assert not a.passed and a.witness


def test_cuboid_base_case():
    T = family("cuboid", WeightType.of(2, 2, 3))
    a = assemble_recollement(family("cuboid", WeightType.of(2, 2, 2)), family("cuboid", WeightType.of(2, 2, 2)), 1)
    assert a.passed and a.object == T


@pytest.mark.parametrize("p,n", [((2, 2, 2), 1), ((2, 3, 4), 6), ((3, 3, 4), 12), ((2, 3, 5), 8)])
def test_cuboid_induction(p, n):
    r = verify_cuboid_induction(WeightType.of(*p))
    assert r["verdict"] == "pass" and r["summands"] == n


def _arrows(q):
    return sorted((a["source"], a["target"]) for a in q["arrows"] for _ in range(a["count"]))


def test_example_quiver():
    q = endomorphism_quiver(example_object())
    names = {str(canonical(v)): k for k, v in example_vertices(W234).items()}
    assert {names[v] for v in q["vertices"]} == set(names.values())
    assert sorted((names[s], names[t]) for s, t in _arrows(q)) == sorted(EXAMPLE_ARROWS)
    dot = quiver_dot(q)
    assert dot.startswith("digraph") and dot.count("->") == 7


def test_quiver_small_cases():
    W222 = WeightType.of(2, 2, 2)
    q = endomorphism_quiver(BundleSum.of(W222, [A(W222.zero())]))
    assert len(q["vertices"]) == 1 and q["arrows"] == []
    E = A(W234.zero())
    q = endomorphism_quiver(BundleSum.of(W234, [E, E]))
    assert len(q["vertices"]) == 1 and q["multiplicity"] == {str(E): 2}


def test_quiver_twist_invariant():
    T = example_object()
    eta = W234.x(2) + W234.c()
    rename = {str(canonical(b)): str(canonical(b.twist(eta))) for b in T.summands()}
    q0, q1 = endomorphism_quiver(T), endomorphism_quiver(twist_object(T, eta))
    assert sorted(rename[v] for v in q0["vertices"]) == sorted(q1["vertices"])
    assert sorted((rename[s], rename[t]) for s, t in _arrows(q0)) == _arrows(q1)
