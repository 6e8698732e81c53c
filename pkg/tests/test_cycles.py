import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _extensions import cocycle_extension
from wpltilt import catalog
from wpltilt.catalog import BundleSum, ExtensionBundle, LineBundle, to_pcycle
from wpltilt.cycles import (
    InvalidCycle,
    PCycle,
    Unrecognized,
    insert_at,
    recognize,
    reduce_at,
    require_valid,
    shift,
    twist_cycle,
    twist_pointwise,
    validate,
    wrap_product,
)
from wpltilt.homs import hom_dim
from wpltilt.lattice import WeightType, normal_form, phi
from wpltilt.polys import MonomialMatrix, canonical_poly

W234 = WeightType.of(2, 3, 4)
W233 = WeightType.of(2, 3, 3)


def line(wt, y):
    return to_pcycle(LineBundle(y))


def step_positions(C):
    return [i for i, m in enumerate(C.maps) if not m.is_identity()]


def test_line_cycle_shape():
    C = line(W234, W234.zero())
    assert all(e == (W234.base().zero(),) for e in C.entries)
    assert step_positions(C) == [3]
    assert C.maps[3].target[0] - C.maps[3].source[0] == W234.base().c()
    assert step_positions(line(W234, W234.x(3))) == [2]
    assert line(W234, W234.c()) == twist_pointwise(line(W234, W234.zero()), W234.base().c())


def test_wrap_products():
    f = canonical_poly(W234.base())
    C = line(W234, W234.zero())
    assert validate(C) and wrap_product(C).entries == ((f,),)
    D = to_pcycle(ExtensionBundle(W234.x(3), W234.zero()))
    assert validate(D)
    prod = wrap_product(D).entries
    assert prod[0][0] == f and prod[1][1] == f
    assert prod[0][1].is_zero() and prod[1][0].is_zero()


def test_perturbed_degrees_invalid():
    C = line(W234, W234.zero())
    m = C.maps[0]
    bad = MonomialMatrix(m.source, (m.target[0] + C.base.x(1),), m.entries)
    D = PCycle(C.base, C.entries, (bad,) + C.maps[1:])
    assert not validate(D)
    with pytest.raises(InvalidCycle):
        require_valid(D)


def test_shift_examples():
    C = to_pcycle(ExtensionBundle(W234.x(2), W234.x(1)))
    assert shift(C, 0) == C
    assert shift(C, 4) == twist_pointwise(C, C.base.c())
    L = line(W234, W234.zero())
    assert step_positions(shift(L, 1)) == [2]
    assert shift(L, 1) == line(W234, W234.x(3))


def test_twist_examples():
    C = line(W234, W234.zero())
    assert twist_pointwise(C, C.base.zero()) == C
    y = normal_form((1, 2, 0), -1, W234)
    assert twist_pointwise(C, phi(y)) == line(W234, y)
    assert twist_cycle(C, W234.x(3) * 2 + W234.x(1)) == line(W234, W234.x(3) * 2 + W234.x(1))


def test_reduce_and_insert_examples():
    x3 = W234.x(3)
    got = reduce_at(line(W234, x3), 1)
    assert got == line(W233, x3.reweigh(W233))
    assert insert_at(line(W233, W233.zero()), 1) == line(W234, W234.zero())
    W222, W223 = WeightType.of(2, 2, 2), WeightType.of(2, 2, 3)
    E = to_pcycle(ExtensionBundle.auslander(W222.zero()))
    out = recognize(insert_at(E, 2))
    want = ExtensionBundle(W223.x(3), W223.zero())
    assert out == catalog.canonical_sum(BundleSum.of(W223, [want]))
    assert catalog.same_object(out.summands()[0], want)


def test_reduce_across_step_splits():
    # l3 = 0: reducing at 0 multiplies the two step matrices and everything goes diagonal
    C = to_pcycle(ExtensionBundle.auslander(W234.zero()))
    R = reduce_at(C, 0)
    assert validate(R)
    out = recognize(R)
    assert len(out) == 2 and all(isinstance(b, LineBundle) for b in out.summands())


def test_recognize_round_trip():
    for y in W234.elements(range(-1, 2)):
        assert recognize(line(W234, y)).summands() == [LineBundle(y)]
    for x in catalog.cuboid_params(W234):
        for y in W234.elements(range(0, 1)):
            E = ExtensionBundle(x, y)
            assert recognize(to_pcycle(E)).summands() == [catalog.canonical(E)]


def _orbit(E):
    """Reflect two cuboid coordinates at a time; the twist moves accordingly."""
    wt = E.wt
    out = {(E.x, E.y)}
    l = E.x.residues
    for i in range(3):
        for j in range(i + 1, 3):
            new = list(l)
            move = -wt.c()
            for k in (i, j):
                new[k] = wt.p[k] - 2 - l[k]
                move = move + wt.x(k + 1) * (l[k] + 1)
            out.add((wt.elem(new), E.y + move))
    return out


@pytest.mark.parametrize("p", [(2, 3, 4), (3, 3, 4), (2, 2, 2)])
def test_alias_orbit_oracle(p):
    from wpltilt.cycles import extension_matches

    wt = WeightType.of(*p)
    for x in catalog.cuboid_params(wt):
        for y in wt.elements(range(0, 1)):
            E = ExtensionBundle(x, y)
            found = {(F.x, F.y) for F in extension_matches(to_pcycle(E), wt)}
            assert found == _orbit(E)
            assert found == {(F.x, F.y) for F in catalog.aliases(E)}


def test_refuses_non_normal_shape():
    E = ExtensionBundle.auslander(W234.zero())
    L = LineBundle(W234.x(3) - W234.c())
    X = cocycle_extension(L, E)
    assert validate(X)
    out = recognize(X)
    assert isinstance(out, Unrecognized) and not out


def test_recognized_gluings_are_faithful():
    # whenever a glued cycle is recognized, it must at least have the same Hom profile
    E = ExtensionBundle.auslander(W234.zero())
    for y in W234.elements(range(-1, 0)):
        L = LineBundle(y)
        X = cocycle_extension(L, E, seed=3)
        out = recognize(X)
        if out:
            probe = to_pcycle(L)
            assert hom_dim(X, probe) == hom_dim(to_pcycle(out), probe)
            assert hom_dim(probe, X) == hom_dim(probe, to_pcycle(out))


def catalog_objects(wt):
    objs = [LineBundle(y) for y in wt.elements(range(-1, 1))]
    objs += [ExtensionBundle(x, y) for x in catalog.cuboid_params(wt) for y in wt.elements(range(0, 1))]
    return objs


OBJS = {p: catalog_objects(WeightType.of(*p)) for p in [(2, 3, 4), (2, 2, 3)]}


@st.composite
def obj_and_index(draw):
    p = draw(st.sampled_from(sorted(OBJS)))
    B = draw(st.sampled_from(OBJS[p]))
    return B, draw(st.integers(0, p[2]))


@settings(max_examples=80, deadline=None)
@given(obj_and_index())
def test_reduce_insert_identity(case):
    B, j = case
    C = to_pcycle(B)
    D = insert_at(C, j)
    assert validate(D)
    assert reduce_at(D, j) == C
    if j < C.period:
        assert validate(reduce_at(C, j))


@settings(max_examples=60, deadline=None)
@given(obj_and_index(), st.integers(-6, 6), st.integers(-6, 6))
def test_shift_composition(case, a, b):
    C = to_pcycle(case[0])
    assert shift(shift(C, a), b) == shift(C, a + b)
    assert validate(shift(C, a))
