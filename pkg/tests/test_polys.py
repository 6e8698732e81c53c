import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpltilt.lattice import WeightType, normal_form
from wpltilt.polys import (
    ONE,
    ZERO,
    MonomialMatrix,
    Poly,
    canonical_poly,
    compose,
    hom_exponents,
    identity,
    matrix,
    twist_c,
    unit_split,
    y_hom_basis,
)

B23 = WeightType.of(2, 3)
B34 = WeightType.of(3, 4)


def test_hom_basis_examples():
    z = B23.zero()
    assert sorted(hom_exponents(z, B23.c())) == [(0, 3), (2, 0)]
    assert hom_exponents(z, B23.x(1)) == [(1, 0)]
    assert y_hom_basis(z, -B23.x(1)) == []


def _count_exponents(wt, d):
    k = d.c
    hits = 0
    for a1, a2 in itertools.product(range(wt.p[0] * (k + 2) + 1), range(wt.p[1] * (k + 2) + 1)):
        if normal_form((a1, a2), 0, wt) == d:
            hits += 1
    return hits


@pytest.mark.parametrize("wt", [B23, B34])
def test_hom_basis_oracle(wt):
    z = wt.zero()
    for d in wt.elements(range(-4, 5)):
        n = len(y_hom_basis(z, d))
        assert n == max(0, d.c + 1)
        assert n == _count_exponents(wt, d), d


def test_compose_identity_neutral():
    x1 = B23.x(1)
    f = matrix([B23.zero()], [x1], [[Poly.mono(1, 0)]])
    assert compose(identity([x1]), f) == f
    assert compose(f, identity([B23.zero()])) == f


def test_compose_monomials():
    z, x1 = B23.zero(), B23.x(1)
    f = matrix([z], [x1], [[Poly.mono(1, 0)]])
    g = matrix([x1], [x1 * 2], [[Poly.mono(1, 0)]])
    h = compose(g, f)
    assert h.target == (B23.c(),)
    assert h[0, 0] == Poly.mono(2, 0)
    assert h.check_homogeneous()


def test_canonical_poly():
    p = canonical_poly(B23)
    assert p == Poly.mono(0, 3) - Poly.mono(2, 0)
    assert p.is_homogeneous_of(B23.c())


def test_unit_split_examples():
    n = [B23.zero(), B23.x(1)]
    m, k = unit_split(identity(n))
    assert k == 2 and m.shape == (0, 0)
    s0, s1 = B23.zero(), -B23.x(1)
    t0, t1 = B23.zero(), B23.x(2) - B23.x(1)
    m = matrix([s0, s1], [t0, t1], [[ONE, Poly.mono(1, 0)], [ZERO, Poly.mono(0, 1)]])
    assert m.check_homogeneous()
    red, k = unit_split(m)
    assert k == 1
    assert red.entries == ((Poly.mono(0, 1),),)
    bare = matrix([s0], [B23.x(1)], [[Poly.mono(1, 0)]])
    assert unit_split(bare) == (bare, 0)


def test_twist_c():
    assert twist_c([B23.zero()]) == (B23.c(),)
    assert twist_c([]) == ()
    w = B23.omega()
    assert twist_c([w, B23.zero()]) == (w + B23.c(), B23.c())


def test_shape_checked():
    with pytest.raises(ValueError):
        MonomialMatrix((B23.zero(),), (B23.zero(),), ((ONE, ONE),))


def _rand_matrix(draw, rows, cols, src):
    tgt = [draw(st.sampled_from(B23.elements(range(0, 2)))) for _ in range(rows)]
    ent = []
    for t in tgt:
        row = []
        for s in src:
            basis = y_hom_basis(s, t)
            if basis and draw(st.booleans()):
                m = draw(st.sampled_from(basis))
                row.append(Poly({m.exponents: draw(st.integers(-3, 3))}))
            else:
                row.append(ZERO)
        ent.append(row)
    return MonomialMatrix(tuple(src), tuple(tgt), tuple(tuple(r) for r in ent))


@st.composite
def chains(draw):
    src = [B23.zero()]
    f = _rand_matrix(draw, 2, 1, src)
    g = _rand_matrix(draw, 2, 2, list(f.target))
    h = _rand_matrix(draw, 1, 2, list(g.target))
    return f, g, h


@settings(max_examples=100, deadline=None)
@given(chains())
def test_compose_associative(fgh):
    f, g, h = fgh
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
