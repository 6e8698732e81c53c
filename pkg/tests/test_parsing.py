import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpltilt import catalog
from wpltilt.catalog import BundleSum, ExtensionBundle, LineBundle
from wpltilt.lattice import WeightType, normal_form, render
from wpltilt.parsing import ParseError, parse_bundles, parse_expression, parse_lelt, parse_weight

W234 = WeightType.of(2, 3, 4)


def test_spec_examples():
    B = parse_expression("E<1*x3>(1*xb3) @ (2,3,4)")
    assert B.summands() == [ExtensionBundle(W234.x(3), W234.xbar(3))]
    assert parse_expression("O(3*x1) @ (2,3,4)").summands() == [LineBundle(W234.x(1) + W234.c())]
    with pytest.raises(ParseError, match="cuboid"):
        parse_expression("E<3*x3> @ (2,3,4)")


def test_weights_and_elements():
    assert parse_expression("(2,3,4)") == W234
    assert parse_weight(" (2, 3, 5) ") == WeightType.of(2, 3, 5)
    assert parse_lelt("w", W234) == W234.omega()
    assert parse_lelt("d - xb1 + 2*c", W234) == W234.delta() - W234.xbar(1) + W234.c(2)
    assert parse_lelt("0", W234) == W234.zero()
    assert parse_lelt("-x2 - 1*x3", W234) == -W234.x(2) - W234.x(3)


def test_sums_and_sugar():
    B = parse_bundles("A(0) + E<1*x2>(x1) ⊕ 2*O(c)", W234)
    assert len(B) == 4
    assert parse_bundles("E(xb2)", W234) == parse_bundles("A(xb2)", W234)
    assert parse_bundles("A(x1) @ (2,3,4)").wt == W234


@pytest.mark.parametrize("text", ["O(0", "O(5)", "Q(0)", "O(x4)", "E<x1>", "A(0) +", "(2,3,0)", "O(0) @ (2,3,"])
def test_errors_carry_position(text):
    with pytest.raises(ParseError) as info:
        parse_expression(text, W234)
    assert "position" in str(info.value)


def test_needs_weight():
    with pytest.raises(ParseError, match="weight type unknown"):
        parse_expression("O(0)")
    with pytest.raises(ParseError, match="conflicting"):
        parse_expression("O(0) @ (2,3,5)", W234)


def _bundle(draw):
    y = normal_form(draw(st.tuples(st.integers(0, 1), st.integers(0, 2), st.integers(0, 3))),
                    draw(st.integers(-3, 3)), W234)
    if draw(st.booleans()):
        return LineBundle(y)
    return ExtensionBundle(draw(st.sampled_from(catalog.cuboid_params(W234))), y)


@st.composite
def sums(draw):
    n = draw(st.integers(1, 4))
    return BundleSum.of(W234, [_bundle(draw) for _ in range(n)])


@settings(max_examples=150)
@given(sums())
def test_round_trip(B):
    text = str(B)
    assert parse_bundles(text, W234) == B
    assert parse_bundles(f"{text} @ (2,3,4)") == B


@settings(max_examples=150)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)), st.integers(-4, 4))
def test_element_round_trip(raw, c):
    x = normal_form(raw, c, W234)
    assert parse_lelt(render(x), W234) == x
    assert parse_lelt(catalog.compact(x), W234) == x
