import json
from dataclasses import replace

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from boalch.ncalg import AlgElem, Kind, Strategy, V, Verdict, decide, normalize, parse_elem, render
from boalch.quiver import (
    ColorClass,
    ColoredQuiver,
    InvalidQuiver,
    boalch_algebra,
    boalch_relations,
    derived_generators,
    double_quiver,
    dumps,
    extended_double,
    first_loop_inverse,
    fission_relations,
    from_json,
    interval_quiver,
    monochromatic,
    original_arrows,
    to_json,
    triangle_quiver,
    validate,
)

P = parse_elem


@st.composite
def partitioned(draw, max_n=6):
    """A monochromatic quiver with a random ordered partition of 1..n."""
    n = draw(st.integers(1, max_n))
    verts = draw(st.permutations(range(1, n + 1)))
    cuts = sorted(draw(st.sets(st.integers(1, n - 1), max_size=n - 1))) if n > 1 else []
    parts, prev = [], 0
    for c in cuts + [n]:
        parts.append(list(verts[prev:c]))
        prev = c
    return monochromatic(n, parts)


def test_builtins_valid():
    assert validate(triangle_quiver()) == []
    assert validate(interval_quiver()) == []


def test_same_part_edge_rejected():
    q = ColoredQuiver(3, (ColorClass("a", (1, 2, 3), ((1,), (2, 3)), (0, 1), arrows=((3, 2), (2, 1), (3, 1))),))
    problems = validate(q)
    assert problems and "same-part edge" in problems[0]


def test_explicit_arrows_matching_partition_accepted():
    q = ColoredQuiver(3, (ColorClass("a", (1, 2, 3), ((1,), (2, 3)), (0, 1), arrows=((2, 1), (3, 1))),))
    assert validate(q) == []


def test_missing_and_overlapping_parts():
    overlap = ColoredQuiver(3, (ColorClass("a", (1, 2, 3), ((1, 2), (2, 3)), (0, 1)),))
    assert any("overlapping" in p for p in validate(overlap))
    gap = ColoredQuiver(3, (ColorClass("a", (1, 2, 3), ((1,), (2,)), (0, 1)),))
    assert validate(gap)
    empty = ColoredQuiver(2, (ColorClass("a", (1, 2), ((1, 2), ()), (0, 1)),))
    assert validate(empty)


def test_invalid_quiver_rejected_by_constructions():
    bad = ColoredQuiver(3, (ColorClass("a", (1, 2, 3), ((1, 2), (2, 3)), (0, 1)),))
    with pytest.raises(InvalidQuiver):
        double_quiver(bad)
    with pytest.raises(InvalidQuiver):
        boalch_relations(bad)


def test_double_quiver_triangle():
    names = sorted(render(AlgElem.symbol(s)) for s in double_quiver(triangle_quiver()))
    assert names == ["v12", "v13", "v21", "v23", "v31", "v32"]


def test_double_quiver_interval():
    assert sorted(double_quiver(interval_quiver())) == [V(1, 2), V(2, 1)]


def test_single_vertex_has_no_arrows():
    q = monochromatic(1)
    assert not double_quiver(q)
    syms = extended_double(q).symbols
    assert [s.kind for s in syms if s.kind == Kind.GAMMA] == [Kind.GAMMA]
    assert not [s for s in syms if s.kind in (Kind.V, Kind.W)]


def test_extended_double_triangle_counts():
    syms = extended_double(triangle_quiver()).symbols
    count = {k: sum(1 for s in syms if s.kind == k) for k in Kind}
    # 12 arrows and 3 loops, plus the adjoined loop inverses
    assert count[Kind.V] == 6 and count[Kind.W] == 6 and count[Kind.GAMMA] == 3 and count[Kind.GAMMA_INV] == 3


def test_extended_double_interval_adds():
    syms = {render(AlgElem.symbol(s)) for s in extended_double(interval_quiver()).symbols}
    assert {"w12", "w21", "g1", "g2"} <= syms


@given(partitioned())
def test_symbol_counts(q):
    c = q.colors[0]
    k = len(c.vertices)
    syms = extended_double(q).symbols
    assert sum(1 for s in syms if s.kind == Kind.W) == k * (k - 1)
    assert sum(1 for s in syms if s.kind == Kind.GAMMA) == k
    cross = sum(len(a) * len(b) for i, a in enumerate(c.partition) for b in c.partition[i + 1:])
    assert len(original_arrows(q)) == cross
    assert len(double_quiver(q)) == 2 * cross


@given(partitioned(), st.data())
def test_validate_insensitive_to_within_part_order(q, data):
    c = q.colors[0]
    parts = tuple(tuple(data.draw(st.permutations(p))) for p in c.partition)
    relabeled = ColoredQuiver(q.n, (replace(c, partition=parts),))
    assert validate(relabeled) == validate(q) == []


def test_triangle_nine_components():
    rels = boalch_relations(triangle_quiver())
    assert len(rels.all_components()) == 9


def test_interval_four_components():
    assert len(boalch_relations(interval_quiver()).all_components()) == 4


def test_single_loop_relation_forces_identity():
    rel = boalch_relations(monochromatic(1)).per_color["a"]
    assert rel.lhs == P("e1") and rel.rhs == P("g1")


def test_fission_relations_single_color():
    rels = fission_relations(triangle_quiver(), [1, 1, 1])
    assert [(r.lhs, r.rhs) for r in rels] == [(P(f"g{i}"), P(f"e{i}")) for i in (1, 2, 3)]


def test_fission_relations_interval_parameters():
    rels = fission_relations(interval_quiver(), {1: 2, 2: -3})
    assert [r.residual() for r in rels] == [P("g1 - 2 e1"), P("g2 + 3 e2")]


def test_fission_relations_two_colors():
    q = ColoredQuiver(2, (ColorClass("a", (1, 2), ((1,), (2,)), (0, 1)), ColorClass("b", (1, 2), ((2,), (1,)), (0, 1))))
    assert validate(q) == []
    rels = fission_relations(q, {1: 5, 2: 1}, vertex_orders={1: ["b", "a"]})
    assert rels[0].lhs == P("b:g1*g1") and rels[0].rhs == P("5 e1")
    assert rels[1].lhs == P("g2*b:g2")


def test_fission_rejects_zero_parameter():
    with pytest.raises(ValueError):
        fission_relations(interval_quiver(), [1, 0])


def test_derived_generators_triangle():
    defs = {render(AlgElem.symbol(d.symbol)): d.value for d in derived_generators(triangle_quiver())}
    assert defs["g3"] == P("e3 + v31*v13 + v32*v23")
    assert defs["w13"] == P("v13*g3inv")
    assert defs["w31"] == P("g3inv*v31")
    order = [render(AlgElem.symbol(d.symbol)) for d in derived_generators(triangle_quiver())]
    assert order.index("g3") < order.index("g2") < order.index("g1")


def test_derived_generators_are_acyclic():
    seen = set()
    for d in derived_generators(triangle_quiver()):
        for s in d.value.symbols():
            if s.kind in (Kind.W, Kind.GAMMA):
                assert s in seen, f"{d.symbol!r} uses {s!r} before it is defined"
            if s.kind == Kind.GAMMA_INV:
                assert s._replace(kind=Kind.GAMMA) in seen
        seen.add(d.symbol)


def test_interval_loops():
    q = interval_quiver()
    defs = {render(AlgElem.symbol(d.symbol)): d.value for d in derived_generators(q)}
    assert defs["g2"] == P("e2 + v21*v12")
    alg = boalch_algebra(q)
    # g1 is the inverse of e1 + v12 v21
    d = decide(P("g1*(e1 + v12*v21)"), P("e1"), alg, (Strategy.EXPANDED,))
    assert d.verdict == Verdict.EQUAL


def test_first_loop_inverse():
    q = interval_quiver()
    assert first_loop_inverse(q, q.colors[0]) == P("e1 + v12*v21")
    t = triangle_quiver()
    expected = P("e1 + v12*v21 + v13*v31 - v12*v23*v31 - v13*v32*v21 + v12*v23*v32*v21")
    assert first_loop_inverse(t, t.colors[0]) == expected


def test_expanded_rules_complete_on_builtins():
    for q in (interval_quiver(), triangle_quiver()):
        assert boalch_algebra(q).expanded_complete


@pytest.mark.parametrize("q", [interval_quiver(), triangle_quiver()], ids=["interval", "triangle"])
def test_relations_and_inverses_reduce_to_zero(q):
    alg = boalch_algebra(q)
    for rel in boalch_relations(q).all_components():
        nf, ok = normalize(rel.residual(), alg.expanded)
        assert ok and nf.is_zero(), rel.label
    for s in q.vertices:
        for text in (f"g{s}*g{s}inv - e{s}", f"g{s}inv*g{s} - e{s}"):
            nf, ok = normalize(P(text), alg.expanded)
            assert ok and nf.is_zero(), text


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(partitioned(max_n=3))
def test_relations_vanish_on_random_quivers(q):
    alg = boalch_algebra(q)
    for rel in boalch_relations(q).all_components():
        nf, ok = normalize(rel.residual(), alg.expanded)
        assert ok and nf.is_zero()


def test_relations_vanish_two_colors():
    q = ColoredQuiver(3, (ColorClass("a", (1, 2, 3), ((1,), (2,), (3,)), (0, 1, 2)), ColorClass("b", (1, 3), ((3,), (1,)), (0, 1))))
    alg = boalch_algebra(q)
    assert all(normalize(r.residual(), alg.expanded)[0].is_zero() for r in boalch_relations(q).all_components())


@given(partitioned())
def test_json_roundtrip(q):
    assert from_json(json.loads(dumps(q))) == q


def test_malformed_json():
    with pytest.raises(InvalidQuiver):
        from_json({"n": 2})


def test_json_format():
    data = to_json(triangle_quiver())
    assert data == {"n": 3, "colors": [{"id": "a", "vertices": [1, 2, 3], "partition": [[1], [2], [3]], "part_order": [0, 1, 2]}]}
