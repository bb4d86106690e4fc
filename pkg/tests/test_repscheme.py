import json

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from boalch.ncalg import Kind, Strategy, Tensor, V, Verdict, decide, parse_elem, parse_tensor
from boalch.quiver import ColorClass, ColoredQuiver, InvalidQuiver, boalch_relations, interval_quiver, monochromatic, triangle_quiver
from boalch.repscheme import (
    RepresentationError,
    dimension_count,
    evaluate,
    from_json,
    identity,
    induced_bracket,
    is_zero,
    oracle_equal,
    random_rep,
    relation_residuals,
    to_json,
    trace_bracket_check,
    trivial_rep,
)

from strategies import elements, word_elem, words

P = parse_elem
TRI = triangle_quiver()
ALL = (Kind.V, Kind.W, Kind.GAMMA, Kind.GAMMA_INV)
prop = settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _all_zero(r):
    return all(is_zero(m) for m in relation_residuals(r).values())


# -- construction ------------------------------------------------------------------


def test_trivial_rep_triangle_scalars():
    r = trivial_rep(TRI, (1, 1, 1))
    assert r.N == 3
    for sym, m in r.mats.items():
        if sym.kind in (Kind.V, Kind.W):
            assert is_zero(m)
    g3 = next(s for s in r.mats if s.kind == Kind.GAMMA and s.target == 3)
    assert r.block(g3).tolist() == [[1]]
    assert _all_zero(r)


def test_trivial_rep_interval_blocks():
    r = trivial_rep(interval_quiver(), (2, 3))
    assert r.block(V(1, 2)).shape == (2, 3) and r.block(V(2, 1)).shape == (3, 2)
    assert is_zero(r.symbol(V(1, 2)))
    for s, d in ((1, 2), (2, 3)):
        g = next(sym for sym in r.mats if sym.kind == Kind.GAMMA and sym.target == s)
        assert (r.block(g) == identity(d)).all()
    assert _all_zero(r)


def test_zero_dimension_rejected():
    with pytest.raises(ValueError):
        trivial_rep(TRI, (0, 0, 0))
    with pytest.raises(ValueError):
        random_rep(TRI, (1, 1))


def test_invalid_quiver_rejected():
    bad = ColoredQuiver(3, (ColorClass("a", (1, 2, 3), ((1, 2), (2, 3)), (0, 1)),))
    with pytest.raises(InvalidQuiver):
        trivial_rep(bad, (1, 1, 1))


def test_scalar_loop_formula():
    r = random_rep(TRI, (1, 1, 1), seed=4)
    val = {s: r.block(s)[0, 0] for s in r.mats if s.kind == Kind.V}
    g3 = next(s for s in r.mats if s.kind == Kind.GAMMA and s.target == 3)
    assert r.block(g3)[0, 0] == 1 + val[V(3, 1)] * val[V(1, 3)] + val[V(3, 2)] * val[V(2, 3)]
    assert r.block(g3)[0, 0] != 0


def test_zero_range_is_trivial():
    r = random_rep(TRI, (2, 1, 2), seed=9, entry_range=[0])
    t = trivial_rep(TRI, (2, 1, 2))
    assert all((r.mats[s] == t.mats[s]).all() for s in t.mats)


def test_retry_exhaustion_names_loop():
    # over {-1, 1} the scalar loop 1 + v21 v12 vanishes whenever the two entries differ
    q = interval_quiver()
    bad_seed = next(s for s in range(200) if _singular(q, s))
    with pytest.raises(RepresentationError, match="not invertible"):
        random_rep(q, (1, 1), seed=bad_seed, entry_range=[-1, 1], retries=1)


def _singular(q, seed):
    try:
        random_rep(q, (1, 1), seed=seed, entry_range=[-1, 1], retries=1)
    except RepresentationError:
        return True
    return False


@pytest.mark.parametrize("dims", [(1, 1, 1), (2, 2, 2), (1, 2, 3)])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_random_rep_relations_exact(dims, seed):
    assert _all_zero(random_rep(TRI, dims, seed))


def test_random_rep_is_deterministic():
    a, b = random_rep(TRI, (2, 2, 2), 5), random_rep(TRI, (2, 2, 2), 5)
    assert a.digest() == b.digest()
    assert a.digest() != random_rep(TRI, (2, 2, 2), 6).digest()


def test_json_roundtrip():
    r = random_rep(TRI, (1, 2, 3), 2)
    data = json.loads(json.dumps(to_json(r)))
    back = from_json(TRI, data)
    assert back.dims == r.dims and back.seed == r.seed
    assert all((back.mats[s] == r.mats[s]).all() for s in r.mats)


# -- dimension count -------------------------------------------------------------


def test_dimension_count_examples():
    assert dimension_count(TRI, (1, 1, 1)) == 6
    assert dimension_count(interval_quiver(), (2, 3)) == 12
    assert dimension_count(monochromatic(2, [[1, 2]]), (3, 4)) == 0


def test_dimension_count_matches_sampled():
    r = random_rep(TRI, (1, 2, 3), 1)
    assert r.sampled == dimension_count(TRI, (1, 2, 3)) == 2 * (2 + 3 + 6)


# -- evaluation ------------------------------------------------------------------


def test_unit_and_projectors(triangle_reps):
    r = triangle_reps[4]
    assert (evaluate(P("e1 + e2 + e3"), r) == identity(r.N)).all()
    assert (evaluate(P("g3*g3inv"), r) == r.projector(3)).all()


def test_unknown_symbol():
    r = random_rep(interval_quiver(), (1, 1), 1)
    with pytest.raises(KeyError):
        evaluate(P("v13"), r)


@prop
@given(elements(TRI, ALL, max_len=3), elements(TRI, ALL, max_len=3), st.sampled_from(range(9)))
def test_homomorphism(triangle_reps, x, y, k):
    r = triangle_reps[k]
    assert (evaluate(x * y, r) == evaluate(x, r).dot(evaluate(y, r))).all()
    assert (evaluate(x + y, r) == evaluate(x, r) + evaluate(y, r)).all()


@prop
@given(words(TRI, ALL, max_size=3))
def test_evaluation_respects_window(triangle_reps, w):
    r = triangle_reps[7]
    m = evaluate(word_elem(w), r)
    assert (r.projector(w[0].target).dot(m).dot(r.projector(w[-1].source)) == m).all()


def test_tensor_evaluation_is_outer_product(triangle_reps):
    r = triangle_reps[5]
    a, b = P("v12*v21"), P("g3")
    got = evaluate(Tensor.product(a, b), r)
    assert got.shape == (r.N,) * 4
    assert (got == np.multiply.outer(evaluate(a, r), evaluate(b, r))).all()


# -- oracle ----------------------------------------------------------------------


def test_oracle_loop_bracket(triangle_fx):
    reps = [random_rep(TRI, (2, 2, 2), s) for s in (1, 2, 3)]
    lhs = triangle_fx.table.dbl(P("g1"), P("v13"))
    rhs = parse_tensor("-1/2 e1 (x) g1*v13 - 1/2 g1 (x) v13")
    d = oracle_equal(lhs, rhs, reps)
    assert d.verdict == Verdict.EQUAL and d.evidence_only


def test_oracle_witness(triangle_reps):
    d = oracle_equal(P("v12*v21"), P("v21*v12"), triangle_reps)
    assert d.verdict == Verdict.NOT_EQUAL and "dims=" in d.witness
    assert oracle_equal(P("v12"), P("v12"), triangle_reps).verdict == Verdict.EQUAL


def test_oracle_edge_cases():
    assert oracle_equal(P("v12"), P("v21"), []).verdict == Verdict.UNDECIDED
    with pytest.raises(TypeError):
        oracle_equal(P("v12"), parse_tensor("v12 (x) e2"), [trivial_rep(TRI, (1, 1, 1))])


@st.composite
def relation_multiples(draw):
    """A pair ``(x, x + u * rel * w)`` that is equal in the algebra."""
    x = draw(elements(TRI, ALL, max_len=2))
    rels = boalch_relations(TRI).all_components()
    rel = draw(st.sampled_from(rels)).residual()
    u = draw(elements(TRI, ALL, max_terms=2, max_len=2))
    w = draw(elements(TRI, ALL, max_terms=2, max_len=2))
    return x, x + u * rel * w


@prop
@given(relation_multiples())
def test_oracle_agrees_with_expanded_on_equal_pairs(triangle_algebra, triangle_reps, pair):
    x, y = pair
    sym = decide(x, y, triangle_algebra, (Strategy.EXPANDED,))
    assert sym.verdict == Verdict.EQUAL
    assert oracle_equal(x, y, triangle_reps).verdict == Verdict.EQUAL


@prop
@given(elements(TRI, ALL, max_len=2), elements(TRI, ALL, max_len=2))
def test_oracle_agrees_with_expanded(triangle_algebra, triangle_reps, x, y):
    sym = decide(x, y, triangle_algebra, (Strategy.EXPANDED,))
    assert sym.verdict in (Verdict.EQUAL, Verdict.NOT_EQUAL)
    assert oracle_equal(x, y, triangle_reps).verdict == sym.verdict


# -- induced brackets ------------------------------------------------------------


def test_interval_induced_bracket_hand_contracted(interval_fx):
    q = interval_quiver()
    for seed in range(1, 6):
        r = random_rep(q, (1, 1), seed)
        x, y = r.block(V(1, 2))[0, 0], r.block(V(2, 1))[0, 0]
        arr = induced_bracket(P("v12"), P("v21"), interval_fx.table, r)
        assert arr[0, 1, 1, 0] == -(1 + x * y)


def test_self_bracket_of_generator_vanishes(triangle_fx, triangle_reps):
    arr = induced_bracket(P("v12"), P("v12"), triangle_fx.table, triangle_reps[3])
    assert is_zero(arr)


@prop
@given(words(TRI, max_size=3), words(TRI, max_size=3), st.sampled_from(range(9)))
def test_induced_bracket_skew(triangle_fx, triangle_reps, u, w, k):
    r = triangle_reps[k]
    a, b = word_elem(u), word_elem(w)
    ab = induced_bracket(a, b, triangle_fx.table, r)
    ba = induced_bracket(b, a, triangle_fx.table, r)
    assert (ab == -ba.transpose(2, 3, 0, 1)).all()


@pytest.mark.parametrize(
    "quiver, dims, a, b",
    [
        ("triangle", (2, 2, 2), "v12*v21", "v13*v31"),
        ("interval", (2, 2), "v12*v21", "v21*v12"),
        ("interval", (1, 3), "v12*v21", "v21*v12"),
        ("triangle", (1, 2, 3), "v12*v23*v31", "v12*v23*v31"),
    ],
)
def test_trace_bracket_examples(request, quiver, dims, a, b):
    fx = request.getfixturevalue(f"{quiver}_fx")
    r = random_rep(fx.quiver, dims, 1)
    ok, lhs, rhs = trace_bracket_check(P(a), P(b), fx.table, r)
    assert ok and lhs == rhs
    if a == b:
        assert lhs == 0

