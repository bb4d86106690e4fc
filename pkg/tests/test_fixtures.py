from collections import Counter
from dataclasses import replace

import pytest

from boalch.families import FIXTURES, verify_fixture
from boalch.ncalg import Kind, Strategy, Verdict, decide, idempotent_window, parse_elem, parse_tensor, render

T = parse_tensor


def _symbol(text):
    ((sym,),) = parse_elem(text).terms
    return sym


def _window(x, a, b):
    sa, sb = _symbol(a), _symbol(b)
    return idempotent_window(x, sa.source, sa.target, sb.source, sb.target)


@pytest.fixture(scope="module")
def triangle_report(triangle_fx, triangle_algebra):
    return verify_fixture(triangle_fx, triangle_algebra)


def test_interval_all_derived_brackets(interval_fx, interval_algebra):
    report = verify_fixture(interval_fx, interval_algebra)
    assert len(report) == 10 and report.verdict == Verdict.EQUAL


@pytest.mark.parametrize(
    "a, b, value",
    [
        ("w21", "v12", "1/2 e1 (x) g2inv + 1/2 g1 (x) e2"),
        ("w21", "w12", "g1 (x) g2inv - 1/2 w12*w21 (x) e2 - 1/2 e1 (x) w21*w12"),
        ("w12", "w12", "0"),
    ],
)
def test_interval_examples(interval_fx, interval_algebra, a, b, value):
    lhs = interval_fx.table.dbl(parse_elem(a), parse_elem(b))
    assert decide(lhs, T(value), interval_algebra, (Strategy.EXPANDED,)).verdict == Verdict.EQUAL


def test_triangle_group_sizes(triangle_fx):
    sizes = Counter(e.group for e in triangle_fx.expected)
    assert sizes == {"wv": 36, "vw": 36, "ww": 21, "ww-completion": 15}


def test_triangle_everything_equal(triangle_report):
    assert len(triangle_report) == 108
    assert triangle_report.verdict == Verdict.EQUAL
    assert all(e.decision.strategy == Strategy.EXPANDED for e in triangle_report.entries)


@pytest.mark.parametrize(
    "a, b, value",
    [
        ("w13", "v21", "1/2 v21*w13 (x) e1 - w23 (x) e1"),
        ("w23", "w32", "1/2 e3 (x) w23*w32 + 1/2 w32*w23 (x) e2 - g3inv (x) g2"),
        ("v31", "w32", "-1/2 v31 (x) w32"),
    ],
)
def test_triangle_examples(triangle_fx, triangle_report, a, b, value):
    (e,) = [e for e in triangle_fx.expected if (e.a, e.b) == (a, b)]
    assert triangle_fx.expected_tensor(e) == T(value)
    (row,) = [r for r in triangle_report.entries if r.label.endswith(e.label)]
    assert row.verdict == Verdict.EQUAL


def test_moment_loops(triangle_fx, interval_fx):
    assert triangle_fx.phi == {s: parse_elem(f"g{s}") for s in (1, 2, 3)}
    assert sorted(interval_fx.phi_inv) == [1, 2]


@pytest.mark.parametrize("name, count", [("interval", 1), ("triangle", 2)])
def test_corrections_differ_only_in_flagged_terms(name, count):
    fx = FIXTURES[name]()
    fixes = fx.printed_corrections()
    assert len(fixes) == count
    for a, b, printed, corrected in fixes:
        p, c = T(printed), T(corrected)
        assert _window(c, a, b) == c
        dropped = p - _window(p, a, b)
        added = c - _window(p, a, b)
        # one term leaves the window and one term comes back with the idempotent moved
        assert len(dropped.terms) == 1 and len(added.terms) == 1
        ((pw, pc),) = dropped.terms.items()
        ((cw, cc),) = added.terms.items()
        assert pc == cc
        moved = [i for i in range(2) if pw[i] != cw[i]]
        assert len(moved) == 1
        i = moved[0]
        assert len(pw[i]) == len(cw[i]) == 1
        assert pw[i][0].kind == cw[i][0].kind == Kind.IDEMPOTENT


def test_correction_text_preserved_in_metadata(triangle_fx):
    assert triangle_fx.table.metadata["literal"]["v23,v32"].endswith("v32*v23 (x) e3")


def test_sign_flip_gives_exactly_one_mismatch(triangle_fx, triangle_algebra):
    exp = list(triangle_fx.expected)
    idx = next(i for i, e in enumerate(exp) if e.group == "wv" and (e.a, e.b) == ("w13", "v21"))
    exp[idx] = replace(exp[idx], value=render(-T(exp[idx].value)))
    flipped = replace(triangle_fx, expected=exp)
    report = verify_fixture(flipped, triangle_algebra, groups=("wv",))
    assert len(report) == 36
    assert report.count(Verdict.NOT_EQUAL) == 1
    (bad,) = report.failures()
    assert "w13, v21" in bad.label and bad.decision.witness
