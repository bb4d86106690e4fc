"""Reference brackets for the interval and the triangle.

Each fixture holds the generator table on the ``v`` arrows, the expected
values of the bracket on derived generators, and the moment map.  Three values
as originally printed put an idempotent on the wrong side of a tensor factor
(two generator-table entries and one expected value).  The fixtures store the
window-consistent form; ``literal`` and ``Expected.printed`` keep the printed
text next to it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..dbracket import BracketTable, Report, CheckEntry
from ..ncalg import TAU12, AlgElem, Algebra, Strategy, Tensor, decide, parse_elem, parse_tensor, render
from ..ncalg.equality import DEFAULT_CHAIN
from ..quiver import ColoredQuiver, derived_generators, interval_quiver, triangle_quiver


@dataclass(frozen=True)
class Expected:
    group: str
    a: str
    b: str
    value: str
    printed: Optional[str] = None  # the originally printed value when it violates the window

    @property
    def label(self) -> str:
        return f"{{{{{self.a}, {self.b}}}}}"


@dataclass
class Fixture:
    name: str
    quiver: ColoredQuiver
    table: BracketTable
    expected: List[Expected]
    phi: Dict[int, AlgElem]
    phi_inv: Dict[int, AlgElem]
    literal: Dict[Tuple[str, str], Tuple[str, str]] = field(default_factory=dict)

    def expected_tensor(self, e: Expected) -> Tensor:
        return parse_tensor(e.value)

    def printed_corrections(self) -> List[Tuple[str, str, str, str]]:
        """``(a, b, printed, corrected)`` for every entry stored in corrected form."""
        out = [(a, b, lit, fixed) for (a, b), (lit, fixed) in self.literal.items()]
        out += [(e.a, e.b, e.printed, e.value) for e in self.expected if e.printed is not None]
        return out


def _table(q: ColoredQuiver, rows: Sequence[Tuple[str, str, str]], name: str, literal) -> BracketTable:
    defs = {d.symbol: d.value for d in derived_generators(q, expanded=True)}
    entries = {}
    for a, b, value in rows:
        (sa,), = parse_elem(a).terms
        (sb,), = parse_elem(b).terms
        entries[(sa, sb)] = parse_tensor(value)
    meta = {"literal": {f"{a},{b}": lit for (a, b), (lit, _) in literal.items()}}
    return BracketTable(entries, defs, name=name, metadata=meta)


def _loops(n: int):
    phi = {s: parse_elem(f"g{s}") for s in range(1, n + 1)}
    phi_inv = {s: parse_elem(f"g{s}inv") for s in range(1, n + 1)}
    return phi, phi_inv


def _antisymmetric(rows: Sequence[Expected], group: str) -> List[Expected]:
    """Partners obtained from ``{{b, a}} = -tau {{a, b}}``, rendered as text."""
    out = []
    for e in rows:
        if e.a == e.b:
            continue
        swapped = -parse_tensor(e.value).tau(TAU12)
        out.append(Expected(group, e.b, e.a, render(swapped)))
    return out


# -- interval ---------------------------------------------------------------

INTERVAL_LITERAL = {
    ("v12", "v21"): (
        "-e2 (x) e1 - 1/2 e1 (x) v12*v21 - 1/2 v21*v12 (x) e1",
        "-e2 (x) e1 - 1/2 e2 (x) v12*v21 - 1/2 v21*v12 (x) e1",
    ),
}

INTERVAL_V = [
    ("v12", "v12", "0"),
    ("v21", "v21", "0"),
    ("v21", "v12", "e1 (x) e2 + 1/2 v12*v21 (x) e2 + 1/2 e1 (x) v21*v12"),
]

INTERVAL_EXPECTED = [
    Expected("derived", "v12", "v12", "0"),
    Expected("derived", "v21", "v21", "0"),
    Expected("derived", "v21", "v12", "e1 (x) e2 + 1/2 v12*v21 (x) e2 + 1/2 e1 (x) v21*v12"),
    Expected("derived", "w21", "v21", "1/2 w21 (x) v21 + 1/2 v21 (x) w21"),
    Expected("derived", "w12", "v12", "-1/2 w12 (x) v12 - 1/2 v12 (x) w12"),
    Expected("derived", "w21", "v12", "1/2 e1 (x) g2inv + 1/2 g1 (x) e2"),
    Expected("derived", "w12", "v21", "-1/2 g2inv (x) e1 - 1/2 e2 (x) g1"),
    Expected("derived", "w12", "w12", "0"),
    Expected("derived", "w21", "w21", "0"),
    Expected("derived", "w21", "w12", "g1 (x) g2inv - 1/2 w12*w21 (x) e2 - 1/2 e1 (x) w21*w12"),
]


def interval_fixture() -> Fixture:
    q = interval_quiver()
    phi, phi_inv = _loops(2)
    table = _table(q, INTERVAL_V, "interval", INTERVAL_LITERAL)
    return Fixture("interval", q, table, list(INTERVAL_EXPECTED), phi, phi_inv, dict(INTERVAL_LITERAL))


# -- triangle ---------------------------------------------------------------

TRIANGLE_LITERAL = {
    ("v23", "v32"): (
        "-e3 (x) e2 - 1/2 e3 (x) v23*v32 - 1/2 v32*v23 (x) e3",
        "-e3 (x) e2 - 1/2 e3 (x) v23*v32 - 1/2 v32*v23 (x) e2",
    ),
}

TRIANGLE_V = [
    ("v12", "v13", "1/2 v12 (x) v13"),
    ("v12", "v32", "1/2 v32 (x) v12"),
    ("v21", "v31", "-1/2 v31 (x) v21"),
    ("v21", "v23", "-1/2 v21 (x) v23"),
    ("v13", "v23", "1/2 v23 (x) v13"),
    ("v13", "v32", "-1/2 e3 (x) v13*v32"),
    ("v31", "v23", "1/2 v23*v31 (x) e3"),
    ("v31", "v32", "-1/2 v31 (x) v32"),
    ("v12", "v21", "-e2 (x) e1 - 1/2 e2 (x) v12*v21 - 1/2 v21*v12 (x) e1"),
    ("v12", "v31", "-1/2 v31*v12 (x) e1 - v32 (x) e1"),
    ("v12", "v23", "-1/2 e2 (x) v12*v23 + e2 (x) v13"),
    ("v21", "v13", "1/2 e1 (x) v21*v13 + e1 (x) v23"),
    ("v21", "v32", "1/2 v32*v21 (x) e2 - v31 (x) e2"),
    ("v13", "v31", "-e3 (x) e1 - v32*v23 (x) e1 - 1/2 e3 (x) v13*v31 - 1/2 v31*v13 (x) e1"),
    ("v23", "v32", TRIANGLE_LITERAL[("v23", "v32")][1]),
] + [(f"v{i}{j}", f"v{i}{j}", "0") for i in range(1, 4) for j in range(1, 4) if i != j]

TRIANGLE_WV = [
    ("w12", "v12", "-1/2 v12 (x) w12 - 1/2 w12 (x) v12"),
    ("w12", "v21", "1/2 v21*w12 (x) e1 + 1/2 e2 (x) w12*v21 - e2 (x) e1"),
    ("w12", "v13", "-1/2 w12 (x) v13"),
    ("w12", "v31", "1/2 v31*w12 (x) e1"),
    ("w12", "v23", "1/2 e2 (x) w12*v23", "1/2 e3 (x) w12*v23"),
    ("w12", "v32", "-1/2 v32 (x) w12"),
    ("w21", "v12", "e1 (x) e2 - 1/2 v12*w21 (x) e2 - 1/2 e1 (x) w21*v12"),
    ("w21", "v21", "1/2 w21 (x) v21 + 1/2 v21 (x) w21"),
    ("w21", "v13", "-1/2 e1 (x) w21*v13"),
    ("w21", "v31", "1/2 v31 (x) w21"),
    ("w21", "v23", "1/2 w21 (x) v23"),
    ("w21", "v32", "-1/2 v32*w21 (x) e2"),
    ("w13", "v12", "-1/2 w13 (x) v12"),
    ("w13", "v21", "1/2 v21*w13 (x) e1 - w23 (x) e1"),
    ("w13", "v13", "-1/2 w13 (x) v13 - 1/2 v13 (x) w13"),
    ("w13", "v31", "1/2 v31*w13 (x) e1 + 1/2 e3 (x) w13*v31 - e3 (x) e1"),
    ("w13", "v23", "-1/2 v23 (x) w13"),
    ("w13", "v32", "1/2 e3 (x) w13*v32"),
    ("w31", "v12", "-1/2 e1 (x) w31*v12 + e1 (x) w32"),
    ("w31", "v21", "1/2 v21 (x) w31"),
    ("w31", "v13", "e1 (x) e3 - 1/2 v13*w31 (x) e3 - 1/2 e1 (x) w31*v13"),
    ("w31", "v31", "1/2 w31 (x) v31 + 1/2 v31 (x) w31"),
    ("w31", "v23", "-1/2 v23*w31 (x) e3"),
    ("w31", "v32", "1/2 w31 (x) v32"),
    ("w23", "v12", "1/2 v12*w23 (x) e2"),
    ("w23", "v21", "-1/2 w23 (x) v21"),
    ("w23", "v13", "-1/2 v13 (x) w23"),
    ("w23", "v31", "1/2 e3 (x) w23*v31 - e3 (x) v21"),
    ("w23", "v23", "-1/2 v23 (x) w23 - 1/2 w23 (x) v23"),
    ("w23", "v32", "1/2 e3 (x) w23*v32 + 1/2 v32*w23 (x) e2 - e3 (x) e2"),
    ("w32", "v12", "1/2 v12 (x) w32"),
    ("w32", "v21", "-1/2 e2 (x) w32*v21"),
    ("w32", "v13", "-1/2 v13*w32 (x) e3 + v12 (x) e3"),
    ("w32", "v31", "1/2 w32 (x) v31"),
    ("w32", "v23", "e2 (x) e3 - 1/2 v23*w32 (x) e3 - 1/2 e2 (x) w32*v23"),
    ("w32", "v32", "1/2 w32 (x) v32 + 1/2 v32 (x) w32"),
]

TRIANGLE_WW = [
    ("w12", "w21", "1/2 e2 (x) w12*w21 + 1/2 w21*w12 (x) e1 - g2inv (x) g1"),
    ("w12", "w13", "-1/2 w12 (x) w13"),
    ("w12", "w31", "1/2 w31*w12 (x) e1"),
    ("w12", "w23", "1/2 e2 (x) w12*w23 - e2 (x) w13"),
    ("w12", "w32", "-1/2 w32 (x) w12"),
    ("w21", "w13", "-1/2 e1 (x) w21*w13"),
    ("w21", "w31", "1/2 w31 (x) w21"),
    ("w21", "w23", "1/2 w21 (x) w23"),
    ("w21", "w32", "-1/2 w32*w21 (x) e2 + w31 (x) e2"),
    ("w13", "w31", "1/2 e3 (x) w13*w31 + 1/2 w31*w13 (x) e1 + g3inv (x) w13*g3*w31 - g3inv (x) e1"),
    ("w13", "w23", "-1/2 w23 (x) w13"),
    ("w13", "w32", "1/2 e3 (x) w13*w32 - g3inv (x) w12*g2"),
    ("w31", "w23", "-1/2 w23*w31 (x) e3 + g2*w21 (x) g3inv"),
    ("w31", "w32", "1/2 w31 (x) w32"),
    ("w23", "w32", "1/2 e3 (x) w23*w32 + 1/2 w32*w23 (x) e2 - g3inv (x) g2"),
]

TRIANGLE_WW_ZERO = [(f"w{i}{j}", f"w{i}{j}", "0") for i in range(1, 4) for j in range(1, 4) if i != j]


def triangle_fixture() -> Fixture:
    q = triangle_quiver()
    phi, phi_inv = _loops(3)
    table = _table(q, TRIANGLE_V, "triangle", TRIANGLE_LITERAL)
    wv = [Expected("wv", *row) for row in TRIANGLE_WV]
    ww = [Expected("ww", *row) for row in TRIANGLE_WW_ZERO + TRIANGLE_WW]
    expected = wv + _antisymmetric(wv, "vw") + ww + _antisymmetric(ww, "ww-completion")
    return Fixture("triangle", q, table, expected, phi, phi_inv, dict(TRIANGLE_LITERAL))


FIXTURES = {"interval": interval_fixture, "triangle": triangle_fixture}


def verify_fixture(
    fx: Fixture,
    algebra: Optional[Algebra] = None,
    chain: Sequence[Strategy] = DEFAULT_CHAIN,
    groups: Optional[Sequence[str]] = None,
) -> Report:
    """Recompute every expected bracket from the generator table and compare."""
    from ..quiver import boalch_algebra

    algebra = algebra or boalch_algebra(fx.quiver)
    report = Report()
    for e in fx.expected:
        if groups is not None and e.group not in groups:
            continue
        lhs = fx.table.dbl(parse_elem(e.a), parse_elem(e.b))
        rhs = fx.expected_tensor(e)
        report.entries.append(CheckEntry(f"{e.group} {e.label}", lhs, rhs, decide(lhs, rhs, algebra, chain)))
    return report
