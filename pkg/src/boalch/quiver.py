"""Colored quivers, their doubles and extended doubles, and the Boalch relations.

Each color class carries a partition of its vertex set and a total order
(parts in ``part_order``, then the listed order inside each part).  Arrows of
a color run from the later vertex to the earlier one; ``v_ij`` is the arrow
``j -> i``, so the original arrows are the ``v_ij`` with ``i`` before ``j``
and the double adds the opposites.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .ncalg import AlgElem, Algebra, GenSymbol, Kind, RuleSet, Word, cancellation_rules, is_locally_confluent
from .ncalg.rewrite import normalize


@dataclass(frozen=True)
class ColorClass:
    id: str
    vertices: Tuple[int, ...]
    partition: Tuple[Tuple[int, ...], ...]
    part_order: Tuple[int, ...]
    # Declared arrows as (tail, head) pairs; None means "the complete k-partite set".
    arrows: Optional[Tuple[Tuple[int, int], ...]] = None

    @property
    def order(self) -> Tuple[int, ...]:
        return tuple(v for p in self.part_order for v in self.partition[p])

    @property
    def rank(self) -> Dict[int, int]:
        return {v: r for r, v in enumerate(self.order)}

    def part_index(self, v: int) -> int:
        for idx, part in enumerate(self.partition):
            if v in part:
                return idx
        raise KeyError(v)

    def same_part(self, a: int, b: int) -> bool:
        return self.part_index(a) == self.part_index(b)

    def complete_arrows(self) -> List[Tuple[int, int]]:
        """The (tail, head) pairs of the complete k-partite orientation."""
        order = self.order
        out = []
        for hi in range(len(order)):
            for lo in range(hi):
                tail, head = order[hi], order[lo]
                if not self.same_part(tail, head):
                    out.append((tail, head))
        return out


@dataclass(frozen=True)
class ColoredQuiver:
    n: int
    colors: Tuple[ColorClass, ...] = ()

    def color(self, cid: str) -> ColorClass:
        for c in self.colors:
            if c.id == cid:
                return c
        raise KeyError(f"no color {cid!r}")

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)


def validate(q: ColoredQuiver) -> List[str]:
    """List every violated structural constraint; empty means valid."""
    bad: List[str] = []
    if not isinstance(q.n, int) or q.n < 1:
        return [f"vertex count must be a positive integer, got {q.n!r}"]
    seen_ids = set()
    for c in q.colors:
        tag = f"color {c.id!r}"
        if not c.id:
            bad.append("empty color id")
        if c.id in seen_ids:
            bad.append(f"{tag}: duplicate color id")
        seen_ids.add(c.id)
        verts = list(c.vertices)
        for v in verts:
            if not (isinstance(v, int) and 1 <= v <= q.n):
                bad.append(f"{tag}: vertex {v!r} out of range 1..{q.n}")
        if len(set(verts)) != len(verts):
            bad.append(f"{tag}: repeated vertex in vertex list")
        if not verts:
            bad.append(f"{tag}: empty vertex set")
        counted: Dict[int, int] = {}
        for idx, part in enumerate(c.partition):
            if not part:
                bad.append(f"{tag}: empty part {idx}")
            for v in part:
                counted[v] = counted.get(v, 0) + 1
        for v, k in sorted(counted.items()):
            if k > 1:
                bad.append(f"{tag}: overlapping parts at vertex {v}")
            if v not in verts:
                bad.append(f"{tag}: part vertex {v} not in the color's vertex set")
        for v in verts:
            if v not in counted:
                bad.append(f"{tag}: vertex {v} not covered by the partition")
        if sorted(c.part_order) != list(range(len(c.partition))):
            bad.append(f"{tag}: part_order {list(c.part_order)} is not a permutation of the parts")
        if bad:
            continue
        if c.arrows is not None:
            rank = c.rank
            expected = set(c.complete_arrows())
            declared: Dict[Tuple[int, int], int] = {}
            for tail, head in c.arrows:
                if tail not in rank or head not in rank:
                    bad.append(f"{tag}: arrow {tail}->{head} leaves the color's vertex set")
                    continue
                if tail == head:
                    bad.append(f"{tag}: loop {tail}->{head} declared as an arrow")
                    continue
                if c.same_part(tail, head):
                    bad.append(f"{tag}: same-part edge {tail}->{head}")
                    continue
                if rank[tail] < rank[head]:
                    bad.append(f"{tag}: arrow {tail}->{head} points against the color order")
                    continue
                declared[(tail, head)] = declared.get((tail, head), 0) + 1
            for arrow, k in sorted(declared.items()):
                if k > 1:
                    bad.append(f"{tag}: arrow {arrow[0]}->{arrow[1]} declared {k} times")
            for tail, head in sorted(expected - set(declared)):
                bad.append(f"{tag}: missing arrow {tail}->{head}")
    return bad


class InvalidQuiver(ValueError):
    pass


def _require_valid(q: ColoredQuiver) -> None:
    problems = validate(q)
    if problems:
        raise InvalidQuiver("invalid colored quiver: " + "; ".join(problems))


def _v(c: ColorClass, t: int, s: int) -> GenSymbol:
    return GenSymbol(Kind.V, c.id, t, s)


def _w(c: ColorClass, t: int, s: int) -> GenSymbol:
    return GenSymbol(Kind.W, c.id, t, s)


def _g(c: ColorClass, k: int, inverse: bool = False) -> GenSymbol:
    return GenSymbol(Kind.GAMMA_INV if inverse else Kind.GAMMA, c.id, k, k)


def original_arrows(q: ColoredQuiver) -> List[GenSymbol]:
    _require_valid(q)
    return sorted(_v(c, head, tail) for c in q.colors for tail, head in c.complete_arrows())


def double_quiver(q: ColoredQuiver) -> List[GenSymbol]:
    """All ``v`` symbols: the original arrows and their opposites."""
    out = []
    for a in original_arrows(q):
        out.append(a)
        out.append(a._replace(target=a.source, source=a.target))
    return sorted(out)


@dataclass(frozen=True)
class ExtendedDouble:
    v: Tuple[GenSymbol, ...]
    w: Tuple[GenSymbol, ...]
    gamma: Tuple[GenSymbol, ...]
    gamma_inv: Tuple[GenSymbol, ...]

    @property
    def symbols(self) -> Tuple[GenSymbol, ...]:
        return self.v + self.w + self.gamma + self.gamma_inv


def extended_double(q: ColoredQuiver) -> ExtendedDouble:
    v = double_quiver(q)
    w, g, gi = [], [], []
    for c in q.colors:
        for i in c.vertices:
            g.append(_g(c, i))
            gi.append(_g(c, i, True))
            for j in c.vertices:
                if i != j:
                    w.append(_w(c, i, j))
    return ExtendedDouble(tuple(v), tuple(sorted(w)), tuple(sorted(g)), tuple(sorted(gi)))


def symbol_exists(q: ColoredQuiver, sym: GenSymbol) -> bool:
    if sym.kind == Kind.IDEMPOTENT:
        return 1 <= sym.target <= q.n
    return sym in set(extended_double(q).symbols)


@dataclass
class Relation:
    label: str
    lhs: AlgElem
    rhs: AlgElem

    def residual(self) -> AlgElem:
        return self.lhs - self.rhs


@dataclass
class BoalchRelations:
    per_color: Dict[str, Relation]
    decomposed: Dict[str, List[Relation]]

    def all_components(self) -> List[Relation]:
        return [r for rels in self.decomposed.values() for r in rels]


def _sym(s: GenSymbol) -> AlgElem:
    return AlgElem({(s,): 1})


def boalch_relations(q: ColoredQuiver) -> BoalchRelations:
    """``(1 + v_-)(1 + v_+) = (1 + w_+) gamma (1 + w_-)`` per color, and its idempotent components."""
    _require_valid(q)
    per_color: Dict[str, Relation] = {}
    decomposed: Dict[str, List[Relation]] = {}
    for c in q.colors:
        rank = c.rank
        one = AlgElem.unit(c.vertices)
        v_plus, v_minus, w_plus, w_minus = AlgElem(), AlgElem(), AlgElem(), AlgElem()
        gamma = AlgElem()
        for i in c.vertices:
            gamma = gamma + _sym(_g(c, i))
            for j in c.vertices:
                if i == j:
                    continue
                if rank[i] < rank[j]:
                    w_plus = w_plus + _sym(_w(c, i, j))
                    if not c.same_part(i, j):
                        v_plus = v_plus + _sym(_v(c, i, j))
                else:
                    w_minus = w_minus + _sym(_w(c, i, j))
                    if not c.same_part(i, j):
                        v_minus = v_minus + _sym(_v(c, i, j))
        lhs = (one + v_minus) * (one + v_plus)
        rhs = (one + w_plus) * gamma * (one + w_minus)
        per_color[c.id] = Relation(f"color {c.id}", lhs, rhs)
        comps = []
        for i in c.order:
            for j in c.order:
                ei, ej = AlgElem.e(i), AlgElem.e(j)
                comps.append(Relation(f"color {c.id} ({i},{j})", ei * lhs * ej, ei * rhs * ej))
        decomposed[c.id] = comps
    return BoalchRelations(per_color, decomposed)


def fission_relations(
    q: ColoredQuiver,
    params: Union[Mapping[int, Fraction], Sequence[Fraction]],
    vertex_orders: Optional[Mapping[int, Sequence[str]]] = None,
) -> List[Relation]:
    """Ordered product of the loops at each vertex equals ``q_s e_s``."""
    _require_valid(q)
    if not isinstance(params, Mapping):
        params = {s: p for s, p in zip(q.vertices, params)}
    out = []
    for s in q.vertices:
        if s not in params:
            raise ValueError(f"missing fission parameter for vertex {s}")
        qs = Fraction(params[s])
        if qs == 0:
            raise ValueError(f"fission parameter at vertex {s} must be nonzero")
        at_s = [c.id for c in q.colors if s in c.vertices]
        order = list(vertex_orders[s]) if vertex_orders and s in vertex_orders else at_s
        if sorted(order) != sorted(at_s):
            raise ValueError(f"color order at vertex {s} must list exactly {sorted(at_s)}")
        prod = AlgElem.e(s)
        for cid in order:
            prod = prod * _sym(_g(q.color(cid), s))
        out.append(Relation(f"vertex {s}", prod, AlgElem.e(s).scale(qs)))
    return out


@dataclass(frozen=True)
class Definition:
    symbol: GenSymbol
    value: AlgElem


def derived_generators(q: ColoredQuiver, expanded: bool = False) -> List[Definition]:
    """Solve the Boalch relation for ``gamma`` and ``w`` by descending induction.

    With ``expanded`` the definitions are fully substituted and contain only
    ``v`` and ``gamma^{-1}`` symbols.
    """
    _require_valid(q)
    defs: List[Definition] = []
    for c in q.colors:
        order = c.order
        m = len(order)

        def v(i, j):
            return AlgElem() if c.same_part(i, j) else _sym(_v(c, i, j))

        def vv_sum(i, j, below):
            acc = AlgElem()
            for r in range(below):
                k = order[r]
                if k != i and k != j:
                    acc = acc + v(i, k) * v(k, j)
            return acc

        def wgw_sum(i, j, above):
            acc = AlgElem()
            for r in range(above + 1, m):
                l = order[r]
                acc = acc + _sym(_w(c, i, l)) * _sym(_g(c, l)) * _sym(_w(c, l, j))
            return acc

        for r in range(m - 1, -1, -1):
            k = order[r]
            gamma = AlgElem.e(k) + vv_sum(k, k, r) - wgw_sum(k, k, r)
            defs.append(Definition(_g(c, k), gamma))
            ginv = _sym(_g(c, k, True))
            for ri in range(r):
                i = order[ri]
                # w_ik for i before k, then w_ki
                defs.append(Definition(_w(c, i, k), (v(i, k) + vv_sum(i, k, ri) - wgw_sum(i, k, r)) * ginv))
                defs.append(Definition(_w(c, k, i), ginv * (v(k, i) + vv_sum(k, i, ri) - wgw_sum(k, i, r))))
    if not expanded:
        return defs
    loops = [(_g(c, k), _g(c, k, True)) for c in q.colors for k in c.vertices]
    wdefs = {d.symbol: d.value for d in defs if d.symbol.kind == Kind.W}
    rules = RuleSet(cancellation_rules(loops), wdefs, name="w-substitution")
    out = []
    for d in defs:
        val, ok = normalize(d.value, rules)
        if not ok:
            raise RuntimeError(f"expansion of {d.symbol!r} did not terminate")
        out.append(Definition(d.symbol, val))
    return out


def first_loop_inverse(q: ColoredQuiver, c: ColorClass) -> AlgElem:
    """``gamma^{-1}`` at the first vertex of ``c`` as a polynomial in ``v``.

    It is the corner entry of ``(1 + v_+)^{-1} (1 + v_-)^{-1}``; both factors
    are unipotent, so their inverses are finite geometric series.
    """
    order = c.order
    rank = c.rank
    k0 = order[0]

    def v(i, j):
        return AlgElem() if c.same_part(i, j) else _sym(_v(c, i, j))

    # row k0 of (1 + U)^{-1}, U holding v_ij for i before j
    row = {k0: AlgElem.e(k0)}
    term = dict(row)
    for _ in range(len(order)):
        nxt: Dict[int, AlgElem] = {}
        for i, x in term.items():
            for j in order:
                if rank[i] < rank[j]:
                    nxt[j] = nxt.get(j, AlgElem()) - x * v(i, j)
        term = {j: x for j, x in nxt.items() if not x.is_zero()}
        for j, x in term.items():
            row[j] = row.get(j, AlgElem()) + x
    # column k0 of (1 + L)^{-1}, L holding v_ji for i before j
    col = {k0: AlgElem.e(k0)}
    term = dict(col)
    for _ in range(len(order)):
        nxt = {}
        for i, x in term.items():
            for j in order:
                if rank[i] < rank[j]:
                    nxt[j] = nxt.get(j, AlgElem()) - v(j, i) * x
        term = {j: x for j, x in nxt.items() if not x.is_zero()}
        for j, x in term.items():
            col[j] = col.get(j, AlgElem()) + x
    out = AlgElem()
    for j, x in row.items():
        if j in col:
            out = out + x * col[j]
    return out


def _leading(x: AlgElem) -> Tuple[Word, Fraction]:
    return max(x.terms.items(), key=lambda kv: (len(kv[0]) if kv[0][0].kind != Kind.IDEMPOTENT else 0, kv[0]))


def localization_rules(q: ColoredQuiver) -> RuleSet:
    """Rules deciding equality after full expansion into ``v`` and ``gamma^{-1}``.

    For each loop, with ``gamma_k = c*L + R`` and ``L`` the leading word, the
    identities ``gamma_k^{-1} gamma_k = e_k = gamma_k gamma_k^{-1}`` are oriented
    as ``ginv L -> (e - ginv R)/c`` and ``L ginv -> (e - R ginv)/c``.  The
    loop inverse at the first vertex of each color is a polynomial in ``v``
    (see ``first_loop_inverse``) and is substituted instead.
    """
    exp = derived_generators(q, expanded=True)
    expansions = {d.symbol: d.value for d in exp}
    firsts = {}
    for c in q.colors:
        ginv = _g(c, c.order[0], inverse=True)
        firsts[ginv] = first_loop_inverse(q, c)
    patterns: List[Tuple[Word, AlgElem]] = []
    for d in exp:
        if d.symbol.kind != Kind.GAMMA:
            continue
        k = d.symbol.target
        ginv = d.symbol._replace(kind=Kind.GAMMA_INV)
        if ginv in firsts:
            continue
        partial = RuleSet(patterns)
        poly = partial.reduce(d.value)
        lead, coef = _leading(poly)
        rest = poly - AlgElem({lead: coef})
        e = AlgElem.e(k)
        gi = AlgElem({(ginv,): 1})
        if lead[0].kind == Kind.IDEMPOTENT:
            patterns.append(((ginv,), (e - rest).scale(1 / coef)))
            continue
        patterns.append(((ginv,) + lead, (e - gi * rest).scale(1 / coef)))
        patterns.append((lead + (ginv,), (e - rest * gi).scale(1 / coef)))
    expansions.update(firsts)
    return RuleSet(patterns, expansions, name="localization")


def structural_rules(q: ColoredQuiver) -> RuleSet:
    loops = [(_g(c, k), _g(c, k, True)) for c in q.colors for k in c.vertices]
    return RuleSet(cancellation_rules(loops), name="cancellation")


def boalch_algebra(q: ColoredQuiver, oracle=None) -> Algebra:
    """The layered-equality context for the Boalch algebra of ``q``."""
    expanded = localization_rules(q)
    return Algebra(
        structural=structural_rules(q),
        expanded=expanded,
        structural_complete=False,
        expanded_complete=is_locally_confluent(expanded),
        oracle=oracle,
    )


# -- serialization -----------------------------------------------------------


def to_json(q: ColoredQuiver) -> dict:
    colors = []
    for c in q.colors:
        d = {
            "id": c.id,
            "vertices": list(c.vertices),
            "partition": [list(p) for p in c.partition],
            "part_order": list(c.part_order),
        }
        if c.arrows is not None:
            d["arrows"] = [list(a) for a in c.arrows]
        colors.append(d)
    return {"n": q.n, "colors": colors}


def from_json(data: Mapping) -> ColoredQuiver:
    try:
        colors = []
        for c in data["colors"]:
            partition = tuple(tuple(int(v) for v in p) for p in c["partition"])
            colors.append(
                ColorClass(
                    id=str(c["id"]),
                    vertices=tuple(int(v) for v in c["vertices"]),
                    partition=partition,
                    part_order=tuple(int(i) for i in c.get("part_order", range(len(partition)))),
                    arrows=tuple((int(a), int(b)) for a, b in c["arrows"]) if "arrows" in c else None,
                )
            )
        return ColoredQuiver(int(data["n"]), tuple(colors))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidQuiver(f"malformed quiver JSON: {exc!r}") from exc


def load(path: Union[str, Path]) -> ColoredQuiver:
    return from_json(json.loads(Path(path).read_text()))


def dumps(q: ColoredQuiver) -> str:
    return json.dumps(to_json(q), indent=2)


def monochromatic(n: int, parts: Optional[Sequence[Sequence[int]]] = None, color: str = "a") -> ColoredQuiver:
    """Single color on ``1..n``; singleton parts unless given."""
    parts = [[v] for v in range(1, n + 1)] if parts is None else [list(p) for p in parts]
    verts = tuple(v for p in parts for v in p)
    return ColoredQuiver(n, (ColorClass(color, tuple(sorted(verts)), tuple(tuple(p) for p in parts), tuple(range(len(parts)))),))


def interval_quiver() -> ColoredQuiver:
    return monochromatic(2)


def triangle_quiver() -> ColoredQuiver:
    return monochromatic(3)
