"""Double brackets from generator tables, triple brackets, and the
quasi-Poisson and multiplicative moment map identities."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .ncalg import (
    DEFAULT_CHAIN,
    TAU12,
    TAU123,
    TAU132,
    AlgElem,
    Algebra,
    Decision,
    GenSymbol,
    Kind,
    Strategy,
    Tensor,
    Verdict,
    Word,
    concat,
    decide,
    idempotent_window,
    parse_elem,
    parse_tensor,
    render,
)
from .ncalg.element import _accumulate
from .ncalg.words import inverse_of

log = logging.getLogger(__name__)

Pair = Tuple[GenSymbol, GenSymbol]


class MissingEntry(KeyError):
    def __init__(self, a: GenSymbol, b: GenSymbol):
        self.pair = (a, b)
        super().__init__(f"missing table entry for the pair ({a!r}, {b!r})")

    def __str__(self) -> str:
        return self.args[0]


class AntisymmetryError(ValueError):
    pass


def window_for(a: GenSymbol, b: GenSymbol, x: Tensor) -> Tensor:
    return idempotent_window(x, a.source, a.target, b.source, b.target)


def _swap(x: Tensor) -> Tensor:
    return -x.tau(TAU12)


class BracketTable:
    """Double bracket values on generator pairs, extended by the Leibniz rules.

    Missing ordered pairs fall back to the antisymmetric partner.  Symbols in
    ``definitions`` are bracketed by expanding their definition; loop inverses
    are handled through ``{{a, g^-1}} = -(g^-1 (x) 1) {{a, g}} (1 (x) g^-1)``.
    """

    def __init__(
        self,
        entries: Mapping[Pair, Tensor],
        definitions: Optional[Mapping[GenSymbol, AlgElem]] = None,
        name: str = "",
        metadata: Optional[dict] = None,
    ):
        self.name = name
        self.definitions: Dict[GenSymbol, AlgElem] = dict(definitions or {})
        self.metadata = dict(metadata or {})
        self.corrections: List[Tuple[Pair, Tensor]] = []
        self.entries: Dict[Pair, Tensor] = {}
        for (a, b), value in entries.items():
            if a.kind == Kind.IDEMPOTENT or b.kind == Kind.IDEMPOTENT:
                if not value.is_zero():
                    raise ValueError(f"bracket with an idempotent must vanish: ({a!r}, {b!r})")
                continue
            kept = window_for(a, b, value)
            if kept != value:
                dropped = value - kept
                log.warning("table %s: entry (%r, %r) corrected by the idempotent window; dropped %s", name, a, b, render(dropped))
                self.corrections.append(((a, b), dropped))
            self.entries[(a, b)] = kept
        for (a, b), value in self.entries.items():
            other = self.entries.get((b, a))
            if other is not None and other != _swap(value):
                raise AntisymmetryError(f"entries ({a!r}, {b!r}) and ({b!r}, {a!r}) are not antisymmetric")
        self._words: Dict[Tuple[Word, Word], Dict] = {}
        self._syms: Dict[Pair, Dict] = {}

    # -- table access --------------------------------------------------------

    @property
    def generators(self) -> List[GenSymbol]:
        return sorted({s for pair in self.entries for s in pair})

    def entry(self, a: GenSymbol, b: GenSymbol) -> Optional[Tensor]:
        if (a, b) in self.entries:
            return self.entries[(a, b)]
        if (b, a) in self.entries:
            return _swap(self.entries[(b, a)])
        return None

    def restricted(self, kinds: Iterable[Kind] = (Kind.V,)) -> "BracketTable":
        """Same definitions, keeping only entries between symbols of ``kinds``."""
        keep = set(kinds)
        entries = {p: t for p, t in self.entries.items() if p[0].kind in keep and p[1].kind in keep}
        return BracketTable(entries, self.definitions, name=self.name, metadata=self.metadata)

    def with_entry(self, a: GenSymbol, b: GenSymbol, value: Tensor) -> "BracketTable":
        """A copy with ``(a, b)`` replaced and ``(b, a)`` set antisymmetrically."""
        entries = dict(self.entries)
        entries[(a, b)] = value
        if a != b:
            entries[(b, a)] = _swap(value)
        return BracketTable(entries, self.definitions, name=self.name, metadata=self.metadata)

    # -- the engine ----------------------------------------------------------

    def _sym(self, x: GenSymbol, y: GenSymbol) -> Dict:
        key = (x, y)
        hit = self._syms.get(key)
        if hit is not None:
            return hit
        if x.kind == Kind.IDEMPOTENT or y.kind == Kind.IDEMPOTENT:
            res: Dict = {}
        elif (x, y) in self.entries:
            res = self.entries[(x, y)].terms
        elif (y, x) in self.entries:
            res = {(v, u): -c for (u, v), c in self.entries[(y, x)].terms.items()}
        elif y.kind == Kind.GAMMA_INV:
            g = inverse_of(y)
            gi = (y,)
            res = {}
            for (u, v), c in self._sym(x, g).items():
                uu, vv = concat(gi, u), concat(v, gi)
                if uu is not None and vv is not None:
                    _accumulate(res, (uu, vv), -c)
        elif x.kind == Kind.GAMMA_INV:
            res = {(v, u): -c for (u, v), c in self._sym(y, x).items()}
        elif y in self.definitions:
            res = {}
            for w, c in self.definitions[y].terms.items():
                for k, d in self._word((x,), w).items():
                    _accumulate(res, k, c * d)
        elif x in self.definitions:
            res = {}
            for w, c in self.definitions[x].terms.items():
                for k, d in self._word(w, (y,)).items():
                    _accumulate(res, k, c * d)
        else:
            raise MissingEntry(x, y)
        self._syms[key] = res
        return res

    def _word(self, u: Word, w: Word) -> Dict:
        key = (u, w)
        hit = self._words.get(key)
        if hit is not None:
            return hit
        if u[0].kind == Kind.IDEMPOTENT or w[0].kind == Kind.IDEMPOTENT:
            res: Dict = {}
        elif len(w) > 1:
            # {{u, h r}} = {{u, h}} r + h {{u, r}}
            h, r = w[:1], w[1:]
            res = {}
            for (p, q), c in self._word(u, h).items():
                qr = concat(q, r)
                if qr is not None:
                    _accumulate(res, (p, qr), c)
            for (p, q), c in self._word(u, r).items():
                hp = concat(h, p)
                if hp is not None:
                    _accumulate(res, (hp, q), c)
        elif len(u) > 1:
            # {{h r, w}} = {{h, w}} * r + h * {{r, w}}
            h, r = u[:1], u[1:]
            res = {}
            for (p, q), c in self._word(h, w).items():
                pr = concat(p, r)
                if pr is not None:
                    _accumulate(res, (pr, q), c)
            for (p, q), c in self._word(r, w).items():
                hq = concat(h, q)
                if hq is not None:
                    _accumulate(res, (p, hq), c)
        else:
            res = self._sym(u[0], w[0])
        self._words[key] = res
        return res

    def dbl(self, a: AlgElem, b: AlgElem) -> Tensor:
        acc: Dict = {}
        for u, c in a.terms.items():
            for w, d in b.terms.items():
                for k, e in self._word(u, w).items():
                    _accumulate(acc, k, c * d * e)
        return Tensor._raw(2, acc)

    def dbl_left(self, a: AlgElem, x: Tensor) -> Tensor:
        """``{{a, x}}_L``: bracket ``a`` into the first factor of ``x``."""
        acc: Dict = {}
        for key, c in x.terms.items():
            first, rest = key[0], key[1:]
            for u, d in a.terms.items():
                for k, e in self._word(u, first).items():
                    _accumulate(acc, k + rest, c * d * e)
        return Tensor._raw(x.arity + 1, acc)

    def triple(self, a: AlgElem, b: AlgElem, c: AlgElem) -> Tensor:
        return (
            self.dbl_left(a, self.dbl(b, c))
            + self.dbl_left(b, self.dbl(c, a)).tau(TAU123)
            + self.dbl_left(c, self.dbl(a, b)).tau(TAU132)
        )

    def associated_bracket(self, a: AlgElem, b: AlgElem) -> AlgElem:
        return self.dbl(a, b).multiply()


# -- serialization -------------------------------------------------------------


def table_to_json(t: BracketTable) -> dict:
    entries = [{"a": _name(a), "b": _name(b), "value": render(v)} for (a, b), v in sorted(t.entries.items())]
    defs = [{"symbol": _name(s), "value": render(v)} for s, v in sorted(t.definitions.items())]
    return {"name": t.name, "entries": entries, "definitions": defs, "metadata": t.metadata}


def _one_symbol(text: str) -> GenSymbol:
    terms = parse_elem(text).terms
    if len(terms) != 1 or len(next(iter(terms))) != 1 or next(iter(terms.values())) != 1:
        raise ValueError(f"expected a single generator, got {text!r}")
    return next(iter(terms))[0]


def table_from_json(data: Mapping) -> BracketTable:
    try:
        entries = {(_one_symbol(e["a"]), _one_symbol(e["b"])): parse_tensor(e["value"]) for e in data["entries"]}
        defs = {_one_symbol(d["symbol"]): parse_elem(d["value"]) for d in data.get("definitions", [])}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed bracket table JSON: {exc!r}") from exc
    return BracketTable(entries, defs, name=data.get("name", ""), metadata=data.get("metadata"))


def dbl(a: AlgElem, b: AlgElem, t: BracketTable) -> Tensor:
    return t.dbl(a, b)


def triple(a: AlgElem, b: AlgElem, c: AlgElem, t: BracketTable) -> Tensor:
    return t.triple(a, b, c)


def associated_bracket(a: AlgElem, b: AlgElem, t: BracketTable) -> AlgElem:
    return t.associated_bracket(a, b)


def qp_rhs(a: AlgElem, b: AlgElem, c: AlgElem, vertices: Iterable[int]) -> Tensor:
    """The idempotent-sandwiched triple bracket that a quasi-Poisson bracket must equal."""
    out = Tensor(3)
    for s in vertices:
        E = AlgElem.e(s)
        aE, Ea, bE, Eb, cE, Ec = a * E, E * a, b * E, E * b, c * E, E * c
        terms = [
            (1, c * Ea, Eb, E),
            (-1, c * Ea, E, bE),
            (-1, cE, a * Eb, E),
            (1, cE, aE, bE),
            (-1, Ea, Eb, Ec),
            (1, Ea, E, b * Ec),
            (1, E, a * Eb, Ec),
            (-1, E, aE, b * Ec),
        ]
        for sign, x, y, z in terms:
            out = out + Tensor.product(x, y, z, c=Fraction(sign, 4))
    return out


@lru_cache(maxsize=None)
def _qp_rhs_words(a: Word, b: Word, c: Word, vertices: Tuple[int, ...]) -> Tensor:
    return qp_rhs(AlgElem({a: 1}), AlgElem({b: 1}), AlgElem({c: 1}), vertices)


def phim_rhs(phi: AlgElem, a: AlgElem, s: int) -> Tensor:
    """``1/2 (a e_s (x) phi - e_s (x) phi a + a phi (x) e_s - phi (x) e_s a)``."""
    E = AlgElem.e(s)
    return (
        Tensor.product(a * E, phi)
        - Tensor.product(E, phi * a)
        + Tensor.product(a * phi, E)
        - Tensor.product(phi, E * a)
    ).scale(Fraction(1, 2))


def phim_inv_rhs(phi_inv: AlgElem, a: AlgElem, s: int) -> Tensor:
    """``-1/2 (a phi^-1 (x) e_s - phi^-1 (x) e_s a + a e_s (x) phi^-1 - e_s (x) phi^-1 a)``."""
    E = AlgElem.e(s)
    return (
        Tensor.product(a * phi_inv, E)
        - Tensor.product(phi_inv, E * a)
        + Tensor.product(a * E, phi_inv)
        - Tensor.product(E, phi_inv * a)
    ).scale(Fraction(-1, 2))


@dataclass
class CheckEntry:
    label: str
    lhs: Tensor
    rhs: Tensor
    decision: Decision

    @property
    def verdict(self) -> Verdict:
        return self.decision.verdict

    def to_json(self) -> dict:
        d = self.decision
        return {
            "case": self.label,
            "lhs": render(self.lhs),
            "rhs": render(self.rhs),
            "verdict": d.verdict.value,
            "strategy_used": d.strategy.value,
            "evidence_only": d.evidence_only,
            "witness": render(d.witness) if d.verdict == Verdict.NOT_EQUAL and isinstance(d.witness, (AlgElem, Tensor)) else (d.witness if isinstance(d.witness, str) else None),
        }


@dataclass
class Report:
    entries: List[CheckEntry] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        vs = {e.verdict for e in self.entries}
        if Verdict.NOT_EQUAL in vs:
            return Verdict.NOT_EQUAL
        if Verdict.UNDECIDED in vs:
            return Verdict.UNDECIDED
        return Verdict.EQUAL

    def count(self, verdict: Verdict) -> int:
        return sum(1 for e in self.entries if e.verdict == verdict)

    def failures(self) -> List[CheckEntry]:
        return [e for e in self.entries if e.verdict != Verdict.EQUAL]

    def to_json(self) -> List[dict]:
        return [e.to_json() for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def _sym(s: GenSymbol) -> AlgElem:
    return AlgElem({(s,): 1})


def _name(s: GenSymbol) -> str:
    return render(_sym(s))


def check_quasi_poisson(
    t: BracketTable,
    gens: Sequence[GenSymbol],
    vertices: Iterable[int],
    algebra: Optional[Algebra] = None,
    chain: Sequence[Strategy] = (Strategy.EXPANDED, Strategy.ORACLE),
    stop_on_failure: bool = False,
) -> Report:
    """Compare the triple bracket with its quasi-Poisson target on every ordered generator triple."""
    verts = tuple(vertices)
    report = Report()
    for a in gens:
        for b in gens:
            for c in gens:
                lhs = t.triple(_sym(a), _sym(b), _sym(c))
                rhs = _qp_rhs_words((a,), (b,), (c,), verts)
                decision = decide(lhs, rhs, algebra, chain)
                report.entries.append(CheckEntry(f"{{{{{_name(a)}, {_name(b)}, {_name(c)}}}}}", lhs, rhs, decision))
                if stop_on_failure and decision.verdict != Verdict.EQUAL:
                    return report
    return report


def check_moment_map(
    phi: Mapping[int, AlgElem],
    t: BracketTable,
    gens: Sequence[GenSymbol],
    algebra: Optional[Algebra] = None,
    phi_inv: Optional[Mapping[int, AlgElem]] = None,
    chain: Sequence[Strategy] = DEFAULT_CHAIN,
) -> Report:
    """Check the moment map identity for each component and generator, and
    the identity for the inverse components when they are supplied."""
    report = Report()
    for s, ph in sorted(phi.items()):
        for a in gens:
            x = _sym(a)
            lhs = t.dbl(ph, x)
            rhs = phim_rhs(ph, x, s)
            report.entries.append(CheckEntry(f"{{{{Phi_{s}, {_name(a)}}}}}", lhs, rhs, decide(lhs, rhs, algebra, chain)))
    for s, pinv in sorted((phi_inv or {}).items()):
        for a in gens:
            x = _sym(a)
            lhs = t.dbl(pinv, x)
            rhs = phim_inv_rhs(pinv, x, s)
            report.entries.append(CheckEntry(f"{{{{Phi_{s}^-1, {_name(a)}}}}}", lhs, rhs, decide(lhs, rhs, algebra, chain)))
    return report
