"""Word rewriting: contiguous-pattern rules plus defined-symbol expansions."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .element import AlgElem, Tensor, _accumulate
from .words import GenSymbol, Word, concat3, source, target

DEFAULT_STEP_CAP = 10_000


class StepCapExceeded(Exception):
    pass


class RuleSet:
    """Ordered pattern rules ``word -> AlgElem`` and expansions ``symbol -> AlgElem``.

    Expansions act as a substitution homomorphism and are applied before any
    pattern rule; they must not be cyclic.  Pattern rules fire leftmost first,
    ties broken by rule order.
    """

    def __init__(
        self,
        patterns: Iterable[Tuple[Word, AlgElem]] = (),
        expansions: Optional[Mapping[GenSymbol, AlgElem]] = None,
        name: str = "",
    ):
        self.patterns: Tuple[Tuple[Word, AlgElem], ...] = tuple((tuple(l), r) for l, r in patterns)
        self.expansions: Dict[GenSymbol, AlgElem] = dict(expansions or {})
        self.name = name
        for lhs, rhs in self.patterns:
            _check_typed(lhs, rhs, lhs)
            if any(s in self.expansions for s in lhs):
                raise ValueError(f"pattern {lhs!r} contains an expanded symbol")
        for sym, rhs in self.expansions.items():
            _check_typed((sym,), rhs, sym)
        self._by_first: Dict[GenSymbol, List[Tuple[Word, AlgElem]]] = {}
        for lhs, rhs in self.patterns:
            self._by_first.setdefault(lhs[0], []).append((lhs, rhs))
        self._nf: Dict[Word, AlgElem] = {}
        self._image: Dict[GenSymbol, AlgElem] = {}
        self._expanding: set = set()

    def __len__(self) -> int:
        return len(self.patterns) + len(self.expansions)

    # -- pattern rewriting -------------------------------------------------

    def redexes(self, w: Word) -> List[Tuple[int, int, AlgElem]]:
        found = []
        for i, sym in enumerate(w):
            for lhs, rhs in self._by_first.get(sym, ()):
                if w[i:i + len(lhs)] == lhs:
                    found.append((i, i + len(lhs), rhs))
        return found

    def _first_redex(self, w: Word):
        for i, sym in enumerate(w):
            for lhs, rhs in self._by_first.get(sym, ()):
                if w[i:i + len(lhs)] == lhs:
                    return i, i + len(lhs), rhs
        return None

    def _reduce_word(self, w: Word, cap: int, rng: Optional[random.Random]) -> AlgElem:
        if rng is None and w in self._nf:
            return self._nf[w]
        out: Dict[Word, Fraction] = {}
        stack: List[Tuple[Word, Fraction]] = [(w, Fraction(1))]
        steps = 0
        while stack:
            u, c = stack.pop()
            if rng is None:
                hit = self._nf.get(u)
                if hit is not None and u != w:
                    for x, d in hit.terms.items():
                        _accumulate(out, x, c * d)
                    continue
                red = self._first_redex(u)
            else:
                options = self.redexes(u)
                red = rng.choice(options) if options else None
            if red is None:
                _accumulate(out, u, c)
                continue
            steps += 1
            if steps > cap:
                raise StepCapExceeded(w)
            stack.extend((x, c * d) for x, d in splice(u, red).terms.items())
        res = AlgElem._raw(out)
        if rng is None:
            self._nf[w] = res
        return res

    def reduce(self, x: AlgElem, cap: int = DEFAULT_STEP_CAP, rng: Optional[random.Random] = None) -> AlgElem:
        acc: Dict[Word, Fraction] = {}
        for w, c in x.terms.items():
            for u, d in self._reduce_word(w, cap, rng).terms.items():
                _accumulate(acc, u, c * d)
        return AlgElem._raw(acc)

    # -- expansion ---------------------------------------------------------

    def image(self, sym: GenSymbol, cap: int = DEFAULT_STEP_CAP) -> AlgElem:
        """Fully expanded and reduced image of a single symbol."""
        if sym in self._image:
            return self._image[sym]
        if sym not in self.expansions:
            res = AlgElem({(sym,): 1})
        else:
            if sym in self._expanding:
                raise ValueError(f"cyclic expansion through {sym!r}")
            self._expanding.add(sym)
            try:
                res = self.reduce(self.expansions[sym].map_words(lambda w: self.expand_word(w, cap)), cap)
            finally:
                self._expanding.discard(sym)
        self._image[sym] = res
        return res

    def expand_word(self, w: Word, cap: int = DEFAULT_STEP_CAP) -> AlgElem:
        if not self.expansions or not any(s in self.expansions for s in w):
            return AlgElem._raw({w: Fraction(1)})
        res = self.image(w[0], cap)
        for sym in w[1:]:
            res = self.reduce(res * self.image(sym, cap), cap)
        return res


def splice(w: Word, redex: Tuple[int, int, AlgElem]) -> AlgElem:
    i, j, rhs = redex
    pre = w[:i] or None
    post = w[j:] or None
    acc: Dict[Word, Fraction] = {}
    for r, c in rhs.terms.items():
        u = concat3(pre, r, post)
        if u is not None:
            _accumulate(acc, u, c)
    return AlgElem._raw(acc)


def _check_typed(lhs: Word, rhs: AlgElem, label) -> None:
    t, s = target(lhs), source(lhs)
    for w in rhs.terms:
        if target(w) != t or source(w) != s:
            raise ValueError(f"rule for {label!r} is not type-correct: {w!r} is not in e{t} A e{s}")


def normalize(
    x: Union[AlgElem, Tensor],
    rules: RuleSet,
    step_cap: int = DEFAULT_STEP_CAP,
    rng: Optional[random.Random] = None,
) -> Tuple[Union[AlgElem, Tensor], bool]:
    """Expand defined symbols, then rewrite to a fixpoint.

    Returns the result and whether a fixpoint was reached; on cap exhaustion
    the input is returned unchanged with the flag false.
    """
    if step_cap <= 0:
        raise ValueError("step_cap must be positive")

    def word_nf(w: Word) -> AlgElem:
        return rules.reduce(rules.expand_word(w, step_cap), step_cap, rng)

    try:
        if isinstance(x, Tensor):
            return x.map_slots(word_nf), True
        return x.map_words(word_nf), True
    except StepCapExceeded:
        return x, False


def cancellation_rules(loops: Iterable[Tuple[GenSymbol, GenSymbol]]) -> List[Tuple[Word, AlgElem]]:
    """``g ginv -> e`` and ``ginv g -> e`` for each (g, ginv) pair."""
    from .words import idem

    out = []
    for g, ginv in loops:
        e = AlgElem({idem(g.target): 1})
        out.append(((g, ginv), e))
        out.append(((ginv, g), e))
    return out


def critical_pairs(rules: RuleSet, step_cap: int = DEFAULT_STEP_CAP) -> List[Tuple[Word, AlgElem, AlgElem]]:
    """Unresolved critical pairs of the pattern rules (empty means locally confluent)."""
    bad = []
    pats = rules.patterns
    for a, (l1, r1) in enumerate(pats):
        for b, (l2, r2) in enumerate(pats):
            cands = []
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    w = l1 + l2[k:]
                    cands.append((w, (0, len(l1), r1), (len(l1) - k, len(w), r2)))
            if a != b and len(l2) <= len(l1):
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p:p + len(l2)] == l2:
                        cands.append((l1, (0, len(l1), r1), (p, p + len(l2), r2)))
            for w, red1, red2 in cands:
                x1, ok1 = normalize(splice(w, red1), rules, step_cap)
                x2, ok2 = normalize(splice(w, red2), rules, step_cap)
                if not (ok1 and ok2) or x1 != x2:
                    bad.append((w, x1, x2))
    return bad


def is_locally_confluent(rules: RuleSet) -> bool:
    return not critical_pairs(rules)


__all__ = [
    "RuleSet",
    "normalize",
    "splice",
    "cancellation_rules",
    "critical_pairs",
    "is_locally_confluent",
    "DEFAULT_STEP_CAP",
]
