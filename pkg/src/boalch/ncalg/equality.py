"""Layered equality in a localized path algebra.

Normal forms only decide equality when the rule set is complete for the
algebra in question.  A nonzero normalized difference is therefore reported
as NOT_EQUAL only when the difference lives in the free path algebra of the
double quiver (no loop or ``w`` symbols survive) or when the rule set is known
to be confluent and complete; otherwise it is UNDECIDED and may be handed to
an evaluation oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Union

from .element import AlgElem, Tensor, has_only
from .rewrite import DEFAULT_STEP_CAP, RuleSet, normalize
from .words import Kind

Elem = Union[AlgElem, Tensor]


class Verdict(str, Enum):
    EQUAL = "EQUAL"
    NOT_EQUAL = "NOT_EQUAL"
    UNDECIDED = "UNDECIDED"


class Strategy(str, Enum):
    STRUCTURAL = "STRUCTURAL"
    EXPANDED = "EXPANDED"
    ORACLE = "ORACLE"


@dataclass
class Decision:
    verdict: Verdict
    strategy: Strategy
    witness: Optional[Elem] = None
    evidence_only: bool = False
    note: str = ""

    @property
    def definitive(self) -> bool:
        return self.verdict != Verdict.UNDECIDED

    def __bool__(self) -> bool:
        return self.verdict == Verdict.EQUAL


OracleFn = Callable[[Elem, Elem], Decision]


@dataclass
class Algebra:
    """Everything ``equal`` needs to know about the ambient algebra."""

    structural: RuleSet = field(default_factory=RuleSet)
    expanded: RuleSet = field(default_factory=RuleSet)
    structural_complete: bool = False
    expanded_complete: bool = False
    oracle: Optional[OracleFn] = None
    step_cap: int = DEFAULT_STEP_CAP

    @classmethod
    def free(cls) -> "Algebra":
        """A path algebra with no relations: every strategy is complete."""
        return cls(structural_complete=True, expanded_complete=True)


FREE_KINDS = (Kind.V,)


def _difference(x: Elem, y: Elem) -> Elem:
    if isinstance(x, Tensor) != isinstance(y, Tensor):
        raise TypeError("cannot compare an algebra element with a tensor")
    return x - y


def _by_rules(diff: Elem, rules: RuleSet, complete: bool, strategy: Strategy, cap: int) -> Decision:
    nf, fixpoint = normalize(diff, rules, cap)
    if not fixpoint:
        return Decision(Verdict.UNDECIDED, strategy, note="step cap reached")
    if nf.is_zero():
        return Decision(Verdict.EQUAL, strategy)
    if complete or has_only(nf, FREE_KINDS):
        return Decision(Verdict.NOT_EQUAL, strategy, witness=nf)
    return Decision(Verdict.UNDECIDED, strategy, witness=nf, note="normal form not known to be unique")


def equal(x: Elem, y: Elem, strategy: Strategy, algebra: Optional[Algebra] = None) -> Decision:
    algebra = algebra or Algebra.free()
    strategy = Strategy(strategy)
    diff = _difference(x, y)
    if strategy == Strategy.STRUCTURAL:
        return _by_rules(diff, algebra.structural, algebra.structural_complete, strategy, algebra.step_cap)
    if strategy == Strategy.EXPANDED:
        return _by_rules(diff, algebra.expanded, algebra.expanded_complete, strategy, algebra.step_cap)
    if algebra.oracle is None:
        return Decision(Verdict.UNDECIDED, strategy, note="no representations supplied")
    return algebra.oracle(x, y)


DEFAULT_CHAIN = (Strategy.STRUCTURAL, Strategy.EXPANDED, Strategy.ORACLE)


def decide(x: Elem, y: Elem, algebra: Optional[Algebra] = None, chain: Sequence[Strategy] = DEFAULT_CHAIN) -> Decision:
    """Try each strategy in turn and return the first definitive verdict."""
    last = Decision(Verdict.UNDECIDED, Strategy.STRUCTURAL, note="empty strategy chain")
    for s in chain:
        last = equal(x, y, s, algebra)
        if last.definitive:
            return last
    return last


def parse_chain(text: str) -> tuple:
    try:
        return tuple(Strategy(s.strip().upper()) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise ValueError(f"unknown strategy in {text!r}; use STRUCTURAL, EXPANDED, ORACLE") from exc
