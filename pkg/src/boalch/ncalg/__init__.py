"""Path algebras of extended double quivers: words, elements, tensors, rewriting, equality."""

from .element import TAU12, TAU123, TAU132, AlgElem, Tensor, has_only, idempotent_window, in_window, mul
from .equality import DEFAULT_CHAIN, Algebra, Decision, Strategy, Verdict, decide, equal, parse_chain
from .rewrite import DEFAULT_STEP_CAP, RuleSet, cancellation_rules, critical_pairs, is_locally_confluent, normalize
from .syntax import ParseError, parse, parse_elem, parse_tensor, render, render_word
from .words import G, GenSymbol, Ginv, Kind, V, W, Word, concat, idem, inverse_of, is_idem, source, target

__all__ = [name for name in dir() if not name.startswith("_")]
