"""Generator symbols and composable words of an extended double quiver.

A word is a tuple of symbols read right to left: the leftmost symbol is
applied last, so ``(v12, v23)`` is the path 3 -> 2 -> 1.  The idempotent
``e_s`` is the one-symbol word ``(IDEMPOTENT s,)``; it never occurs inside a
longer word because multiplication absorbs it.
"""

from __future__ import annotations

from enum import IntEnum
from typing import NamedTuple, Optional, Tuple


class Kind(IntEnum):
    V = 0
    W = 1
    GAMMA = 2
    GAMMA_INV = 3
    IDEMPOTENT = 4


class GenSymbol(NamedTuple):
    kind: Kind
    color: str
    target: int
    source: int

    def __repr__(self) -> str:
        return symbol_name(self, with_color=bool(self.color) and self.color != "a")


Word = Tuple[GenSymbol, ...]


def V(target: int, source: int, color: str = "a") -> GenSymbol:
    return GenSymbol(Kind.V, color, target, source)


def W(target: int, source: int, color: str = "a") -> GenSymbol:
    return GenSymbol(Kind.W, color, target, source)


def G(vertex: int, color: str = "a") -> GenSymbol:
    return GenSymbol(Kind.GAMMA, color, vertex, vertex)


def Ginv(vertex: int, color: str = "a") -> GenSymbol:
    return GenSymbol(Kind.GAMMA_INV, color, vertex, vertex)


def idem(vertex: int) -> Word:
    return (GenSymbol(Kind.IDEMPOTENT, "", vertex, vertex),)


def inverse_of(sym: GenSymbol) -> GenSymbol:
    if sym.kind == Kind.GAMMA:
        return sym._replace(kind=Kind.GAMMA_INV)
    if sym.kind == Kind.GAMMA_INV:
        return sym._replace(kind=Kind.GAMMA)
    raise ValueError(f"{sym!r} is not a loop symbol")


def is_idem(w: Word) -> bool:
    return w[0].kind == Kind.IDEMPOTENT


def target(w: Word) -> int:
    return w[0].target


def source(w: Word) -> int:
    return w[-1].source


def concat(u: Word, w: Word) -> Optional[Word]:
    """Product ``u * w`` of two words, or None when it is zero."""
    if u[-1].source != w[0].target:
        return None
    if u[0].kind == Kind.IDEMPOTENT:
        return w
    if w[0].kind == Kind.IDEMPOTENT:
        return u
    return u + w


def concat3(u: Optional[Word], w: Word, x: Optional[Word]) -> Optional[Word]:
    """``u * w * x`` where a missing outer factor means the unit."""
    if u is not None:
        w = concat(u, w)
        if w is None:
            return None
    if x is not None:
        return concat(w, x)
    return w


def word_length(w: Word) -> int:
    return 0 if w[0].kind == Kind.IDEMPOTENT else len(w)


def is_composable(w: Word) -> bool:
    if any(s.kind == Kind.IDEMPOTENT for s in w) and len(w) > 1:
        return False
    return all(w[i].source == w[i + 1].target for i in range(len(w) - 1))


_PREFIX = {Kind.V: "v", Kind.W: "w", Kind.GAMMA: "g", Kind.GAMMA_INV: "g", Kind.IDEMPOTENT: "e"}


def symbol_name(s: GenSymbol, with_color: bool = False) -> str:
    if s.kind in (Kind.V, Kind.W):
        sep = "_" if s.target > 9 or s.source > 9 else ""
        body = f"{_PREFIX[s.kind]}{s.target}{sep}{s.source}"
    else:
        body = f"{_PREFIX[s.kind]}{s.target}"
        if s.kind == Kind.GAMMA_INV:
            body += "inv"
    if with_color and s.kind != Kind.IDEMPOTENT:
        return f"{s.color}:{body}"
    return body
