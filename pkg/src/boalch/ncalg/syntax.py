"""Parser and printer for the expression mini-language.

Grammar (whitespace-insensitive)::

    sum    := ['+'|'-'] tprod (('+'|'-') tprod)*
    tprod  := mprod ('(x)' mprod)*
    mprod  := atom (['*'] atom)*
    atom   := NUMBER | SYMBOL | '(' sum ')'

Symbols are ``e1``, ``v12``, ``w12``, ``g1`` and ``g1inv``, optionally with a
color prefix ``c:``.  Two-index symbols with an index above 9 separate the
indices with an underscore (``v10_2``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, List, Optional, Tuple, Union

from .element import AlgElem, Tensor
from .words import GenSymbol, Kind, Word, idem, symbol_name

DEFAULT_COLOR = "a"


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at column {pos + 1}" if text else ""
        caret = f"\n  {text}\n  {' ' * pos}^" if text else ""
        super().__init__(f"{message}{where}{caret}")


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<tensor>\(x\))
      | (?P<num>\d+(?:/\d+)?)
      | (?P<sym>(?:(?P<color>[A-Za-z][A-Za-z0-9_]*):)?(?P<body>e\d+|[vw]\d+(?:_\d+)?|g\d+(?:inv)?))
      | (?P<op>[-+*()])
    )""",
    re.VERBOSE,
)

Resolver = Callable[[Kind, Optional[str], int, int], GenSymbol]


def default_resolver(kind: Kind, color: Optional[str], t: int, s: int) -> GenSymbol:
    return GenSymbol(kind, color or DEFAULT_COLOR, t, s)


def _split_indices(digits: str) -> Tuple[int, int]:
    if "_" in digits:
        a, b = digits.split("_")
        return int(a), int(b)
    if len(digits) == 2:
        return int(digits[0]), int(digits[1])
    raise ValueError(f"cannot split {digits!r} into two vertex indices; write e.g. v10_2")


def _tokenize(text: str) -> List[Tuple[str, object, int]]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        start = m.start(m.lastgroup) if m.lastgroup else pos
        if m.group("tensor"):
            out.append(("tensor", None, start))
        elif m.group("num"):
            out.append(("num", Fraction(m.group("num")), start))
        elif m.group("sym"):
            out.append(("sym", (m.group("color"), m.group("body")), m.start("sym")))
        else:
            out.append((m.group("op"), None, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


Value = Union[Fraction, AlgElem, Tensor]


class _Parser:
    def __init__(self, text: str, resolver: Resolver):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.resolver = resolver

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, pos: Optional[int] = None):
        raise ParseError(msg, self.text, self.peek()[2] if pos is None else pos)

    def parse(self) -> Value:
        v = self.sum()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[0]!r}")
        return v

    def sum(self) -> Value:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        pos = self.peek()[2]
        acc = self._scale(self.tprod(), sign)
        while self.peek()[0] in ("+", "-"):
            op, _, _ = self.take()
            pos = self.peek()[2]
            rhs = self.tprod()
            acc = self._add(acc, self._scale(rhs, -1 if op == "-" else 1), pos)
        return acc

    def tprod(self) -> Value:
        acc = self.mprod()
        while self.peek()[0] == "tensor":
            self.take()
            pos2 = self.peek()[2]
            rhs = self.mprod()
            acc = self._tensor(acc, rhs, pos2)
        return acc

    def mprod(self) -> Value:
        acc = self.atom()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
            elif kind not in ("num", "sym", "("):
                return acc
            pos = self.peek()[2]
            acc = self._mul(acc, self.atom(), pos)

    def atom(self) -> Value:
        kind, val, pos = self.take()
        if kind == "num":
            return val
        if kind == "sym":
            return self._symbol(val, pos)
        if kind == "(":
            v = self.sum()
            if self.take()[0] != ")":
                self.fail("expected ')'", pos)
            return v
        self.i -= 1
        self.fail("expected a number, a symbol or '('")

    def _symbol(self, val, pos) -> AlgElem:
        color, body = val
        head = body[0]
        try:
            if head == "e":
                if color:
                    raise ValueError("idempotents carry no color")
                return AlgElem({idem(int(body[1:])): 1})
            if head == "g":
                inv = body.endswith("inv")
                k = int(body[1:-3] if inv else body[1:])
                sym = self.resolver(Kind.GAMMA_INV if inv else Kind.GAMMA, color, k, k)
            else:
                t, s = _split_indices(body[1:])
                sym = self.resolver(Kind.V if head == "v" else Kind.W, color, t, s)
        except ValueError as exc:
            raise ParseError(str(exc), self.text, pos) from None
        return AlgElem({(sym,): 1})

    @staticmethod
    def _scale(v: Value, c: int) -> Value:
        if c == 1:
            return v
        return -v

    def _add(self, a: Value, b: Value, pos: int) -> Value:
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a + b
        if isinstance(a, Fraction) or isinstance(b, Fraction):
            other, num = (b, a) if isinstance(a, Fraction) else (a, b)
            if num == 0:
                return other
            self.fail("a bare number cannot be added to an algebra element; multiply it by an idempotent", pos)
        if isinstance(a, AlgElem) and isinstance(b, AlgElem):
            return a + b
        if isinstance(a, Tensor) and isinstance(b, Tensor) and a.arity == b.arity:
            return a + b
        if isinstance(a, AlgElem) and a.is_zero():
            return b
        if isinstance(b, AlgElem) and b.is_zero():
            return a
        self.fail("cannot add terms with different numbers of tensor factors", pos)

    def _mul(self, a: Value, b: Value, pos: int) -> Value:
        if isinstance(a, Fraction):
            return a * b
        if isinstance(b, Fraction):
            return b * a
        if isinstance(a, AlgElem) and isinstance(b, AlgElem):
            return a * b
        self.fail("products of tensors are not defined; use (x) for the tensor product", pos)

    def _tensor(self, a: Value, b: Value, pos: int) -> Tensor:
        if isinstance(a, Fraction) or isinstance(b, Fraction):
            self.fail("a tensor factor must be an algebra element", pos)
        ta = a if isinstance(a, Tensor) else Tensor(1, {(w,): c for w, c in a.terms.items()})
        tb = b if isinstance(b, Tensor) else Tensor(1, {(w,): c for w, c in b.terms.items()})
        acc = {}
        for k1, c1 in ta.terms.items():
            for k2, c2 in tb.terms.items():
                key = k1 + k2
                acc[key] = acc.get(key, 0) + c1 * c2
        return Tensor(ta.arity + tb.arity, acc)


def parse(text: str, resolver: Optional[Resolver] = None) -> Union[AlgElem, Tensor]:
    """Parse an expression into an ``AlgElem`` or a ``Tensor``."""
    if not text.strip():
        raise ParseError("empty expression")
    v = _Parser(text, resolver or default_resolver).parse()
    if isinstance(v, Fraction):
        if v == 0:
            return AlgElem()
        raise ParseError("a bare nonzero number is not an algebra element; multiply it by an idempotent", text, 0)
    return v


def parse_elem(text: str, resolver: Optional[Resolver] = None) -> AlgElem:
    v = parse(text, resolver)
    if not isinstance(v, AlgElem):
        raise ParseError("expected an algebra element, got a tensor", text, 0)
    return v


def parse_tensor(text: str, arity: int = 2, resolver: Optional[Resolver] = None) -> Tensor:
    v = parse(text, resolver)
    if isinstance(v, AlgElem):
        if v.is_zero():
            return Tensor(arity)
        raise ParseError(f"expected a tensor with {arity} factors", text, 0)
    if v.arity != arity:
        raise ParseError(f"expected {arity} tensor factors, got {v.arity}", text, 0)
    return v


def render_word(w: Word) -> str:
    return "*".join(symbol_name(s, with_color=s.color not in ("", DEFAULT_COLOR)) for s in w)


def _coef(c: Fraction, first: bool) -> str:
    mag = abs(c)
    num = "" if mag == 1 else f"{mag} "
    if first:
        return ("-" if c < 0 else "") + num
    return (" - " if c < 0 else " + ") + num


def render(x: Union[AlgElem, Tensor]) -> str:
    """Canonical text form; terms in the canonical order."""
    if isinstance(x, AlgElem):
        items = [(render_word(w), c) for w, c in x]
    else:
        items = [(" (x) ".join(render_word(w) for w in key), c) for key, c in x]
    if not items:
        return "0"
    return "".join(_coef(c, i == 0) + body for i, (body, c) in enumerate(items))
