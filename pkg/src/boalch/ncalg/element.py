"""Exact rational linear combinations of words and of tensor products of words."""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

from .words import GenSymbol, Kind, Word, concat, idem, is_idem

Scalar = Union[int, Fraction]

TAU12 = (1, 0)
TAU123 = (1, 2, 0)
TAU132 = (2, 0, 1)


def _clean(terms: Mapping) -> Dict:
    return {k: Fraction(c) for k, c in terms.items() if c != 0}


def _accumulate(acc: Dict, key, c) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class AlgElem:
    """An element of the path algebra: a finite map word -> nonzero rational."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None):
        self.terms: Dict[Word, Fraction] = _clean(terms) if terms else {}

    @classmethod
    def _raw(cls, terms: Dict[Word, Fraction]) -> "AlgElem":
        x = cls.__new__(cls)
        x.terms = terms
        return x

    @classmethod
    def word(cls, w: Word, c: Scalar = 1) -> "AlgElem":
        return cls({w: c})

    @classmethod
    def symbol(cls, s: GenSymbol, c: Scalar = 1) -> "AlgElem":
        return cls({(s,): c})

    @classmethod
    def e(cls, vertex: int) -> "AlgElem":
        return cls({idem(vertex): 1})

    @classmethod
    def unit(cls, vertices: Iterable[int]) -> "AlgElem":
        return cls({idem(s): 1 for s in vertices})

    def __iter__(self) -> Iterator[Tuple[Word, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgElem):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: "AlgElem") -> "AlgElem":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            _accumulate(acc, w, c)
        return AlgElem._raw(acc)

    def __neg__(self) -> "AlgElem":
        return AlgElem._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "AlgElem") -> "AlgElem":
        return self + (-other)

    def scale(self, c: Scalar) -> "AlgElem":
        c = Fraction(c)
        if not c:
            return AlgElem()
        return AlgElem._raw({w: c * a for w, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgElem):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def symbols(self) -> set:
        return {s for w in self.terms for s in w}

    def map_words(self, f: Callable[[Word], "AlgElem"]) -> "AlgElem":
        acc: Dict[Word, Fraction] = {}
        for w, c in self.terms.items():
            for u, d in f(w).terms.items():
                _accumulate(acc, u, c * d)
        return AlgElem._raw(acc)

    def __repr__(self) -> str:
        from .syntax import render

        return f"AlgElem({render(self)!r})"


def mul(x: AlgElem, y: AlgElem) -> AlgElem:
    acc: Dict[Word, Fraction] = {}
    for u, a in x.terms.items():
        for w, b in y.terms.items():
            uw = concat(u, w)
            if uw is not None:
                _accumulate(acc, uw, a * b)
    return AlgElem._raw(acc)


class Tensor:
    """An element of the tensor power of the algebra with the outer bimodule structure."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Optional[Mapping[Tuple[Word, ...], Scalar]] = None):
        self.arity = arity
        self.terms: Dict[Tuple[Word, ...], Fraction] = _clean(terms) if terms else {}

    @classmethod
    def _raw(cls, arity: int, terms: Dict) -> "Tensor":
        t = cls.__new__(cls)
        t.arity = arity
        t.terms = terms
        return t

    @classmethod
    def product(cls, *factors: AlgElem, c: Scalar = 1) -> "Tensor":
        """The tensor ``c * f1 (x) f2 (x) ...``."""
        acc: Dict = {}
        c = Fraction(c)
        for combo in _cartesian(*(f.terms.items() for f in factors)):
            coeff = c
            for _, a in combo:
                coeff *= a
            _accumulate(acc, tuple(w for w, _ in combo), coeff)
        return cls._raw(len(factors), acc)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Tensor):
            return self.terms == other.terms and (self.arity == other.arity or not self.terms)
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def _check(self, other: "Tensor") -> None:
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(acc, k, c)
        return Tensor._raw(self.arity, acc)

    def __neg__(self) -> "Tensor":
        return Tensor._raw(self.arity, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def scale(self, c: Scalar) -> "Tensor":
        c = Fraction(c)
        if not c:
            return Tensor(self.arity)
        return Tensor._raw(self.arity, {k: c * a for k, a in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def _act(self, slot: int, a: AlgElem, left: bool) -> "Tensor":
        acc: Dict = {}
        for key, c in self.terms.items():
            x = key[slot]
            for w, b in a.terms.items():
                y = concat(w, x) if left else concat(x, w)
                if y is not None:
                    _accumulate(acc, key[:slot] + (y,) + key[slot + 1:], c * b)
        return Tensor._raw(self.arity, acc)

    def outer_left(self, a: AlgElem) -> "Tensor":
        """``a (x1 (x) ... )`` multiplies the first slot on the left."""
        return self._act(0, a, True)

    def outer_right(self, a: AlgElem) -> "Tensor":
        """``(... (x) xn) a`` multiplies the last slot on the right."""
        return self._act(self.arity - 1, a, False)

    def inner_left(self, a: AlgElem) -> "Tensor":
        """``a * (x (x) y) = x (x) a y``."""
        return self._act(self.arity - 1, a, True)

    def inner_right(self, a: AlgElem) -> "Tensor":
        """``(x (x) y) * a = x a (x) y``."""
        return self._act(0, a, False)

    def tau(self, perm: Tuple[int, ...]) -> "Tensor":
        """Move the factor in slot ``i`` to slot ``perm[i]``."""
        if sorted(perm) != list(range(self.arity)):
            raise ValueError(f"{perm} is not a permutation of {self.arity} slots")
        out: Dict = {}
        for key, c in self.terms.items():
            new = [None] * self.arity
            for i, w in enumerate(key):
                new[perm[i]] = w
            out[tuple(new)] = c
        return Tensor._raw(self.arity, out)

    def multiply(self) -> AlgElem:
        acc: Dict[Word, Fraction] = {}
        for key, c in self.terms.items():
            w = key[0]
            for x in key[1:]:
                w = concat(w, x)
                if w is None:
                    break
            if w is not None:
                _accumulate(acc, w, c)
        return AlgElem._raw(acc)

    def extend(self, right: AlgElem) -> "Tensor":
        """``(x (x) y) (x) right``, raising the arity by one."""
        acc: Dict = {}
        for key, c in self.terms.items():
            for w, b in right.terms.items():
                _accumulate(acc, key + (w,), c * b)
        return Tensor._raw(self.arity + 1, acc)

    def map_slots(self, f: Callable[[Word], AlgElem]) -> "Tensor":
        """Apply a linear map word -> AlgElem to every slot."""
        acc: Dict = {}
        cache: Dict[Word, AlgElem] = {}

        def image(w):
            if w not in cache:
                cache[w] = f(w)
            return cache[w]

        for key, c in self.terms.items():
            for combo in _cartesian(*(image(w).terms.items() for w in key)):
                coeff = c
                for _, a in combo:
                    coeff *= a
                _accumulate(acc, tuple(w for w, _ in combo), coeff)
        return Tensor._raw(self.arity, acc)

    def symbols(self) -> set:
        return {s for key in self.terms for w in key for s in w}

    def __repr__(self) -> str:
        from .syntax import render

        return f"Tensor({render(self)!r})"


def idempotent_window(x: Tensor, a_src: int, a_tgt: int, b_src: int, b_tgt: int) -> Tensor:
    """Project onto ``e_{b_tgt} A e_{a_src} (x) e_{a_tgt} A e_{b_src}``."""
    keep = {}
    for (u, w), c in x.terms.items():
        if u[0].target == b_tgt and u[-1].source == a_src and w[0].target == a_tgt and w[-1].source == b_src:
            keep[(u, w)] = c
    return Tensor._raw(2, keep)


def in_window(x: Tensor, a_src: int, a_tgt: int, b_src: int, b_tgt: int) -> bool:
    return idempotent_window(x, a_src, a_tgt, b_src, b_tgt) == x


def has_only(x: Union[AlgElem, Tensor], kinds: Iterable[Kind]) -> bool:
    allowed = set(kinds) | {Kind.IDEMPOTENT}
    return all(s.kind in allowed for s in x.symbols())


__all__ = [
    "AlgElem",
    "Tensor",
    "TAU12",
    "TAU123",
    "TAU132",
    "mul",
    "idempotent_window",
    "in_window",
    "has_only",
    "is_idem",
]
