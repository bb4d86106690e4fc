"""Exact rational matrix representations of Boalch algebras.

A representation assigns a ``d_t x d_s`` block to every arrow ``v_ts`` of the
double quiver; the loops and the ``w`` arrows follow from the Boalch relation
by the same descending induction used symbolically.  All blocks are embedded in
``N x N`` matrices (``N = sum d``) so that evaluation of a path is a matrix
product.  Everything is exact: numpy object arrays holding ``Fraction``.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .dbracket import BracketTable
from .ncalg import AlgElem, Decision, GenSymbol, Kind, Strategy, Tensor, Verdict, Word
from .quiver import (
    ColoredQuiver,
    InvalidQuiver,
    boalch_relations,
    derived_generators,
    double_quiver,
    original_arrows,
    validate,
)

Matrix = np.ndarray
DEFAULT_RANGE = tuple(range(-3, 4))


class SingularMatrix(ZeroDivisionError):
    pass


class RepresentationError(ValueError):
    pass


def zeros(r: int, c: Optional[int] = None) -> Matrix:
    m = np.empty((r, r if c is None else c), dtype=object)
    m.fill(Fraction(0))
    return m


def identity(n: int) -> Matrix:
    m = zeros(n)
    for i in range(n):
        m[i, i] = Fraction(1)
    return m


def inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    n = m.shape[0]
    a = np.concatenate([m.copy(), identity(n)], axis=1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r, col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"matrix is singular (no pivot in column {col})")
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
        a[col] = a[col] / a[col, col]
        for r in range(n):
            if r != col and a[r, col] != 0:
                a[r] = a[r] - a[r, col] * a[col]
    return a[:, n:]


def is_zero(m: Matrix) -> bool:
    return all(x == 0 for x in m.flat)


# -- representations ---------------------------------------------------------


@dataclass
class MatrixRep:
    quiver: ColoredQuiver
    dims: Tuple[int, ...]
    mats: Dict[GenSymbol, Matrix]
    seed: Optional[int] = None
    entry_range: Tuple[Fraction, ...] = ()
    sampled: int = 0  # number of free rational entries drawn
    _ints: Dict[Word, Tuple[Matrix, int]] = field(default_factory=dict, repr=False)

    @property
    def N(self) -> int:
        return sum(self.dims)

    def offset(self, s: int) -> int:
        return sum(self.dims[: s - 1])

    def projector(self, s: int) -> Matrix:
        m = zeros(self.N)
        o = self.offset(s)
        for i in range(o, o + self.dims[s - 1]):
            m[i, i] = Fraction(1)
        return m

    def block(self, sym: GenSymbol) -> Matrix:
        t, s = self.offset(sym.target), self.offset(sym.source)
        return self.mats[sym][t : t + self.dims[sym.target - 1], s : s + self.dims[sym.source - 1]]

    def symbol(self, sym: GenSymbol) -> Matrix:
        if sym.kind == Kind.IDEMPOTENT:
            return self.projector(sym.source)
        try:
            return self.mats[sym]
        except KeyError:
            raise KeyError(f"symbol {sym!r} has no matrix in this representation") from None

    def word(self, w: Word) -> Matrix:
        return _to_frac(*_word_int(self, w))

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(to_json(self), sort_keys=True).encode()).hexdigest()


def _check_dims(q: ColoredQuiver, d: Sequence[int]) -> Tuple[int, ...]:
    problems = validate(q)
    if problems:
        raise InvalidQuiver("invalid colored quiver: " + "; ".join(problems))
    d = tuple(int(x) for x in d)
    if len(d) != q.n:
        raise ValueError(f"dimension vector has {len(d)} entries, the quiver has {q.n} vertices")
    if any(x < 0 for x in d):
        raise ValueError("dimensions must be nonnegative")
    if not any(d):
        raise ValueError("the zero dimension vector gives the empty representation")
    return d


def _embed(q, d, sym: GenSymbol, blk: Matrix) -> Matrix:
    m = zeros(sum(d))
    t, s = sum(d[: sym.target - 1]), sum(d[: sym.source - 1])
    m[t : t + blk.shape[0], s : s + blk.shape[1]] = blk
    return m


def _complete(q: ColoredQuiver, d: Tuple[int, ...], vmats: Dict[GenSymbol, Matrix], **kw) -> MatrixRep:
    """Fill in loops, loop inverses and ``w`` from the ``v`` matrices."""
    rep = MatrixRep(q, d, dict(vmats), **kw)
    for defn in derived_generators(q):
        m = evaluate(defn.value, rep)
        rep.mats[defn.symbol] = m
        if defn.symbol.kind == Kind.GAMMA:
            k = defn.symbol.target
            o, dk = rep.offset(k), d[k - 1]
            try:
                inv_blk = inverse(m[o : o + dk, o : o + dk]) if dk else zeros(0)
            except SingularMatrix:
                raise SingularMatrix(f"loop {defn.symbol!r} is not invertible at this point") from None
            rep.mats[defn.symbol._replace(kind=Kind.GAMMA_INV)] = _embed(q, d, defn.symbol, inv_blk)
        rep._ints.clear()
    return rep


def trivial_rep(q: ColoredQuiver, d: Sequence[int]) -> MatrixRep:
    """All arrows zero, all loops the identity."""
    d = _check_dims(q, d)
    vmats = {v: zeros(sum(d)) for v in double_quiver(q)}
    return _complete(q, d, vmats, seed=None, entry_range=(Fraction(0),))


def dimension_count(q: ColoredQuiver, d: Sequence[int]) -> int:
    """Twice the sum of ``d_tail * d_head`` over the original arrows."""
    d = tuple(d)
    return 2 * sum(d[a.source - 1] * d[a.target - 1] for a in original_arrows(q))


def random_rep(
    q: ColoredQuiver,
    d: Sequence[int],
    seed: int = 0,
    entry_range: Iterable = DEFAULT_RANGE,
    retries: int = 64,
) -> MatrixRep:
    """Sample the ``v`` blocks from ``entry_range`` until every loop is invertible."""
    d = _check_dims(q, d)
    values = sorted({Fraction(x) for x in entry_range})
    if not values:
        raise ValueError("entry_range is empty")
    rng = random.Random(seed)
    last = None
    for _ in range(retries):
        vmats = {}
        drawn = 0
        for v in double_quiver(q):
            blk = zeros(d[v.target - 1], d[v.source - 1])
            for idx in np.ndindex(blk.shape):
                blk[idx] = rng.choice(values)
                drawn += 1
            vmats[v] = _embed(q, d, v, blk)
        try:
            return _complete(q, d, vmats, seed=seed, entry_range=tuple(values), sampled=drawn)
        except SingularMatrix as exc:
            last = exc
    raise RepresentationError(f"no invertible sample after {retries} tries: {last}")


def default_dims(n: int) -> List[Tuple[int, ...]]:
    return [(1,) * n, (2,) * n, tuple(1 + i % 3 for i in range(n))]


def default_reps(q: ColoredQuiver, seeds: Sequence[int] = (1, 2, 3), entry_range=DEFAULT_RANGE) -> List[MatrixRep]:
    """Three dimension vectors, three seeds each."""
    return [random_rep(q, d, s, entry_range) for d in default_dims(q.n) for s in seeds]


# -- evaluation --------------------------------------------------------------
#
# Internally a rational matrix is a pair (integer object array, denominator):
# Python ints are far cheaper than Fraction for the many products involved.


def _to_int(m: Matrix) -> Tuple[Matrix, int]:
    den = math.lcm(1, *(x.denominator for x in m.flat))
    out = np.empty(m.shape, dtype=object)
    for idx, x in np.ndenumerate(m):
        out[idx] = x.numerator * (den // x.denominator)
    return out, den


def _to_frac(num: Matrix, den: int) -> Matrix:
    out = np.empty(num.shape, dtype=object)
    for idx, x in np.ndenumerate(num):
        out[idx] = Fraction(x, den)
    return out


def _word_int(r: MatrixRep, w: Word) -> Tuple[Matrix, int]:
    hit = r._ints.get(w)
    if hit is None:
        if len(w) == 1:
            hit = _to_int(r.symbol(w[0]))
        else:
            (a, da), (b, db) = _word_int(r, w[:-1]), _word_int(r, w[-1:])
            hit = (a.dot(b), da * db)
        r._ints[w] = hit
    return hit


def _combine(parts) -> Tuple[Matrix, int]:
    """Sum of ``c * num / den`` over ``(c, num, den)`` triples, ``c`` a Fraction."""
    parts = list(parts)
    common = math.lcm(1, *(c.denominator * den for c, _, den in parts))
    total = 0
    for c, num, den in parts:
        total = total + num * (c.numerator * (common // (c.denominator * den)))
    return total, common


_ONE = Fraction(1)


def _eval_terms(terms: Mapping[Tuple[Word, ...], Fraction], arity: int, r: MatrixRep) -> Tuple[Matrix, int]:
    if not terms:
        return np.zeros((r.N, r.N) * arity, dtype=object), 1
    if arity == 1:
        return _combine((c, *_word_int(r, k[0])) for k, c in terms.items())
    # group on the first factor so that each distinct word is multiplied out once
    groups: Dict[Word, Dict] = {}
    for key, c in terms.items():
        groups.setdefault(key[0], {})[key[1:]] = c
    parts = []
    for first, rest in groups.items():
        num, den = _word_int(r, first)
        tnum, tden = _eval_terms(rest, arity - 1, r)
        parts.append((_ONE, np.multiply.outer(num, tnum), den * tden))
    return _combine(parts)


def _eval_int(x: Union[AlgElem, Tensor], r: MatrixRep) -> Tuple[Matrix, int]:
    if isinstance(x, AlgElem):
        return _eval_terms({(w,): c for w, c in x.terms.items()}, 1, r)
    return _eval_terms(x.terms, x.arity, r)


def evaluate(x: Union[AlgElem, Tensor], r: MatrixRep) -> Matrix:
    """Evaluate an element, or a tensor as an array with two indices per factor."""
    return _to_frac(*_eval_int(x, r))


def _vanishes(x: Union[AlgElem, Tensor], r: MatrixRep) -> bool:
    num, _ = _eval_int(x, r)
    return not any(num.flat)


def relation_residuals(r: MatrixRep) -> Dict[str, Matrix]:
    """Every decomposed Boalch relation and loop inverse relation, evaluated."""
    out = {rel.label: evaluate(rel.residual(), r) for rel in boalch_relations(r.quiver).all_components()}
    for sym in list(r.mats):
        if sym.kind == Kind.GAMMA:
            inv = sym._replace(kind=Kind.GAMMA_INV)
            e = r.projector(sym.target)
            out[f"{sym!r} inverse (left)"] = r.mats[inv].dot(r.mats[sym]) - e
            out[f"{sym!r} inverse (right)"] = r.mats[sym].dot(r.mats[inv]) - e
    return out


def oracle_equal(x, y, reps: Sequence[MatrixRep]) -> Decision:
    """Compare by exact evaluation.  Disagreement on one representation proves
    inequality; agreement on all of them is evidence only."""
    if not reps:
        return Decision(Verdict.UNDECIDED, Strategy.ORACLE, note="no representations supplied")
    if isinstance(x, Tensor) != isinstance(y, Tensor):
        raise TypeError("cannot compare an algebra element with a tensor")
    diff = x - y
    for r in reps:
        if not _vanishes(diff, r):
            return Decision(Verdict.NOT_EQUAL, Strategy.ORACLE, witness=f"differs at dims={r.dims} seed={r.seed} digest={r.digest()[:16]}")
    return Decision(Verdict.EQUAL, Strategy.ORACLE, evidence_only=True, note=f"agrees on {len(reps)} representations")


def make_oracle(reps: Sequence[MatrixRep]):
    reps = list(reps)
    return lambda x, y: oracle_equal(x, y, reps)


# -- brackets on matrix entries ------------------------------------------------


def induced_bracket(a: AlgElem, b: AlgElem, t: BracketTable, r: MatrixRep) -> Matrix:
    """``A[i, j, u, v]``: the bracket of the entries ``a_ij`` and ``b_uv``,
    ``sum c X[u, j] Y[i, v]`` over the terms ``c X (x) Y`` of the double bracket."""
    return evaluate(t.dbl(a, b), r).transpose(2, 1, 0, 3)


def trace_bracket_check(a: AlgElem, b: AlgElem, t: BracketTable, r: MatrixRep) -> Tuple[bool, Fraction, Fraction]:
    """Compare the bracket of traces with the trace of the associated bracket."""
    arr = induced_bracket(a, b, t, r)
    lhs = sum((arr[i, i, v, v] for i in range(r.N) for v in range(r.N)), Fraction(0))
    rhs = sum(evaluate(t.associated_bracket(a, b), r).diagonal(), Fraction(0))
    return lhs == rhs, lhs, rhs


# -- serialization -------------------------------------------------------------


def _mat_json(m: Matrix) -> list:
    return [[str(x) for x in row] for row in m]


def to_json(r: MatrixRep) -> dict:
    return {
        "dims": list(r.dims),
        "seed": r.seed,
        "entry_range": [str(x) for x in r.entry_range],
        "blocks": {repr(v): _mat_json(r.block(v)) for v in sorted(r.mats) if v.kind == Kind.V},
    }


def from_json(q: ColoredQuiver, data: Mapping) -> MatrixRep:
    d = _check_dims(q, data["dims"])
    vmats = {}
    names = {repr(v): v for v in double_quiver(q)}
    for name, rows in data["blocks"].items():
        if name not in names:
            raise ValueError(f"unknown arrow {name!r}")
        v = names[name]
        blk = np.array([[Fraction(x) for x in row] for row in rows], dtype=object).reshape(d[v.target - 1], d[v.source - 1])
        vmats[v] = _embed(q, d, v, blk)
    missing = set(names) - set(data["blocks"])
    if missing:
        raise ValueError(f"missing blocks for {sorted(missing)}")
    drawn = sum(d[v.target - 1] * d[v.source - 1] for v in vmats)
    rng = tuple(Fraction(x) for x in data.get("entry_range", ()))
    return _complete(q, d, vmats, seed=data.get("seed"), entry_range=rng, sampled=drawn)
