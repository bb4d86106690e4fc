"""The admissibility conditions for the parametric family, stored as data.

Each lemma names a triple pattern of arrows (``("ij", "ji", "pq")`` means
``(v_ij, v_ji, v_pq)``), an index domain and a list of sub-cases.  A sub-case
has a guard and a list of clauses ``expr == target``; a clause may carry a
bound letter ranging over ``1..n`` subject to its own guard.  Expressions are
Python over the accessors

    al(s, r, c), be(s, r, c), mu(s, r, c), nu(s, r, c)   superscript first
    K(u, l, a)                                           kappa with superscript (u, l), subscript a
    D(x, y)                                              Kronecker delta
    h                                                    one half

so every clause renders to a readable instance like ``nu(1,3,2)*(be(1,3,2)-h)+K(3,1,2)*nu(2,1,3) = 0``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .family import CoefficientFamily

HALF = Fraction(1, 2)
INDEX = re.compile(r"\b([ijklpqabcd])\b")


@dataclass(frozen=True)
class Clause:
    expr: str
    target: Fraction = Fraction(0)
    bound: Optional[Tuple[str, str]] = None  # (letter, guard over the other letters)


@dataclass(frozen=True)
class SubCase:
    label: str
    guard: str
    clauses: Tuple[Clause, ...]


@dataclass(frozen=True)
class Lemma:
    id: str
    pattern: Tuple[str, str, str]
    domain: str
    subcases: Tuple[SubCase, ...] = ()

    @property
    def letters(self) -> Tuple[str, ...]:
        seen: List[str] = []
        for arrow in self.pattern:
            for ch in arrow:
                if ch not in seen:
                    seen.append(ch)
        return tuple(seen)


def C(expr: str, target=0, bound=None) -> Clause:
    return Clause(expr, Fraction(target), bound)


Q = Fraction(1, 4)

# shorthands reused by the three-vertex lemmas
_MB = "mu(i,j,k)", "be(i,j,k)"
_MA = "mu(j,k,i)", "al(j,k,i)"


def _sum_prod(m: str, x: str, sign: str) -> str:
    return f"h*({m}+{x}){sign}{m}*{x}"


CATALOGUE: Tuple[Lemma, ...] = (
    Lemma(
        "1",
        ("ij", "kl", "pq"),
        "i!=j and k!=l and p!=q and not ({i,k,p} & {j,l,q})",
        (
            SubCase("(i)", "i==k==p and not (j==l==q)", (C("be(i,j,l)*be(i,l,q)+be(i,l,q)*be(i,q,j)+be(i,q,j)*be(i,j,l)", -Q),)),
            SubCase("(ii)", "j==l==q and not (i==k==p)", (C("al(j,i,k)*al(j,k,p)+al(j,k,p)*al(j,p,i)+al(j,p,i)*al(j,i,k)", -Q),)),
        ),
    ),
    Lemma("2.1.a", ("ik", "kl", "pq"), "i!=k and k!=l and p!=q and p!=k and q!=k and not ({i,p} & {l,q})"),
    Lemma(
        "2.1.b",
        ("ip", "kl", "pq"),
        "i!=p and k!=l and p!=q and k!=p and l!=p and not ({i,k} & {l,q})",
        (SubCase("", "True", (C("nu(p,i,q)*(D(l,q)*(al(l,k,p)+al(l,k,i))+D(i,k)*(be(i,q,l)+be(i,l,p)))"),)),),
    ),
    Lemma(
        "2.2",
        ("ij", "ki", "pi"),
        "i!=j and k!=i and p!=i and j!=k and j!=p",
        (
            SubCase(
                "",
                "True",
                (
                    C("nu(i,p,j)*(al(i,k,p)+mu(i,k,j)+D(k,p)*be(k,i,j))"),
                    C("al(i,k,p)*mu(i,k,j)-al(i,k,p)*mu(i,p,j)-mu(i,p,j)*mu(i,k,j)", -Q),
                ),
            ),
        ),
    ),
    Lemma(
        "2.3",
        ("ij", "jl", "jq"),
        "i!=j and l!=j and q!=j and i!=l and i!=q",
        (
            SubCase(
                "",
                "True",
                (
                    C("nu(j,i,l)*(be(j,l,q)+mu(j,i,q)+D(l,q)*al(l,i,j))"),
                    C("be(j,l,q)*mu(j,i,l)-be(j,l,q)*mu(j,i,q)+mu(j,i,q)*mu(j,i,l)", Q),
                ),
            ),
        ),
    ),
    Lemma(
        "3.1.a",
        ("ij", "ji", "pq"),
        "len({i,j,p,q})==4",
        (
            SubCase("(i)", "i<p<j and not i<q<j", (C("K(j,i,p)*(mu(p,j,q)-be(p,q,j))"), C("K(j,i,p)*nu(p,j,q)"))),
            SubCase("(ii)", "i<q<j and not i<p<j", (C("K(j,i,q)*(mu(q,p,j)+al(q,p,j))"), C("K(j,i,q)*nu(q,p,j)"))),
            SubCase(
                "(iii)",
                "i<p<j and i<q<j",
                (
                    C("K(j,i,q)*(mu(q,p,j)+al(q,p,j))"),
                    C("K(j,i,p)*(mu(p,j,q)-be(p,q,j))"),
                    C("K(j,i,p)*nu(p,j,q)-K(j,i,q)*nu(q,p,j)"),
                ),
            ),
        ),
    ),
    Lemma(
        "3.1.b",
        ("ij", "ki", "jq"),
        "len({i,j,k,q})==4",
        (
            SubCase(
                "",
                "True",
                (
                    C("nu(j,i,q)*(mu(i,k,j)-mu(i,k,q))"),
                    C("nu(i,k,j)*(mu(j,k,q)-mu(j,i,q))"),
                    C("nu(i,k,j)*nu(j,k,q)-nu(i,k,q)*nu(j,i,q)"),
                ),
            ),
        ),
    ),
    Lemma("3.1.c", ("ij", "jl", "pi"), "len({i,j,l,p})==4"),
    Lemma(
        "3.2.a",
        ("ij", "ik", "ji"),
        "len({i,j,k})==3",
        (
            SubCase(
                "(i)",
                "i<j",
                (
                    C("K(j,i,b)*(mu(i,j,k)+be(i,j,k))", bound=("b", "i<b<j")),
                    C(_sum_prod(*_MB, "-"), Q),
                    C("nu(i,j,k)*(mu(j,i,k)+h)"),
                    C("mu(i,j,k)+be(i,j,k)-nu(i,j,k)*nu(j,i,k)"),
                ),
            ),
            SubCase(
                "(ii)",
                "k<j<i or j<i<k",
                (
                    C("K(i,j,a)*(mu(i,j,k)+mu(i,a,k))", bound=("a", "j<a<i")),
                    C("K(i,j,a)*(be(i,j,k)+be(i,k,a))", bound=("a", "j<a<i")),
                    C("K(i,j,a)*nu(i,a,k)", bound=("a", "j<a<i")),
                    C(_sum_prod(*_MB, "+"), -Q),
                    C("nu(i,j,k)*(mu(j,i,k)-h)"),
                    C("mu(i,j,k)+be(i,j,k)+nu(i,j,k)*nu(j,i,k)"),
                ),
            ),
            SubCase(
                "(iii)",
                "j<k<i",
                (
                    C("K(i,j,a)*(mu(i,j,k)+mu(i,a,k)+h*D(a,k))", bound=("a", "j<a<i")),
                    C("K(i,j,a)*(be(i,j,k)+be(i,k,a)+h*D(a,k))", bound=("a", "j<a<=k")),
                    C("K(i,j,a)*(be(i,j,k)+be(i,k,a))+K(i,k,a)*K(i,j,k)", bound=("a", "k<a<i")),
                    C("K(i,j,a)*nu(i,a,k)", bound=("a", "j<a<i")),
                    C(_sum_prod(*_MB, "+"), -Q),
                    C("nu(i,j,k)*(mu(j,i,k)-h)"),
                    C("mu(i,j,k)+be(i,j,k)+nu(i,j,k)*nu(j,i,k)+K(i,j,k)"),
                ),
            ),
        ),
    ),
    Lemma(
        "3.2.b",
        ("ij", "ji", "ik"),
        "len({i,j,k})==3",
        (
            SubCase("(i)", "i>j", (C(_sum_prod(*_MB, "+"), -Q), C("nu(i,j,k)*(be(i,j,k)+h)"))),
            SubCase("(ii)", "k<i<j or i<j<k", (C(_sum_prod(*_MB, "-"), Q), C("nu(i,j,k)*(be(i,j,k)-h)"))),
            SubCase(
                "(iii)",
                "i<k<j",
                (
                    C(_sum_prod(*_MB, "-"), Q),
                    C("nu(i,j,k)*(be(i,j,k)-h)+K(j,i,k)*nu(k,i,j)"),
                    C("K(j,i,k)*(al(k,i,j)+mu(k,i,j))"),
                ),
            ),
        ),
    ),
    Lemma(
        "3.3.a",
        ("ij", "kj", "ji"),
        "len({i,j,k})==3",
        (
            SubCase("(i)", "j>i", (C(_sum_prod(*_MA, "+"), -Q), C("nu(j,k,i)*(al(j,k,i)+h)"))),
            SubCase("(ii)", "k<j<i or j<i<k", (C(_sum_prod(*_MA, "-"), Q), C("nu(j,k,i)*(al(j,k,i)-h)"))),
            SubCase(
                "(iii)",
                "j<k<i",
                (
                    C(_sum_prod(*_MA, "-"), Q),
                    C("nu(j,k,i)*(al(j,k,i)-h)+K(i,j,k)*nu(k,i,j)"),
                    C("K(i,j,k)*(be(k,i,j)+mu(k,i,j))"),
                ),
            ),
        ),
    ),
    Lemma(
        "3.3.b",
        ("ij", "ji", "kj"),
        "len({i,j,k})==3",
        (
            SubCase(
                "(i)",
                "i>j",
                (
                    C("K(i,j,a)*(mu(j,k,i)+al(j,k,i))", bound=("a", "j<a<i")),
                    C(_sum_prod(*_MA, "-"), Q),
                    C("nu(j,k,i)*(mu(i,k,j)+h)"),
                    C("mu(j,k,i)+al(j,k,i)-nu(j,k,i)*nu(i,k,j)"),
                ),
            ),
            SubCase(
                "(ii)",
                "k<i<j or i<j<k",
                (
                    C("K(j,i,b)*(mu(j,k,i)-mu(j,k,b))", bound=("b", "i<b<j")),
                    C("K(j,i,b)*(al(j,k,i)-al(j,k,b))", bound=("b", "i<b<j")),
                    C("K(j,i,b)*nu(j,k,b)", bound=("b", "i<b<j")),
                    C(_sum_prod(*_MA, "+"), -Q),
                    C("nu(j,k,i)*(mu(i,k,j)-h)"),
                    C("mu(j,k,i)+al(j,k,i)+nu(j,k,i)*nu(i,k,j)"),
                ),
            ),
            SubCase(
                "(iii)",
                "i<k<j",
                (
                    C("K(j,i,b)*(mu(j,k,i)-mu(j,k,b)+h*D(k,b))", bound=("b", "i<b<j")),
                    C("K(j,i,b)*(al(j,k,i)-al(j,k,b)+h*D(k,b))", bound=("b", "i<b<=k")),
                    C("K(j,i,b)*(al(j,k,i)-al(j,k,b))+K(j,k,b)*K(j,i,k)", bound=("b", "k<b<j")),
                    C("K(j,i,b)*nu(j,k,b)", bound=("b", "i<b<j")),
                    C(_sum_prod(*_MA, "+"), -Q),
                    C("nu(j,k,i)*(mu(i,k,j)-h)"),
                    C("mu(j,k,i)+al(j,k,i)+nu(j,k,i)*nu(i,k,j)+K(j,i,k)"),
                ),
            ),
        ),
    ),
    Lemma(
        "3.4",
        ("ij", "ij", "ji"),
        "i!=j",
        (
            SubCase(
                "(i)",
                "i<j",
                (
                    C("K(j,i,b)*(al(j,i,b)-h)", bound=("b", "i<b<j")),
                    C("K(j,i,b)*(mu(j,i,b)+h)", bound=("b", "i<b<j")),
                    C("K(j,i,b)*nu(j,i,b)", bound=("b", "i<b<j")),
                ),
            ),
            SubCase(
                "(ii)",
                "i>j",
                (
                    C("K(i,j,a)*(be(i,a,j)-h)", bound=("a", "j<a<i")),
                    C("K(i,j,a)*(mu(i,a,j)+h)", bound=("a", "j<a<i")),
                    C("K(i,j,a)*nu(i,a,j)", bound=("a", "j<a<i")),
                ),
            ),
        ),
    ),
    Lemma("4.1", ("ik", "kp", "pi"), "len({i,k,p})==3"),
    Lemma(
        "4.2",
        ("ip", "ki", "pk"),
        "len({i,k,p})==3 and i<k and i<p",
        (
            SubCase(
                "(i)",
                "i<k<p",
                (
                    C("nu(p,i,k)+nu(i,k,p)-nu(k,p,i)"),
                    C("nu(p,i,k)*(mu(k,p,i)+h)"),
                    C("nu(k,p,i)*(mu(i,k,p)-h)"),
                    C("nu(p,i,k)*(mu(i,k,p)-h)"),
                    C("nu(k,p,i)*(mu(p,i,k)+h)"),
                    C("nu(i,k,p)*(mu(p,i,k)+h)"),
                    C("nu(i,k,p)*(mu(k,p,i)-h)+nu(k,p,i)*K(p,i,k)"),
                    C("nu(k,p,i)*K(p,i,a)", bound=("a", "i<a<k")),
                    C("nu(p,i,k)*K(k,i,a)", bound=("a", "i<a<k")),
                    C("nu(k,p,i)*K(p,i,c)-nu(i,k,p)*K(p,k,c)", bound=("c", "k<c<p")),
                ),
            ),
            SubCase(
                "(ii)",
                "i<p<k",
                (
                    C("nu(p,i,k)-nu(i,k,p)-nu(k,p,i)"),
                    C("nu(k,p,i)*(mu(p,i,k)+h)"),
                    C("nu(k,p,i)*(mu(i,k,p)-h)"),
                    C("nu(p,i,k)*(mu(i,k,p)-h)"),
                    C("nu(p,i,k)*(mu(k,p,i)+h)"),
                    C("nu(i,k,p)*(mu(k,p,i)+h)"),
                    C("nu(i,k,p)*(mu(p,i,k)-h)+nu(p,i,k)*K(k,i,p)"),
                    C("nu(k,p,i)*K(p,i,b)", bound=("b", "i<b<p")),
                    C("nu(p,i,k)*K(k,i,b)", bound=("b", "i<b<p")),
                    C("nu(p,i,k)*K(k,i,d)-nu(i,k,p)*K(k,p,d)", bound=("d", "p<d<k")),
                ),
            ),
        ),
    ),
)

LEMMAS: Dict[str, Lemma] = {lem.id: lem for lem in CATALOGUE}


def render(expr: str, values: Dict[str, int]) -> str:
    return INDEX.sub(lambda m: str(values[m.group(1)]) if m.group(1) in values else m.group(1), expr)


@lru_cache(maxsize=None)
def _compiled(src: str):
    return compile(src, "<condition>", "eval")


def _truth(src: str, env: dict) -> bool:
    return bool(eval(_compiled(src), {"__builtins__": {}, "len": len}, env))


Triple = Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class ConditionEntry:
    lemma: str
    subcase: str
    indices: Tuple[Tuple[str, int], ...]
    triple: Triple
    condition: str
    value: Optional[Fraction]
    target: Optional[Fraction]
    satisfied: bool

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "subcase": self.subcase,
            "indices": dict(self.indices),
            "triple": [f"v{t}{s}" for t, s in self.triple],
            "condition": self.condition,
            "value": None if self.value is None else str(self.value),
            "satisfied": self.satisfied,
        }


@dataclass
class ConditionReport:
    n: int
    entries: List[ConditionEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.satisfied for e in self.entries)

    @property
    def violations(self) -> List[ConditionEntry]:
        return [e for e in self.entries if not e.satisfied]

    def by_triple(self) -> Dict[Triple, bool]:
        out: Dict[Triple, bool] = {}
        for e in self.entries:
            out[e.triple] = out.get(e.triple, True) and e.satisfied
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "satisfied": self.ok,
            "checked": len(self.entries),
            "violations": len(self.violations),
            "entries": [e.to_json() for e in self.entries],
        }


def _env(cf: CoefficientFamily) -> dict:
    return {
        "al": cf.al,
        "be": cf.be,
        "mu": cf.mu_,
        "nu": cf.nu_,
        "K": cf.K,
        "D": lambda x, y: 1 if x == y else 0,
        "h": HALF,
    }


def lemma_instances(lem: Lemma, n: int):
    """Yield index assignments in the lemma's domain, in lexicographic order."""
    letters = lem.letters
    for combo in itertools.product(range(1, n + 1), repeat=len(letters)):
        values = dict(zip(letters, combo))
        if _truth(render(lem.domain, values), {}):
            yield values


def _triple(lem: Lemma, values: Dict[str, int]) -> Triple:
    return tuple((values[a[0]], values[a[1]]) for a in lem.pattern)


def _entries_for(lem: Lemma, values: Dict[str, int], n: int, env: dict) -> List[ConditionEntry]:
    idx = tuple(values.items())
    triple = _triple(lem, values)
    out: List[ConditionEntry] = []
    for sc in lem.subcases:
        if not _truth(render(sc.guard, values), {}):
            continue
        for cl in sc.clauses:
            if cl.bound is None:
                assignments = [values]
            else:
                letter, guard = cl.bound
                assignments = []
                for x in range(1, n + 1):
                    ext = dict(values, **{letter: x})
                    if _truth(render(guard, ext), {}):
                        assignments.append(ext)
            for ext in assignments:
                src = render(cl.expr, ext)
                val = Fraction(eval(_compiled(src), {"__builtins__": {}}, env))
                out.append(
                    ConditionEntry(lem.id, sc.label, tuple(ext.items()), triple, f"{src} = {cl.target}", val, cl.target, val == cl.target)
                )
    if not out:
        out.append(ConditionEntry(lem.id, "", idx, triple, "always holds", None, None, True))
    return out


def check_conditions(cf: CoefficientFamily, lemmas=CATALOGUE) -> ConditionReport:
    """Evaluate every lemma condition over its full index range."""
    cf.validate()
    env = _env(cf)
    report = ConditionReport(cf.n)
    for lem in lemmas:
        for values in lemma_instances(lem, cf.n):
            report.entries.extend(_entries_for(lem, values, cf.n, env))
    return report
