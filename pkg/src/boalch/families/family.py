"""The parametric double bracket on the double of the complete graph K_n.

Parameters (superscript first in every accessor):

* ``alpha[(i, j, k)]``, ``beta[(i, j, k)]``: skew in ``j, k``; zero when ``j`` or ``k`` equals ``i``.
* ``mu[(i, j, k)]``, ``nu[(i, j, k)]``: zero when ``j == k`` or ``j`` or ``k`` equals ``i``.
* ``kappa[(i, j, k)]``: the coefficient with superscript ``(i, k)`` and subscript ``j``,
  only for ``i > j > k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Tuple, Union

from ..dbracket import BracketTable
from ..ncalg import AlgElem, Tensor, V
from ..ncalg.words import idem

Key = Tuple[int, int, int]
HALF = Fraction(1, 2)


def _sparse(d: Mapping) -> Dict[Key, Fraction]:
    return {tuple(k): Fraction(v) for k, v in (d or {}).items() if Fraction(v) != 0}


class InvalidFamily(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientFamily:
    n: int
    alpha: Dict[Key, Fraction] = field(default_factory=dict)
    beta: Dict[Key, Fraction] = field(default_factory=dict)
    mu: Dict[Key, Fraction] = field(default_factory=dict)
    nu: Dict[Key, Fraction] = field(default_factory=dict)
    kappa: Dict[Key, Fraction] = field(default_factory=dict)

    @classmethod
    def build(cls, n: int, alpha=None, beta=None, mu=None, nu=None, kappa=None, skew_complete: bool = False):
        """Construct from sparse maps; ``skew_complete`` fills alpha/beta partners."""
        a, b = _sparse(alpha), _sparse(beta)
        if skew_complete:
            for m in (a, b):
                for (i, j, k), v in list(m.items()):
                    m.setdefault((i, k, j), -v)
        return cls(n, a, b, _sparse(mu), _sparse(nu), _sparse(kappa))

    @classmethod
    def zero(cls, n: int) -> "CoefficientFamily":
        return cls(n)

    def with_values(self, **changes: Mapping[Key, Union[int, Fraction]]) -> "CoefficientFamily":
        """Copy with individual entries overwritten, e.g. ``nu={(3, 1, 2): 1}``."""
        updated = {}
        for name, entries in changes.items():
            cur = dict(getattr(self, name))
            for k, v in entries.items():
                v = Fraction(v)
                if v:
                    cur[tuple(k)] = v
                else:
                    cur.pop(tuple(k), None)
            updated[name] = cur
        return replace(self, **updated)

    # accessors used by the condition catalogue
    def al(self, i: int, j: int, k: int) -> Fraction:
        return self.alpha.get((i, j, k), Fraction(0))

    def be(self, i: int, j: int, k: int) -> Fraction:
        return self.beta.get((i, j, k), Fraction(0))

    def mu_(self, i: int, j: int, k: int) -> Fraction:
        return self.mu.get((i, j, k), Fraction(0))

    def nu_(self, i: int, j: int, k: int) -> Fraction:
        return self.nu.get((i, j, k), Fraction(0))

    def K(self, upper: int, lower: int, sub: int) -> Fraction:
        """The kappa coefficient with superscript ``(upper, lower)`` and subscript ``sub``."""
        if not upper > sub > lower:
            return Fraction(0)
        return self.kappa.get((upper, sub, lower), Fraction(0))

    def problems(self) -> List[str]:
        n = self.n
        out = []
        if n < 2:
            out.append(f"n must be at least 2, got {n}")
        for name, m in (("alpha", self.alpha), ("beta", self.beta), ("mu", self.mu), ("nu", self.nu), ("kappa", self.kappa)):
            for k in m:
                if len(k) != 3 or not all(1 <= x <= n for x in k):
                    out.append(f"{name} index {k} out of range 1..{n}")
        if out:
            return out
        for name, m in (("alpha", self.alpha), ("beta", self.beta)):
            for (i, j, k), v in sorted(m.items()):
                if i in (j, k):
                    out.append(f"{name}^({i}) has nonzero entry in row/column {i} at ({j},{k})")
                elif m.get((i, k, j), 0) != -v:
                    out.append(f"{name}^({i}) not skew-symmetric at ({j},{k})")
        for name, m in (("mu", self.mu), ("nu", self.nu)):
            for (i, j, k) in sorted(m):
                if j == k:
                    out.append(f"{name}^({i}) has nonzero diagonal entry at ({j},{k})")
                elif i in (j, k):
                    out.append(f"{name}^({i}) has nonzero entry in row/column {i} at ({j},{k})")
        for (i, j, k) in sorted(self.kappa):
            if not i > j > k:
                out.append(f"kappa_{j}^({i},{k}) requires {i} > {j} > {k}")
        return out

    def validate(self) -> None:
        bad = self.problems()
        if bad:
            raise InvalidFamily("; ".join(bad))

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        def mats(m):
            return [[[str(m.get((i, j, k), 0)) for k in range(1, self.n + 1)] for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

        return {
            "n": self.n,
            "alpha": mats(self.alpha),
            "beta": mats(self.beta),
            "mu": mats(self.mu),
            "nu": mats(self.nu),
            "kappa": [{"i": i, "j": j, "k": k, "value": str(v)} for (i, j, k), v in sorted(self.kappa.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CoefficientFamily":
        try:
            n = int(data["n"])

            def unmats(name):
                raw = data.get(name, [])
                out = {}
                if raw and len(raw) != n:
                    raise InvalidFamily(f"{name} must hold {n} matrices")
                for i, mat in enumerate(raw, 1):
                    if len(mat) != n or any(len(row) != n for row in mat):
                        raise InvalidFamily(f"{name}^({i}) must be {n}x{n}")
                    for j, row in enumerate(mat, 1):
                        for k, v in enumerate(row, 1):
                            if Fraction(v):
                                out[(i, j, k)] = Fraction(v)
                return out

            kappa = {(int(e["i"]), int(e["j"]), int(e["k"])): Fraction(e["value"]) for e in data.get("kappa", [])}
            cf = cls(n, unmats("alpha"), unmats("beta"), unmats("mu"), unmats("nu"), {k: v for k, v in kappa.items() if v})
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, InvalidFamily):
                raise
            raise InvalidFamily(f"malformed family JSON: {exc!r}") from exc
        return cf

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def load_family(path: Union[str, Path]) -> CoefficientFamily:
    return CoefficientFamily.from_json(json.loads(Path(path).read_text()))


def table1() -> CoefficientFamily:
    """The admissible coefficients on K_3 reproducing the triangle bracket."""
    h = HALF
    return CoefficientFamily.build(
        3,
        alpha={(2, 1, 3): h, (3, 1, 2): h, (1, 2, 3): -h},
        beta={(2, 1, 3): -h, (3, 1, 2): -h, (1, 2, 3): h},
        mu={(2, 1, 3): -h, (3, 1, 2): -h, (1, 2, 3): h, (2, 3, 1): -h, (3, 2, 1): -h, (1, 3, 2): h},
        nu={(2, 1, 3): 1, (1, 2, 3): 1, (2, 3, 1): 1, (1, 3, 2): 1},
        kappa={(3, 2, 1): 1},
        skew_complete=True,
    )


def _e(s: int) -> AlgElem:
    return AlgElem({idem(s): 1})


def _v(i: int, j: int, color: str) -> AlgElem:
    return AlgElem({(V(i, j, color),): 1})


def family_entry(cf: CoefficientFamily, i: int, j: int, k: int, l: int, color: str = "a") -> Tensor:
    """The value of the bracket of ``v_ij`` with ``v_kl``."""
    T = Tensor.product
    if (i, j) == (k, l) or not ({i, j} & {k, l}):
        return Tensor(2)
    if j == k and l == i:
        sgn = 1 if i > j else -1
        out = (T(_e(j), _e(i)) + T(_v(j, i, color) * _v(i, j, color), _e(i), c=HALF) + T(_e(j), _v(i, j, color) * _v(j, i, color), c=HALF)).scale(sgn)
        for a in range(j + 1, i):
            out = out + T(_e(j), _v(i, a, color) * _v(a, i, color), c=cf.K(i, j, a))
        for b in range(i + 1, j):
            out = out - T(_v(j, b, color) * _v(b, j, color), _e(i), c=cf.K(j, i, b))
        return out
    if j == l:
        return T(_v(k, j, color), _v(i, j, color), c=cf.al(j, i, k))
    if i == k:
        return T(_v(i, j, color), _v(i, l, color), c=cf.be(i, j, l))
    if j == k:
        return T(_e(j), _v(i, j, color) * _v(j, l, color), c=cf.mu_(j, i, l)) + T(_e(j), _v(i, l, color), c=cf.nu_(j, i, l))
    # l == i
    return -(T(_v(k, i, color) * _v(i, j, color), _e(i), c=cf.mu_(i, k, j)) + T(_v(k, j, color), _e(i), c=cf.nu_(i, k, j)))


def family_generators(n: int, color: str = "a") -> List:
    return sorted(V(i, j, color) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


def family_bracket_table(n: int, cf: CoefficientFamily, color: str = "a") -> BracketTable:
    if cf.n != n:
        raise InvalidFamily(f"family is for n={cf.n}, not n={n}")
    cf.validate()
    entries = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    if k != l:
                        entries[(V(i, j, color), V(k, l, color))] = family_entry(cf, i, j, k, l, color)
    return BracketTable(entries, name=f"family(n={n})")
