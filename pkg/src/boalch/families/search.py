"""Brute-force quasi-Poisson check for a family, and search over value grids."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from ..dbracket import Report, check_quasi_poisson
from ..ncalg import Algebra, Strategy, Verdict
from .conditions import CATALOGUE, HALF, _compiled, _truth, lemma_instances, render
from .family import CoefficientFamily, family_bracket_table, family_generators

CLASSES = ("alpha", "beta", "mu", "nu", "kappa")


def brute_force_qp(cf: CoefficientFamily, n: Optional[int] = None, stop_on_failure: bool = False) -> Report:
    """Check the quasi-Poisson identity on every ordered triple of arrows.

    The family lives in the free path algebra of the double quiver, so the
    comparison is exact and always definitive.
    """
    n = cf.n if n is None else n
    table = family_bracket_table(n, cf)
    return check_quasi_poisson(
        table, family_generators(n), range(1, n + 1), Algebra.free(), (Strategy.EXPANDED,), stop_on_failure=stop_on_failure
    )


# -- free parameters --------------------------------------------------------

Param = Tuple[str, int, int, int]


def free_parameters(n: int) -> List[Param]:
    """Independent entries: alpha/beta above the diagonal, mu/nu off it, kappa for i > j > k."""
    out: List[Param] = []
    for name in CLASSES[:4]:
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    if len({i, j, k}) < 3:
                        continue
                    if name in ("alpha", "beta") and j > k:
                        continue
                    out.append((name, i, j, k))
    out += [("kappa", i, j, k) for i in range(1, n + 1) for j in range(1, i) for k in range(1, j)]
    return out


def _family(n: int, values: Mapping[Param, Fraction]) -> CoefficientFamily:
    maps: Dict[str, Dict] = {c: {} for c in CLASSES}
    for (name, i, j, k), v in values.items():
        maps[name][(i, j, k)] = v
    return CoefficientFamily.build(n, maps["alpha"], maps["beta"], maps["mu"], maps["nu"], maps["kappa"], skew_complete=True)


class _Partial:
    """Accessors over a partial assignment that record which parameters they read."""

    def __init__(self):
        self.values: Dict[Param, Fraction] = {}
        self.seen: set = set()

    def _get(self, name, i, j, k):
        if len({i, j, k}) < 3:
            return Fraction(0)
        sign = 1
        if name in ("alpha", "beta") and j > k:
            j, k, sign = k, j, -1
        key = (name, i, j, k)
        self.seen.add(key)
        return sign * self.values.get(key, Fraction(0))

    def env(self) -> dict:
        def K(u, l, a):
            if not u > a > l:
                return Fraction(0)
            key = ("kappa", u, a, l)
            self.seen.add(key)
            return self.values.get(key, Fraction(0))

        return {
            "al": lambda i, j, k: self._get("alpha", i, j, k),
            "be": lambda i, j, k: self._get("beta", i, j, k),
            "mu": lambda i, j, k: self._get("mu", i, j, k),
            "nu": lambda i, j, k: self._get("nu", i, j, k),
            "K": K,
            "D": lambda x, y: 1 if x == y else 0,
            "h": HALF,
        }


def _clause_instances(n: int) -> List[Tuple[str, Fraction]]:
    """Every rendered clause with its target, for the given ``n``."""
    out = []
    for lem in CATALOGUE:
        for values in lemma_instances(lem, n):
            for sc in lem.subcases:
                if not _truth(render(sc.guard, values), {}):
                    continue
                for cl in sc.clauses:
                    exts = [values]
                    if cl.bound is not None:
                        letter, guard = cl.bound
                        exts = [e for e in (dict(values, **{letter: x}) for x in range(1, n + 1)) if _truth(render(guard, e), {})]
                    out += [(render(cl.expr, e), cl.target) for e in exts]
    return out


def search_admissible(
    n: int,
    value_grid: Mapping[str, Iterable],
    limit: Optional[int] = None,
    verify: bool = True,
) -> List[CoefficientFamily]:
    """All families with entries from ``value_grid`` that pass every condition.

    ``value_grid`` maps a parameter class (alpha, beta, mu, nu, kappa) to its
    allowed values; a missing class is fixed at zero.  The search assigns
    parameters one at a time and prunes as soon as a fully assigned clause
    fails.  With ``verify`` each hit is re-checked by brute force.
    """
    grid = {c: sorted({Fraction(v) for v in value_grid.get(c, [0])}) for c in CLASSES}
    params = free_parameters(n)
    if any(not grid[p[0]] for p in params):
        return []
    probe = _Partial()
    env = probe.env()
    clauses = []
    for src, target in _clause_instances(n):
        probe.seen = set()
        eval(_compiled(src), {"__builtins__": {}}, env)
        clauses.append((src, target, frozenset(probe.seen)))
    # most constrained first: parameters that appear in many clauses
    weight = {p: sum(1 for c in clauses if p in c[2]) for p in params}
    order = sorted(params, key=lambda p: (-weight[p], p))
    pos = {p: i for i, p in enumerate(order)}
    ready: List[List[Tuple[str, Fraction]]] = [[] for _ in order]
    always_false = False
    for src, target, deps in clauses:
        if not deps:
            if Fraction(eval(_compiled(src), {"__builtins__": {}}, env)) != target:
                always_false = True
            continue
        ready[max(pos[p] for p in deps)].append((src, target))
    if always_false:
        return []

    state = _Partial()
    senv = state.env()
    found: List[CoefficientFamily] = []

    def rec(depth: int) -> bool:
        if depth == len(order):
            cf = _family(n, {k: v for k, v in state.values.items() if v})
            if verify and brute_force_qp(cf, stop_on_failure=True).verdict != Verdict.EQUAL:
                raise RuntimeError(f"conditions hold but the brute-force check fails for {cf}")
            found.append(cf)
            return limit is not None and len(found) >= limit
        p = order[depth]
        for v in grid[p[0]]:
            state.values[p] = v
            if all(Fraction(eval(_compiled(src), {"__builtins__": {}}, senv)) == t for src, t in ready[depth]):
                if rec(depth + 1):
                    return True
        del state.values[p]
        return False

    rec(0)
    return found
