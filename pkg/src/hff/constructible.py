"""Finite levels of the constructible hierarchy and the Def operator."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import hfset
from .definability import DEFAULT_VAR, TableClosure, defines, equality_disjunction
from .errors import LevelBoundError, resource_limit
from .folang import FiniteModel, to_text

MAX_LEVEL = 4


@dataclass(frozen=True)
class Level:
    index: int
    contents: FiniteModel
    witnesses: tuple = ()  # (subset, formula) pairs defining each element from the level below

    def as_set(self):
        return self.contents.as_set()

    def to_json(self, with_witnesses=False):
        out = {
            "index": self.index,
            "size": len(self.contents),
            "domain": [hfset.to_json(x) for x in self.contents.domain],
        }
        if with_witnesses:
            out["witnesses"] = [
                {"set": hfset.format_set(s), "formula": to_text(f)} for s, f in self.witnesses
            ]
        return out


def def_operator_full(model, limit=None):
    """Every subset of the domain with an equality-disjunction witness.

    With parameters available and a finite domain, every subset is definable,
    so this is the power set. Returns ``(subset, formula)`` pairs in canonical
    order of the subsets.
    """
    limit = resource_limit() if limit is None else limit
    domain = model.as_set()
    subsets = hfset.power_set(domain, limit=limit)
    return [(s, equality_disjunction(s.elements)) for s in subsets]


def def_operator_restricted(model, max_depth, allow_params, limit=None):
    """Subsets definable by formulas of depth <= ``max_depth``.

    Parameters, when allowed, are the domain elements. Computed by closing
    truth tables over the whole formula space; returns ``(subset, witness)``
    pairs in canonical order.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    params = model.domain if allow_params else ()
    closure = TableClosure(model, params, DEFAULT_VAR, limit)
    found = closure.extensions(max_depth)
    return sorted(found.items())


def _check_bound(n, bound):
    if n < 0:
        raise ValueError("level index must be non-negative")
    if n > bound:
        raise LevelBoundError(f"level {n} exceeds the configured maximum {bound}",
                              needed=n, limit=bound)


@lru_cache(maxsize=None)
def _l_level(n):
    if n == 0:
        return Level(0, FiniteModel())
    below = _l_level(n - 1)
    pairs = def_operator_full(below.contents)
    for s, f in pairs:
        # witnesses define their subset by construction; keep that honest
        if not defines(below.contents, f, DEFAULT_VAR, s):
            raise AssertionError(f"witness {to_text(f)} does not define {s}")
    return Level(n, FiniteModel(s for s, _ in pairs), tuple(pairs))


def l_level(n, bound=MAX_LEVEL):
    """L_n: L_0 is empty, L_{k+1} collects the definable subsets of L_k."""
    _check_bound(n, bound)
    return _l_level(n)


@lru_cache(maxsize=None)
def _v_level(n):
    if n == 0:
        return Level(0, FiniteModel())
    below = _v_level(n - 1)
    return Level(n, FiniteModel(hfset.power_set(below.as_set()).elements))


def v_level(n, bound=MAX_LEVEL):
    """V_n by iterated power set; an oracle independent of any formula machinery."""
    _check_bound(n, bound)
    return _v_level(n)


def lhier(levels, with_witnesses=False, bound=MAX_LEVEL):
    """Levels L_0..L_levels alongside V_0..V_levels and their equality verdicts."""
    _check_bound(levels, bound)
    out = []
    for n in range(levels + 1):
        lv, vv = l_level(n, bound), v_level(n, bound)
        entry = lv.to_json(with_witnesses)
        entry["v_size"] = len(vv.contents)
        entry["equals_v"] = lv.contents == vv.contents
        entry["transitive"] = hfset.is_transitive(lv.as_set())
        out.append(entry)
    return {"levels": out, "collapse": all(e["equals_v"] for e in out)}
