"""Three notions of discernibility over a finite model.

1. constructibility (membership in a finite level of L),
2. definability by a formula in one free variable without parameters,
3. definability by a formula with parameters.

Notion 3 is trivial: ``y in a`` defines ``a`` once ``a`` is a parameter.
Notion 2 is decided by a depth-bounded search. Instead of walking every
formula, the search closes the set of *truth tables* reachable at each depth,
which is exact for the bound and cheap because formulas with the same table
are interchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import hfset
from .errors import ArityError, ResourceLimitError, resource_limit
from .folang import (
    And, Equality, Exists, FiniteModel, ForAll, Ground, Implies, Membership,
    Not, Or, Var, _by_size, _count, bound_var, disjunction, enumerate_formulas,
    evaluate, free_vars, to_text,
)
from .hfset import HfSet

DEFAULT_VAR = "y"


def defines(model, f, free_var, target):
    """True iff ``f`` holds of exactly the domain elements that belong to ``target``.

    Members of ``target`` outside the domain are ignored.
    """
    extra = free_vars(f) - {free_var}
    if extra:
        raise ArityError(f"formula has free variables besides {free_var!r}: {sorted(extra)}")
    for b in model.domain:
        if evaluate(model, f, {free_var: b}) != hfset.is_member(b, target):
            return False
    return True


def trivial_param_definition(target, var=DEFAULT_VAR):
    """``var in target``, with the target itself as parameter."""
    return Membership(Var(var), Ground(target))


def equality_disjunction(members, var=DEFAULT_VAR):
    """``var = a1 | var = a2 | ...``; ``!(var = var)`` for no members."""
    members = sorted(members)
    if not members:
        return Not(Equality(Var(var), Var(var)))
    return disjunction(Equality(Var(var), Ground(a)) for a in members)


def extension(model, f, var=DEFAULT_VAR):
    """The subset of the domain satisfying ``f``, as a set."""
    return hfset.from_elements(b for b in model.domain if evaluate(model, f, {var: b}))


# ------------------------------------------------------------- truth-table closure


class TableClosure:
    """Truth tables of all formulas up to a depth, over a fixed model.

    Context ``k`` has the designated variable plus ``k - 1`` bound variables;
    a table is an int whose bit ``i`` is the truth value on assignment ``i``
    (mixed radix, first variable least significant). For each table the
    smallest formula found is kept as witness.
    """

    def __init__(self, model, params=(), var=DEFAULT_VAR, limit=None):
        self.model = model
        self.domain = model.domain
        self.n = len(model.domain)
        self.params = tuple(p if isinstance(p, Ground) else Ground(p) for p in params)
        self.var = var
        self.limit = resource_limit() if limit is None else limit
        self.work = 0
        self._cache = {}

    def _ctx(self, k):
        ctx = (self.var,)
        while len(ctx) < k:
            ctx = ctx + (bound_var(ctx),)
        return ctx

    def _charge(self, amount):
        self.work += amount
        if self.work > self.limit:
            raise ResourceLimitError(f"definability search exceeds limit {self.limit}",
                                     needed=self.work, limit=self.limit)

    def _atoms(self, k):
        n = self.n
        size_k = n ** k
        terms = [Var(v) for v in self._ctx(k)] + list(self.params)
        self._charge(size_k * 2 * len(terms) ** 2)
        # values of each term on every assignment
        columns = []
        for t in terms:
            if isinstance(t, Var):
                i = self._ctx(k).index(t.name)
                step = n ** i
                columns.append([self.domain[(idx // step) % n] for idx in range(size_k)])
            else:
                columns.append([t.value] * size_k)
        out = {}
        for a, ca in zip(terms, columns):
            for b, cb in zip(terms, columns):
                for kind in (Membership, Equality):
                    bits = 0
                    for idx in range(size_k):
                        x, y = ca[idx], cb[idx]
                        if (hfset.is_member(x, y) if kind is Membership else x is y):
                            bits |= 1 << idx
                    f = kind(a, b)
                    if bits not in out:
                        out[bits] = (1, f)
        return out

    def tables(self, k, d):
        """Map table -> (size, witness) for formulas of depth <= d in context k."""
        key = (k, d)
        if key in self._cache:
            return self._cache[key]
        if d == 1:
            out = self._atoms(k)
            self._cache[key] = out
            return out
        prev = self.tables(k, d - 1)
        out = dict(prev)
        full = (1 << self.n ** k) - 1

        def offer(bits, sz, f):
            have = out.get(bits)
            if have is None or sz < have[0]:
                out[bits] = (sz, f)

        items = sorted(prev.items(), key=lambda kv: kv[1][0])
        for bits, (sz, f) in items:
            offer(full ^ bits, sz + 1, Not(f))
        inner = self.tables(k + 1, d - 1)
        chunk = self.n ** k
        mask = (1 << chunk) - 1
        v = self._ctx(k + 1)[-1]
        self._charge(len(inner) * self.n)
        for bits, (sz, f) in sorted(inner.items(), key=lambda kv: kv[1][0]):
            ex, al = 0, mask
            for j in range(self.n):
                part = (bits >> (j * chunk)) & mask
                ex |= part
                al &= part
            offer(ex, sz + 1, Exists(v, f))
            offer(al, sz + 1, ForAll(v, f))
        self._charge(len(items) ** 2)
        for abits, (asz, af) in items:
            for bbits, (bsz, bf) in items:
                s = asz + bsz + 1
                offer(abits & bbits, s, And(af, bf))
                offer(abits | bbits, s, Or(af, bf))
                offer((full ^ abits) | bbits, s, Implies(af, bf))
        self._cache[key] = out
        return out

    def target_bits(self, target):
        bits = 0
        for i, b in enumerate(self.domain):
            if hfset.is_member(b, target):
                bits |= 1 << i
        return bits

    def bits_to_set(self, bits):
        return hfset.from_elements(b for i, b in enumerate(self.domain) if bits >> i & 1)

    def extensions(self, d):
        """Definable subsets of the domain at depth <= d, each with a witness."""
        return {self.bits_to_set(bits): w for bits, (_, w) in self.tables(1, d).items()}


# ------------------------------------------------------------- parameter-free search


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" | "none" | "exhausted"
    max_depth: int
    formula: Optional[object] = None
    detail: str = ""

    @property
    def found(self):
        return self.status == "found"


def definable_without_params(model, target, max_depth, var=DEFAULT_VAR, limit=None):
    """First formula in enumeration order (size, then text) of depth <= ``max_depth``
    defining ``target`` without parameters.

    The truth-table closure decides existence and the minimal size; only that
    size class is then scanned in text order. A blown budget yields status
    ``"exhausted"``, never ``"none"``.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    if target not in model:
        raise ValueError(f"target {target} is not in the model's domain")
    limit = resource_limit() if limit is None else limit
    closure = TableClosure(model, (), var, limit)
    try:
        table = closure.tables(1, max_depth)
    except ResourceLimitError as exc:
        return SearchResult("exhausted", max_depth, detail=str(exc))
    want = closure.target_bits(target)
    if want not in table:
        return SearchResult("none", max_depth)
    min_size, witness = table[want]
    if _count(1, 0, min_size, max_depth) <= limit:
        for f in sorted(_by_size((var,), (), min_size, max_depth), key=to_text):
            if defines(model, f, var, target):
                return SearchResult("found", max_depth, f)
    return SearchResult("found", max_depth, witness,
                        detail="size class too large to order; smallest witness returned")


def naive_definable_without_params(model, target, max_depth, var=DEFAULT_VAR):
    """Reference search: walk every enumerated formula. Exponential; tests only."""
    for f in enumerate_formulas({var}, (), max_depth):
        if defines(model, f, var, target):
            return f
    return None


# ------------------------------------------------------------- report


@dataclass
class DiscernibilityReport:
    target: HfSet
    param_free_formula: Optional[object]
    param_free_status: str
    param_free_search_depth: int
    with_params_formula: object
    constructible_at_level: Optional[int]
    max_level: int

    def to_json(self):
        return {
            "target": hfset.to_json(self.target),
            "constructible": {
                "verdict": self.constructible_at_level is not None,
                "level": self.constructible_at_level,
                "max_level": self.max_level,
            },
            "param_free": {
                "verdict": self.param_free_status,
                "formula": None if self.param_free_formula is None else to_text(self.param_free_formula),
                "max_depth": self.param_free_search_depth,
            },
            "with_params": {
                "verdict": True,
                "formula": to_text(self.with_params_formula),
            },
        }


def discernibility_report(model, target, max_depth, max_level, limit=None):
    from .constructible import l_level

    if target not in model:
        raise ValueError(f"target {target} is not in the model's domain")
    search = definable_without_params(model, target, max_depth, limit=limit)
    trivial = trivial_param_definition(target)
    if not defines(model, trivial, DEFAULT_VAR, target):
        raise AssertionError("trivial parameter definition failed")  # cannot happen
    level = None
    for n in range(max_level + 1):
        if target in l_level(n).contents:
            level = n
            break
    return DiscernibilityReport(
        target=target,
        param_free_formula=search.formula,
        param_free_status=search.status,
        param_free_search_depth=max_depth,
        with_params_formula=trivial,
        constructible_at_level=level,
        max_level=max_level,
    )


def random_model(rng, max_size=8, max_rank=3):
    """Random model with up to ``max_size`` elements drawn from V_{max_rank+1}."""
    pool = hfset.v_sets(max_rank + 1) if max_rank <= 3 else None
    k = rng.randint(1, max_size)
    if pool is not None:
        return FiniteModel(rng.sample(pool, min(k, len(pool))))
    return FiniteModel(hfset.random_set(rng, max_rank) for _ in range(k))
