"""First-order language of membership and equality over finite models.

Quantifiers range over the model's domain only. Parameters are embedded
constants: ``Ground`` carries an actual set, ``NameRef`` points at a forcing
name and only makes sense when a resolver for names is supplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Union

from . import hfset
from .errors import (
    EvaluationError, FormulaSyntaxError, HffError, ResourceLimitError,
    UnassignedVariableError, UnboundVariableError, resource_limit,
)
from .hfset import HfSet

# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Ground:
    value: HfSet

    def __str__(self):
        return hfset.format_set(self.value)


@dataclass(frozen=True)
class NameRef:
    ident: str

    def __str__(self):
        return "#" + self.ident


Parameter = Union[Ground, NameRef]
Term = Union[Var, Ground, NameRef]

# ---------------------------------------------------------------- formulas


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Membership(Formula):
    left: Term
    right: Term

    def __repr__(self):
        return f"Membership({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Equality(Formula):
    left: Term
    right: Term

    def __repr__(self):
        return f"Equality({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula

    def __repr__(self):
        return f"Not({self.body!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"Exists({self.var!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class ForAll(Formula):
    var: str
    body: Formula

    def __repr__(self):
        return f"ForAll({self.var!r}, {self.body!r})"


ATOMS = (Membership, Equality)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, ForAll)

_BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->"}
_QUANT_SYMBOL = {Exists: "E", ForAll: "A"}


def disjunction(formulas):
    """Left-nested ``Or`` of a non-empty sequence."""
    formulas = list(formulas)
    if not formulas:
        raise ValueError("empty disjunction")
    out = formulas[0]
    for f in formulas[1:]:
        out = Or(out, f)
    return out


def conjunction(formulas):
    formulas = list(formulas)
    if not formulas:
        raise ValueError("empty conjunction")
    out = formulas[0]
    for f in formulas[1:]:
        out = And(out, f)
    return out


# ---------------------------------------------------------------- models


class FiniteModel:
    """A finite domain of sets with genuine membership as the relation."""

    __slots__ = ("domain", "_members")

    def __init__(self, domain=()):
        members = frozenset(domain)
        for x in members:
            if not isinstance(x, HfSet):
                raise TypeError(f"model elements must be HfSet, got {type(x).__name__}")
        self.domain = tuple(sorted(members))
        self._members = members

    def __contains__(self, x):
        return x in self._members

    def __iter__(self):
        return iter(self.domain)

    def __len__(self):
        return len(self.domain)

    def __eq__(self, other):
        return isinstance(other, FiniteModel) and self.domain == other.domain

    def __hash__(self):
        return hash(self.domain)

    def __repr__(self):
        return "FiniteModel(" + ", ".join(map(str, self.domain)) + ")"

    def as_set(self):
        return hfset.from_elements(self.domain)

    def to_json(self):
        return {"domain": [hfset.to_json(x) for x in self.domain]}

    @classmethod
    def from_json(cls, data):
        """Accepts ``{"domain": [...]}`` or a bare list; items are arrays or set literals."""
        items = data["domain"] if isinstance(data, dict) else data
        if not isinstance(items, list):
            raise ValueError("model JSON must be a list or an object with a 'domain' list")
        out = []
        for item in items:
            out.append(hfset.parse_set(item) if isinstance(item, str) else hfset.from_json(item))
        return cls(out)


# ---------------------------------------------------------------- syntax measures


def free_vars(f):
    if isinstance(f, ATOMS):
        return frozenset(t.name for t in (f.left, f.right) if isinstance(t, Var))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def depth(f):
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, (Not,) + QUANTIFIERS):
        return 1 + depth(f.body)
    return 1 + max(depth(f.left), depth(f.right))


def size(f):
    """One unit per atom, connective or quantifier."""
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, (Not,) + QUANTIFIERS):
        return 1 + size(f.body)
    return 1 + size(f.left) + size(f.right)


def parameters(f):
    """All parameters occurring in ``f``, in first-occurrence order."""
    out = []

    def walk(g):
        if isinstance(g, ATOMS):
            for t in (g.left, g.right):
                if not isinstance(t, Var) and t not in out:
                    out.append(t)
        elif isinstance(g, (Not,) + QUANTIFIERS):
            walk(g.body)
        else:
            walk(g.left)
            walk(g.right)

    walk(f)
    return out


def name_refs(f):
    return [p.ident for p in parameters(f) if isinstance(p, NameRef)]


def mentions(f, term):
    return term in parameters(f)


class NotFreeError(HffError):
    pass


def substitute(f, var, param):
    """Replace every free occurrence of ``var`` by ``param``."""
    if isinstance(param, HfSet):
        param = Ground(param)
    if var not in free_vars(f):
        raise NotFreeError(f"variable {var!r} is not free in {to_text(f)}")
    return _subst(f, var, param)


def _subst(f, var, param):
    if isinstance(f, ATOMS):
        left = param if f.left == Var(var) else f.left
        right = param if f.right == Var(var) else f.right
        return type(f)(left, right)
    if isinstance(f, Not):
        return Not(_subst(f.body, var, param))
    if isinstance(f, BINARY):
        return type(f)(_subst(f.left, var, param), _subst(f.right, var, param))
    if f.var == var:
        return f
    return type(f)(f.var, _subst(f.body, var, param))


# ---------------------------------------------------------------- printing


def term_text(t):
    return str(t)


def to_text(f):
    """Canonical text; ``parse(to_text(f)) == f``."""
    return _fmt(f, "top")


def _fmt(f, ctx):
    # ctx: "top", "operand" (of a binary connective) or "body" (of a quantifier)
    if isinstance(f, Membership):
        return f"{f.left} in {f.right}"
    if isinstance(f, Equality):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        return "!(" + _fmt(f.body, "top") + ")"
    if isinstance(f, QUANTIFIERS):
        # a quantifier scopes as far right as possible, so bracket it as an operand
        text = f"{_QUANT_SYMBOL[type(f)]} {f.var} . {_fmt(f.body, 'body')}"
        return "(" + text + ")" if ctx == "operand" else text
    text = f"{_fmt(f.left, 'operand')} {_BINARY_SYMBOL[type(f)]} {_fmt(f.right, 'operand')}"
    return text if ctx == "top" else "(" + text + ")"


# ---------------------------------------------------------------- parsing

_UNICODE = {"∈": "in", "¬": "!", "∧": "&", "∨": "|", "→": "->", "∃": "E", "∀": "A"}
_KEYWORDS = {"in", "E", "A"}


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _UNICODE:
            tokens.append((_UNICODE[ch], ch, i))
            i += 1
        elif text.startswith("->", i):
            tokens.append(("->", "->", i))
            i += 2
        elif ch in "!&|=.()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch in "{<" or ch.isdigit():
            value, end = hfset.parse_set_prefix(text, i)
            tokens.append(("set", value, i))
            i = end
        elif ch == "#":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i + 1:
                raise FormulaSyntaxError("expected name identifier after '#'", j)
            tokens.append(("name", text[i + 1:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append((word if word in _KEYWORDS else "ident", word, i))
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("eof", None, n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.pos += 1
        return tok

    def formula(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self):
        out = self.conj()
        while self.peek() == "|":
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.unary()
        while self.peek() == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self):
        kind = self.peek()
        if kind == "!":
            self.take()
            return Not(self.unary())
        if kind in ("E", "A"):
            self.take()
            var = self.take("ident")[1]
            self.take(".")
            body = self.formula()
            return Exists(var, body) if kind == "E" else ForAll(var, body)
        return self.atom()

    def atom(self):
        if self.peek() == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        left = self.term()
        kind, _, offset = self.tokens[self.pos]
        if kind == "in":
            self.take()
            return Membership(left, self.term())
        if kind == "=":
            self.take()
            return Equality(left, self.term())
        what = "end of input" if kind == "eof" else repr(self.tokens[self.pos][1])
        raise FormulaSyntaxError(f"expected 'in' or '=', found {what}", offset)

    def term(self):
        kind, value, offset = self.tokens[self.pos]
        if kind == "ident":
            self.take()
            return Var(value)
        if kind == "set":
            self.take()
            return Ground(value)
        if kind == "name":
            self.take()
            return NameRef(value)
        what = "end of input" if kind == "eof" else repr(value)
        raise FormulaSyntaxError(f"expected a term, found {what}", offset)


def parse(text, free=None):
    """Parse formula text.

    If ``free`` is given, every free variable must be listed in it, otherwise
    :class:`UnboundVariableError` is raised.
    """
    p = _Parser(text)
    f = p.formula()
    p.take("eof")
    if free is not None:
        extra = free_vars(f) - set(free)
        if extra:
            raise UnboundVariableError(extra)
    return f


# ---------------------------------------------------------------- evaluation


def _term_value(t, env, names):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnassignedVariableError(t.name) from None
    if isinstance(t, Ground):
        return t.value
    if names is None:
        raise EvaluationError(f"name parameter #{t.ident} needs forcing evaluation")
    try:
        return names[t.ident]
    except KeyError:
        raise EvaluationError(f"unknown name #{t.ident}") from None


def evaluate(model, f, asg=None, names=None):
    """Tarskian truth of ``f`` in ``model`` with quantifiers over ``model.domain``.

    ``names`` maps NameRef identifiers to their (already valuated) sets.
    """
    env = dict(asg or {})
    return _eval(model.domain, f, env, names)


def _eval(domain, f, env, names):
    if isinstance(f, Membership):
        return hfset.is_member(_term_value(f.left, env, names), _term_value(f.right, env, names))
    if isinstance(f, Equality):
        return _term_value(f.left, env, names) is _term_value(f.right, env, names)
    if isinstance(f, Not):
        return not _eval(domain, f.body, env, names)
    if isinstance(f, And):
        return _eval(domain, f.left, env, names) and _eval(domain, f.right, env, names)
    if isinstance(f, Or):
        return _eval(domain, f.left, env, names) or _eval(domain, f.right, env, names)
    if isinstance(f, Implies):
        return (not _eval(domain, f.left, env, names)) or _eval(domain, f.right, env, names)
    saved = env.get(f.var, _MISSING)
    want = isinstance(f, Exists)
    result = not want
    for x in domain:
        env[f.var] = x
        if _eval(domain, f.body, env, names) == want:
            result = want
            break
    if saved is _MISSING:
        env.pop(f.var, None)
    else:
        env[f.var] = saved
    return result


_MISSING = object()


def find_witness(model, f, asg=None, names=None):
    """For a top-level quantifier, the first domain element deciding it.

    Returns a witness for a true ``Exists`` or a counterexample for a false
    ``ForAll``; ``None`` otherwise.
    """
    if not isinstance(f, QUANTIFIERS):
        return None
    env = dict(asg or {})
    want = isinstance(f, Exists)
    for x in model.domain:
        env[f.var] = x
        if _eval(model.domain, f.body, env, names) == want:
            return x
    return None


# ---------------------------------------------------------------- enumeration

_BOUND_POOL = ("z", "w", "u", "v", "s", "t", "r", "q")


def bound_var(ctx):
    """Name of the variable bound by a quantifier introduced in context ``ctx``."""
    for name in _BOUND_POOL + tuple(f"z{i}" for i in range(1, 64)):
        if name not in ctx:
            return name
    raise ResourceLimitError("out of bound variable names")


def _as_param(p):
    return Ground(p) if isinstance(p, HfSet) else p


def formula_count(n_vars, n_params, max_depth):
    """Number of formulas ``enumerate_formulas`` emits, without building them."""
    return sum(_count(n_vars, n_params, s, max_depth) for s in range(1, 2 ** max_depth))


@lru_cache(maxsize=None)
def _count(k, p, s, d):
    if s == 1:
        return 2 * (k + p) ** 2
    if d <= 1:
        return 0
    total = _count(k, p, s - 1, d - 1) + 2 * _count(k + 1, p, s - 1, d - 1)
    for i in range(1, s - 1):
        total += 3 * _count(k, p, i, d - 1) * _count(k, p, s - 1 - i, d - 1)
    return total


@lru_cache(maxsize=4096)
def _by_size(ctx, params, s, d):
    terms = [Var(v) for v in ctx] + list(params)
    if s == 1:
        return tuple(kind(a, b) for a in terms for b in terms for kind in (Membership, Equality))
    if d <= 1:
        return ()
    out = [Not(f) for f in _by_size(ctx, params, s - 1, d - 1)]
    v = bound_var(ctx)
    for body in _by_size(ctx + (v,), params, s - 1, d - 1):
        out.append(Exists(v, body))
        out.append(ForAll(v, body))
    for i in range(1, s - 1):
        lefts = _by_size(ctx, params, i, d - 1)
        rights = _by_size(ctx, params, s - 1 - i, d - 1)
        for a in lefts:
            for b in rights:
                out.append(And(a, b))
                out.append(Or(a, b))
                out.append(Implies(a, b))
    return tuple(out)


def enumerate_formulas(free, params=(), max_depth=1, limit=None):
    """Every formula over the vocabulary with depth <= ``max_depth``, each once.

    Order: by size, then by canonical text. Variables bound by quantifiers are
    named deterministically from the nesting context, so alpha-variants are
    not emitted twice. Raises :class:`ResourceLimitError` before building a
    size class that would push the total over ``limit``.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    ctx = tuple(sorted(free))
    params = tuple(_as_param(p) for p in params)
    limit = resource_limit() if limit is None else limit
    emitted = 0
    for s in range(1, 2 ** max_depth):
        emitted += _count(len(ctx), len(params), s, max_depth)
        if emitted > limit:
            raise ResourceLimitError(
                f"formula enumeration at depth {max_depth} exceeds limit {limit}",
                needed=formula_count(len(ctx), len(params), max_depth), limit=limit)
        yield from sorted(_by_size(ctx, params, s, max_depth), key=to_text)


def random_formula(rng, free=(), params=(), max_depth=3, ctx=None):
    """Random formula with free variables among ``free``; used by property tests."""
    ctx = tuple(sorted(free)) if ctx is None else ctx
    params = [_as_param(p) for p in params]
    terms = [Var(v) for v in ctx] + params
    if not terms or max_depth <= 1 or rng.random() < 0.25:
        if not terms:
            v = bound_var(ctx)
            kind = rng.choice((Exists, ForAll))
            return kind(v, random_formula(rng, params=params, max_depth=1, ctx=ctx + (v,)))
        return rng.choice((Membership, Equality))(rng.choice(terms), rng.choice(terms))
    roll = rng.random()
    if roll < 0.2:
        return Not(random_formula(rng, params=params, max_depth=max_depth - 1, ctx=ctx))
    if roll < 0.5:
        v = bound_var(ctx)
        kind = rng.choice((Exists, ForAll))
        return kind(v, random_formula(rng, params=params, max_depth=max_depth - 1, ctx=ctx + (v,)))
    kind = rng.choice(BINARY)
    return kind(random_formula(rng, params=params, max_depth=max_depth - 1, ctx=ctx),
                random_formula(rng, params=params, max_depth=max_depth - 1, ctx=ctx))


def assignments(model, variables):
    """All assignments of ``variables`` to domain elements."""
    variables = list(variables)
    for values in product(model.domain, repeat=len(variables)):
        yield dict(zip(variables, values))
