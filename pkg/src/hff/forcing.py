"""Cohen-style forcing at finite scale.

In a finite poset the filters meeting every dense set are exactly the upward
closures of minimal conditions, so a generic filter here is always principal
and ``p`` forces ``S`` when ``S`` holds in the extension by every minimal
condition below ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

from . import hfset
from .errors import (
    ArityError, ForcingError, NameFamilyError, OrderError, ResourceLimitError, resource_limit,
)
from .folang import (
    Equality, FiniteModel, NameRef, Not, enumerate_formulas, evaluate,
    free_vars, name_refs, to_text,
)

# ------------------------------------------------------------------ conditions


@dataclass(frozen=True, order=True)
class CohenCondition:
    """Finite partial function from naturals to {0, 1}, as sorted (index, bit) pairs."""

    fn: tuple = ()

    def __post_init__(self):
        indices = [i for i, _ in self.fn]
        if list(self.fn) != sorted(self.fn) or len(set(indices)) != len(indices):
            raise ValueError(f"not a canonical partial function: {self.fn}")
        if any(b not in (0, 1) or i < 0 for i, b in self.fn):
            raise ValueError(f"Cohen conditions map naturals to 0/1: {self.fn}")

    @classmethod
    def of(cls, mapping):
        return cls(tuple(sorted(dict(mapping).items())))

    @classmethod
    def parse(cls, text):
        """``{}``, ``{0:1}``, ``{0:1,1:0}`` or bare ``0:1,1:0``."""
        body = text.strip()
        if body.startswith("{") and body.endswith("}"):
            body = body[1:-1]
        mapping = {}
        for part in filter(None, (p.strip() for p in body.split(","))):
            i, _, b = part.partition(":")
            try:
                i, b = int(i), int(b)
            except ValueError:
                raise ValueError(f"bad condition fragment {part!r}") from None
            if i in mapping:
                raise ValueError(f"index {i} assigned twice")
            mapping[i] = b
        return cls.of(mapping)

    def extends(self, other):
        return set(other.fn) <= set(self.fn)

    def as_dict(self):
        return dict(self.fn)

    def encode(self):
        """The set of Kuratowski pairs <i, b> of von Neumann naturals."""
        return hfset.from_elements(
            hfset.kuratowski_pair(hfset.von_neumann(i), hfset.von_neumann(b)) for i, b in self.fn)

    def __str__(self):
        return "{" + ",".join(f"{i}:{b}" for i, b in self.fn) + "}"


def decode_condition(s):
    """Inverse of :meth:`CohenCondition.encode`."""
    mapping = {}
    for p in s:
        i, b = hfset.as_natural(hfset.first(p)), hfset.as_natural(hfset.second(p))
        if i is None or b is None or i in mapping:
            raise ValueError(f"{s} does not encode a Cohen condition")
        mapping[i] = b
    return CohenCondition.of(mapping)


def label(p):
    return str(p)


# ------------------------------------------------------------------ notions


class ForcingNotion:
    """Finite partial order of conditions with a maximum ``top``.

    ``below[p]`` is the set of ``q`` with ``q <= p`` (reflexive).
    """

    def __init__(self, conditions, below, top):
        self.conditions = tuple(conditions)
        self.below = {p: frozenset(below[p]) for p in self.conditions}
        self.top = top
        self._index = {p: i for i, p in enumerate(self.conditions)}

    def __len__(self):
        return len(self.conditions)

    def __contains__(self, p):
        return p in self._index

    def leq(self, p, q):
        return p in self.below[q]

    def lt(self, p, q):
        return p != q and p in self.below[q]

    def order(self, ps):
        return sorted(ps, key=self._index.__getitem__)

    def below_list(self, p):
        return self.order(self.below[p])

    def above(self, p):
        return frozenset(q for q in self.conditions if p in self.below[q])

    def compatible(self, p, q):
        return bool(self.below[p] & self.below[q])

    @cached_property
    def minimal(self):
        return tuple(p for p in self.conditions if len(self.below[p]) == 1)

    def minimal_below(self, p):
        return [m for m in self.minimal if m in self.below[p]]

    def is_dense(self, ds):
        ds = frozenset(ds)
        return all(self.below[p] & ds for p in self.conditions)

    def undense_witness(self, ds):
        ds = frozenset(ds)
        for p in self.conditions:
            if not self.below[p] & ds:
                return p
        return None

    @property
    def encodable(self):
        return all(isinstance(p, CohenCondition) for p in self.conditions)

    def to_json(self):
        pairs = [[label(p), label(q)] for q in self.conditions for p in self.below_list(q) if p != q]
        return {"conditions": [label(p) for p in self.conditions], "leq": pairs,
                "top": label(self.top)}


def make_notion(conditions, leq_pairs):
    """Validate ``leq_pairs`` (``(p, q)`` meaning ``p <= q``) and close it into a partial order.

    Raises :class:`OrderError` naming a cycle if antisymmetry fails, or the
    maximal elements if there is no top.
    """
    conditions = list(dict.fromkeys(conditions))
    if not conditions:
        raise OrderError("a forcing notion needs at least one condition")
    known = set(conditions)
    up = {p: set() for p in conditions}  # direct edges p -> q for p <= q
    for p, q in leq_pairs:
        for x in (p, q):
            if x not in known:
                raise OrderError(f"unknown condition {x!r} in order", [x])
        if p != q:
            up[p].add(q)
    reach = {}
    for p in conditions:
        seen = {p}
        stack = [p]
        while stack:
            x = stack.pop()
            for y in up[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        reach[p] = seen
    for p in conditions:
        for q in reach[p]:
            if q != p and p in reach[q]:
                raise OrderError(f"order is not antisymmetric: {p!r} and {q!r} lie on a cycle",
                                 _cycle(up, p, q))
    below = {q: {p for p in conditions if q in reach[p]} for q in conditions}
    tops = [q for q in conditions if len(below[q]) == len(conditions)]
    if not tops:
        maximal = [q for q in conditions if reach[q] == {q}]
        raise OrderError("no condition lies above every other", maximal)
    return ForcingNotion(conditions, below, tops[0])


def notion_from_json(data):
    """Inverse of :meth:`ForcingNotion.to_json`.

    Labels that all parse as Cohen conditions (``{0:1}``) become
    :class:`CohenCondition` objects; otherwise labels stay plain strings.
    """
    labels = list(data["conditions"])
    try:
        conds = {s: CohenCondition.parse(s) for s in labels}
        if len(set(conds.values())) != len(labels):
            raise ValueError("duplicate conditions")
    except (ValueError, AttributeError):
        conds = {s: s for s in labels}
    pairs = []
    for pair in data.get("leq", []):
        if len(pair) != 2 or any(x not in conds for x in pair):
            raise OrderError(f"bad order pair {pair!r}", [pair])
        pairs.append((conds[pair[0]], conds[pair[1]]))
    notion = make_notion([conds[s] for s in labels], pairs)
    if "top" in data and conds.get(data["top"]) != notion.top:
        raise OrderError(f"declared top {data['top']!r} is not the maximum", [data["top"]])
    return notion


def _path(up, src, dst):
    prev = {src: None}
    queue = [src]
    for x in queue:
        if x == dst:
            break
        for y in sorted(up[x], key=repr):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def _cycle(up, p, q):
    return _path(up, p, q) + _path(up, q, p)[1:]


def trivial_notion():
    """A single condition: the empty Cohen condition."""
    top = CohenCondition()
    return ForcingNotion([top], {top: {top}}, top)


def cohen_poset(bits):
    """Partial functions from ``{0..bits-1}`` to ``{0,1}``, ordered by reverse extension."""
    if bits < 1:
        raise ValueError("bits must be at least 1")
    if 3 ** bits > resource_limit() or bits > 8:
        raise ResourceLimitError(f"Cohen poset with {bits} bits is too large", needed=3 ** bits)
    conditions = []
    for values in product((None, 0, 1), repeat=bits):
        conditions.append(CohenCondition(tuple((i, b) for i, b in enumerate(values) if b is not None)))
    conditions.sort(key=lambda c: (len(c.fn), c.fn))
    below = {q: {p for p in conditions if p.extends(q)} for q in conditions}
    return ForcingNotion(conditions, below, conditions[0])


def cohen_dense_set(notion, i):
    """Conditions deciding index ``i``."""
    return frozenset(p for p in notion.conditions if i in p.as_dict())


def minimal_conditions(notion):
    return list(notion.minimal)


# ------------------------------------------------------------------ filters


@dataclass(frozen=True)
class GenericFilter:
    conditions: frozenset
    generator: object

    def __contains__(self, p):
        return p in self.conditions

    def __iter__(self):
        return iter(self.conditions)

    def __len__(self):
        return len(self.conditions)


def principal_generic(notion, m):
    if m not in notion:
        raise ForcingError(f"{label(m)} is not a condition of this notion")
    if m not in notion.minimal:
        raise ForcingError(f"{label(m)} is not minimal; its upward closure is not generic")
    return GenericFilter(notion.above(m), m)


def generics(notion):
    return [principal_generic(notion, m) for m in notion.minimal]


def is_filter(notion, fs):
    fs = frozenset(fs)
    if not fs:
        return False
    for p in fs:
        if not notion.above(p) <= fs:
            return False
    for p in fs:
        for q in fs:
            if not notion.below[p] & notion.below[q] & fs:
                return False
    return True


def meets_all_dense(notion, fs):
    """Brute force over every subset of the conditions; exponential, tests only."""
    fs = frozenset(fs)
    conds = notion.conditions
    for mask in range(1, 1 << len(conds)):
        ds = frozenset(c for i, c in enumerate(conds) if mask >> i & 1)
        if notion.is_dense(ds) and not ds & fs:
            return False
    return True


def construct_generic(notion, start, dense_sets=()):
    """Greedy descent from ``start`` through each dense set, then down to a minimal condition."""
    p = start
    for ds in dense_sets:
        ds = frozenset(ds)
        bad = notion.undense_witness(ds)
        if bad is not None:
            raise ForcingError(f"set is not dense: {label(bad)} has no extension in it")
        p = next(q for q in notion.below_list(p) if q in ds)
    m = notion.minimal_below(p)[0]
    return principal_generic(notion, m)


# ------------------------------------------------------------------ names


@dataclass(frozen=True)
class PName:
    """A finite set of ``(name, condition)`` pairs."""

    pairs: frozenset = frozenset()

    @cached_property
    def key(self):
        return tuple(sorted((s.key, label(p)) for s, p in self.pairs))

    @cached_property
    def rank(self):
        return max((s.rank + 1 for s, _ in self.pairs), default=0)

    def children(self):
        return sorted({s for s, _ in self.pairs}, key=lambda s: s.key)

    def sorted_pairs(self):
        return sorted(self.pairs, key=lambda sp: (sp[0].key, label(sp[1])))

    def to_json(self):
        return [[s.to_json(), label(p)] for s, p in self.sorted_pairs()]

    def __str__(self):
        return "{" + ", ".join(f"({s}, {label(p)})" for s, p in self.sorted_pairs()) + "}"

    __repr__ = __str__


def name_rank(tau):
    return tau.rank


@lru_cache(maxsize=None)
def _check_name(x, top):
    return PName(frozenset((_check_name(y, top), top) for y in x))


def check_name(x, notion):
    """x-check: ``{(y-check, top) : y in x}``; evaluates to ``x`` under every filter."""
    return _check_name(x, notion.top)


def g_name(notion):
    """Canonical name of the generic filter: pairs (check of encode(p), p)."""
    if not notion.encodable:
        raise ForcingError("this notion has no set encoding for its conditions")
    return PName(frozenset((check_name(p.encode(), notion), p) for p in notion.conditions))


def generic_function_name(notion):
    """Name whose value is the union of G's encodings, i.e. the generic partial function."""
    if not notion.encodable:
        raise ForcingError("this notion has no set encoding for its conditions")
    pairs = set()
    for p in notion.conditions:
        for i, b in p.fn:
            pk = hfset.kuratowski_pair(hfset.von_neumann(i), hfset.von_neumann(b))
            pairs.add((check_name(pk, notion), p))
    return PName(frozenset(pairs))


def val(tau, g):
    """``{val(s, G) : (s, p) in tau, p in G}``."""
    return _val(tau, g.conditions)


@lru_cache(maxsize=200_000)
def _val(tau, conds):
    return hfset.from_elements(_val(s, conds) for s, p in tau.pairs if p in conds)


def subnames(tau):
    """Every name reachable from ``tau`` (including itself)."""
    seen = {tau}
    stack = [tau]
    while stack:
        t = stack.pop()
        for s, _ in t.pairs:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


class NameFamily:
    """Ordered mapping from identifiers to names."""

    def __init__(self, names=None):
        self.names = dict(names or {})
        self._ids = {}
        for ident, tau in self.names.items():
            self._ids.setdefault(tau, ident)

    def __getitem__(self, ident):
        return self.names[ident]

    def __contains__(self, ident):
        return ident in self.names

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def items(self):
        return self.names.items()

    def ident(self, tau):
        return self._ids.get(tau)

    def add(self, ident, tau):
        if ident in self.names and self.names[ident] != tau:
            raise NameFamilyError(f"identifier #{ident} is already bound to another name")
        self.names[ident] = tau
        self._ids.setdefault(tau, ident)

    def missing_subname(self):
        present = set(self.names.values())
        for ident, tau in self.names.items():
            for s in tau.children():
                if s not in present:
                    return ident, s
        return None

    def closed(self):
        """A copy with every subname added, under fresh ``n<k>`` identifiers."""
        out = NameFamily(self.names)
        counter = 0
        queue = list(out.names.values())
        for tau in queue:
            for s in tau.children():
                if out.ident(s) is None:
                    while f"n{counter}" in out.names:
                        counter += 1
                    out.add(f"n{counter}", s)
                    queue.append(s)
        return out

    def to_json(self):
        return {ident: tau.to_json() for ident, tau in self.names.items()}


def build_family(ground, notion, extra=None):
    """Check-names of the ground elements (``x0``, ``x1``, ...), ``G`` and ``g`` when the
    notion is encodable, any ``extra`` names, then closed under subnames."""
    fam = NameFamily()
    if notion.encodable:
        fam.add("G", g_name(notion))
        fam.add("g", generic_function_name(notion))
    for i, x in enumerate(ground.domain):
        fam.add(f"x{i}", check_name(x, notion))
    for ident, tau in (extra or {}).items():
        fam.add(ident, tau)
    return fam.closed()


def random_name(rng, notion, ground, depth=2, width=3):
    """Random name over ``notion`` whose leaves are check-names of ground elements."""
    pairs = set()
    for _ in range(rng.randint(0, width)):
        if depth <= 1 or rng.random() < 0.4:
            sigma = check_name(rng.choice(ground.domain), notion) if ground.domain else PName()
        else:
            sigma = random_name(rng, notion, ground, depth - 1, width)
        pairs.add((sigma, rng.choice(notion.conditions)))
    return PName(frozenset(pairs))


# ------------------------------------------------------------------ extensions


@dataclass
class Extension:
    ground: FiniteModel
    notion: ForcingNotion
    family: NameFamily
    filter: GenericFilter
    domain: FiniteModel
    values: dict = field(repr=False)

    def g_value(self):
        return self.values.get("G")


def ground_model(k=3):
    from .constructible import v_level

    return v_level(k).contents


def generic_extension(ground, notion, family, g):
    """M[G]: the values of every name in the family under ``g``."""
    missing = family.missing_subname()
    if missing is not None:
        ident, s = missing
        raise NameFamilyError(f"name family is not subname-closed: #{ident} has subname {s} missing")
    present = set(family.names.values())
    for x in ground.domain:
        if check_name(x, notion) not in present:
            raise NameFamilyError(f"name family lacks the check-name of ground element {x}")
    if notion.encodable and g_name(notion) not in present:
        raise NameFamilyError("name family lacks the canonical name of the generic filter")
    values = {ident: val(tau, g) for ident, tau in family.items()}
    return Extension(ground, notion, family, g, FiniteModel(values.values()), values)


# ------------------------------------------------------------------ verdicts


@dataclass
class Verdict:
    claim: str
    passed: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {"claim": self.claim, "passed": self.passed,
                "witnesses": self.witnesses, "details": self.details}


class ForcingSetup:
    """A notion, a transitive ground model and a name family, with cached extensions."""

    def __init__(self, notion, ground, family=None, extra_names=None):
        if not hfset.is_transitive(ground.as_set()):
            raise ForcingError("ground model must be transitive")
        self.notion = notion
        self.ground = ground
        self.family = family if family is not None else build_family(ground, notion, extra_names)
        self._extensions = {}
        self._truth = {}

    def extension(self, g):
        ext = self._extensions.get(g.generator)
        if ext is None:
            ext = generic_extension(self.ground, self.notion, self.family, g)
            self._extensions[g.generator] = ext
        return ext

    def generics(self):
        return generics(self.notion)

    def _check_sentence(self, s):
        if free_vars(s):
            raise ArityError(f"sentence has free variables: {sorted(free_vars(s))}")
        for ident in name_refs(s):
            if ident not in self.family:
                raise NameFamilyError(f"unresolved name #{ident}")

    def holds(self, s, g):
        """Truth of sentence ``s`` in M[G]."""
        self._check_sentence(s)
        ext = self.extension(g)
        return evaluate(ext.domain, s, {}, names=ext.values)

    def truth_table(self, s):
        """Truth of ``s`` in the extension by each minimal condition."""
        table = self._truth.get(s)
        if table is None:
            self._check_sentence(s)
            table = {}
            for m in self.notion.minimal:
                table[m] = self.holds(s, principal_generic(self.notion, m))
            self._truth[s] = table
        return table

    def forces(self, p, s):
        if p not in self.notion:
            raise ForcingError(f"{label(p)} is not a condition of this notion")
        table = self.truth_table(s)
        return all(table[m] for m in self.notion.minimal_below(p))

    def forcing_conditions(self, s):
        return [p for p in self.notion.conditions if self.forces(p, s)]

    def check_negation_lemma(self, s):
        """p forces !s iff no q <= p forces s; and if nothing forces s, everything forces !s."""
        neg = Not(s)
        bad = []
        for p in self.notion.conditions:
            lhs = self.forces(p, neg)
            rhs = not any(self.forces(q, s) for q in self.notion.below_list(p))
            if lhs != rhs:
                bad.append({"condition": label(p), "forces_negation": lhs,
                            "nothing_below_forces": rhs})
        forced_somewhere = any(self.forces(p, s) for p in self.notion.conditions)
        corollary = forced_somewhere or all(self.forces(p, neg) for p in self.notion.conditions)
        if not corollary:
            bad.append({"corollary": "no condition forces S, yet some condition fails to force !S"})
        return Verdict("negation-lemma", not bad, bad, {"sentence": to_text(s)})

    def check_truth_lemma(self, s, g):
        """S true in M[G] iff some member of G forces S."""
        truth = self.holds(s, g)
        forcers = [p for p in self.notion.order(g.conditions) if self.forces(p, s)]
        ok = truth == bool(forcers)
        witnesses = [] if ok else [{"generator": label(g.generator), "true": truth,
                                    "forcers": [label(p) for p in forcers]}]
        return Verdict("truth-lemma", ok, witnesses,
                       {"sentence": to_text(s), "generator": label(g.generator), "true": truth})

    def decided_below(self, p, s):
        """Some ``q <= p`` forcing ``s`` or ``!s`` (the first minimal condition works)."""
        for q in self.notion.below_list(p):
            if self.forces(q, s) or self.forces(q, Not(s)):
                return q
        return None

    def unnameable_search(self, sentence_depth=2):
        """For every name, a sentence about it and a condition forcing that sentence.

        A "nontrivial" sentence is one forced by some condition but not by the
        top; names for which no such sentence exists at the depth fall back to
        ``#t = #t``, forced by top.
        """
        if sentence_depth < 1:
            raise ValueError("sentence_depth must be at least 1")
        per_name = {}
        failures = []
        corollary_bad = []
        top = self.notion.top
        for ident in self.family:
            ref = NameRef(ident)
            found = None
            for s in enumerate_formulas((), [ref], sentence_depth):
                forcers = self.forcing_conditions(s)
                if not forcers:
                    # negation lemma corollary: then every condition forces !s
                    if not all(self.forces(p, Not(s)) for p in self.notion.conditions):
                        corollary_bad.append({"name": ident, "sentence": to_text(s)})
                    continue
                if found is None and top not in forcers:
                    found = {"sentence": to_text(s), "condition": label(forcers[0]),
                             "kind": "nontrivial"}
            if found is None:
                refl = Equality(ref, ref)
                if self.forces(top, refl):
                    found = {"sentence": to_text(refl), "condition": label(top),
                             "kind": "reflexivity"}
                else:
                    failures.append(ident)
            if found is not None:
                per_name[ident] = found
        kinds = [v["kind"] for v in per_name.values()]
        details = {
            "names": len(self.family),
            "sentence_depth": sentence_depth,
            "reflexivity_fallbacks": kinds.count("reflexivity"),
            "nontrivial": kinds.count("nontrivial"),
            "per_name": per_name,
        }
        witnesses = [{"unnameable": ident} for ident in failures] + corollary_bad
        return Verdict("unnameable-impossibility", not witnesses, witnesses, details)


# ------------------------------------------------------------------ axioms


def _extensionality_failures(domain):
    members = set(domain)
    seen = {}
    out = []
    for a in domain:
        trace = frozenset(z for z in a if z in members)
        if trace in seen:
            out.append((seen[trace], a))
        else:
            seen[trace] = a
    return out


def _regularity_failures(domain):
    members = set(domain)
    out = []
    for a in domain:
        inside = [z for z in a if z in members]
        if inside and not any(not any(w in members and hfset.is_member(w, a) for w in z)
                              for z in inside):
            out.append(a)
    return out


def _pairing_failures(domain, cutoff):
    members = set(domain)
    out = []
    for i, a in enumerate(domain):
        for b in domain[i:]:
            if max(hfset.rank(a), hfset.rank(b)) + 1 >= cutoff:
                continue
            if hfset.pair(a, b) not in members:
                out.append((a, b))
    return out


def _union_failures(domain, cutoff):
    members = set(domain)
    out = []
    for a in domain:
        u = hfset.union(a)
        if hfset.rank(u) < cutoff and u not in members:
            out.append(a)
    return out


def max_cutoff(domain, axiom):
    """Largest rank cutoff at which the bounded closure axiom holds."""
    members = set(domain)
    limit = max((hfset.rank(x) for x in domain), default=0) + 2
    if axiom == "pairing":
        ranks = [max(hfset.rank(a), hfset.rank(b)) + 1
                 for i, a in enumerate(domain) for b in domain[i:]
                 if hfset.pair(a, b) not in members]
    elif axiom == "union":
        ranks = [hfset.rank(hfset.union(a)) for a in domain if hfset.union(a) not in members]
    else:
        raise ValueError(f"no cutoff for axiom {axiom!r}")
    return min(ranks, default=limit)


AXIOMS = ("extensionality", "regularity", "pairing", "union")


def axiom_check(model, axiom):
    """Relativized axiom truth: ``extensionality``, ``regularity``, ``pairing@N`` or ``union@N``.

    ``pairing@N`` requires ``{a, b}`` in the domain whenever its rank is below N;
    ``union@N`` likewise for unions of domain elements.
    """
    name, _, arg = axiom.partition("@")
    domain = model.domain
    if name == "extensionality" and not arg:
        return not _extensionality_failures(domain)
    if name == "regularity" and not arg:
        return not _regularity_failures(domain)
    if name in ("pairing", "union") and arg:
        try:
            cutoff = int(arg)
        except ValueError:
            raise ValueError(f"bad cutoff in axiom tag {axiom!r}") from None
        fails = _pairing_failures(domain, cutoff) if name == "pairing" else _union_failures(domain, cutoff)
        return not fails
    raise ValueError(f"unknown axiom tag {axiom!r}")


def check_generic_model(ground, extension, cutoff=None):
    """Finite fragments of ZF in the extension.

    Extensionality and regularity are checked exactly. Pairing and union are
    checked as closure below ``cutoff``; by default the cutoff is the one the
    ground model itself satisfies, so the check asks whether the extension
    keeps the ground's closure.
    """
    domain = extension.domain.domain
    witnesses = []
    ext_fail = _extensionality_failures(domain)
    for a, b in ext_fail:
        witnesses.append({"axiom": "extensionality", "pair": [str(a), str(b)]})
    reg_fail = _regularity_failures(domain)
    for a in reg_fail:
        witnesses.append({"axiom": "regularity", "set": str(a)})
    if cutoff is None:
        cutoff = min(max_cutoff(ground.domain, "pairing"), max_cutoff(ground.domain, "union"))
    for a, b in _pairing_failures(domain, cutoff):
        witnesses.append({"axiom": f"pairing@{cutoff}", "pair": [str(a), str(b)]})
    for a in _union_failures(domain, cutoff):
        witnesses.append({"axiom": f"union@{cutoff}", "set": str(a)})
    missing = [x for x in ground.domain if x not in extension.domain]
    for x in missing:
        witnesses.append({"axiom": "ground-inclusion", "set": str(x)})
    g_value = extension.g_value()
    details = {
        "cutoff": cutoff,
        "max_pairing_cutoff": max_cutoff(domain, "pairing"),
        "max_union_cutoff": max_cutoff(domain, "union"),
        "extension_size": len(domain),
        "extension_max_rank": max((hfset.rank(x) for x in domain), default=0),
        "generic_in_ground": None if g_value is None else g_value in ground,
    }
    return Verdict("generic-model", not witnesses, witnesses, details)


# ------------------------------------------------------------------ evental sites


def find_evental_sites(model):
    """Nonempty domain elements none of whose members is in the domain."""
    return [x for x in model.domain if len(x) and not any(y in model for y in x)]


def classify_sites(model):
    """``transitive``, ``has-sites`` or ``non-transitive-without-sites``."""
    sites = find_evental_sites(model)
    if hfset.is_transitive(model.as_set()):
        kind = "transitive"
    elif sites:
        kind = "has-sites"
    else:
        kind = "non-transitive-without-sites"
    return kind, sites


def random_transitive_model(rng, max_rank=4, max_card=3, seeds=3):
    roots = [hfset.random_set(rng, max_rank, max_card) for _ in range(rng.randint(1, seeds))]
    return FiniteModel(hfset.transitive_closure(hfset.from_elements(roots)).elements)


def plant_site(rng, model, max_card=3):
    """Add a site to ``model``; returns ``(new_model, site)``."""
    members = set(model.domain)
    top_rank = max((hfset.rank(x) for x in model.domain), default=0)
    outsiders = []
    while not outsiders:
        for _ in range(rng.randint(1, max_card)):
            y = hfset.random_set(rng, top_rank + 1, max_card)
            if y not in members:
                outsiders.append(y)
    site = hfset.from_elements(outsiders)
    return FiniteModel(model.domain + (site,)), site


def random_notion(rng, max_size=8):
    """Random poset on ``p0..p{n-1}`` with ``p0`` on top."""
    n = rng.randint(1, max_size)
    conds = [f"p{i}" for i in range(n)]
    pairs = [(c, conds[0]) for c in conds[1:]]
    for j in range(1, n):
        for i in range(1, j):
            if rng.random() < 0.3:
                pairs.append((conds[j], conds[i]))
    return make_notion(conds, pairs)
