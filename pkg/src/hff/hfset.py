"""Hereditarily finite sets in canonical form.

Every :class:`HfSet` is hash-consed: two sets are equal exactly when they are
the same Python object. Elements are kept in ascending Ackermann order, where
``code(x) = sum(2 ** code(y) for y in x)``. The order is decided structurally
(compare the largest elements first), so sets of rank 6 and above remain
usable even though their integer code would not fit in memory.
"""

from __future__ import annotations

import weakref
from itertools import combinations

from .errors import ResourceLimitError, SetLiteralError, resource_limit

__all__ = [
    "HfSet", "empty", "from_elements", "is_member", "is_subset", "power_set",
    "pair", "union", "singleton", "kuratowski_pair", "first", "second",
    "is_kuratowski_pair", "is_transitive", "transitive_closure", "von_neumann",
    "as_natural", "cardinality", "equinumerous", "rank", "code", "from_code",
    "to_json", "from_json", "parse_set", "parse_set_prefix", "format_set",
    "v_sets", "random_set",
]

_MAX_CODE_RANK = 5


class HfSet:
    __slots__ = ("_elems", "_key", "_hash", "_rank", "_code", "__weakref__")

    _interned = weakref.WeakValueDictionary()

    def __new__(cls, *args, **kwargs):
        raise TypeError("use hff.hfset.from_elements() or empty() to build sets")

    @classmethod
    def _make(cls, elems):
        # elems must already be sorted and duplicate-free
        found = cls._interned.get(elems)
        if found is not None:
            return found
        self = object.__new__(cls)
        self._elems = elems
        self._key = tuple(e._key for e in reversed(elems))
        self._hash = hash(elems)
        self._rank = elems[-1]._rank + 1 if elems else 0
        self._code = None
        cls._interned[elems] = self
        return self

    @property
    def elements(self):
        return self._elems

    def __iter__(self):
        return iter(self._elems)

    def __len__(self):
        return len(self._elems)

    def __bool__(self):
        return bool(self._elems)

    def __contains__(self, item):
        return is_member(item, self)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self is other or self._key < other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self is other or self._key > other._key

    def __reduce__(self):
        return (from_json, (to_json(self),))

    def __repr__(self):
        return f"HfSet({format_set(self)})"

    def __str__(self):
        return format_set(self)


def _canonical(xs):
    return HfSet._make(tuple(sorted(set(xs), key=lambda s: s._key)))


_EMPTY = HfSet._make(())


def empty():
    return _EMPTY


def from_elements(xs=()):
    """Canonical set whose elements are the distinct members of ``xs``."""
    xs = list(xs)
    for x in xs:
        if not isinstance(x, HfSet):
            raise TypeError(f"elements must be HfSet, got {type(x).__name__}")
    return _canonical(xs)


def is_member(a, b):
    if a._rank >= b._rank:
        return False
    elems = b._elems
    lo, hi = 0, len(elems)
    key = a._key
    while lo < hi:
        mid = (lo + hi) // 2
        if elems[mid]._key < key:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(elems) and elems[lo] is a


def is_subset(a, b):
    if len(a._elems) > len(b._elems):
        return False
    members = set(b._elems)
    return all(x in members for x in a._elems)


def power_set(a, limit=None):
    """All subsets of ``a``; refuses when ``2 ** |a|`` exceeds the resource limit."""
    limit = resource_limit() if limit is None else limit
    n = len(a._elems)
    if n >= 63 or (1 << n) > limit:
        raise ResourceLimitError(f"power set of a {n}-element set exceeds limit {limit}",
                                 needed=1 << min(n, 4096), limit=limit)
    # with elements in ascending code order, bitmask order is Ackermann order;
    # doubling the list element by element produces exactly that order
    tuples = [()]
    for e in a._elems:
        tuples += [t + (e,) for t in tuples]
    make = HfSet._make
    return make(tuple(make(t) for t in tuples))


def pair(a, b):
    return _canonical((a, b))


def singleton(a):
    return HfSet._make((a,))


def union(a):
    """Union of all elements of ``a``."""
    return _canonical(y for x in a._elems for y in x._elems)


def binary_union(a, b):
    return _canonical(a._elems + b._elems)


def kuratowski_pair(a, b):
    return pair(singleton(a), pair(a, b))


def is_kuratowski_pair(p):
    if len(p) == 1:
        (only,) = p._elems
        return len(only) == 1
    if len(p) != 2:
        return False
    small, big = sorted(p._elems, key=len)
    return len(small) == 1 and len(big) == 2 and small._elems[0] in big._elems


def _decode_pair(p):
    if not is_kuratowski_pair(p):
        raise ValueError(f"{format_set(p)} is not a Kuratowski pair")
    if len(p) == 1:
        a = p._elems[0]._elems[0]
        return a, a
    small, big = sorted(p._elems, key=len)
    a = small._elems[0]
    b = big._elems[0] if big._elems[1] is a else big._elems[1]
    return a, b


def first(p):
    return _decode_pair(p)[0]


def second(p):
    return _decode_pair(p)[1]


def is_transitive(a):
    members = set(a._elems)
    return all(y in members for x in a._elems for y in x._elems)


def transitive_closure(a, limit=None):
    """Smallest transitive set that includes ``a`` as a subset."""
    limit = resource_limit() if limit is None else limit
    seen = set()
    stack = list(a._elems)
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        if len(seen) > limit:
            raise ResourceLimitError(f"transitive closure exceeds limit {limit}", limit=limit)
        stack.extend(x._elems)
    return _canonical(seen)


_naturals = [_EMPTY]


def von_neumann(n):
    if n < 0:
        raise ValueError("natural numbers are non-negative")
    while len(_naturals) <= n:
        k = _naturals[-1]
        _naturals.append(HfSet._make(k._elems + (k,)))
    return _naturals[n]


def as_natural(a):
    """Inverse of :func:`von_neumann`, or ``None`` if ``a`` is not a natural."""
    n = len(a)
    if a._rank == n and von_neumann(n) is a:
        return n
    return None


def cardinality(a):
    return len(a._elems)


def equinumerous(a, b):
    return len(a._elems) == len(b._elems)


def rank(a):
    return a._rank


def code(a):
    """Ackermann code. Only sets of rank <= 5 are accepted; rank 6 codes have ~2**65536 bits."""
    if a._code is None:
        if a._rank > _MAX_CODE_RANK:
            raise ResourceLimitError(f"Ackermann code of a rank-{a._rank} set is too large")
        a._code = sum(1 << code(x) for x in a._elems)
    return a._code


def from_code(n):
    if n < 0:
        raise ValueError("codes are non-negative")
    elems = []
    i = 0
    while n:
        if n & 1:
            elems.append(from_code(i))
        n >>= 1
        i += 1
    return HfSet._make(tuple(elems))


def to_json(a):
    return [to_json(x) for x in a._elems]


def from_json(data):
    if not isinstance(data, list):
        raise ValueError(f"HfSet JSON must be nested arrays, got {type(data).__name__}")
    return _canonical(from_json(x) for x in data)


def format_set(a):
    return "{" + ",".join(format_set(x) for x in a._elems) + "}"


def parse_set_prefix(text, pos=0):
    """Parse one set literal starting at ``pos``; return ``(set, end)``.

    Accepts ``{a,b,...}``, decimal numerals (von Neumann naturals) and
    ``<a,b>`` (Kuratowski pairs). Whitespace is skipped.
    """

    def skip(i):
        while i < len(text) and text[i].isspace():
            i += 1
        return i

    def term(i):
        i = skip(i)
        if i >= len(text):
            raise SetLiteralError("expected set literal", i)
        ch = text[i]
        if ch == "{":
            items = []
            i = skip(i + 1)
            if i < len(text) and text[i] == "}":
                return _EMPTY, i + 1
            while True:
                item, i = term(i)
                items.append(item)
                i = skip(i)
                if i < len(text) and text[i] == ",":
                    i += 1
                elif i < len(text) and text[i] == "}":
                    return _canonical(items), i + 1
                else:
                    raise SetLiteralError("expected ',' or '}'", i)
        if ch == "<":
            a, i = term(i + 1)
            i = skip(i)
            if i >= len(text) or text[i] != ",":
                raise SetLiteralError("expected ','", i)
            b, i = term(i + 1)
            i = skip(i)
            if i >= len(text) or text[i] != ">":
                raise SetLiteralError("expected '>'", i)
            return kuratowski_pair(a, b), i + 1
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            return von_neumann(int(text[i:j])), j
        raise SetLiteralError(f"unexpected character {ch!r}", i)

    return term(pos)


def parse_set(text):
    value, end = parse_set_prefix(text)
    end_ws = end
    while end_ws < len(text) and text[end_ws].isspace():
        end_ws += 1
    if end_ws != len(text):
        raise SetLiteralError("trailing input after set literal", end_ws)
    return value


def v_sets(n):
    """Elements of V_n (all sets of rank < n) in canonical order."""
    level = _EMPTY
    for _ in range(n):
        level = power_set(level)
    return level._elems


def random_set(rng, max_rank=3, max_card=4):
    """Random set of rank <= ``max_rank``, drawn by recursive sampling."""
    if max_rank <= 0:
        return _EMPTY
    k = rng.randint(0, max_card)
    return _canonical(random_set(rng, rng.randint(0, max_rank - 1), max_card) for _ in range(k))


def subsets_of_size(a, k):
    return [HfSet._make(c) for c in combinations(a._elems, k)]
