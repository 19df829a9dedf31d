"""Reference implementations that share no code path with the package.

Sets are plain nested frozensets here, truth is computed as the set of
satisfying assignments, and names are evaluated by direct recursion.
"""

from itertools import combinations, product

from hff import hfset
from hff.folang import (
    And, Equality, Exists, Ground, Implies, Membership, NameRef, Not, Or, Var,
)


def to_fs(x):
    return frozenset(to_fs(y) for y in x)


def fs_rank(s):
    return 0 if not s else 1 + max(fs_rank(t) for t in s)


def fs_powerset(s):
    items = list(s)
    return frozenset(frozenset(c) for k in range(len(items) + 1) for c in combinations(items, k))


def fs_union(s):
    return frozenset(y for x in s for y in x)


def fs_transitive_closure(s):
    current = frozenset(s)
    while True:
        nxt = current | fs_union(current)
        if nxt == current:
            return current
        current = nxt


def ackermann(s):
    return sum(2 ** ackermann(t) for t in s)


def tower_sets(n):
    """V_n through Ackermann codes: exactly the sets with code below tower(n)."""
    bound = 0
    for _ in range(n):
        bound = 2 ** bound
    return {hfset.from_code(i) for i in range(bound)}


def satisfying(domain, f, variables, names=None):
    """All assignments (tuples over ``variables``) satisfying ``f``; quantifiers over ``domain``."""
    domain = [to_fs(x) for x in domain]
    return _sat(domain, f, tuple(variables), names or {})


def _value(t, variables, row, names):
    if isinstance(t, Var):
        # innermost binding wins when a bound variable shadows an outer one
        return row[len(variables) - 1 - variables[::-1].index(t.name)]
    if isinstance(t, Ground):
        return to_fs(t.value)
    if isinstance(t, NameRef):
        return to_fs(names[t.ident])
    raise TypeError(t)


def _sat(domain, f, variables, names):
    rows = set(product(domain, repeat=len(variables)))
    if isinstance(f, (Membership, Equality)):
        out = set()
        for row in rows:
            a = _value(f.left, variables, row, names)
            b = _value(f.right, variables, row, names)
            if (a in b) if isinstance(f, Membership) else (a == b):
                out.add(row)
        return out
    if isinstance(f, Not):
        return rows - _sat(domain, f.body, variables, names)
    if isinstance(f, And):
        return _sat(domain, f.left, variables, names) & _sat(domain, f.right, variables, names)
    if isinstance(f, Or):
        return _sat(domain, f.left, variables, names) | _sat(domain, f.right, variables, names)
    if isinstance(f, Implies):
        return (rows - _sat(domain, f.left, variables, names)) | _sat(domain, f.right, variables, names)
    # quantifier: extend with a fresh column, then project
    inner_vars = variables + (f.var,)
    inner = _sat(domain, f.body, inner_vars, names)
    out = set()
    for row in rows:
        hits = [(row + (x,)) in inner for x in domain]
        if (any(hits) if isinstance(f, Exists) else all(hits)):
            out.add(row)
    return out


def truth(domain, f, asg=None, names=None):
    asg = asg or {}
    variables = tuple(sorted(asg))
    row = tuple(to_fs(asg[v]) for v in variables)
    return row in satisfying(domain, f, variables, names)


def val_oracle(name, filt):
    """Valuation by direct recursion on the raw pair sets."""
    return frozenset(val_oracle(s, filt) for s, p in name.pairs if p in filt)


def naive_extensions(model, formulas, var="y"):
    """Distinct extensions of ``formulas`` over ``model``, via the oracle evaluator."""
    out = {}
    for f in formulas:
        ext = frozenset(to_fs(b) for b in model.domain if truth(model.domain, f, {var: b}))
        out.setdefault(ext, f)
    return out


def formula_count(terms, d):
    """Formulas of depth <= d when ``terms`` variables/parameters are in scope.

    Atoms: 2 * terms**2; one negation, three binary connectives, and two
    quantifiers, each of which brings one fresh variable into scope.
    """
    atoms = 2 * terms * terms
    if d == 1:
        return atoms
    below = formula_count(terms, d - 1)
    return atoms + below + 3 * below * below + 2 * formula_count(terms + 1, d - 1)
