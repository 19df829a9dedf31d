import random
from itertools import combinations

import pytest

from hff import hfset
from hff.definability import (
    TableClosure, definable_without_params, defines, discernibility_report,
    equality_disjunction, extension, naive_definable_without_params, random_model,
    trivial_param_definition,
)
from hff.errors import ArityError
from hff.folang import FiniteModel, Ground, enumerate_formulas, parse, to_text

import oracles

E = hfset.empty()
ONE = hfset.von_neumann(1)
V2 = FiniteModel(hfset.v_sets(2))
V3 = FiniteModel(hfset.v_sets(3))


def models_up_to(k, pool):
    return [FiniteModel(c) for n in range(1, k + 1) for c in combinations(pool, n)]


def test_defines_examples():
    assert defines(V2, parse("!(E z . z in y)"), "y", ONE)
    assert not defines(V2, parse("y = y"), "y", ONE)
    assert defines(V2, parse("y = y"), "y", hfset.von_neumann(2))
    with pytest.raises(ArityError):
        defines(V2, parse("y in x"), "y", ONE)


def test_defines_ignores_members_outside_domain():
    m = FiniteModel([E])
    target = hfset.from_elements([E, hfset.von_neumann(3)])
    assert defines(m, parse("y = y"), "y", target)


def test_trivial_param_definition():
    f = trivial_param_definition(ONE)
    assert to_text(f) == "y in {{}}"
    assert defines(V3, f, "y", ONE)
    assert extension(V3, trivial_param_definition(E)) is E


def test_trivial_param_universal_on_random_models():
    rng = random.Random(7)
    for _ in range(200):
        m = random_model(rng, max_size=8)
        assert len(m) <= 8
        target = rng.choice(m.domain)
        assert defines(m, trivial_param_definition(target), "y", target)


def test_equality_disjunction_defines_every_subset():
    for m in models_up_to(4, hfset.v_sets(3)) + [FiniteModel()]:
        for k in range(len(m) + 1):
            for members in combinations(m.domain, k):
                target = hfset.from_elements(members)
                f = equality_disjunction(members)
                assert defines(m, f, "y", target)
                assert oracles.naive_extensions(m, [f]).keys() == {oracles.to_fs(target)}


def test_first_definitions_in_v2():
    # frozen from naive_definable_without_params, which walks the enumeration
    assert to_text(definable_without_params(V2, E, 2).formula) == "y in y"
    assert to_text(definable_without_params(V2, ONE, 2).formula) == "E z . y in z"
    assert defines(V2, parse("!(y = y)"), "y", E)


def test_search_rejects_bad_input():
    with pytest.raises(ValueError):
        definable_without_params(V2, E, 0)
    with pytest.raises(ValueError):
        definable_without_params(V2, hfset.von_neumann(3), 2)


def test_search_depth_sensitivity():
    # {{}} is a member of V3 with no parameter-free definition at depth 2
    assert definable_without_params(V3, ONE, 2).status == "none"
    r = definable_without_params(V3, ONE, 3)
    assert r.found
    assert defines(V3, r.formula, "y", ONE)
    assert definable_without_params(V3, ONE, 4).found


def test_search_exhausted_is_distinct_from_none():
    r = definable_without_params(V3, ONE, 4, limit=100)
    assert r.status == "exhausted"
    assert r.formula is None


def test_search_agrees_with_naive_enumeration():
    for m in models_up_to(3, hfset.v_sets(3)):
        for target in m.domain:
            for d in (1, 2, 3):
                fast = definable_without_params(m, target, d)
                slow = naive_definable_without_params(m, target, d)
                if slow is None:
                    assert fast.status == "none"
                else:
                    assert fast.found and fast.formula == slow


def test_table_closure_extensions_match_oracle():
    for m, params, d in [(V2, (), 2), (V3, (), 2), (V2, V2.domain, 2), (FiniteModel([E]), (), 3)]:
        got = TableClosure(m, [Ground(p) for p in params]).extensions(d)
        formulas = enumerate_formulas({"y"}, [Ground(p) for p in params], d)
        want = oracles.naive_extensions(m, formulas)
        assert {oracles.to_fs(s) for s in got} == set(want)
        for s, f in got.items():
            assert defines(m, f, "y", s)


def test_extension_counts():
    # frozen from the enumeration oracle above
    assert len(TableClosure(V2).extensions(1)) == 2
    assert len(TableClosure(V2).extensions(2)) == 4
    assert len(TableClosure(V3).extensions(3)) == 7


def test_discernibility_report_empty_target():
    r = discernibility_report(V2, E, 2, 2)
    assert r.param_free_status == "found"
    assert r.constructible_at_level == 1
    assert defines(V2, r.with_params_formula, "y", E)
    j = r.to_json()
    assert j["with_params"] == {"verdict": True, "formula": "y in {}"}
    assert j["param_free"]["formula"] == "y in y"
    assert j["constructible"]["verdict"] is True


def test_discernibility_report_notions_diverge():
    r2 = discernibility_report(V3, ONE, 2, 4)
    r3 = discernibility_report(V3, ONE, 3, 4)
    assert r2.param_free_formula is None and r2.param_free_status == "none"
    assert r3.param_free_formula is not None
    assert r2.constructible_at_level == 2
    assert r2.to_json()["with_params"]["verdict"] is True


def test_report_requires_target_in_domain():
    with pytest.raises(ValueError):
        discernibility_report(V2, hfset.von_neumann(2), 2, 2)
