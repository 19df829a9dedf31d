import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hff import hfset
from hff.errors import (
    EvaluationError, FormulaSyntaxError, ResourceLimitError, UnassignedVariableError,
    UnboundVariableError,
)
from hff.folang import (
    And, Equality, Exists, FiniteModel, ForAll, Ground, Implies, Membership, NameRef, Not,
    NotFreeError, Or, Var, depth, enumerate_formulas, evaluate, find_witness, formula_count,
    free_vars, parse, random_formula, size, substitute, to_text,
)

import oracles

E = hfset.empty()
ONE = hfset.von_neumann(1)
V2 = FiniteModel(hfset.v_sets(2))
V3 = FiniteModel(hfset.v_sets(3))


def small_models():
    pool = hfset.v_sets(3)
    return [FiniteModel(c) for k in range(1, 5) for c in combinations(pool, k)]


def test_parse_existential():
    assert parse("E z . z in y") == Exists("z", Membership(Var("z"), Var("y")))


def test_quantifier_scope_extends_right():
    f = parse("A x . x in a -> x in b", free={"a", "b"})
    assert f == ForAll("x", Implies(Membership(Var("x"), Var("a")), Membership(Var("x"), Var("b"))))
    assert to_text(f) == "A x . (x in a -> x in b)"


def test_parenthesised_quantifier_operand():
    f = parse("(E z . z in y) & y = y")
    assert isinstance(f, And) and isinstance(f.left, Exists)
    assert parse(to_text(f)) == f


def test_precedence():
    f = parse("a in b | a = b & b in a -> !a = a")
    assert isinstance(f, Implies)
    assert isinstance(f.left, Or) and isinstance(f.left.right, And)
    assert isinstance(f.right, Not)


def test_implication_is_right_associative():
    f = parse("a = a -> b = b -> c = c")
    assert isinstance(f.right, Implies)


def test_unicode_aliases():
    assert parse("∀ x . x ∈ y → ¬ y = x") == parse("A x . x in y -> !y = x")
    assert parse("∃ x . x ∈ y ∧ x = x ∨ y = y") == parse("E x . x in y & x = x | y = y")


def test_parameters_in_text():
    f = parse("y in {{}} & #G = 2")
    assert f.left.right == Ground(ONE)
    assert f.right == Equality(NameRef("G"), Ground(hfset.von_neumann(2)))


def test_syntax_error_offset():
    with pytest.raises(FormulaSyntaxError, match="offset 4"):
        parse("x in")


@pytest.mark.parametrize("text", ["", "(x in y", "x in y)", "E . x in x", "x = {", "x ~ y", "!"])
def test_malformed(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_unbound_variable():
    with pytest.raises(UnboundVariableError):
        parse("x in y", free={"y"})
    parse("E x . x in y", free={"y"})


def test_measures():
    f = parse("E z . z in y")
    assert free_vars(f) == {"y"}
    assert depth(parse("x in y")) == 1
    assert depth(f) == 2
    assert size(parse("x in y & y in z")) == 3
    assert size(parse("!(E z . z in y)")) == 3


def test_substitute():
    a = hfset.von_neumann(2)
    assert to_text(substitute(parse("y in x"), "x", Ground(a))) == "y in {{},{{}}}"
    assert to_text(substitute(parse("x = x"), "x", Ground(E))) == "{} = {}"
    with pytest.raises(NotFreeError):
        substitute(parse("A x . x in y"), "x", Ground(E))


def test_substitute_respects_binding():
    f = substitute(parse("x in y & E x . x in x"), "x", Ground(E))
    assert to_text(f) == "{} in y & (E x . x in x)"


def test_eval_examples():
    f = parse("E z . z in y")
    assert evaluate(FiniteModel([E]), f, {"y": E}) is False
    assert evaluate(V2, f, {"y": ONE}) is True
    assert find_witness(V2, f, {"y": ONE}) is E
    for m in (FiniteModel([]), V2, V3):
        for x in (E, ONE):
            assert evaluate(m, parse("x = x"), {"x": x})


def test_quantifiers_are_relativized():
    # {{}} has a member, but not one inside the model {{{}}}
    m = FiniteModel([ONE])
    assert not evaluate(m, parse("E z . z in y"), {"y": ONE})
    assert evaluate(m, parse("A z . !z in z"))


def test_eval_errors():
    with pytest.raises(UnassignedVariableError):
        evaluate(V2, parse("x in y"), {"y": E})
    with pytest.raises(EvaluationError):
        evaluate(V2, parse("#G = #G"))


def test_model_json():
    m = FiniteModel.from_json({"domain": [[], "{{}}", [[]]]})
    assert m.domain == (E, ONE)
    assert FiniteModel.from_json(m.to_json()) == m
    assert FiniteModel.from_json(["0", "1", "1"]) == V2


def test_enumeration_depth_one():
    assert sorted(map(to_text, enumerate_formulas({"y"}, (), 1))) == ["y = y", "y in y"]


@pytest.mark.parametrize("terms,d", [(1, 1), (1, 2), (1, 3), (2, 2), (0, 3), (0, 4)])
def test_counts_match_grammar_oracle(terms, d):
    assert formula_count(terms, 0, d) == oracles.formula_count(terms, d)


def test_enumeration_is_duplicate_free_and_bounded():
    for d in (1, 2, 3):
        seen = set()
        for f in enumerate_formulas({"y"}, (), d):
            assert f not in seen
            assert depth(f) <= d
            assert free_vars(f) <= {"y"}
            seen.add(f)
        assert len(seen) == oracles.formula_count(1, d)


def test_enumeration_with_parameters():
    fs = list(enumerate_formulas((), [Ground(E)], 2))
    assert len(fs) == oracles.formula_count(1, 2) == 32
    assert all(not free_vars(f) for f in fs)


def test_enumeration_is_monotone():
    d2 = set(enumerate_formulas({"y"}, (), 2))
    d3 = set(enumerate_formulas({"y"}, (), 3))
    assert d2 < d3


def test_enumeration_order_is_size_then_text():
    fs = list(enumerate_formulas({"y"}, (), 3))
    keys = [(size(f), to_text(f)) for f in fs]
    assert keys == sorted(keys)


def test_enumeration_limit():
    with pytest.raises(ResourceLimitError):
        list(enumerate_formulas({"y"}, (), 4, limit=10_000))


def test_round_trip_depth_three():
    for f in enumerate_formulas({"y"}, (), 3):
        assert parse(to_text(f)) == f


def test_relativization_matches_oracle_depth_two():
    formulas = list(enumerate_formulas({"y"}, (), 2))
    for m in small_models():
        for f in formulas:
            sat = oracles.satisfying(m.domain, f, ("y",))
            for b in m.domain:
                assert evaluate(m, f, {"y": b}) == ((oracles.to_fs(b),) in sat)


formulas = st.integers(0, 10_000).map(
    lambda seed: random_formula(random.Random(seed), ("x", "y"), [Ground(E), Ground(ONE)], 4))
elements = st.sampled_from(V3.domain)


@given(formulas, elements, elements)
@settings(max_examples=200)
def test_random_formulas_against_oracle(f, a, b):
    asg = {"x": a, "y": b}
    assert evaluate(V3, f, asg) == oracles.truth(V3.domain, f, asg)
    assert evaluate(V3, Not(f), asg) == (not evaluate(V3, f, asg))
    assert parse(to_text(f)) == f


@given(formulas, formulas, elements, elements)
@settings(max_examples=100)
def test_de_morgan_and_duality(f, g, a, b):
    asg = {"x": a, "y": b}
    assert evaluate(V3, Not(And(f, g)), asg) == evaluate(V3, Or(Not(f), Not(g)), asg)
    assert evaluate(V3, Not(Or(f, g)), asg) == evaluate(V3, And(Not(f), Not(g)), asg)
    h = Exists("x", f)
    assert evaluate(V3, h, asg) == evaluate(V3, Not(ForAll("x", Not(f))), asg)
