"""The brute-force reference route: pregrounding and naive closure."""

import pytest

from conftest import corpus_paths, load_case, oracle_model
from indsem import engine
from indsem.engine import GroundRule
from indsem.errors import UniverseTooLargeError, UnstratifiableError
from indsem.oracle import (
    FiniteUniverse,
    minimality_check,
    naive_least_closed,
    preground,
    universe_for,
)
from indsem.parser import parse_paramset, parse_program, parse_term
from indsem.terms import atom


def _atoms(text):
    return frozenset(parse_term(t) for t in text.split())


TC = parse_program("tc(X,Y) :- edge(X,Y).\ntc(X,Y) :- edge(X,Z), tc(Z,Y).\n")


def test_universe_constants():
    u = FiniteUniverse(_atoms("edge(1,2) tc(2,3)"))
    assert u.constants == _atoms("1 2 3")


def test_preground_instance_count():
    # Two constants: the first template has 2 variables (4 instances), the
    # second has 3 (8 instances).
    u = FiniteUniverse(_atoms("edge(1,2) edge(2,1)"))
    rules = preground(TC, u)
    assert len(rules) == 12
    assert GroundRule(parse_term("tc(1,2)"), _atoms("edge(1,2)")) in rules
    assert GroundRule(
        parse_term("tc(1,1)"), _atoms("edge(1,2) tc(2,1)")
    ) in rules


def test_preground_proposition_positions_range_over_atoms():
    prog = parse_program("truly_believes(X,P) :- believes(X,P), P.\n")
    u = FiniteUniverse(_atoms("believes(ann,tall(bea)) tall(bea)"))
    rules = preground(prog, u)
    # P ranges over the two universe atoms, X over the constants ann and bea.
    assert len(rules) == 4
    heads = {r.head for r in rules}
    assert parse_term("truly_believes(ann,tall(bea))") in heads


def test_preground_cap():
    u = FiniteUniverse(_atoms("edge(1,2) edge(2,3) edge(3,4)"))
    with pytest.raises(UniverseTooLargeError):
        preground(TC, u, cap=10)


def test_naive_closure_positive():
    u = FiniteUniverse(_atoms("edge(1,2) edge(2,3)"))
    rules = preground(TC, u)
    params = _atoms("edge(1,2) edge(2,3)")
    closed = naive_least_closed(rules, params)
    assert closed == params | _atoms("tc(1,2) tc(2,3) tc(1,3)")


def test_naive_closure_with_negation():
    prog = parse_program("q.\np :- not(q).\nr :- not(s).\n")
    rules = preground(prog, FiniteUniverse(_atoms("q p r s")))
    assert naive_least_closed(rules, frozenset()) == _atoms("q r")


def test_naive_closure_rejects_negation_cycle():
    rules = {GroundRule(atom("p"), frozenset(), _atoms("p"))}
    with pytest.raises(UnstratifiableError):
        naive_least_closed(rules, frozenset())


def test_oracle_agrees_with_engine_on_corpus():
    for path in corpus_paths():
        program, params = load_case(path)
        model = engine.least_fixpoint(program, params).atoms
        assert oracle_model(program, params, model) == model, path.stem


def test_minimality_of_engine_output():
    params = _atoms("edge(1,2) edge(2,3)")
    model = engine.least_fixpoint(TC, params).atoms
    rules = preground(TC, universe_for(TC, params, model))
    assert minimality_check(rules, params, model)
    assert not minimality_check(rules, params, model | _atoms("tc(3,1)"))
    assert not minimality_check(rules, params, model - _atoms("tc(1,3)"))
    assert not minimality_check(rules, params, model - params)


def test_minimality_subset_cap():
    params = _atoms("edge(1,2) edge(2,3)")
    model = engine.least_fixpoint(TC, params).atoms
    rules = preground(TC, universe_for(TC, params, model))
    with pytest.raises(UniverseTooLargeError):
        minimality_check(rules, params, model, max_extra=2)
