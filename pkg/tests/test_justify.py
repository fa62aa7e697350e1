"""Justification sequences: the prover, the checker, and their formatting."""

import pytest

from indsem import engine
from indsem.errors import (
    IndsemError,
    NegativeGoalError,
    ResourceLimitError,
    UnstratifiableError,
)
from indsem.justify import (
    Justification,
    ParamWitness,
    RuleWitness,
    format_justification,
    prove,
    verify,
    verify_report,
)
from indsem.parser import parse_paramset, parse_program, parse_term

TC = parse_program("tc(X,Y) :- edge(X,Y).\ntc(X,Y) :- edge(X,Z), tc(Z,Y).\n")
EDGES = parse_paramset("edge(1,2).\nedge(2,3).\n")


def _atoms(text):
    return frozenset(parse_term(t) for t in text.split())


# ---------------------------------------------------------------------------
# Proving
# ---------------------------------------------------------------------------


def test_direct_edge_justification():
    j = prove(TC, EDGES, parse_term("tc(1,2)"))
    assert j is not None
    props = [p for p, _ in j.steps]
    assert props == [parse_term("edge(1,2)"), parse_term("tc(1,2)")]
    assert isinstance(j.steps[0][1], ParamWitness)
    assert isinstance(j.steps[1][1], RuleWitness)
    assert j.steps[1][1].body == _atoms("edge(1,2)")
    assert verify(TC, EDGES, j)


def test_transitive_justification():
    j = prove(TC, EDGES, parse_term("tc(1,3)"))
    assert j is not None
    assert j.final == parse_term("tc(1,3)")
    assert verify(TC, EDGES, j)


def test_each_body_atom_appears_earlier():
    j = prove(TC, EDGES, parse_term("tc(1,3)"))
    prior = set()
    for prop, witness in j.steps:
        if isinstance(witness, RuleWitness):
            assert witness.body <= prior
        prior.add(prop)


def test_underivable_goal():
    assert prove(TC, EDGES, parse_term("tc(3,1)")) is None
    assert prove(TC, EDGES, parse_term("nonsense")) is None


def test_prove_rejects_negation_and_nonground_goals():
    with pytest.raises(NegativeGoalError):
        prove(TC, EDGES, parse_term("not(tc(1,2))"))
    with pytest.raises(IndsemError):
        prove(TC, EDGES, parse_term("tc(1,Y)"))


def test_prove_with_negation():
    prog = parse_program("q.\np :- not(q).\nr :- not(s).\n")
    assert prove(prog, frozenset(), parse_term("p")) is None
    j = prove(prog, frozenset(), parse_term("r"))
    assert j is not None
    assert j.steps[-1][1].negs == _atoms("s")
    assert verify(prog, frozenset(), j)


def test_prove_rejects_unstratifiable_programs():
    with pytest.raises(UnstratifiableError):
        prove(parse_program("p :- not(p).\n"), frozenset(), parse_term("p"))


def test_recursion_first_literal_order_terminates():
    prog = parse_program("reach(1).\nreach(Y) :- reach(X), edge(X,Y).\n")
    params = parse_paramset("edge(1,2).\nedge(2,3).\n")
    assert prove(prog, params, parse_term("reach(3)")) is not None
    assert prove(prog, params, parse_term("reach(4)")) is None


def test_cyclic_graph_goal_fails_finitely():
    params = parse_paramset("edge(1,2).\nedge(2,1).\n")
    assert prove(TC, params, parse_term("tc(1,3)")) is None
    j = prove(TC, params, parse_term("tc(1,1)"))
    assert j is not None and verify(TC, params, j)


def test_depth_cap():
    lines = ["p0."] + [f"p{i} :- p{i - 1}." for i in range(1, 60)]
    prog = parse_program("\n".join(lines) + "\n")
    with pytest.raises(ResourceLimitError):
        prove(prog, frozenset(), parse_term("p59"), engine.Limits(max_depth=5))
    assert prove(prog, frozenset(), parse_term("p59")) is not None


def test_agreement_with_model_membership():
    for text, facts in [
        ("d :- b, c.\nb :- a.\nc :- a.\n", "a."),
        ("a.\nb :- not(a).\nc :- not(b).\n", ""),
        ("truly_believes(X,P) :- believes(X,P), P.\n",
         "believes(ann,tall(bea)).\ntall(bea).\nbelieves(ann,tall(ann))."),
    ]:
        prog = parse_program(text)
        params = parse_paramset(facts)
        model = engine.least_fixpoint(prog, params).atoms
        for a in model:
            j = prove(prog, params, a)
            assert j is not None and verify(prog, params, j)


# ---------------------------------------------------------------------------
# Verification of externally supplied sequences
# ---------------------------------------------------------------------------


def test_verify_rejects_body_not_listed_earlier():
    j = Justification((
        (parse_term("tc(1,2)"),
         RuleWitness(parse_term("tc(1,2)"), _atoms("edge(1,2)"))),
    ))
    report = verify_report(TC, EDGES, j)
    assert any("does not appear earlier" in p for p in report)


def test_verify_rejects_false_param_claim():
    j = Justification(((parse_term("tc(1,2)"), ParamWitness()),))
    report = verify_report(TC, EDGES, j)
    assert any("not a parameter" in p for p in report)


def test_verify_rejects_blocked_negative_condition():
    prog = parse_program("p :- not(q).\n")
    j = Justification((
        (parse_term("p"), RuleWitness(parse_term("p"), frozenset(), _atoms("q"))),
    ))
    assert verify(prog, frozenset(), j)
    assert not verify(prog, _atoms("q"), j)


def test_verify_rejects_non_instances():
    j = Justification((
        (parse_term("edge(1,2)"), ParamWitness()),
        (parse_term("tc(2,1)"),
         RuleWitness(parse_term("tc(2,1)"), _atoms("edge(1,2)"))),
    ))
    report = verify_report(TC, EDGES, j)
    assert any("not a ground instance" in p for p in report)


def test_verify_rejects_head_mismatch():
    j = Justification((
        (parse_term("edge(1,2)"), ParamWitness()),
        (parse_term("tc(1,2)"),
         RuleWitness(parse_term("tc(9,9)"), _atoms("edge(1,2)"))),
    ))
    assert not verify(TC, EDGES, j)


def test_verify_rejects_nonground_step():
    j = Justification(((parse_term("edge(1,Y)"), ParamWitness()),))
    report = verify_report(TC, EDGES, j)
    assert any("not ground" in p for p in report)


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def test_format_justification():
    prog = parse_program("c.\nb :- c.\na :- b, not(d).\n")
    j = prove(prog, frozenset(), parse_term("a"))
    text = format_justification(j)
    lines = text.splitlines()
    assert lines[0].startswith("1. c  [fact]")
    assert "b  :- c" in lines[1]
    assert "a  :- b ; not d" in lines[2]


def test_format_param_step():
    j = prove(TC, EDGES, parse_term("tc(1,2)"))
    assert "edge(1,2)  [param]" in format_justification(j)
