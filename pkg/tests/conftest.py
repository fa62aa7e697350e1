"""Corpus loading and shared reference helpers."""

from pathlib import Path

import pytest

import indsem as I
from indsem import oracle

CORPUS = Path(__file__).parent / "corpus"
PAIRS = CORPUS / "pairs"
META = CORPUS / "meta"


def load_case(ind_path: Path):
    program = I.parse_program(ind_path.read_text(), ind_path.name)
    facts = ind_path.with_suffix(".facts")
    if facts.exists():
        params = I.parse_paramset(facts.read_text(), facts.name)
    else:
        params = frozenset()
    return program, params


def corpus_paths():
    return sorted(CORPUS.glob("*.ind"))


def pair_names():
    return sorted(
        p.name[: -len("_upper.ind")]
        for p in PAIRS.glob("*_upper.ind")
        if not p.name.startswith("bad")
    )


def load_pair(name: str):
    upper = I.parse_program((PAIRS / f"{name}_upper.ind").read_text(), f"{name}_upper.ind")
    lower = I.parse_program((PAIRS / f"{name}_lower.ind").read_text(), f"{name}_lower.ind")
    facts = PAIRS / f"{name}.facts"
    params = I.parse_paramset(facts.read_text(), facts.name) if facts.exists() else frozenset()
    return upper, lower, params


def meta_paths():
    return sorted(META.glob("*.ind"))


def oracle_model(program, params, engine_atoms):
    """The brute-force route: preground over a sound universe, then close."""
    universe = oracle.universe_for(program, params, engine_atoms)
    rules = oracle.preground(program, universe)
    return oracle.naive_least_closed(rules, params)


def head_candidates(program, params, engine_atoms):
    """Ground head instances over the finite universe: the atoms whose
    membership the three evaluation routes are compared on."""
    universe = oracle.universe_for(program, params, engine_atoms)
    rules = oracle.preground(program, universe)
    return frozenset(r.head for r in rules) | frozenset(engine_atoms)


@pytest.fixture(params=corpus_paths(), ids=lambda p: p.stem)
def corpus_case(request):
    program, params = load_case(request.param)
    return request.param.stem, program, params
