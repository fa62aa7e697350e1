"""Expression universe: terms, matching, unification, ordering, printing.

Ground terms double as propositions; there is no separate atom/term split.
Integers are ordinary constants whose name is their decimal rendering, and
nothing is ever evaluated arithmetically.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class Var:
    """A logic variable; identity is by name within one rule template."""

    name: str

    def __repr__(self):
        return f"Var({self.name})"


@dataclass(frozen=True)
class Compound:
    """Symbol-rooted tree; constants are arity-0 compounds."""

    functor: str
    args: tuple["Term", ...] = ()

    def __repr__(self):
        return f"<{term_to_str(self)}>"


Term = Union[Var, Compound]


def atom(name: str) -> Compound:
    return Compound(name)


def mk(functor: str, *args: Term) -> Compound:
    return Compound(functor, tuple(args))


@lru_cache(maxsize=None)
def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def variables_of(t: Term) -> list[str]:
    """Variable names of t, in first-occurrence order, without duplicates."""
    seen: dict[str, None] = {}

    def walk(x: Term) -> None:
        if isinstance(x, Var):
            seen.setdefault(x.name)
        else:
            for a in x.args:
                walk(a)

    walk(t)
    return list(seen)


def functors_of(t: Term) -> set[tuple[str, int]]:
    out: set[tuple[str, int]] = set()
    if isinstance(t, Compound):
        out.add((t.functor, len(t.args)))
        for a in t.args:
            out |= functors_of(a)
    return out


def constants_of(t: Term) -> set[Compound]:
    """All arity-0 subterms."""
    out: set[Compound] = set()
    if isinstance(t, Compound):
        if not t.args:
            out.add(t)
        for a in t.args:
            out |= constants_of(a)
    return out


# ---------------------------------------------------------------------------
# Substitution over ground ranges (the engine-side notion).
# ---------------------------------------------------------------------------

Subst = dict  # var name -> Term


def apply_subst(t: Term, s: Subst) -> Term:
    """Replace exactly the mapped variables; unmapped variables remain."""
    if isinstance(t, Var):
        return s.get(t.name, t)
    if not t.args:
        return t
    return Compound(t.functor, tuple(apply_subst(a, s) for a in t.args))


def match(pattern: Term, subject: Term, seed: Optional[Subst] = None) -> Optional[Subst]:
    """One-way match of pattern onto a ground subject, extending seed.

    Returns an extended substitution on success, None on failure.  The
    subject is never instantiated.
    """
    s = dict(seed) if seed else {}

    def go(p: Term, g: Term) -> bool:
        if isinstance(p, Var):
            bound = s.get(p.name)
            if bound is None:
                s[p.name] = g
                return True
            return bound == g
        if isinstance(g, Var):
            return False
        if p.functor != g.functor or len(p.args) != len(g.args):
            return False
        return all(go(pa, ga) for pa, ga in zip(p.args, g.args))

    return s if go(pattern, subject) else None


# ---------------------------------------------------------------------------
# General unification (template-level analyses and the top-down prover).
# Substitutions here are triangular: a binding's value may itself contain
# bound variables, so terms are read through `resolve`.
# ---------------------------------------------------------------------------


def _walk(t: Term, s: Subst) -> Term:
    while isinstance(t, Var) and t.name in s:
        t = s[t.name]
    return t


def _occurs(name: str, t: Term, s: Subst) -> bool:
    t = _walk(t, s)
    if isinstance(t, Var):
        return t.name == name
    return any(_occurs(name, a, s) for a in t.args)


def unify(a: Term, b: Term, seed: Optional[Subst] = None) -> Optional[Subst]:
    s = dict(seed) if seed else {}

    def go(x: Term, y: Term) -> bool:
        x, y = _walk(x, s), _walk(y, s)
        if isinstance(x, Var):
            if isinstance(y, Var) and y.name == x.name:
                return True
            if _occurs(x.name, y, s):
                return False
            s[x.name] = y
            return True
        if isinstance(y, Var):
            if _occurs(y.name, x, s):
                return False
            s[y.name] = x
            return True
        if x.functor != y.functor or len(x.args) != len(y.args):
            return False
        return all(go(xa, ya) for xa, ya in zip(x.args, y.args))

    return s if go(a, b) else None


def resolve(t: Term, s: Subst) -> Term:
    """Deep-apply a triangular substitution."""
    t = _walk(t, s)
    if isinstance(t, Var) or not t.args:
        return t
    return Compound(t.functor, tuple(resolve(a, s) for a in t.args))


_fresh_counter = itertools.count(1)


def rename_term(t: Term, mapping: dict[str, Var]) -> Term:
    if isinstance(t, Var):
        if t.name not in mapping:
            # '#' cannot appear in a source variable name, so no capture.
            mapping[t.name] = Var(f"{t.name}#{next(_fresh_counter)}")
        return mapping[t.name]
    if not t.args:
        return t
    return Compound(t.functor, tuple(rename_term(a, mapping) for a in t.args))


def unifiable(a: Term, b: Term) -> bool:
    """Unifiability after standardizing both sides apart."""
    ra = rename_term(a, {})
    rb = rename_term(b, {})
    return unify(ra, rb) is not None


# ---------------------------------------------------------------------------
# Canonical total order on ground terms.
# ---------------------------------------------------------------------------


def sort_key(t: Term):
    """Key realizing the order: functor name, then arity, then args."""
    if isinstance(t, Var):
        raise ValueError(f"sort_key requires a ground term, got variable {t.name}")
    return (t.functor, len(t.args), tuple(sort_key(a) for a in t.args))


def compare_ground(a: Term, b: Term) -> int:
    """Total order on ground terms: -1, 0, or 1."""
    ka, kb = sort_key(a), sort_key(b)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# Canonical text form.
# ---------------------------------------------------------------------------

_UNQUOTED = re.compile(r"[a-z][a-zA-Z0-9_]*|[0-9]+")


def _functor_str(name: str) -> str:
    if _UNQUOTED.fullmatch(name):
        return name
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def term_to_str(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return _functor_str(t.functor)
    inner = ",".join(term_to_str(a) for a in t.args)
    return f"{_functor_str(t.functor)}({inner})"
