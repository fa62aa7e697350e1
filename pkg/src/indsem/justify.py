"""Top-down construction and verification of justification sequences.

A justification is a finite sequence of propositions, each witnessed either
by parameter membership or by a fired ground rule whose body appears earlier
in the sequence.  The prover is a tabled resolution search: every ground
subgoal is proved at most once, a subgoal already on the call stack fails at
that occurrence, and negative conditions are checked by failure, which under
stratification coincides with testing the stratum's parameter set.

Nonground subgoals (from variable body literals and nonground clause/2
facts) are solved by unification against the bottom-up model when the
program is evaluable that way; otherwise (metaprograms whose models are
infinite) they resolve against parameter atoms and rule heads directly,
with a growth check that stops a variable-head rule from rederiving a goal
it just wrapped (the clause(clause(...)) regress).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from . import engine, errors
from .depgraph import stratify_templates
from .errors import (
    IndsemError,
    NegativeGoalError,
    NonGroundNegationError,
    ResourceLimitError,
    UncallableLiteralError,
)
from .parser import Program, RuleTemplate, SourceLoc
from .terms import (
    Compound,
    Term,
    Var,
    apply_subst,
    is_ground,
    match,
    rename_term,
    resolve,
    sort_key,
    term_to_str,
    unify,
)


@dataclass(frozen=True)
class ParamWitness:
    pass


@dataclass(frozen=True)
class RuleWitness:
    head: Term
    body: frozenset
    negs: frozenset = frozenset()
    loc: Optional[SourceLoc] = None


Witness = Union[ParamWitness, RuleWitness]


@dataclass(frozen=True)
class Justification:
    steps: tuple[tuple[Term, Witness], ...]

    @property
    def final(self) -> Term:
        return self.steps[-1][0]


def _is_negation(t: Term) -> bool:
    return isinstance(t, Compound) and t.functor == "not" and len(t.args) == 1


def _embeds(t: Term, sub: Term) -> bool:
    """True when sub occurs in t (as t itself or any subterm)."""
    if t == sub:
        return True
    if isinstance(t, Compound):
        return any(_embeds(a, sub) for a in t.args)
    return False


# Budget for the candidate-model attempt below; programs whose models do not
# fit (including genuinely infinite ones) fall back to direct resolution.
CANDIDATE_ATOM_CAP = 1000


@lru_cache(maxsize=64)
def _candidate_model(program: Program, params: frozenset, max_iters: int):
    """Ground candidates for nonground subgoals, from the bottom-up model.

    None when the program cannot be evaluated bottom-up within the budget
    (metaprograms with unbound variable literals, infinite ','/call
    closures); the prover then resolves against rule heads directly.
    """
    limits = engine.Limits(CANDIDATE_ATOM_CAP, max_iters)
    try:
        model = engine.least_fixpoint(program, params, limits)
    except (
        errors.UncallableLiteralError,
        errors.VariableHeadRestrictionError,
        errors.NonGroundHeadError,
        errors.NonGroundNegationError,
        errors.ResourceLimitError,
    ):
        return None
    return tuple(sorted(model.atoms, key=sort_key))


class _Prover:
    def __init__(self, program: Program, params, limits: engine.Limits):
        self.program = program
        self.templates = program.templates
        self.params = frozenset(params)
        self.params_sorted = sorted(self.params, key=sort_key)
        self.limits = limits
        # ground atom -> ("param",) | ("rule", loc, body_instances, neg_instances)
        self.table: dict = {}
        self.stack: set = set()

    def _candidate_atoms(self):
        return _candidate_model(self.program, self.params, self.limits.max_iters)

    def _rename(self, t: RuleTemplate):
        m: dict = {}
        head = rename_term(t.head, m)
        pos = tuple(rename_term(b, m) for b in t.pos_body)
        negs = tuple(rename_term(n, m) for n in t.neg_body)
        return head, pos, negs, t.loc

    def _check_depth(self, depth: int):
        if depth > self.limits.max_depth:
            raise ResourceLimitError(f"proof depth cap exceeded ({self.limits.max_depth})")

    def _negs_fail(self, negs, subst, loc, depth) -> bool:
        """True when some negative condition holds (rule instance blocked)."""
        for n in negs:
            g = resolve(n, subst)
            if not is_ground(g):
                raise NonGroundNegationError(
                    f"{loc}: negative condition {term_to_str(g)} not ground"
                )
            if self._derivable(g, depth):
                return True
        return False

    def _derivable(self, goal: Term, depth: int) -> bool:
        saved = self.stack
        self.stack = set()
        try:
            for _ in self._solve(goal, {}, depth + 1, ()):
                return True
            return False
        finally:
            self.stack = saved

    def prove_ground(self, goal: Term, depth: int) -> bool:
        if goal in self.table:
            return True
        if goal in self.params:
            self.table[goal] = ("param",)
            return True
        if goal in self.stack:
            return False
        self._check_depth(depth)
        self.stack.add(goal)
        try:
            for t in self.templates:
                # Same growth check as _solve: a variable-head rule applied
                # to a goal that wraps an ancestor (clause(clause(...),true)
                # and the like) would regress through ever-larger goals.
                if isinstance(t.head, Var) and any(
                    _embeds(goal, a) for a in self.stack if a is not goal
                ):
                    continue
                head, pos, negs, loc = self._rename(t)
                s = unify(head, goal)
                if s is None:
                    continue
                for s2 in self._solve_seq(pos, s, depth + 1, ()):
                    if self._negs_fail(negs, s2, loc, depth):
                        continue
                    body_inst = tuple(resolve(b, s2) for b in pos)
                    neg_inst = tuple(resolve(n, s2) for n in negs)
                    if not all(is_ground(b) for b in body_inst):
                        continue
                    self.table[goal] = ("rule", loc, body_inst, neg_inst)
                    return True
            return False
        finally:
            self.stack.discard(goal)

    def _solve(self, goal: Term, subst: dict, depth: int, chain: tuple):
        g = resolve(goal, subst)
        if is_ground(g):
            if self.prove_ground(g, depth):
                yield subst
            return
        if isinstance(g, Var):
            raise UncallableLiteralError(
                f"cannot call the unbound variable {term_to_str(g)}"
            )
        self._check_depth(depth)
        candidates = self._candidate_atoms()
        if candidates is not None:
            # The model is computable bottom-up: enumerate its atoms rather
            # than resolving against rule heads, which terminates regardless
            # of literal order.  Witnesses are rebuilt by reconstruct().
            for a in candidates:
                s2 = unify(g, a, subst)
                if s2 is not None:
                    if a in self.params:
                        self.table.setdefault(a, ("param",))
                    yield s2
            return
        for a in self.params_sorted:
            s2 = unify(g, a, subst)
            if s2 is not None:
                self.table.setdefault(a, ("param",))
                yield s2
        grew = any(_embeds(g, a) for a in chain)
        chain = chain + (g,)
        for t in self.templates:
            # A variable-head rule resolves with any goal at all, so applying
            # it to a goal that grew around an earlier nonground goal on this
            # chain (clause(clause(...)) and the like) would regress forever.
            if grew and isinstance(t.head, Var):
                continue
            head, pos, negs, loc = self._rename(t)
            s2 = unify(g, head, subst)
            if s2 is None:
                continue
            for s3 in self._solve_seq(pos, s2, depth + 1, chain):
                if self._negs_fail(negs, s3, loc, depth):
                    continue
                # The answer may leave goal variables free for a later
                # literal to bind; table the instance only when it is
                # already ground, reconstruct() reproves the rest.
                h = resolve(head, s3)
                if is_ground(h) and h not in self.table:
                    body_inst = tuple(resolve(b, s3) for b in pos)
                    if all(is_ground(b) for b in body_inst):
                        neg_inst = tuple(resolve(n, s3) for n in negs)
                        self.table[h] = ("rule", loc, body_inst, neg_inst)
                yield s3

    def _solve_seq(self, literals, subst: dict, depth: int, chain: tuple):
        if not literals:
            yield subst
            return
        for s2 in self._solve(literals[0], subst, depth, chain):
            yield from self._solve_seq(literals[1:], s2, depth, chain)

    def reconstruct(self, goal: Term) -> Justification:
        steps: list[tuple[Term, Witness]] = []
        emitted: set = set()

        def emit(a: Term):
            if a in emitted:
                return
            emitted.add(a)
            if a not in self.table:
                # Atom solved nonground during the search; reprove the
                # ground instance to obtain its witness.
                if not self.prove_ground(a, 0):
                    raise IndsemError(
                        f"internal: no witness for {term_to_str(a)}"
                    )
            entry = self.table[a]
            if entry[0] == "param":
                steps.append((a, ParamWitness()))
                return
            _, loc, body_inst, neg_inst = entry
            for b in body_inst:
                emit(b)
            steps.append(
                (a, RuleWitness(a, frozenset(body_inst), frozenset(neg_inst), loc))
            )

        emit(goal)
        return Justification(tuple(steps))


def prove(
    program: Program, params, goal: Term, limits: Optional[engine.Limits] = None
) -> Optional[Justification]:
    """A justification ending in the goal, or None when the goal is not in
    the defined set (complete at desk scale for stratified programs)."""
    if _is_negation(goal):
        raise NegativeGoalError(f"cannot prove a negation: {term_to_str(goal)}")
    if not is_ground(goal):
        raise IndsemError(f"prove requires a ground goal, got {term_to_str(goal)}")
    if any(t.neg_body for t in program.templates):
        stratify_templates(program.templates)  # reject unstratifiable programs
    limits = limits or engine.Limits()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20 * limits.max_depth + 10_000))
    prover = _Prover(program, params, limits)
    if prover.prove_ground(goal, 0):
        return prover.reconstruct(goal)
    return None


# ---------------------------------------------------------------------------
# Verification, independent of how a justification was produced.
# ---------------------------------------------------------------------------


def _instance_substs(pats, targets, seed):
    """Substitutions instantiating every pattern into the target set while
    covering it exactly."""
    targets = frozenset(targets)

    def go(i, s, used):
        if i == len(pats):
            if used == targets:
                yield s
            return
        for g in targets:
            s2 = match(pats[i], g, s)
            if s2 is not None:
                yield from go(i + 1, s2, used | {g})

    yield from go(0, seed, frozenset())


def _is_ground_instance(t: RuleTemplate, head, body, negs) -> bool:
    s0 = match(t.head, head)
    if s0 is None:
        return False
    for s1 in _instance_substs(t.pos_body, body, s0):
        for _ in _instance_substs(t.neg_body, negs, s1):
            return True
    return False


def verify_report(program: Program, params, j: Justification) -> list[str]:
    problems: list[str] = []
    params = frozenset(params)
    has_negation = any(t.neg_body for t in program.templates)
    effective = None  # parameters visible to negative conditions, per stratum

    prior: set = set()
    for i, (prop, witness) in enumerate(j.steps):
        where = f"step {i + 1} ({term_to_str(prop)})"
        if not is_ground(prop):
            problems.append(f"{where}: proposition is not ground")
            continue
        if isinstance(witness, ParamWitness):
            if prop not in params:
                problems.append(f"{where}: not a parameter")
        else:
            if witness.head != prop:
                problems.append(f"{where}: rule head differs from proposition")
            missing = [b for b in witness.body if b not in prior]
            if missing:
                problems.append(
                    f"{where}: body atom {term_to_str(missing[0])} does not "
                    "appear earlier in the sequence"
                )
            if witness.negs:
                if effective is None:
                    if has_negation:
                        model = engine.least_fixpoint(program, params)
                        effective = model.atoms
                    else:
                        effective = params
                blocked = sorted(witness.negs & effective, key=sort_key)
                if blocked:
                    problems.append(
                        f"{where}: negative condition {term_to_str(blocked[0])} "
                        "holds in the effective parameter set"
                    )
            if not any(
                _is_ground_instance(t, prop, witness.body, witness.negs)
                for t in program.templates
            ):
                problems.append(f"{where}: not a ground instance of any rule")
        prior.add(prop)
    return problems


def verify(program: Program, params, j: Justification) -> bool:
    return not verify_report(program, params, j)


def format_justification(j: Justification) -> str:
    lines = []
    for i, (prop, witness) in enumerate(j.steps, start=1):
        if isinstance(witness, ParamWitness):
            lines.append(f"{i}. {term_to_str(prop)}  [param]")
        elif not witness.body and not witness.negs:
            loc = f"  ({witness.loc})" if witness.loc else ""
            lines.append(f"{i}. {term_to_str(prop)}  [fact]{loc}")
        else:
            body = ", ".join(term_to_str(b) for b in sorted(witness.body, key=sort_key))
            tail = f" ; not {', '.join(term_to_str(n) for n in sorted(witness.negs, key=sort_key))}" if witness.negs else ""
            loc = f"  ({witness.loc})" if witness.loc else ""
            lines.append(f"{i}. {term_to_str(prop)}  :- {body}{tail}{loc}")
    return "\n".join(lines)
