"""Component analyses: head/body/negative sets, allowability, stratification,
composition of components, and model satisfaction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import engine
from .depgraph import Stratification, stratify_templates
from .errors import (
    AllowabilityError,
    CompositionMismatchError,
    CompositionPreconditionError,
)
from .parser import Program, RuleTemplate
from .terms import Term, term_to_str, unifiable


@dataclass(frozen=True)
class ComponentSignature:
    head_templates: frozenset
    body_templates: frozenset
    neg_templates: frozenset


def signature(program: Program) -> ComponentSignature:
    heads = frozenset(t.head for t in program.templates)
    bodies = frozenset(b for t in program.templates for b in t.pos_body)
    negs = frozenset(n for t in program.templates for n in t.neg_body)
    return ComponentSignature(heads, bodies, negs)


def ground_projection(sig: ComponentSignature, universe) -> tuple[set, set, set]:
    """Slice of the (infinite) template sets visible in a finite atom universe."""
    heads = {a for a in universe if any(unifiable(a, h) for h in sig.head_templates)}
    bodies = {a for a in universe if any(unifiable(a, b) for b in sig.body_templates)}
    negs = {a for a in universe if any(unifiable(a, n) for n in sig.neg_templates)}
    return heads, bodies, negs


@dataclass(frozen=True)
class AllowabilityViolation:
    atom: Term
    head: Term
    where: str

    def __str__(self):
        return (
            f"parameter {term_to_str(self.atom)} unifies with head "
            f"{term_to_str(self.head)} ({self.where})"
        )


@dataclass(frozen=True)
class AllowabilityReport:
    violations: tuple[AllowabilityViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "allowable"
        return "\n".join(str(v) for v in self.violations)


def check_allowable(program: Program, params) -> AllowabilityReport:
    """A parameter set is allowable when no atom unifies with any head template."""
    violations = []
    for a in sorted(params, key=lambda t: term_to_str(t)):
        for t in program.templates:
            if unifiable(a, t.head):
                violations.append(AllowabilityViolation(a, t.head, str(t.loc)))
    return AllowabilityReport(tuple(violations))


def stratify(program: Program) -> Stratification:
    """Partition templates into dependency strata; raises UnstratifiableError
    when negation occurs inside a recursive component."""
    return stratify_templates(program.templates)


def compose(
    upper: Program,
    lower: Program,
    params,
    limits: Optional[engine.Limits] = None,
    verify_union: bool = False,
) -> engine.ModelSet:
    """Evaluate the lower component, then feed its output to the upper one.

    Sound when no head of the upper program unifies with any head or body
    template of the lower one; with verify_union the union program is also
    evaluated and checked for exact agreement.
    """
    pairs = []
    lower_terms = [(t.head, f"head at {t.loc}") for t in lower.templates]
    lower_terms += [
        (b, f"body at {t.loc}") for t in lower.templates for b in t.pos_body
    ]
    for t in upper.templates:
        for term, where in lower_terms:
            if unifiable(t.head, term):
                pairs.append((term_to_str(t.head), term_to_str(term), where))
    if pairs:
        raise CompositionPreconditionError(pairs)

    union = Program(upper.templates + lower.templates)
    for prog, label in ((lower, "lower component"), (union, "union")):
        report = check_allowable(prog, params)
        if not report.ok:
            raise AllowabilityError(report)

    inner = engine.least_fixpoint(lower, params, limits)
    outer = engine.least_fixpoint(upper, inner.atoms, limits)
    if verify_union:
        direct = engine.least_fixpoint(union, params, limits)
        if direct.atoms != outer.atoms:
            diff = direct.atoms ^ outer.atoms
            shown = ", ".join(sorted(term_to_str(t) for t in diff))
            raise CompositionMismatchError(
                f"union evaluation disagrees with chained evaluation on: {shown}"
            )
    return engine.ModelSet(outer.atoms, inner.derivation_count + outer.derivation_count)


def satisfies(model, program: Program, limits: Optional[engine.Limits] = None) -> bool:
    """Head-restricted model check: the model must agree with the least set
    seeded by its own non-head body atoms, on the head region."""
    model = frozenset(model)
    sig = signature(program)

    def head_unifiable(a):
        return any(unifiable(a, h) for h in sig.head_templates)

    def body_unifiable(a):
        return any(unifiable(a, b) for b in sig.body_templates)

    params = frozenset(a for a in model if body_unifiable(a) and not head_unifiable(a))
    fixed = engine.least_fixpoint(program, params, limits)
    universe = model | fixed.atoms
    head_region = {a for a in universe if head_unifiable(a)}
    return (fixed.atoms & head_region) == (model & head_region)


def nested_negation_warnings(program: Program) -> list[str]:
    """Negated goals that are themselves not/1-rooted (not(not(G)) in source)."""
    out = []
    for t in program.templates:
        for n in t.neg_body:
            if getattr(n, "functor", None) == "not" and len(n.args) == 1:
                out.append(
                    f"{t.loc}: nested negation not({term_to_str(n)}) has no "
                    "stratified meaning"
                )
    return out
