"""Deterministic and randomized reduction drivers.

Every driver runs a pick-and-contract loop with a step budget and a seen-set
of canonical forms, so self-reproducing terms get a definite cycle verdict
instead of burning fuel.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from .rewrite import (
    ClosureClass, PathToken, RedexOccurrence, Rule, SIGMA_BETA, Trace,
    apply_redex, enumerate_redexes, iter_redexes, root_step,
)
from .terms import Abs, App, Com, Ret, Var

DEFAULT_FUEL = 2000

NORMAL_FORM = "normal_form"
CYCLE = "cycle"
FUEL_EXHAUSTED = "fuel_exhausted"


@dataclass(frozen=True)
class Outcome:
    status: str     # "normal_form" | "cycle" | "fuel_exhausted"
    term: Com       # normal form, repeated term, or last term reached
    trace: Trace

    @property
    def normalized(self) -> bool:
        return self.status == NORMAL_FORM

    def count(self, rule: Rule) -> int:
        return self.trace.count(rule)


Picker = Callable[[Com], Optional[RedexOccurrence]]


def drive(t: Com, pick: Picker, fuel: int = DEFAULT_FUEL) -> Outcome:
    """Repeatedly contract the redex chosen by `pick` until it declines,
    a term repeats, or the budget runs out."""
    trace = Trace(t)
    seen = {t.key}
    current = t
    while len(trace) < fuel:
        occ = pick(current)
        if occ is None:
            trace.status = NORMAL_FORM
            return Outcome(NORMAL_FORM, current, trace)
        nxt = apply_redex(current, occ)
        trace.record(occ, nxt)
        if nxt.key in seen:
            trace.status = CYCLE
            return Outcome(CYCLE, nxt, trace)
        seen.add(nxt.key)
        current = nxt
    if pick(current) is None:
        trace.status = NORMAL_FORM
        return Outcome(NORMAL_FORM, current, trace)
    trace.status = FUEL_EXHAUSTED
    return Outcome(FUEL_EXHAUSTED, current, trace)


def _first(t: Com, cls: ClosureClass, rules) -> Optional[RedexOccurrence]:
    return next(iter(iter_redexes(t, cls, rules)), None)


def weak_beta_c(t: Com, fuel: int = DEFAULT_FUEL) -> Outcome:
    """Evaluation: contract the (unique) weak beta_c redex until none is
    left.  Deterministic."""
    return drive(t, lambda u: _first(u, ClosureClass.WEAK, (Rule.BETA_C,)), fuel)


def root_eval(t: Com, fuel: int = DEFAULT_FUEL) -> Outcome:
    """Evaluation without any contextual closure: a root beta_c step when the
    term is a beta_c redex, else a root sigma step.  Deterministic; stops at
    the first term with neither root redex."""

    def pick(u: Com) -> Optional[RedexOccurrence]:
        if root_step(Rule.BETA_C, u) is not None:
            return RedexOccurrence((), Rule.BETA_C)
        if root_step(Rule.SIGMA, u) is not None:
            return RedexOccurrence((), Rule.SIGMA)
        return None

    return drive(t, pick, fuel)


def random_maximal(t: Com, cls: ClosureClass, rules, seed: int,
                   fuel: int = DEFAULT_FUEL) -> Outcome:
    """A maximal reduction sequence choosing uniformly (seeded) among the
    available redexes at each step."""
    rng = random.Random(seed)
    frozen = tuple(rules)

    def pick(u: Com) -> Optional[RedexOccurrence]:
        occs = enumerate_redexes(u, cls, frozen)
        return rng.choice(occs) if occs else None

    return drive(t, pick, fuel)


def _iterated_pick(e: ClosureClass) -> Picker:
    """Iterated e-reduction over sigma and beta_c: contract e-redexes while
    any exist (leftmost-outermost), then descend structurally - under the
    bang, into a function body until it is normal, then into the argument.
    Internal steps cannot re-enable e-redexes or change shapes, so the
    descent is stable."""

    def pick(u: Com) -> Optional[RedexOccurrence]:
        occ = _first(u, e, SIGMA_BETA)
        if occ is not None:
            return occ
        match u:
            case Ret(Abs(_, body)):
                sub = pick(body)
                if sub is not None:
                    return RedexOccurrence((PathToken.RET_BODY,) + sub.path, sub.rule)
            case App(f, arg):
                if isinstance(f, Abs):
                    sub = pick(f.body)
                    if sub is not None:
                        return RedexOccurrence((PathToken.FUN_BODY,) + sub.path, sub.rule)
                sub = pick(arg)
                if sub is not None:
                    return RedexOccurrence((PathToken.APP_ARG,) + sub.path, sub.rule)
        return None

    return pick


def iterated_strategy(t: Com, e: ClosureClass, fuel: int = DEFAULT_FUEL) -> Outcome:
    """The normalizing strategy obtained by iterating weak or surface
    sigma/beta_c reduction; a normal-form outcome is sigma/beta_c-normal."""
    if e is ClosureClass.FULL:
        raise ValueError("iterate weak or surface reduction, not full")
    return drive(t, _iterated_pick(e), fuel)


def normalize_full(t: Com, e: ClosureClass = ClosureClass.SURFACE,
                   fuel: int = DEFAULT_FUEL) -> Outcome:
    """Full normalization: iterate e-reduction to a sigma/beta_c-normal form,
    then clear the remaining id-redexes (all of which have non-return
    arguments at that point, and their exhaustion terminates)."""
    iter_pick = _iterated_pick(e)

    def pick(u: Com) -> Optional[RedexOccurrence]:
        occ = iter_pick(u)
        if occ is not None:
            return occ
        return _first(u, ClosureClass.FULL, (Rule.ID,))

    return drive(t, pick, fuel)


def halts(t: Com, fuel: int = DEFAULT_FUEL) -> Optional[bool]:
    """Whether evaluation of t halts: True when weak beta_c reaches a normal
    form, False on a detected cycle, None when the fuel ran out first."""
    outcome = weak_beta_c(t, fuel)
    if outcome.status == NORMAL_FORM:
        return True
    if outcome.status == CYCLE:
        return False
    return None
