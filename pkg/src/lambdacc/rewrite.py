"""Root rules, contextual closures, redex enumeration and single steps.

The root rules on computations:

    beta_c)  (\\x.M)!V        -> M[V/x]
    id)      (\\x.!x)M        -> M
    sigma)   (\\y.N)((\\x.M)L) -> (\\x.(\\y.N)M)L    with x not free in N
    iota)    an id match whose argument is not a Ret
    eta)     \\x.V!x -> V  on values, with x not free in V

Contexts descend through three kinds of positions: the body of an
abstraction under a bang, the argument of an application, and the body of an
abstraction in function position.  A path is surface iff it never descends
under a bang, weak iff it only descends through arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Optional

from .terms import Abs, App, Com, Ret, Term, Val, Var, fresh_name, substitute


class Rule(Enum):
    BETA_C = "beta_c"
    SIGMA = "sigma"
    ID = "id"
    IOTA = "iota"
    ETA = "eta"


class PathToken(Enum):
    RET_BODY = "ret_body"   # !(\x.C)
    FUN_BODY = "fun_body"   # (\x.C)M
    APP_ARG = "app_arg"     # V C


class ClosureClass(Enum):
    FULL = "full"
    SURFACE = "surface"
    WEAK = "weak"


#: Reduction of the computational core: the contextual closure of
#: beta_c, sigma and id.
CORE_RULES = frozenset((Rule.BETA_C, Rule.SIGMA, Rule.ID))
SIGMA_BETA = frozenset((Rule.BETA_C, Rule.SIGMA))

_RULE_ORDER = {r: i for i, r in enumerate(Rule)}


def path_closure(path: tuple[PathToken, ...]) -> ClosureClass:
    """Tightest closure class admitting the path."""
    if all(tok is PathToken.APP_ARG for tok in path):
        return ClosureClass.WEAK
    if all(tok is not PathToken.RET_BODY for tok in path):
        return ClosureClass.SURFACE
    return ClosureClass.FULL


def path_in_class(path: tuple[PathToken, ...], cls: ClosureClass) -> bool:
    if cls is ClosureClass.FULL:
        return True
    if cls is ClosureClass.SURFACE:
        return all(tok is not PathToken.RET_BODY for tok in path)
    return all(tok is PathToken.APP_ARG for tok in path)


@dataclass(frozen=True)
class RedexOccurrence:
    path: tuple[PathToken, ...]
    rule: Rule

    @property
    def closure(self) -> ClosureClass:
        return path_closure(self.path)


class InvalidRedexError(ValueError):
    """The occurrence does not match the term it is applied to."""


def _is_identity(v: Val) -> bool:
    return isinstance(v, Abs) and isinstance(v.body, Ret) \
        and isinstance(v.body.value, Var) and v.body.value.name == v.param


def eta_value(v: Val) -> Optional[Val]:
    """Root eta on a value: \\x.V!x -> V when x is not free in V."""
    match v:
        case Abs(param, App(f, Ret(Var(name)))) if name == param and param not in f.free_vars:
            return f
    return None


def root_step(rule: Rule, t: Com) -> Optional[Com]:
    """Contract t at the root by the given rule, or None when it does not
    match.  For sigma the inner binder is renamed whenever it would capture,
    so the side condition never blocks a shape match.  For eta the rewritten
    value is the one sitting directly in the term: the value under a bang or
    the function of an application."""
    match rule:
        case Rule.BETA_C:
            match t:
                case App(Abs(param, body), Ret(v)):
                    return substitute(body, param, v)
        case Rule.ID:
            match t:
                case App(f, arg) if _is_identity(f):
                    return arg
        case Rule.IOTA:
            match t:
                case App(f, arg) if _is_identity(f) and not isinstance(arg, Ret):
                    return arg
        case Rule.SIGMA:
            match t:
                case App(Abs(y, n), App(Abs(x, m), l)):
                    if x in n.free_vars:
                        x2 = fresh_name(x, n.free_vars | m.free_vars | {x, y})
                        m = substitute(m, x, Var(x2))
                        x = x2
                    return App(Abs(x, App(Abs(y, n), m)), l)
        case Rule.ETA:
            match t:
                case Ret(v):
                    v2 = eta_value(v)
                    if v2 is not None:
                        return Ret(v2)
                case App(f, arg):
                    f2 = eta_value(f)
                    if f2 is not None:
                        return App(f2, arg)
    return None


def subterm_at(t: Com, path: tuple[PathToken, ...]) -> Com:
    for tok in path:
        match tok, t:
            case PathToken.RET_BODY, Ret(Abs(_, body)):
                t = body
            case PathToken.FUN_BODY, App(Abs(_, body), _):
                t = body
            case PathToken.APP_ARG, App(_, arg):
                t = arg
            case _:
                raise InvalidRedexError(f"path token {tok} does not fit {t!r}")
    return t


def replace_at(t: Com, path: tuple[PathToken, ...], new: Com) -> Com:
    if not path:
        return new
    tok, rest = path[0], path[1:]
    match tok, t:
        case PathToken.RET_BODY, Ret(Abs(param, body)):
            return Ret(Abs(param, replace_at(body, rest, new)))
        case PathToken.FUN_BODY, App(Abs(param, body), arg):
            return App(Abs(param, replace_at(body, rest, new)), arg)
        case PathToken.APP_ARG, App(f, arg):
            return App(f, replace_at(arg, rest, new))
    raise InvalidRedexError(f"path token {tok} does not fit {t!r}")


def iter_redexes(t: Com, cls: ClosureClass, rules) -> Iterator[RedexOccurrence]:
    """All (path, rule) matches under the closure class, in deterministic
    order: outermost first, function body before argument, rules in enum
    order at equal paths.  An overlap position (an id match whose argument is
    a Ret is also a beta_c match) yields one occurrence per requested rule."""
    ordered = sorted(rules, key=_RULE_ORDER.__getitem__)

    def walk(node: Com, path: tuple[PathToken, ...]) -> Iterator[RedexOccurrence]:
        for rule in ordered:
            if root_step(rule, node) is not None:
                yield RedexOccurrence(path, rule)
        match node:
            case Ret(Abs(_, body)):
                if cls is ClosureClass.FULL:
                    yield from walk(body, path + (PathToken.RET_BODY,))
            case App(f, arg):
                if cls is not ClosureClass.WEAK and isinstance(f, Abs):
                    yield from walk(f.body, path + (PathToken.FUN_BODY,))
                yield from walk(arg, path + (PathToken.APP_ARG,))

    return walk(t, ())


def enumerate_redexes(t: Com, cls: ClosureClass, rules) -> list[RedexOccurrence]:
    return list(iter_redexes(t, cls, rules))


def apply_redex(t: Com, occ: RedexOccurrence) -> Com:
    contracted = root_step(occ.rule, subterm_at(t, occ.path))
    if contracted is None:
        raise InvalidRedexError(f"{occ.rule.value} does not match at {occ.path}")
    return replace_at(t, occ.path, contracted)


def is_normal(t: Com, cls: ClosureClass, rules) -> bool:
    return next(iter(iter_redexes(t, cls, rules)), None) is None


# Labeled one-step reducts, the step-function currency of the rewriting lab.

@dataclass(frozen=True)
class Step:
    occurrence: RedexOccurrence
    target: Com

    @property
    def rule(self) -> Rule:
        return self.occurrence.rule

    @property
    def closure(self) -> ClosureClass:
        return self.occurrence.closure


def steps_of(t: Com, cls: ClosureClass, rules,
             exclude: Optional[ClosureClass] = None) -> list[Step]:
    """One-step reducts under cls; with `exclude`, drop occurrences whose
    path also lies in the excluded (smaller) class.  Surface minus weak gives
    the internal half of weak factorization, full minus surface the internal
    half of surface factorization."""
    out = []
    for occ in iter_redexes(t, cls, rules):
        if exclude is not None and path_in_class(occ.path, exclude):
            continue
        out.append(Step(occ, apply_redex(t, occ)))
    return out


def make_step(cls: ClosureClass, rules, exclude: Optional[ClosureClass] = None
              ) -> Callable[[Com], list[Step]]:
    frozen = frozenset(rules)

    def step(t: Com) -> list[Step]:
        return steps_of(t, cls, frozen, exclude)

    return step


# Traces

@dataclass(frozen=True)
class TraceStep:
    occurrence: RedexOccurrence
    result: Com


@dataclass
class Trace:
    initial: Com
    steps: list[TraceStep] = field(default_factory=list)
    status: str = "normal_form"   # "normal_form" | "cycle" | "fuel_exhausted"

    def record(self, occ: RedexOccurrence, result: Com) -> None:
        self.steps.append(TraceStep(occ, result))

    @property
    def final(self) -> Com:
        return self.steps[-1].result if self.steps else self.initial

    def count(self, rule: Rule) -> int:
        return sum(1 for s in self.steps if s.occurrence.rule is rule)

    @property
    def counts(self) -> dict[Rule, int]:
        tally = {rule: 0 for rule in Rule}
        for s in self.steps:
            tally[s.occurrence.rule] += 1
        return tally

    def __len__(self) -> int:
        return len(self.steps)
