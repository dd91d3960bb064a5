"""Sibling calculi and the syntactic bridges between them.

Three term models live here: the let-calculus (monadic metalanguage with
``[V]``, ``let x = M in N`` and value-value application), the unit/star
presentation of the core calculus, and call-by-value lambda terms (whose
kernel restricts function positions to values).

The bridges: let-calculus <-> core (an equational correspondence once eta is
added to the core), unit/star <-> core (a syntactic isomorphism), the beta_c
fragment <-> the CbV kernel (a syntactic isomorphism that forgets the bang),
and the embedding of full CbV into its kernel.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Optional, Union

from .rewrite import ClosureClass, Rule, make_step
from .terms import Abs, App, Com, Ret, Term, Val, Var, fresh_name


class SiblingTerm:
    """Shared alpha-equivalence machinery for the auxiliary calculi."""

    @cached_property
    def key(self):
        return self._key({}, 0)

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self._free_vars()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SiblingTerm):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def _var_key(self, name, env, depth):
        level = env.get(name)
        return ("free", name) if level is None else ("bound", depth - level)


# ---------------------------------------------------------------------------
# The let-calculus


@dataclass(frozen=True, eq=False)
class MlVar(SiblingTerm):
    name: str

    def _key(self, env, depth):
        return self._var_key(self.name, env, depth)

    def _free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class MlAbs(SiblingTerm):
    param: str
    body: "MlCom"

    def _key(self, env, depth):
        inner = dict(env)
        inner[self.param] = depth
        return ("abs", self.body._key(inner, depth + 1))

    def _free_vars(self):
        return self.body.free_vars - {self.param}


@dataclass(frozen=True, eq=False)
class MlRet(SiblingTerm):
    value: "MlVal"

    def _key(self, env, depth):
        return ("ret", self.value._key(env, depth))

    def _free_vars(self):
        return self.value.free_vars


@dataclass(frozen=True, eq=False)
class MlLet(SiblingTerm):
    var: str
    bound: "MlCom"
    body: "MlCom"

    def _key(self, env, depth):
        inner = dict(env)
        inner[self.var] = depth
        return ("let", self.bound._key(env, depth), self.body._key(inner, depth + 1))

    def _free_vars(self):
        return self.bound.free_vars | (self.body.free_vars - {self.var})


@dataclass(frozen=True, eq=False)
class MlApp(SiblingTerm):
    fun: "MlVal"
    arg: "MlVal"

    def _key(self, env, depth):
        return ("app", self.fun._key(env, depth), self.arg._key(env, depth))

    def _free_vars(self):
        return self.fun.free_vars | self.arg.free_vars


MlVal = Union[MlVar, MlAbs]
MlCom = Union[MlRet, MlLet, MlApp]
MlTerm = Union[MlVal, MlCom]


class MlRule(Enum):
    C_BETA = "c.beta"
    C_ETA = "c.eta"
    C_LET_BETA = "c.let.beta"
    C_LET_ETA = "c.let.eta"
    C_LET_ASS = "c.let.ass"


class MlClosure(Enum):
    FULL = "full"
    LET_EVAL = "let_eval"   # holes only along the bound side of lets


def ml_substitute(term: MlTerm, name: str, value: MlVal) -> MlTerm:
    if name not in term.free_vars:
        return term
    match term:
        case MlVar(_):
            return value
        case MlAbs(param, body):
            if param in value.free_vars:
                renamed = fresh_name(param, value.free_vars | body.free_vars | {name})
                body = ml_substitute(body, param, MlVar(renamed))
                param = renamed
            return MlAbs(param, ml_substitute(body, name, value))
        case MlRet(v):
            return MlRet(ml_substitute(v, name, value))
        case MlLet(var, bound, body):
            bound = ml_substitute(bound, name, value)
            if var in value.free_vars:
                renamed = fresh_name(var, value.free_vars | body.free_vars | {name})
                body = ml_substitute(body, var, MlVar(renamed))
                var = renamed
            return MlLet(var, bound, ml_substitute(body, name, value))
        case MlApp(f, a):
            return MlApp(ml_substitute(f, name, value), ml_substitute(a, name, value))
    raise TypeError(f"not an ml term: {term!r}")


def ml_root(rule: MlRule, t: MlCom) -> Optional[MlCom]:
    match rule:
        case MlRule.C_BETA:
            match t:
                case MlApp(MlAbs(x, m), v):
                    return ml_substitute(m, x, v)
        case MlRule.C_LET_BETA:
            match t:
                case MlLet(x, MlRet(v), n):
                    return ml_substitute(n, x, v)
        case MlRule.C_LET_ETA:
            match t:
                case MlLet(x, m, MlRet(MlVar(y))) if y == x and x not in m.free_vars:
                    return m
        case MlRule.C_LET_ASS:
            match t:
                case MlLet(y, MlLet(x, l, m), n):
                    if x in n.free_vars or x == y:
                        x2 = fresh_name(x, n.free_vars | m.free_vars | {x, y})
                        m = ml_substitute(m, x, MlVar(x2))
                        x = x2
                    return MlLet(x, l, MlLet(y, m, n))
    return None


def ml_root_eta(v: MlVal) -> Optional[MlVal]:
    match v:
        case MlAbs(x, MlApp(f, MlVar(y))) if y == x and x not in f.free_vars:
            return f
    return None


_ML_COM_RULES = (MlRule.C_BETA, MlRule.C_LET_BETA, MlRule.C_LET_ETA, MlRule.C_LET_ASS)


def _ml_value_steps(v: MlVal) -> list[tuple[MlRule, MlVal]]:
    out = []
    r = ml_root_eta(v)
    if r is not None:
        out.append((MlRule.C_ETA, r))
    if isinstance(v, MlAbs):
        for rule, body in ml_step(v.body, MlClosure.FULL):
            out.append((rule, MlAbs(v.param, body)))
    return out


def ml_step(t: MlCom, closure: MlClosure = MlClosure.FULL) -> list[tuple[MlRule, MlCom]]:
    """One-step reducts with the contracted rule; full contextual closure or
    the let-evaluation closure (sequencing)."""
    out: list[tuple[MlRule, MlCom]] = []
    for rule in _ML_COM_RULES:
        r = ml_root(rule, t)
        if r is not None:
            out.append((rule, r))
    if closure is MlClosure.LET_EVAL:
        if isinstance(t, MlLet):
            for rule, bound in ml_step(t.bound, MlClosure.LET_EVAL):
                out.append((rule, MlLet(t.var, bound, t.body)))
        return out
    match t:
        case MlRet(v):
            for rule, v2 in _ml_value_steps(v):
                out.append((rule, MlRet(v2)))
        case MlLet(x, bound, body):
            for rule, b2 in ml_step(bound, MlClosure.FULL):
                out.append((rule, MlLet(x, b2, body)))
            for rule, n2 in ml_step(body, MlClosure.FULL):
                out.append((rule, MlLet(x, bound, n2)))
        case MlApp(f, a):
            for rule, f2 in _ml_value_steps(f):
                out.append((rule, MlApp(f2, a)))
            for rule, a2 in _ml_value_steps(a):
                out.append((rule, MlApp(f, a2)))
    return out


def ml_normal(t: MlCom, closure: MlClosure = MlClosure.FULL) -> bool:
    return not ml_step(t, closure)


# ---------------------------------------------------------------------------
# The unit/star presentation


@dataclass(frozen=True, eq=False)
class StarVar(SiblingTerm):
    name: str

    def _key(self, env, depth):
        return self._var_key(self.name, env, depth)

    def _free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class StarAbs(SiblingTerm):
    param: str
    body: "StarCom"

    def _key(self, env, depth):
        inner = dict(env)
        inner[self.param] = depth
        return ("abs", self.body._key(inner, depth + 1))

    def _free_vars(self):
        return self.body.free_vars - {self.param}


@dataclass(frozen=True, eq=False)
class StarUnit(SiblingTerm):
    value: "StarVal"

    def _key(self, env, depth):
        return ("unit", self.value._key(env, depth))

    def _free_vars(self):
        return self.value.free_vars


@dataclass(frozen=True, eq=False)
class StarBind(SiblingTerm):
    com: "StarCom"
    val: "StarVal"

    def _key(self, env, depth):
        return ("bind", self.com._key(env, depth), self.val._key(env, depth))

    def _free_vars(self):
        return self.com.free_vars | self.val.free_vars


StarVal = Union[StarVar, StarAbs]
StarCom = Union[StarUnit, StarBind]
StarTerm = Union[StarVal, StarCom]


def star_substitute(term: StarTerm, name: str, value: StarVal) -> StarTerm:
    if name not in term.free_vars:
        return term
    match term:
        case StarVar(_):
            return value
        case StarAbs(param, body):
            if param in value.free_vars:
                renamed = fresh_name(param, value.free_vars | body.free_vars | {name})
                body = star_substitute(body, param, StarVar(renamed))
                param = renamed
            return StarAbs(param, star_substitute(body, name, value))
        case StarUnit(v):
            return StarUnit(star_substitute(v, name, value))
        case StarBind(com, val):
            return StarBind(star_substitute(com, name, value),
                            star_substitute(val, name, value))
    raise TypeError(f"not a star term: {term!r}")


def star_root(rule: Rule, t: StarCom) -> Optional[StarCom]:
    match rule:
        case Rule.BETA_C:
            match t:
                case StarBind(StarUnit(v), StarAbs(x, m)):
                    return star_substitute(m, x, v)
        case Rule.ID:
            match t:
                case StarBind(m, StarAbs(x, StarUnit(StarVar(y)))) if y == x:
                    return m
        case Rule.SIGMA:
            match t:
                case StarBind(StarBind(l, StarAbs(x, m)), StarAbs(y, n)):
                    if x in n.free_vars:
                        x2 = fresh_name(x, n.free_vars | m.free_vars | {x, y})
                        m = star_substitute(m, x, StarVar(x2))
                        x = x2
                    return StarBind(l, StarAbs(x, StarBind(m, StarAbs(y, n))))
    return None


_STAR_RULES = (Rule.BETA_C, Rule.SIGMA, Rule.ID)


def star_step(t: StarCom) -> list[tuple[Rule, StarCom]]:
    """Full contextual closure in the star syntax; contexts mirror the core:
    under unit only through an abstraction, along the computation of a bind,
    and into the body of a bind's abstraction."""
    out: list[tuple[Rule, StarCom]] = []
    for rule in _STAR_RULES:
        r = star_root(rule, t)
        if r is not None:
            out.append((rule, r))
    match t:
        case StarUnit(StarAbs(x, body)):
            for rule, b2 in star_step(body):
                out.append((rule, StarUnit(StarAbs(x, b2))))
        case StarBind(com, val):
            for rule, c2 in star_step(com):
                out.append((rule, StarBind(c2, val)))
            if isinstance(val, StarAbs):
                for rule, b2 in star_step(val.body):
                    out.append((rule, StarBind(com, StarAbs(val.param, b2))))
    return out


# ---------------------------------------------------------------------------
# Call-by-value lambda terms (full syntax; the kernel is a predicate)


@dataclass(frozen=True, eq=False)
class CbvVar(SiblingTerm):
    name: str

    def _key(self, env, depth):
        return self._var_key(self.name, env, depth)

    def _free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class CbvAbs(SiblingTerm):
    param: str
    body: "CbvTerm"

    def _key(self, env, depth):
        inner = dict(env)
        inner[self.param] = depth
        return ("abs", self.body._key(inner, depth + 1))

    def _free_vars(self):
        return self.body.free_vars - {self.param}


@dataclass(frozen=True, eq=False)
class CbvApp(SiblingTerm):
    fun: "CbvTerm"
    arg: "CbvTerm"

    def _key(self, env, depth):
        return ("app", self.fun._key(env, depth), self.arg._key(env, depth))

    def _free_vars(self):
        return self.fun.free_vars | self.arg.free_vars


CbvTerm = Union[CbvVar, CbvAbs, CbvApp]


def cbv_is_value(t: CbvTerm) -> bool:
    return isinstance(t, (CbvVar, CbvAbs))


def cbv_is_kernel(t: CbvTerm) -> bool:
    """Kernel computations: V | V M, with abstraction bodies again kernel."""
    match t:
        case CbvVar(_):
            return True
        case CbvAbs(_, body):
            return cbv_is_kernel(body)
        case CbvApp(f, a):
            return cbv_is_value(f) and cbv_is_kernel(f) and cbv_is_kernel(a)
    return False


def cbv_substitute(term: CbvTerm, name: str, value: CbvTerm) -> CbvTerm:
    if name not in term.free_vars:
        return term
    match term:
        case CbvVar(_):
            return value
        case CbvAbs(param, body):
            if param in value.free_vars:
                renamed = fresh_name(param, value.free_vars | body.free_vars | {name})
                body = cbv_substitute(body, param, CbvVar(renamed))
                param = renamed
            return CbvAbs(param, cbv_substitute(body, name, value))
        case CbvApp(f, a):
            return CbvApp(cbv_substitute(f, name, value), cbv_substitute(a, name, value))
    raise TypeError(f"not a cbv term: {term!r}")


def cbv_root(t: CbvTerm) -> Optional[CbvTerm]:
    match t:
        case CbvApp(CbvAbs(x, m), v) if cbv_is_value(v):
            return cbv_substitute(m, x, v)
    return None


def cbv_step(t: CbvTerm) -> list[CbvTerm]:
    """beta_v one-step reducts, full contextual closure."""
    out = []
    r = cbv_root(t)
    if r is not None:
        out.append(r)
    match t:
        case CbvAbs(x, body):
            out.extend(CbvAbs(x, b) for b in cbv_step(body))
        case CbvApp(f, a):
            out.extend(CbvApp(f2, a) for f2 in cbv_step(f))
            out.extend(CbvApp(f, a2) for a2 in cbv_step(a))
    return out


# ---------------------------------------------------------------------------
# Let-calculus <-> core


def ml_to_cc(t: MlTerm) -> Term:
    match t:
        case MlVar(name):
            return Var(name)
        case MlAbs(param, body):
            return Abs(param, ml_to_cc(body))
        case MlRet(v):
            return Ret(ml_to_cc(v))
        case MlApp(f, a):
            return App(ml_to_cc(f), Ret(ml_to_cc(a)))
        case MlLet(x, bound, body):
            return App(Abs(x, ml_to_cc(body)), ml_to_cc(bound))
    raise TypeError(f"not an ml term: {t!r}")


def cc_to_ml(t: Term) -> MlTerm:
    match t:
        case Var(name):
            return MlVar(name)
        case Abs(param, body):
            return MlAbs(param, cc_to_ml(body))
        case Ret(v):
            return MlRet(cc_to_ml(v))
        case App(f, Ret(w)):
            return MlApp(cc_to_ml(f), cc_to_ml(w))
        case App(Var(x), m):
            y = fresh_name("y", m.free_vars | {x})
            return MlLet(y, cc_to_ml(m), MlApp(MlVar(x), MlVar(y)))
        case App(Abs(x, n), m):
            return MlLet(x, cc_to_ml(m), cc_to_ml(n))
    raise TypeError(f"not a core term: {t!r}")


# ---------------------------------------------------------------------------
# Unit/star <-> core: rewrite unit as bang and flip the bind


def cc_to_star(t: Term) -> StarTerm:
    match t:
        case Var(name):
            return StarVar(name)
        case Abs(param, body):
            return StarAbs(param, cc_to_star(body))
        case Ret(v):
            return StarUnit(cc_to_star(v))
        case App(f, m):
            return StarBind(cc_to_star(m), cc_to_star(f))
    raise TypeError(f"not a core term: {t!r}")


def star_to_cc(t: StarTerm) -> Term:
    match t:
        case StarVar(name):
            return Var(name)
        case StarAbs(param, body):
            return Abs(param, star_to_cc(body))
        case StarUnit(v):
            return Ret(star_to_cc(v))
        case StarBind(com, val):
            return App(star_to_cc(val), star_to_cc(com))
    raise TypeError(f"not a star term: {t!r}")


# ---------------------------------------------------------------------------
# beta_c fragment <-> CbV kernel: forget the bang / restore it


def cc_to_kernel(t: Term) -> CbvTerm:
    match t:
        case Var(name):
            return CbvVar(name)
        case Abs(param, body):
            return CbvAbs(param, cc_to_kernel(body))
        case Ret(v):
            return cc_to_kernel(v)
        case App(f, m):
            return CbvApp(cc_to_kernel(f), cc_to_kernel(m))
    raise TypeError(f"not a core term: {t!r}")


def kernel_to_cc(t: CbvTerm) -> Com:
    """Inverse of cc_to_kernel on kernel computations: a bang is restored in
    front of each value not in function position."""
    match t:
        case CbvVar(_) | CbvAbs(_, _):
            return Ret(_kernel_to_cc_val(t))
        case CbvApp(f, a):
            if not cbv_is_value(f):
                raise ValueError(f"not a kernel computation: {t!r}")
            return App(_kernel_to_cc_val(f), kernel_to_cc(a))
    raise TypeError(f"not a cbv term: {t!r}")


def _kernel_to_cc_val(v: CbvTerm) -> Val:
    match v:
        case CbvVar(name):
            return Var(name)
        case CbvAbs(param, body):
            return Abs(param, kernel_to_cc(body))
    raise ValueError(f"not a cbv value: {v!r}")


# ---------------------------------------------------------------------------
# Full CbV -> kernel embedding


def cbv_embed(t: CbvTerm) -> CbvTerm:
    match t:
        case CbvVar(_):
            return t
        case CbvAbs(param, body):
            return CbvAbs(param, cbv_embed(body))
        case CbvApp(f, a):
            if cbv_is_value(f):
                return CbvApp(cbv_embed(f), cbv_embed(a))
            arg = cbv_embed(a)
            w = fresh_name("w", arg.free_vars)
            return CbvApp(CbvAbs(w, CbvApp(CbvVar(w), arg)), cbv_embed(f))
    raise TypeError(f"not a cbv term: {t!r}")


# ---------------------------------------------------------------------------
# Bounded convertibility: forward cones from both sides, true on intersection


_CC_ETA_STEP = make_step(ClosureClass.FULL, (Rule.BETA_C, Rule.SIGMA, Rule.ID, Rule.ETA))


def cc_eta_successors(t: Com) -> list[Com]:
    """One-step reducts under the core rules plus eta, full closure."""
    return [s.target for s in _CC_ETA_STEP(t)]


def ml_successors(t: MlCom) -> list[MlCom]:
    return [s for _, s in ml_step(t, MlClosure.FULL)]


def bounded_convertible(a, b, successors: Callable[[object], Iterable],
                        fuel: int = 2000) -> Optional[bool]:
    """Search for a common reduct of a and b, expanding both forward cones
    breadth-first (smaller frontier first) within a node budget.

    True when the cones intersect (which certifies convertibility); False
    when both cones were exhausted without meeting; None when the budget ran
    out first.
    """
    seen_a, seen_b = {a.key: a}, {b.key: b}
    front_a, front_b = deque([a]), deque([b])
    if seen_a.keys() & seen_b.keys():
        return True
    budget = fuel
    while (front_a or front_b) and budget > 0:
        # expand the smaller live frontier
        if front_a and (not front_b or len(front_a) <= len(front_b)):
            front, seen, other = front_a, seen_a, seen_b
        else:
            front, seen, other = front_b, seen_b, seen_a
        for _ in range(len(front)):
            if budget <= 0:
                break
            t = front.popleft()
            budget -= 1
            for s in successors(t):
                if s.key in seen:
                    continue
                if s.key in other:
                    return True
                seen[s.key] = s
                front.append(s)
    if not front_a and not front_b:
        return False
    return None
