"""Two-sorted immutable terms of the computational core.

Values are variables or abstractions; computations are either a returned
value ``!V`` or an application ``V M`` of a value to a computation.  There is
no computation-computation application: the sort discipline is enforced by
construction.

Terms compare and hash by alpha-equivalence: bound variables contribute a
binder index to the canonical key, free variables contribute their name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Union


class Term:
    """Base class for values and computations."""

    @cached_property
    def key(self):
        """Canonical form: a nested tuple invariant under renaming of bound
        variables, usable as a dict/set key."""
        return self._key({}, 0)

    @cached_property
    def free_vars(self) -> frozenset[str]:
        return self._free_vars()

    @cached_property
    def size(self) -> int:
        """Node count: one per Ret/App/Abs constructor, zero per variable."""
        return self._size()

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    name: str

    def _key(self, env, depth):
        level = env.get(self.name)
        if level is None:
            return ("free", self.name)
        return ("bound", depth - level)

    def _free_vars(self):
        return frozenset((self.name,))

    def _size(self):
        return 0

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Abs(Term):
    param: str
    body: "Com"

    def _key(self, env, depth):
        inner = dict(env)
        inner[self.param] = depth
        return ("abs", self.body._key(inner, depth + 1))

    def _free_vars(self):
        return self.body.free_vars - {self.param}

    def _size(self):
        return 1 + self.body.size

    def __repr__(self):
        return f"Abs({self.param!r}, {self.body!r})"


@dataclass(frozen=True, eq=False, repr=False)
class Ret(Term):
    value: "Val"

    def _key(self, env, depth):
        return ("ret", self.value._key(env, depth))

    def _free_vars(self):
        return self.value.free_vars

    def _size(self):
        return 1 + self.value.size

    def __repr__(self):
        return f"Ret({self.value!r})"


@dataclass(frozen=True, eq=False, repr=False)
class App(Term):
    fun: "Val"
    arg: "Com"

    def _key(self, env, depth):
        return ("app", self.fun._key(env, depth), self.arg._key(env, depth))

    def _free_vars(self):
        return self.fun.free_vars | self.arg.free_vars

    def _size(self):
        return 1 + self.fun.size + self.arg.size

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


Val = Union[Var, Abs]
Com = Union[Ret, App]


def is_val(t: Term) -> bool:
    return isinstance(t, (Var, Abs))


def is_com(t: Term) -> bool:
    return isinstance(t, (Ret, App))


def alpha_eq(a: Term, b: Term) -> bool:
    """Alpha-equivalence; free names matter, bound names do not."""
    return a == b


def fresh_name(hint: str, avoid) -> str:
    """First name of the form stem1, stem2, ... not in `avoid`.

    The stem is the hint with any trailing digits stripped, so renaming x1
    yields x2 rather than x11.  Deterministic, for reproducible traces.
    """
    stem = hint.rstrip("0123456789") or "x"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute(term: Term, name: str, value: Val) -> Term:
    """Capture-avoiding substitution of a value for a free variable.

    Substituting into a computation yields a computation, substituting into a
    value yields a value.
    """
    if name not in term.free_vars:
        return term
    match term:
        case Var(_):
            return value  # free_vars said so, hence term.name == name
        case Abs(param, body):
            if param in value.free_vars:
                renamed = fresh_name(param, value.free_vars | body.free_vars | {name})
                body = substitute(body, param, Var(renamed))
                param = renamed
            return Abs(param, substitute(body, name, value))
        case Ret(v):
            return Ret(substitute(v, name, value))
        case App(f, m):
            return App(substitute(f, name, value), substitute(m, name, value))
    raise TypeError(f"not a term: {term!r}")


def free_vars(t: Term) -> frozenset[str]:
    return t.free_vars


# Named terms used throughout: the identity of Kleisli composition, the
# self-application delta, and the counterexample gallery.

@dataclass(frozen=True)
class Constants:
    I: Val                # \x.!x
    Delta: Val            # \x.x!x
    DeltaBang: Com        # Delta!Delta, self-reproducing under beta_c
    VanOostrom: Com       # (\y.I!y)(z!z): full reduction reaches z!z, no weak step
    WeakT: Com            # two distinct weak-sigma normal forms below it
    BlockedBetaMz: Com    # beta_c-normal but divergent once sigma fires
    SigmaIdOverlap: Com   # sigma/id critical peak, joinable only via beta_c


def _mk_constants() -> Constants:
    i = Abs("x", Ret(Var("x")))
    delta = Abs("x", App(Var("x"), Ret(Var("x"))))
    zz = App(Var("z"), Ret(Var("z")))
    van_oostrom = App(Abs("y", App(i, Ret(Var("y")))), zz)
    weak_t = App(
        Abs("z", App(Var("z"), Ret(Var("z")))),
        App(Abs("x", zz), App(Abs("y", zz), zz)),
    )
    blocked = App(delta, App(Abs("y", Ret(delta)), zz))
    overlap = App(Abs("y", zz), App(i, zz))
    return Constants(
        I=i,
        Delta=delta,
        DeltaBang=App(delta, Ret(delta)),
        VanOostrom=van_oostrom,
        WeakT=weak_t,
        BlockedBetaMz=blocked,
        SigmaIdOverlap=overlap,
    )


_CONSTANTS = _mk_constants()


def named_constants() -> Constants:
    return _CONSTANTS
