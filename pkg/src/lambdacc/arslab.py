"""Bounded abstract-rewriting analysis over any step function.

Everything here works modulo alpha: graphs, cones and seen-sets key nodes by
canonical form.  Checks never overclaim: when a bounded search was cut off
on a relevant branch the verdict is "unknown" rather than "pass".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .rewrite import ClosureClass, Rule, Step, steps_of
from .syntax import print_com
from .terms import Abs, App, Com, Ret, Term, Val, Var

#: a term to its finite list of labeled one-step reducts
LabeledSucc = Callable[[Com], list[tuple[Rule, Com]]]

DEFAULT_SEARCH_DEPTH = 24
DEFAULT_MAX_NODES = 4000


# ---------------------------------------------------------------------------
# Step-function plumbing


def cc_successors(cls: ClosureClass, rules,
                  exclude: Optional[ClosureClass] = None) -> LabeledSucc:
    """Labeled one-step reducts under a closure class, optionally dropping
    the occurrences that already lie in a smaller class."""
    frozen = frozenset(rules)
    cache: dict = {}

    def succ(t: Com) -> list[tuple[Rule, Com]]:
        hit = cache.get(t.key)
        if hit is None:
            hit = [(s.rule, s.target) for s in steps_of(t, cls, frozen, exclude)]
            cache[t.key] = hit
        return hit

    return succ


def drop_labels(succ: LabeledSucc) -> Callable[[Com], list[Com]]:
    return lambda t: [s for _, s in succ(t)]


# ---------------------------------------------------------------------------
# Term enumeration


_BINDER_POOL = "abcdefghijklmnopqrstuvw"

_VAL_CACHE: dict = {}
_COM_CACHE: dict = {}


def _binder(depth: int, free: tuple[str, ...]) -> str:
    pool = [c for c in _BINDER_POOL if c not in free]
    return pool[depth] if depth < len(pool) else f"b{depth}"


def _scope(depth: int, free: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(_binder(d, free) for d in range(depth))


def _values_of(n: int, depth: int, free: tuple[str, ...]) -> tuple[Val, ...]:
    key = (n, depth, free)
    hit = _VAL_CACHE.get(key)
    if hit is not None:
        return hit
    if n == 0:
        out = tuple(Var(x) for x in _scope(depth, free) + free)
    else:
        out = tuple(Abs(_binder(depth, free), body)
                    for body in _coms_of(n - 1, depth + 1, free))
    _VAL_CACHE[key] = out
    return out


def _coms_of(n: int, depth: int, free: tuple[str, ...]) -> tuple[Com, ...]:
    if n <= 0:
        return ()
    key = (n, depth, free)
    hit = _COM_CACHE.get(key)
    if hit is not None:
        return hit
    out: list[Com] = [Ret(v) for v in _values_of(n - 1, depth, free)]
    for i in range(0, n - 1):
        for v in _values_of(i, depth, free):
            for m in _coms_of(n - 1 - i, depth, free):
                out.append(App(v, m))
    frozen = tuple(out)
    _COM_CACHE[key] = frozen
    return frozen


def enumerate_terms(max_nodes: int, free_vars: Iterable[str] = (),
                    closed_only: bool = False) -> Iterator[Com]:
    """All computations of size <= max_nodes (one node per Ret/App/Abs), each
    alpha-class exactly once, smallest first.  The stream is prefix-stable
    across runs: binders are named canonically by depth."""
    if max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    free = () if closed_only else tuple(sorted(set(free_vars)))
    for n in range(1, max_nodes + 1):
        yield from _coms_of(n, 0, free)


def default_universe(closed_max: int = 9, open_max: int = 7,
                     free_vars: Iterable[str] = ("z",)) -> list[Com]:
    """The desk-scale universe: closed terms up to closed_max nodes plus open
    terms up to open_max nodes over the given free variables."""
    out = list(enumerate_terms(closed_max, closed_only=True))
    seen = {t.key for t in out}
    for t in enumerate_terms(open_max, free_vars=free_vars):
        if t.key not in seen:
            seen.add(t.key)
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# Reachability graphs


@dataclass
class ReductionGraph:
    root: Com
    nodes: dict = field(default_factory=dict)          # key -> Com
    edges: dict = field(default_factory=dict)          # key -> tuple[(Rule, key)]
    frontier: frozenset = frozenset()                  # reached but never expanded
    truncated: bool = False

    @property
    def complete(self) -> bool:
        return not self.truncated

    def terms(self) -> list[Com]:
        return list(self.nodes.values())

    def successors(self, t: Com) -> list[Com]:
        return [self.nodes[k] for _, k in self.edges.get(t.key, ())]

    def contains(self, t: Com) -> bool:
        return t.key in self.nodes

    def any_ret(self) -> Optional[Com]:
        for t in self.nodes.values():
            if isinstance(t, Ret):
                return t
        return None

    def normal_forms(self) -> list[Com]:
        """Expanded nodes with no successors.  Only meaningful as a complete
        answer when the graph is not truncated."""
        return [t for k, t in self.nodes.items()
                if k not in self.frontier and not self.edges.get(k)]


def reachable(t: Com, succ: LabeledSucc, depth: int,
              max_nodes: int = DEFAULT_MAX_NODES) -> ReductionGraph:
    """Breadth-first reduction graph to the given depth, quotiented by
    alpha-equivalence; marks truncation when the frontier was nonempty at the
    cutoff or the node cap was hit."""
    g = ReductionGraph(root=t)
    g.nodes[t.key] = t
    queue = deque([(t, 0)])
    unexpanded = set()
    while queue:
        current, d = queue.popleft()
        if d >= depth or len(g.nodes) > max_nodes:
            unexpanded.add(current.key)
            continue
        outs = []
        for rule, s in succ(current):
            outs.append((rule, s.key))
            if s.key not in g.nodes:
                g.nodes[s.key] = s
                queue.append((s, d + 1))
        g.edges[current.key] = tuple(outs)
    g.frontier = frozenset(unexpanded)
    g.truncated = bool(unexpanded)
    return g


def _cone(starts: Iterable[Com], succ: LabeledSucc, depth: int,
          max_nodes: int) -> tuple[dict, bool]:
    """Keys reachable from `starts` in <= depth steps; (reached, truncated)."""
    reached = {t.key: t for t in starts}
    queue = deque((t, 0) for t in reached.values())
    truncated = False
    while queue:
        current, d = queue.popleft()
        if d >= depth or len(reached) > max_nodes:
            truncated = True
            continue
        for _, s in succ(current):
            if s.key not in reached:
                reached[s.key] = s
                queue.append((s, d + 1))
    return reached, truncated


def _counted_cone(starts: Iterable[tuple[Com, int]], succ: LabeledSucc,
                  depth: int, max_nodes: int,
                  count_rule: Rule) -> tuple[dict, bool]:
    """States (canonical form, count of count_rule steps so far) reachable in
    <= depth steps."""
    reached = {(t.key, c): t for t, c in starts}
    queue = deque((t, c, 0) for (_, c), t in reached.items())
    truncated = False
    while queue:
        current, c, d = queue.popleft()
        if d >= depth or len(reached) > max_nodes:
            truncated = True
            continue
        for rule, s in succ(current):
            c2 = c + 1 if rule is count_rule else c
            if (s.key, c2) not in reached:
                reached[(s.key, c2)] = s
                queue.append((s, c2, d + 1))
    return reached, truncated


# ---------------------------------------------------------------------------
# Check reports


@dataclass
class CheckReport:
    name: str
    universe: str
    status: str               # "pass" | "fail" | "unknown"
    checked: int = 0
    failures: int = 0
    unknowns: int = 0
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "universe": self.universe,
            "status": self.status,
            "checked": self.checked,
            "failures": self.failures,
            "unknowns": self.unknowns,
            "witness": self.witness,
            "details": self.details,
        }


def _verdict(checked: int, failures: int, unknowns: int) -> str:
    if failures:
        return "fail"
    if unknowns:
        return "unknown"
    return "pass"


# ---------------------------------------------------------------------------
# Factorization by search


def check_factorization(t: Com, e_succ: LabeledSucc, i_succ: LabeledSucc,
                        seq_len: int,
                        search_depth: int = DEFAULT_SEARCH_DEPTH,
                        max_nodes: int = DEFAULT_MAX_NODES,
                        count_rule: Optional[Rule] = None,
                        name: str = "factorization") -> CheckReport:
    """Does every (e u i)-sequence from t of length <= seq_len reorder into
    e-steps first, then i-steps, ending at the same term?  With `count_rule`
    the reordering must also preserve the number of steps of that rule.

    The check is endpoint-based: it enumerates every endpoint reachable from
    t in <= seq_len mixed steps (paired with its step count when counting)
    and searches the bounded e*-then-i* cone for it.
    """

    def union(u: Com) -> list[tuple[Rule, Com]]:
        return e_succ(u) + i_succ(u)

    if count_rule is None:
        endpoints, trunc_end = _cone([t], union, seq_len, max_nodes)
        e_set, trunc_e = _cone([t], e_succ, search_depth, max_nodes)
        factored, trunc_i = _cone(e_set.values(), i_succ, search_depth, max_nodes)
        missing = [k for k in endpoints if k not in factored]
    else:
        endpoints, trunc_end = _counted_cone([(t, 0)], union, seq_len,
                                             max_nodes, count_rule)
        e_set, trunc_e = _counted_cone([(t, 0)], e_succ, search_depth,
                                       max_nodes, count_rule)
        factored, trunc_i = _counted_cone(
            [(term, c) for (_, c), term in e_set.items()],
            i_succ, search_depth, max_nodes, count_rule)
        missing = [k for k in endpoints if k not in factored]

    truncated = trunc_e or trunc_i
    checked = len(endpoints)
    if not missing:
        status = "unknown" if trunc_end else "pass"
        return CheckReport(name, f"sequences<= {seq_len} from one term", status,
                           checked=checked,
                           unknowns=checked if status == "unknown" else 0)
    if truncated:
        return CheckReport(name, f"sequences<= {seq_len} from one term", "unknown",
                           checked=checked, unknowns=len(missing),
                           details={"missing": len(missing)})
    witness_key = missing[0]
    target = endpoints[witness_key]
    return CheckReport(name, f"sequences<= {seq_len} from one term", "fail",
                       checked=checked, failures=len(missing),
                       witness={"source": print_com(t), "target": print_com(target),
                                "count": witness_key[1] if count_rule else None})


# ---------------------------------------------------------------------------
# Peak-based checks


def _joinable(a: Com, b: Com, succ: LabeledSucc, depth: int,
              max_nodes: int, cones: dict) -> tuple[bool, bool]:
    """(joined, truncated) for the peak legs a, b under one relation."""

    def cone_of(x: Com):
        hit = cones.get(x.key)
        if hit is None:
            hit = _cone([x], succ, depth, max_nodes)
            cones[x.key] = hit
        return hit

    ca, ta = cone_of(a)
    cb, tb = cone_of(b)
    return bool(ca.keys() & cb.keys()), ta or tb


def check_local_confluence(succ: LabeledSucc, universe: Iterable[Com],
                           join_depth: int = 4,
                           max_nodes: int = DEFAULT_MAX_NODES,
                           name: str = "local-confluence") -> CheckReport:
    """Every one-step peak joins within join_depth steps on each leg."""
    checked = failures = unknowns = 0
    witness = None
    cones: dict = {}
    for t in universe:
        reducts = [s for _, s in succ(t)]
        for i in range(len(reducts)):
            for j in range(i + 1, len(reducts)):
                a, b = reducts[i], reducts[j]
                if a.key == b.key:
                    continue
                checked += 1
                joined, truncated = _joinable(a, b, succ, join_depth,
                                              max_nodes, cones)
                if joined:
                    continue
                if truncated:
                    unknowns += 1
                else:
                    failures += 1
                    if witness is None:
                        witness = {"peak": print_com(t), "left": print_com(a), "right": print_com(b)}
    return CheckReport(name, "one-step peaks over universe",
                       _verdict(checked, failures, unknowns),
                       checked=checked, failures=failures, unknowns=unknowns,
                       witness=witness)


def check_quasi_diamond(succ: LabeledSucc, universe: Iterable[Com],
                        name: str = "quasi-diamond") -> CheckReport:
    """Distinct one-step reducts close in exactly one step on each side."""
    checked = failures = 0
    witness = None
    one_step: dict = {}

    def keys_of(x: Com) -> set:
        hit = one_step.get(x.key)
        if hit is None:
            hit = {s.key for _, s in succ(x)}
            one_step[x.key] = hit
        return hit

    for t in universe:
        reducts = [s for _, s in succ(t)]
        for i in range(len(reducts)):
            for j in range(i + 1, len(reducts)):
                a, b = reducts[i], reducts[j]
                if a.key == b.key:
                    continue
                checked += 1
                if keys_of(a) & keys_of(b):
                    continue
                failures += 1
                if witness is None:
                    witness = {"peak": print_com(t), "left": print_com(a), "right": print_com(b)}
    return CheckReport(name, "one-step peaks over universe",
                       _verdict(checked, failures, 0),
                       checked=checked, failures=failures, witness=witness)


def check_commutation(succ1: LabeledSucc, succ2: LabeledSucc,
                      universe: Iterable[Com], depth: int = 4,
                      max_nodes: int = DEFAULT_MAX_NODES,
                      name: str = "commutation") -> CheckReport:
    """Local commutation peaks u1 <-1- t -2-> u2 close as u1 -2->* v <-*1- u2
    within the depth bound."""
    checked = failures = unknowns = 0
    witness = None
    for t in universe:
        for _, u1 in succ1(t):
            for _, u2 in succ2(t):
                checked += 1
                c1, t1 = _cone([u1], succ2, depth, max_nodes)
                c2, t2 = _cone([u2], succ1, depth, max_nodes)
                if c1.keys() & c2.keys():
                    continue
                if t1 or t2:
                    unknowns += 1
                else:
                    failures += 1
                    if witness is None:
                        witness = {"peak": print_com(t), "left": print_com(u1), "right": print_com(u2)}
    return CheckReport(name, "two-relation peaks over universe",
                       _verdict(checked, failures, unknowns),
                       checked=checked, failures=failures, unknowns=unknowns,
                       witness=witness)


def check_strong_postponement(e_succ: LabeledSucc, i_succ: LabeledSucc,
                              universe: Iterable[Com], depth: int = 8,
                              max_nodes: int = DEFAULT_MAX_NODES,
                              name: str = "strong-postponement") -> CheckReport:
    """i then e reorders into e* then at most one i: for every t -i-> u -e-> v
    there is t -e->* w with w = v or w -i-> v."""
    checked = failures = unknowns = 0
    witness = None
    for t in universe:
        i_outs = i_succ(t)
        if not i_outs:
            continue
        for _, u in i_outs:
            for _, v in e_succ(u):
                checked += 1
                e_set, truncated = _cone([t], e_succ, depth, max_nodes)
                ok = v.key in e_set
                if not ok:
                    for w in e_set.values():
                        if any(s.key == v.key for _, s in i_succ(w)):
                            ok = True
                            break
                if ok:
                    continue
                if truncated:
                    unknowns += 1
                else:
                    failures += 1
                    if witness is None:
                        witness = {"source": print_com(t), "mid": print_com(u), "target": print_com(v)}
    return CheckReport(name, "i-then-e pairs over universe",
                       _verdict(checked, failures, unknowns),
                       checked=checked, failures=failures, unknowns=unknowns,
                       witness=witness)


# ---------------------------------------------------------------------------
# beta_c count statistics


@dataclass
class BetaCountReport:
    term: Com
    samples: list[tuple[str, int, object]]   # (status, beta_c count, final key)

    @property
    def statuses(self) -> set[str]:
        return {s for s, _, _ in self.samples}

    @property
    def terminated_counts(self) -> set[int]:
        return {c for s, c, _ in self.samples if s == "normal_form"}

    @property
    def terminated_finals(self) -> set:
        return {k for s, _, k in self.samples if s == "normal_form"}

    @property
    def all_terminated(self) -> bool:
        return self.statuses == {"normal_form"}


def beta_count_stats(t: Com, cls: ClosureClass, samples: int,
                     fuel: int = 400, seed_base: int = 0) -> BetaCountReport:
    """Seeded random maximal sigma/beta_c sequences and their beta_c counts."""
    from .strategies import random_maximal

    rows = []
    for i in range(samples):
        out = random_maximal(t, cls, (Rule.SIGMA, Rule.BETA_C),
                             seed=seed_base + i, fuel=fuel)
        rows.append((out.status, out.count(Rule.BETA_C), out.term.key))
    return BetaCountReport(t, rows)
