"""Termination measure for the sigma/id fragment.

Two sizes, lexicographically ordered: an id step strictly decreases `size`,
a sigma step keeps `size` and strictly decreases `aux`.  Both are positive
on every term, so no sigma/id sequence is infinite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Abs, App, Ret, Term, Var


@dataclass(frozen=True)
class MeasurePair:
    size: int
    aux: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.size, self.aux)


def _size(t: Term) -> int:
    match t:
        case Var(_):
            return 1
        case Abs(_, body):
            return _size(body) + 1
        case App(f, m):
            return _size(f) + _size(m)
        case Ret(v):
            return _size(v)
    raise TypeError(f"not a term: {t!r}")


def _aux(t: Term) -> int:
    match t:
        case Var(_):
            return 1
        case Abs(_, body):
            return _aux(body) + _size(body)
        case App(f, m):
            return _aux(f) + _aux(m) + 2 * _size(f) * _size(m)
        case Ret(v):
            return _aux(v)
    raise TypeError(f"not a term: {t!r}")


def measure(t: Term) -> MeasurePair:
    return MeasurePair(_size(t), _aux(t))
