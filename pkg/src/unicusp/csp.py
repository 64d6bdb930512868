"""A small solver for systems of adjoint equations between chain patterns.

An equation ``adjoint(P) == Q`` relates two patterns.  Pattern items are

* ``("c", value)``          a fixed entry,
* ``("v", name, offset)``   one entry equal to ``name + offset``,
* ``("ch", name, rev)``     the chain variable ``name`` (reversed if ``rev``),
* ``("tw", name, offset)``  a run of ``name + offset`` entries equal to 2.

Since ``adjoint`` is an involution on admissible chains, once either side is
known the other is determined, and matching it against the pattern binds the
unknowns.  When propagation stalls the solver branches on the unknowns of the
side that is cheapest to complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .chains import adjoint_by_twos

SCALAR, CHAIN = "scalar", "chain"
INF = math.inf


class SolverStuck(RuntimeError):
    """No finite branching choice is left although unknowns remain."""


@lru_cache(maxsize=1 << 16)
def _adj(c: tuple) -> tuple:
    return adjoint_by_twos(c)


@dataclass
class Var:
    name: str
    kind: str
    lo: int = 1  # scalars only
    values: tuple | None = None  # finite domain of a free variable
    nonempty: bool | None = None  # chains only
    members: frozenset | None = None  # optional precomputed ``frozenset(values)``

    def __post_init__(self):
        if self.values is None:
            self._set = self._domain = None
            self._max = INF
            return
        self._set = self.members if self.members is not None else frozenset(self.values)
        self._domain = tuple(v for v in self.values if self.admits(v))
        if self.kind == CHAIN:
            self._max = max((len(v) for v in self._domain), default=0)
        else:
            self._max = max(self._domain, default=self.lo - 1)

    def admits(self, value) -> bool:
        if self.kind == SCALAR:
            if value < self.lo:
                return False
        else:
            if self.nonempty is True and not value:
                return False
            if self.nonempty is False and value:
                return False
        return self._set is None or value in self._set

    def domain(self) -> tuple | None:
        return self._domain

    @property
    def upper(self) -> float:
        """Largest scalar value, or longest chain, in the domain."""
        return self._max


Pattern = Sequence[tuple]


@dataclass
class Problem:
    variables: dict[str, Var] = field(default_factory=dict)
    equations: list[tuple[Pattern, Pattern]] = field(default_factory=list)
    linear: list[tuple[list[tuple[int, str]], int]] = field(default_factory=list)  # sum(a * x) == const

    def add(self, var: Var) -> None:
        self.variables[var.name] = var


def reverse_pattern(p: Pattern) -> list[tuple]:
    return [(it[0], it[1], not it[2]) if it[0] == "ch" else it for it in reversed(p)]


def _value(item, state):
    kind = item[0]
    if kind == "c":
        return (item[1],)
    if item[1] not in state:
        return None
    v = state[item[1]]
    if kind == "v":
        return (v + item[2],)
    if kind == "ch":
        return tuple(reversed(v)) if item[2] else v
    n = v + item[2]
    return (2,) * n if n >= 0 else False


def evaluate(p: Pattern, state: dict):
    """The concrete chain of ``p``, ``None`` if unknowns remain, ``False`` if impossible."""
    out: tuple = ()
    for it in p:
        v = _value(it, state)
        if v is None or v is False:
            return v
        out += v
    return out


class _Fail(Exception):
    pass


def _bind(prob: Problem, state: dict, new: dict, name: str, value) -> None:
    cur = new.get(name, state.get(name))
    if cur is not None:
        if cur != value:
            raise _Fail
        return
    if not prob.variables[name].admits(value):
        raise _Fail
    new[name] = value


def _known_len(it, state, new):
    if it[0] in ("c", "v"):
        return 1
    if it[1] in state or it[1] in new:
        v = state[it[1]] if it[1] in state else new[it[1]]
        return len(v) if it[0] == "ch" else v + it[2]
    return None


def _align(prob, state, new, it, seg) -> None:
    kind = it[0]
    if kind == "c":
        if seg != (it[1],):
            raise _Fail
    elif kind == "v":
        _bind(prob, state, new, it[1], seg[0] - it[2])
    elif kind == "ch":
        _bind(prob, state, new, it[1], tuple(reversed(seg)) if it[2] else tuple(seg))
    else:
        if any(x != 2 for x in seg):
            raise _Fail
        _bind(prob, state, new, it[1], len(seg) - it[2])


def _min_len(prob, it) -> int:
    if it[0] in ("c", "v"):
        return 1
    var = prob.variables[it[1]]
    if it[0] == "ch":
        return 1 if var.nonempty else 0
    return max(0, var.lo + it[2])


def match(prob: Problem, p: Pattern, target: tuple, state: dict) -> dict:
    """Bind what ``p == target`` determines; raises ``_Fail`` on contradiction."""
    new: dict = {}
    lens = [_known_len(it, state, new) for it in p]
    unknown = [i for i, n in enumerate(lens) if n is None]
    if any(n is not None and n < 0 for n in lens):
        raise _Fail
    if len(unknown) <= 1:
        known = sum(n for n in lens if n is not None)
        if unknown:
            lens[unknown[0]] = len(target) - known
            if lens[unknown[0]] < 0:
                raise _Fail
        elif known != len(target):
            raise _Fail
        pos = 0
        for it, n in zip(p, lens):
            _align(prob, state, new, it, target[pos : pos + n])
            pos += n
        return new
    if sum(_min_len(prob, it) if n is None else n for it, n in zip(p, lens)) > len(target):
        raise _Fail
    pos = 0
    for it, n in zip(p[: unknown[0]], lens):
        _align(prob, state, new, it, target[pos : pos + n])
        pos += n
    end = len(target)
    for it, n in zip(reversed(p[unknown[-1] + 1 :]), reversed(lens[unknown[-1] + 1 :])):
        _align(prob, state, new, it, target[end - n : end])
        end -= n
    return new


def propagate(prob: Problem, state: dict) -> dict | None:
    state = dict(state)
    changed = True
    while changed:
        changed = False
        try:
            for terms, const in prob.linear:
                unknown = [(a, n) for a, n in terms if n not in state]
                rest = const - sum(a * state[n] for a, n in terms if n in state)
                if not unknown:
                    if rest:
                        return None
                elif len(unknown) == 1:
                    a, n = unknown[0]
                    if rest % a:
                        return None
                    new: dict = {}
                    _bind(prob, state, new, n, rest // a)
                    state.update(new)
                    changed = True
            for P, Q in prob.equations:
                p, q = evaluate(P, state), evaluate(Q, state)
                if p is False or q is False:
                    return None
                if p is not None and q is not None:
                    if not p or min(p) < 2 or _adj(p) != q:
                        return None
                    continue
                if p is not None:
                    if not p or min(p) < 2:
                        return None
                    new = match(prob, Q, _adj(p), state)
                elif q is not None:
                    if not q or min(q) < 2:
                        return None
                    new = match(prob, P, _adj(q), state)
                else:
                    continue
                if new:
                    state.update(new)
                    changed = True
        except _Fail:
            return None
    return state


def _unknowns(p: Pattern, state: dict) -> set[str]:
    return {it[1] for it in p if it[0] != "c" and it[1] not in state}


def _max_len(prob, p, state, bounds) -> float:
    total = 0.0
    for it in p:
        n = _known_len(it, state, {})
        if n is not None:
            total += n
        elif it[0] == "ch":
            total += prob.variables[it[1]].upper
        elif it[0] == "tw":
            total += bounds.get(it[1], INF) + it[2]
        else:
            total += 1
    return total


def _scalar_bounds(prob: Problem, state: dict) -> dict[str, float]:
    """Upper bounds for unknown scalars: an adjoint entry never exceeds ``len + 1``."""
    bounds: dict[str, float] = {}
    for name, var in prob.variables.items():
        if var.kind == SCALAR and name not in state and var.values is not None:
            bounds[name] = var.upper
    for _ in range(2):
        for P, Q in prob.equations:
            for side, other in ((P, Q), (Q, P)):
                m = _max_len(prob, other, state, bounds)
                if m == INF:
                    continue
                for it in side:
                    if it[0] == "v" and it[1] not in state:
                        b = m + 1 - it[2]
                        bounds[it[1]] = min(bounds.get(it[1], INF), b)
    return bounds


def _domain(prob: Problem, name: str, bounds: dict) -> tuple | None:
    var = prob.variables[name]
    if var.values is not None:
        return var.domain()
    if var.kind == SCALAR and bounds.get(name, INF) < INF:
        return tuple(v for v in range(var.lo, int(bounds[name]) + 1))
    return None


def _branch_choice(prob: Problem, state: dict) -> list[tuple[str, tuple]] | None:
    bounds = _scalar_bounds(prob, state)
    best, best_cost = None, INF
    for P, Q in prob.equations:
        for side in (P, Q):
            names = sorted(_unknowns(side, state))
            if not names:
                continue
            doms = [_domain(prob, n, bounds) for n in names]
            if any(d is None for d in doms):
                continue
            cost = math.prod(len(d) for d in doms)
            if cost < best_cost:
                best, best_cost = list(zip(names, doms)), cost
    if best is not None:
        return best
    free = [(n, _domain(prob, n, bounds)) for n in prob.variables if n not in state]
    free = [(n, d) for n, d in free if d is not None]
    if free:
        return [min(free, key=lambda nd: (len(nd[1]), nd[0]))]
    return None


def solve(prob: Problem, state: dict | None = None) -> Iterator[dict]:
    """Yield every complete assignment satisfying all equations."""
    state = propagate(prob, state or {})
    if state is None:
        return
    if all(n in state for n in prob.variables):
        yield state
        return
    choice = _branch_choice(prob, state)
    if choice is None:
        missing = sorted(n for n in prob.variables if n not in state)
        raise SolverStuck(f"cannot branch on {missing}")
    names = [n for n, _ in choice]
    for combo in product(*(d for _, d in choice)):
        yield from solve(prob, {**state, **dict(zip(names, combo))})
