"""Cusp-resolution dual graphs.

A resolution graph is a (-1)-curve ``D0`` together with admissible chains
``A1, B1, ..., Ag, Bg``.  ``last(Ai)`` and ``first(Bi)`` both meet the
junction ``Ji``, where ``Ji = first(A(i+1))`` for ``i < g`` and ``Jg = D0``.
The strict transform ``C`` of the curve meets ``D0`` once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import isqrt
from typing import Mapping, Sequence

from .chains import Chain, adjoint, is_admissible
from .contraction import (
    INITIAL,
    MARKED,
    SPROUTING,
    SUBDIVISIONAL,
    BlowdownStep,
    Component,
    IntersectionConfig,
    contract_all,
)

D0 = "D0"
CURVE = "C"


class ResolutionError(ValueError):
    """A resolution graph violates its structural constraints."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


def a_id(i: int, j: int) -> str:
    return f"A{i}.{j}"


def b_id(i: int, j: int) -> str:
    return f"B{i}.{j}"


def validate_resolution(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[int]:
    """Return the ``o[i] >= 1`` with ``adjoint(A[i]) == B[i] + (o[i] + 1,)``."""
    if len(A) != len(B) or not A:
        raise ResolutionError(f"need g >= 1 matching chains, got {len(A)} A's and {len(B)} B's")
    out = []
    for i, (a, b) in enumerate(zip(A, B), start=1):
        a, b = tuple(a), tuple(b)
        if not is_admissible(a) or not is_admissible(b):
            raise ResolutionError(f"chains at index {i} must be admissible", i)
        adj = adjoint(a)
        if len(adj) != len(b) + 1 or adj[:-1] != b or adj[-1] < 2:
            raise ResolutionError(f"index {i}: adjoint(A) = {list(adj)} is not [B, o+1] for B = {list(b)}", i)
        if max(a) < 3:
            raise ResolutionError(f"index {i}: A has no entry >= 3", i)
        out.append(adj[-1] - 1)
    return out


@dataclass(frozen=True)
class ResolutionGraph:
    A: tuple[Chain, ...]
    B: tuple[Chain, ...]
    c_prime_self: int
    o: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(tuple(a) for a in self.A))
        object.__setattr__(self, "B", tuple(tuple(b) for b in self.B))
        object.__setattr__(self, "o", tuple(validate_resolution(self.A, self.B)))

    @property
    def g(self) -> int:
        return len(self.A)

    def junction(self, i: int) -> str:
        return a_id(i + 1, 1) if i < self.g else D0

    def component_count(self) -> int:
        return 1 + sum(len(a) + len(b) for a, b in zip(self.A, self.B))

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "A": [list(a) for a in self.A],
            "B": [list(b) for b in self.B],
            "c_prime_self": self.c_prime_self,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "ResolutionGraph":
        try:
            A, B, c = data["A"], data["B"], data["c_prime_self"]
        except (KeyError, TypeError) as exc:
            raise ResolutionError(f"malformed resolution data: missing {exc}") from None
        for c_ in list(A) + list(B):
            if not isinstance(c_, list) or not all(type(x) is int for x in c_):
                raise ResolutionError("chains must be lists of integers")
        if type(c) is not int:
            raise ResolutionError("c_prime_self must be an integer")
        if "g" in data and data["g"] != len(A):
            raise ResolutionError(f"g = {data['g']} disagrees with {len(A)} chains")
        return cls(tuple(map(tuple, A)), tuple(map(tuple, B)), c)

    @classmethod
    def from_json(cls, text: str) -> "ResolutionGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ResolutionError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


def assemble_graph(res: ResolutionGraph) -> IntersectionConfig:
    comps, pairs = [], []
    for i, (a, b) in enumerate(zip(res.A, res.B), start=1):
        comps += [Component(a_id(i, j), -x) for j, x in enumerate(a, start=1)]
        comps += [Component(b_id(i, j), -x) for j, x in enumerate(b, start=1)]
        pairs += [(a_id(i, j), a_id(i, j + 1), 1) for j in range(1, len(a))]
        pairs += [(b_id(i, j), b_id(i, j + 1), 1) for j in range(1, len(b))]
        pairs += [(a_id(i, len(a)), res.junction(i), 1), (b_id(i, 1), res.junction(i), 1)]
    comps += [Component(D0, -1), Component(CURVE, res.c_prime_self, MARKED)]
    pairs.append((D0, CURVE, 1))
    return IntersectionConfig(comps, pairs)


@dataclass(frozen=True)
class CuspProfile:
    multiplicities: tuple[int, ...]
    degree: int
    genus_defect: int

    def to_dict(self) -> dict:
        return {"multiplicities": list(self.multiplicities), "degree": self.degree, "genus_defect": self.genus_defect}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "CuspProfile":
        d = json.loads(text)
        return cls(tuple(d["multiplicities"]), d["degree"], d["genus_defect"])


def resolution_trace(res: ResolutionGraph) -> tuple[IntersectionConfig, list[BlowdownStep]]:
    """Contract the whole divisor, insisting on a unique (-1)-curve at every step."""
    return contract_all(assemble_graph(res), assert_unique=True)


def cusp_profile(res: ResolutionGraph, trace: Sequence[BlowdownStep] | None = None) -> CuspProfile:
    if trace is None:
        final, trace = resolution_trace(res)
        c2 = final.self_int(CURVE)
    else:
        c2 = res.c_prime_self + sum(s.curve_multiplicity ** 2 for s in trace)
    mults = tuple(s.curve_multiplicity for s in reversed(trace))
    if c2 < 0 or isqrt(c2) ** 2 != c2:
        raise ResolutionError(f"not planar-consistent: final self-intersection {c2} is not a square")
    d = isqrt(c2)
    defect = (d - 1) * (d - 2) // 2 - sum(m * (m - 1) // 2 for m in mults)
    return CuspProfile(mults, d, defect)


def sprouting_counts(res: ResolutionGraph, trace: Sequence[BlowdownStep] | None = None) -> list[tuple[int, int]]:
    """Per-phase ``(sprouting, subdivisional)`` counts, indexed by ``i = 1..g``.

    Phase ``g`` runs until ``first(Ag)`` is next to go; phase ``i < g`` then
    runs until ``first(Ai)``.  The final step, contracting ``first(A1)``, is
    the initial one and belongs to no phase.
    """
    if trace is None:
        _, trace = resolution_trace(res)
    trace = list(trace)
    if not trace or trace[-1].contracted_id != a_id(1, 1) or trace[-1].classification != INITIAL:
        raise ResolutionError("trace does not end with the initial contraction of first(A1)")
    position = {s.contracted_id: k for k, s in enumerate(trace)}
    counts: list[tuple[int, int]] = []
    end = len(trace) - 1
    for i in range(1, res.g + 1):
        start = position[a_id(i + 1, 1)] if i < res.g else 0
        if i > 1:
            end = position[a_id(i, 1)]
        phase = [s.classification for s in trace[start:end]]
        n_sub = phase.count(SUBDIVISIONAL)
        n_spr = phase.count(SPROUTING)
        if n_sub + n_spr != len(phase) or phase != [SUBDIVISIONAL] * n_sub + [SPROUTING] * n_spr:
            raise ResolutionError(f"phase {i} is not subdivisional-then-sprouting: {phase}", i)
        if n_spr != res.o[i - 1]:
            raise ResolutionError(f"phase {i} has {n_spr} sprouting steps, expected o = {res.o[i - 1]}", i)
        counts.append((n_spr, n_sub))
        end = start
    return counts


# -- recognising resolution graphs inside arbitrary configurations ---------------

def _walk(cfg: IntersectionConfig, start: str, came_from: str) -> list[str]:
    """Follow a path from ``start`` away from ``came_from`` while vertices have degree 2."""
    path = [start]
    prev, cur = came_from, start
    while True:
        nxt = [n for n in cfg.neighbours(cur, divisor_only=True) if n != prev]
        if len(nxt) != 1:
            return path
        prev, cur = cur, nxt[0]
        path.append(cur)


def parse_resolution(cfg: IntersectionConfig) -> list[tuple[ResolutionGraph, dict[str, str]]]:
    """All ways of reading ``cfg`` as a valid resolution graph.

    Each result carries a map from the canonical ids of :func:`assemble_graph`
    to the ids of ``cfg``.  An empty list means ``cfg`` is not of that shape.
    """
    c = cfg.marked_id
    if c is None:
        return []
    touching = [n for n in cfg.ids if n != c and cfg.pairing(n, c)]
    if len(touching) != 1 or cfg.pairing(touching[0], c) != 1:
        return []
    d0 = touching[0]
    div = cfg.divisor_ids
    if cfg.self_int(d0) != -1 or any(cfg.pairing(a, b) > 1 for a, b, _ in cfg.pairs() if a != c and b != c):
        return []
    edges = sum(1 for a, b, _ in cfg.pairs() if c not in (a, b))
    if edges != len(div) - 1 or any(cfg.degree(v) > 3 for v in div):
        return []  # not a tree with the right degrees (connectedness checked below)

    results = []

    def branch_tip(path):
        return cfg.degree(path[-1]) <= 1

    def descend(junction, arrived_from, acc):
        others = [n for n in cfg.neighbours(junction, divisor_only=True) if n != arrived_from]
        if len(others) != 2:
            return
        for x, y in (others, others[::-1]):
            b_path = _walk(cfg, y, junction)
            if not branch_tip(b_path):
                continue
            a_path = _walk(cfg, x, junction)
            a_chain = a_path[::-1]
            step = acc + [(a_chain, b_path)]
            if branch_tip(a_path):
                finish(step)
            else:
                descend(a_path[-1], a_path[-2] if len(a_path) > 1 else junction, step)

    def finish(parts):
        parts = parts[::-1]  # parts were collected from D0 outward
        if sum(len(a) + len(b) for a, b in parts) + 1 != len(div):
            return
        A = tuple(tuple(-cfg.self_int(v) for v in a) for a, _ in parts)
        B = tuple(tuple(-cfg.self_int(v) for v in b) for _, b in parts)
        try:
            res = ResolutionGraph(A, B, cfg.self_int(c))
        except ResolutionError:
            return
        ids = {D0: d0, CURVE: c}
        for i, (a, b) in enumerate(parts, start=1):
            ids.update({a_id(i, j): v for j, v in enumerate(a, start=1)})
            ids.update({b_id(i, j): v for j, v in enumerate(b, start=1)})
        results.append((res, ids))

    descend(d0, c, [])
    return results
