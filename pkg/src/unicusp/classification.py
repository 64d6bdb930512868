"""Bounded classification of boundary graphs with ``(C')^2 = -2``.

Every template instance is a candidate.  A candidate survives when

* the fiber identities hold (the chains around each ``E`` curve contract
  the way the fibration requires, and ``phi(S1)^2 = -1``, ``phi(S2)^2 = 4``);
* the boundary ``D`` reads as a valid cusp-resolution graph.

The search does not enumerate candidates blindly.  For each template and
each choice of which chains are empty, the shape of ``D`` is fixed, so the
possible splittings of ``D`` into chains ``A_i, B_i`` can be listed
symbolically.  Each splitting turns validity into adjoint equations, which
go to :mod:`unicusp.csp` together with the fiber identities.  Only chains
``T21``, ``T24``, ``T11`` and the scalar weights are enumerated; the other
chains are derived, so they are not limited by the bounds.
"""

from __future__ import annotations

import json
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .chains import Chain, adjoint, repeat, tw
from .csp import CHAIN, SCALAR, Problem, Var, reverse_pattern, solve
from .orevkov import PLAIN, STAR, OrevkovSpec, orevkov_resolution
from .resolution import (
    ResolutionError,
    ResolutionGraph,
    a_id,
    b_id,
    cusp_profile,
    parse_resolution,
)
from .templates import (
    CHAIN_NAMES,
    E_CURVES,
    III1A,
    III1A_IV2A,
    III1A_IV2B,
    III1B,
    III1B_IV2A,
    III1B_IV2B,
    LAYOUTS,
    TEMPLATES,
    CandidateAssignment,
    chains_of,
    divisor_config,
    e_neighbours,
    has_iv2,
    iii1b_certificate,
    is_iii1b,
    phi_self_intersection,
)

SEARCHED = (III1A, III1A_IV2A, III1A_IV2B)
REFUTED = (III1B, III1B_IV2A, III1B_IV2B)
FREE_CHAINS = ("T11", "T21", "T24")


class Rejection(ValueError):
    """A candidate violates a fiber identity; ``identity`` names which."""

    def __init__(self, identity: str, detail: str = ""):
        super().__init__(f"{identity}: {detail}" if detail else identity)
        self.identity = identity


# -- fiber identities -----------------------------------------------------------

def _split_adjoint(c: Chain) -> tuple[Chain, int]:
    """``adjoint(c) = [rest, n + 1]``; returns ``(rest, n)``."""
    adj = adjoint(c)
    return adj[:-1], adj[-1] - 1


def _s2_relation(cand: CandidateAssignment, k34: int) -> None:
    t = cand.template
    if t == III1A and k34 != cand.s2 + 2:
        raise Rejection("k34 = s2 + 2", f"k34={k34}, s2={cand.s2}")
    if t == III1A_IV2A and k34 != cand.s2 + 1:
        raise Rejection("k34 = s2 + 1", f"k34={k34}, s2={cand.s2}")
    if t == III1A_IV2B and cand.s2 - k34 < 1:
        raise Rejection("s2 - k34 >= 1", f"k34={k34}, s2={cand.s2}")


def check_III1a_fiber(cand: CandidateAssignment, engine: bool = True) -> tuple[int, int]:
    """Check the III1a fiber of ``cand``; returns ``(k12, k34)``."""
    if is_iii1b(cand.template):
        raise Rejection("template", "not a III1a template")
    t22, k12 = _split_adjoint((cand.s1,) + cand.T21)
    if t22 != cand.T22:
        raise Rejection("[S1,T21]* = [T22,k12+1]", f"adjoint gives {list(t22)} + [{k12 + 1}]")
    adj = adjoint((cand.f2,) + cand.T23)
    tail = tw(k12 - 1)
    r = len(cand.T24)
    if len(adj) != r + 1 + len(tail) or adj[:r] != cand.T24 or adj[r + 1 :] != tail or adj[r] < 2:
        raise Rejection("[F2',T23]* = [T24,k34+1,TW(k12-1)]", f"adjoint gives {list(adj)}")
    k34 = adj[r] - 1
    if not cand.T23:
        raise Rejection("T23 nonempty")
    _s2_relation(cand, k34)
    if cand.k12 is not None and (cand.k12, cand.k34) != (k12, k34):
        raise Rejection("k12, k34", f"stated {(cand.k12, cand.k34)}, derived {(k12, k34)}")
    if engine:
        phi_check(cand)
    return k12, k34


def phi_check(cand: CandidateAssignment) -> tuple[int, int]:
    """Engine cross-check: ``phi(S1)^2 = -1`` and ``phi(S2)^2 = 4``."""
    one = phi_self_intersection(cand, "S1")
    two = phi_self_intersection(cand, "S2")
    if not (one.complete and two.complete):
        raise Rejection("phi contracts the fibers", one.error or two.error)
    if one.self_int != -1:
        raise Rejection("phi(S1)^2 = -1", f"engine gives {one.self_int}")
    if two.self_int != 4:
        raise Rejection("phi(S2)^2 = 4", f"engine gives {two.self_int}")
    return one.self_int, two.self_int


def iv2b_identities(cand: CandidateAssignment) -> int:
    """The IV2b fiber constraints every candidate must meet; returns ``l``."""
    if cand.template != III1A_IV2B:
        raise Rejection("template", "not a III1a+IV2b template")
    if cand.f1 != 2 or cand.f12 != 2:
        raise Rejection("(F1')^2 = F12^2 = -2", f"f1={cand.f1}, f12={cand.f12}")
    t12, l = _split_adjoint((cand.f11,) + cand.T11)
    if t12 != cand.T12:
        raise Rejection("[F11,T11]* = [T12,l+1]", f"adjoint gives {list(t12)} + [{l + 1}]")
    k34 = cand.k34 if cand.k34 is not None else check_III1a_fiber(cand, engine=False)[1]
    if l != cand.s2 - k34:
        raise Rejection("l = s2 - k34", f"l={l}, s2={cand.s2}, k34={k34}")
    return l


def check_IV2b_fiber(cand: CandidateAssignment) -> None:
    """IV2b identities plus their consequences ``s2 = k34 + 1``, ``T11 = T12 = []``, ``F11 = [2]``."""
    iv2b_identities(cand)
    k34 = cand.k34 if cand.k34 is not None else check_III1a_fiber(cand, engine=False)[1]
    if cand.s2 != k34 + 1:
        raise Rejection("s2 = k34 + 1", f"s2={cand.s2}, k34={k34}")
    if cand.T11 or cand.T12:
        raise Rejection("T11 = T12 = []", f"T11={list(cand.T11)}, T12={list(cand.T12)}")
    if cand.f11 != 2:
        raise Rejection("F11 = [2]", f"f11={cand.f11}")


def check_IV2a_fiber(cand: CandidateAssignment) -> None:
    if cand.template != III1A_IV2A:
        raise Rejection("template", "not a III1a+IV2a template")
    if adjoint((cand.f1,) + cand.T11) != cand.T12 + (cand.f11, cand.f12):
        raise Rejection("[T12,F11,F12] = [F1',T11]*")


@dataclass(frozen=True)
class Refutation:
    template: str
    s1: int
    phi_s1: int

    @property
    def ok(self) -> bool:
        return self.phi_s1 <= -2


def refute_III1b(cand: CandidateAssignment) -> Refutation:
    """Certificate that ``phi(S1)^2 <= -2`` for a III1b candidate.

    Raises ``AssertionError`` if a candidate escapes, which would mean the
    engine or the template is wrong.
    """
    if not is_iii1b(cand.template):
        raise Rejection("template", "not a III1b template")
    res = iii1b_certificate(cand)
    if res.self_int is None or res.self_int > -2:
        raise AssertionError(f"III1b candidate not refuted: {cand.to_dict()} gives {res.self_int}")
    return Refutation(cand.template, cand.s1, res.self_int)


# -- from candidates to resolution graphs -----------------------------------------

def derive_resolution(template: str, cand: CandidateAssignment) -> ResolutionGraph:
    if cand.template != template:
        raise ResolutionError(f"candidate is tagged {cand.template}, not {template}")
    parses = parse_resolution(divisor_config(cand))
    if len(parses) != 1:
        raise ResolutionError(f"boundary has {len(parses)} readings as a resolution graph")
    return parses[0][0]


def e22_attachments(cand: CandidateAssignment) -> tuple[str, ...]:
    """Where ``E22`` meets ``D``, in canonical resolution ids."""
    (_, ids), = parse_resolution(divisor_config(cand))
    back = {v: k for k, v in ids.items()}
    return tuple(sorted(back[v] for v in e_neighbours(cand, "E22")))


def orevkov_candidate(spec: OrevkovSpec) -> CandidateAssignment:
    """The template instance whose boundary is the Orevkov resolution graph."""
    k = spec.m - 1
    f_t = adjoint(repeat(7, k + 1))  # [F2', T23] = [T24, 7]* with T24 = [7_k]
    kw = dict(s1=2, f2=f_t[0], T23=f_t[1:], T24=repeat(7, k), k12=1, k34=6)
    if spec.variant == PLAIN:
        return CandidateAssignment(III1A, s2=4, **kw)
    return CandidateAssignment(III1A_IV2B, s2=7, f1=2, f11=2, f12=2, **kw)


# -- the search box ---------------------------------------------------------------

def chains_up_to(max_len: int, max_entry: int) -> tuple[Chain, ...]:
    out: list[Chain] = [()]
    layer: list[Chain] = [()]
    for _ in range(max_len):
        layer = [c + (a,) for c in layer for a in range(2, max_entry + 1)]
        out += layer
    return tuple(out)


@dataclass(frozen=True)
class SearchBox:
    """Domains of the enumerated quantities; every other quantity is derived."""

    s1: tuple[int, ...]
    s2: tuple[int, ...]
    f: tuple[int, ...]  # F11 under IV2b, F1' under IV2a
    T21: tuple[Chain, ...]
    T24: tuple[Chain, ...]
    T11: tuple[Chain, ...]

    @classmethod
    def from_bounds(cls, max_chain_len: int = 6, max_weight: int = 9, max_k: int = 3) -> "SearchBox":
        if max_chain_len < 1 or max_weight < 2:
            # a zero bound is the empty box
            return cls((), (), (), (), (), ())
        w = tuple(range(2, max_weight + 1))
        return cls(
            s1=w,
            s2=tuple(range(3, max_weight + 1)),
            f=w,
            T21=chains_up_to(max_chain_len, max_weight),
            T24=chains_up_to(min(max_chain_len, max(max_k, 0)), max_weight),
            T11=chains_up_to(max_chain_len, max_weight),
        )

    def members(self, name: str) -> frozenset:
        cache = self.__dict__.setdefault("_members", {})
        if name not in cache:
            cache[name] = frozenset(getattr(self, name))
        return cache[name]

    def is_empty(self) -> bool:
        return not (self.s1 and self.s2)

    def contains(self, cand: CandidateAssignment) -> bool:
        ok = cand.s1 in self.s1 and cand.s2 in self.s2 and cand.T21 in self.T21 and cand.T24 in self.T24
        if cand.template == III1A_IV2B:
            ok = ok and cand.f11 in self.f and cand.T11 in self.T11
        if cand.template == III1A_IV2A:
            ok = ok and cand.f1 in self.f and cand.T11 in self.T11
        return ok


def expected_survivors(box: SearchBox, max_m: int = 12) -> list[str]:
    out = []
    for m in range(1, max_m + 1):
        for v in (PLAIN, STAR):
            spec = OrevkovSpec(m, v)
            if box.contains(orevkov_candidate(spec)):
                out.append(spec.name)
    return out


# -- shape of D and its symbolic splittings -------------------------------------------

_SCALAR_ITEM = {
    "S1": ("v", "s1", 0),
    "S2": ("v", "s2", 0),
    "F0'": ("c", 2),
    "F1'": ("v", "f1", 0),
    "F2'": ("v", "f2", 0),
    "F11": ("v", "f11", 0),
    "F12": ("v", "f12", 0),
}


def shape_graph(template: str, empty: frozenset) -> tuple[dict[str, list[str]], dict[str, str]]:
    """Dual graph of ``D`` with each non-empty chain collapsed to one leaf.

    Returns adjacency lists and, for each chain, the end ("first"/"last")
    where it meets the rest of ``D``.
    """
    adj: dict[str, list[str]] = defaultdict(list)
    attach: dict[str, str] = {}
    for path in LAYOUTS[template]:
        toks = [t for t in path if t not in empty]
        for u, v in zip(toks, toks[1:]):
            if u in E_CURVES or v in E_CURVES or "C'" in (u, v):
                continue
            for x, end in ((u, "last"), (v, "first")):
                if x in CHAIN_NAMES:
                    if x in attach:
                        raise ValueError(f"{x} meets D at both ends in {template}")
                    attach[x] = end
            adj[u].append(v)
            adj[v].append(u)
    return dict(adj), attach


def _is_tree(adj: dict[str, list[str]]) -> bool:
    edges = sum(len(v) for v in adj.values()) // 2
    if edges != len(adj) - 1 or "D0" not in adj:
        return False
    seen, todo = {"D0"}, ["D0"]
    while todo:
        for n in adj[todo.pop()]:
            if n not in seen:
                seen.add(n)
                todo.append(n)
    return len(seen) == len(adj)


def symbolic_splittings(template: str, empty: frozenset) -> list[list[tuple[list, list]]]:
    """Every way to read the shape of ``D`` as ``A_1, B_1, ..., A_g, B_g``, as patterns."""
    adj, attach = shape_graph(template, empty)
    if not _is_tree(adj) or len(adj["D0"]) != 2:
        return []

    def item(v):
        if v in CHAIN_NAMES:
            return ("ch", v, attach[v] == "last")
        return _SCALAR_ITEM[v]

    def walk(start, came):
        verts, prev, cur = [start], came, start
        while cur not in CHAIN_NAMES:
            nxt = [n for n in adj[cur] if n != prev]
            if len(nxt) != 1:
                return verts, len(nxt)
            prev, cur = cur, nxt[0]
            verts.append(cur)
        return verts, 0

    out = []

    def descend(junction, came, acc):
        others = [n for n in adj[junction] if n != came]
        if len(others) != 2:
            return
        for x, y in (others, others[::-1]):
            b_verts, b_end = walk(y, junction)
            if b_end != 0:
                continue
            a_verts, a_end = walk(x, junction)
            if a_end > 2:
                continue
            B = [item(v) for v in b_verts]
            A = reverse_pattern([item(v) for v in a_verts])
            step = acc + [(A, B)]
            if a_end == 0:
                out.append(step[::-1])
            else:
                descend(a_verts[-1], a_verts[-2] if len(a_verts) > 1 else junction, step)

    descend("D0", None, [])
    return out


# -- building and solving the equation system -------------------------------------------

def _identities(template: str) -> tuple[list, list]:
    eqs = [
        ([("v", "s1", 0), ("ch", "T21", False)], [("ch", "T22", False), ("v", "k12", 1)]),
        ([("v", "f2", 0), ("ch", "T23", False)], [("ch", "T24", False), ("v", "k34", 1), ("tw", "k12", -1)]),
    ]
    lin: list = []
    if template == III1A:
        lin.append(([(1, "k34"), (-1, "s2")], 2))
    elif template == III1A_IV2B:
        eqs.append(([("v", "f11", 0), ("ch", "T11", False)], [("ch", "T12", False), ("v", "l", 1)]))
        lin += [([(1, "l"), (1, "k34"), (-1, "s2")], 0), ([(1, "f1")], 2), ([(1, "f12")], 2)]
    elif template == III1A_IV2A:
        eqs.append(([("v", "f1", 0), ("ch", "T11", False)], [("ch", "T12", False), ("v", "f11", 0), ("v", "f12", 0)]))
        lin.append(([(1, "k34"), (-1, "s2")], 1))
    return eqs, lin


def build_problem(template: str, empty: frozenset, splitting, box: SearchBox) -> tuple[Problem, dict]:
    prob = Problem()
    free_scalars = {"s1": box.s1, "s2": box.s2}
    if template == III1A_IV2B:
        free_scalars["f11"] = box.f
    if template == III1A_IV2A:
        free_scalars["f1"] = box.f
    derived_scalars = {"f2": 2, "k12": 1, "k34": 1, "f1": 2, "f11": 2, "f12": 2, "l": 1}
    names = ["s1", "s2", "f2", "k12", "k34"]
    if has_iv2(template):
        names += ["f1", "f11", "f12"] + (["l"] if template == III1A_IV2B else [])
    for n in names:
        if n in free_scalars:
            prob.add(Var(n, SCALAR, lo=min(free_scalars[n], default=2), values=tuple(free_scalars[n])))
        else:
            prob.add(Var(n, SCALAR, lo=derived_scalars[n]))
    state = {}
    for c in chains_of(template):
        values = getattr(box, c) if c in FREE_CHAINS else None
        members = box.members(c) if c in FREE_CHAINS else None
        prob.add(Var(c, CHAIN, values=values, nonempty=c not in empty, members=members))
        if c in empty:
            state[c] = ()
    eqs, lin = _identities(template)
    for i, (A, B) in enumerate(splitting, start=1):
        prob.add(Var(f"o{i}", SCALAR, lo=1))
        eqs.append((A, B + [("v", f"o{i}", 1)]))
    prob.equations = eqs
    prob.linear = lin
    return prob, state


def candidate_from_state(template: str, st: dict) -> CandidateAssignment:
    kw = {c: st[c] for c in chains_of(template)}
    if has_iv2(template):
        kw.update(f1=st["f1"], f11=st["f11"], f12=st["f12"])
    return CandidateAssignment(template, s1=st["s1"], s2=st["s2"], f2=st["f2"], k12=st["k12"], k34=st["k34"], **kw)


def _flag_sets(template: str, box: SearchBox) -> list[frozenset]:
    chains = chains_of(template)
    out = []
    for bits in product((False, True), repeat=len(chains)):
        empty = frozenset(c for c, b in zip(chains, bits) if b)
        if any(c in empty and () not in getattr(box, c) for c in FREE_CHAINS if c in chains):
            continue
        if any(c not in empty and not any(getattr(box, c)) for c in FREE_CHAINS if c in chains):
            continue
        out.append(empty)
    return out


@dataclass(frozen=True)
class Task:
    template: str
    empty: tuple[str, ...]
    splitting: int


def tasks_for(box: SearchBox) -> list[Task]:
    if box.is_empty():
        return []
    out = []
    for t in SEARCHED:
        for empty in _flag_sets(t, box):
            for i, _ in enumerate(symbolic_splittings(t, empty)):
                out.append(Task(t, tuple(sorted(empty)), i))
    return out


def orevkov_name(res: ResolutionGraph) -> str | None:
    m = 1 if res.g == 1 else len(res.B[0]) + 1
    for v in (PLAIN, STAR):
        spec = OrevkovSpec(m, v)
        if orevkov_resolution(spec).resolution == res:
            return spec.name
    return None


def examine(template: str, cand: CandidateAssignment) -> dict:
    """Run every check on a solver solution; returns a record."""
    rec = {"template": template, "candidate": cand.to_dict(), "issues": []}
    check_III1a_fiber(cand)  # necessary conditions: failure here is a solver bug
    if template == III1A_IV2B:
        iv2b_identities(cand)
        try:
            check_IV2b_fiber(cand)
        except Rejection as exc:
            rec["issues"].append(str(exc))
    if template == III1A_IV2A:
        check_IV2a_fiber(cand)
    res = derive_resolution(template, cand)
    prof = cusp_profile(res)
    rec["resolution"] = res.to_dict()
    rec["degree"] = prof.degree
    if prof.genus_defect != 0:
        rec["issues"].append(f"genus defect {prof.genus_defect}")
    rec["e22"] = list(e22_attachments(cand))
    rec["name"] = orevkov_name(res)
    if rec["name"]:
        want = sorted((a_id(1, 1), a_id(1, len(res.A[0])) if res.g == 1 else b_id(1, len(res.B[0]))))
        if rec["e22"] != want:
            rec["issues"].append(f"E22 meets {rec['e22']}, expected {want}")
    return rec


def run_task(task: Task, box: SearchBox) -> list[dict]:
    empty = frozenset(task.empty)
    splitting = symbolic_splittings(task.template, empty)[task.splitting]
    prob, state = build_problem(task.template, empty, splitting, box)
    return [examine(task.template, candidate_from_state(task.template, st)) for st in solve(prob, state)]


def _run_chunk(args) -> list[dict]:
    tasks, box = args
    out = []
    for t in tasks:
        out += run_task(t, box)
    return out


def _refutation_candidates(box: SearchBox) -> Iterable[CandidateAssignment]:
    """III1b instances: all scalar weights ``s1`` in the box, chains empty or ``[2]``."""
    s2 = min(box.s2)
    for t in REFUTED:
        chains = chains_of(t)
        for s1 in box.s1:
            for bits in product(((), (2,)), repeat=len(chains)):
                kw = dict(zip(chains, bits))
                if has_iv2(t):
                    kw.update(f1=2, f11=2, f12=2)
                yield CandidateAssignment(t, s1=s1, s2=s2, f2=2, **kw)


def _sort_key(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True)


@dataclass
class SearchResult:
    box: SearchBox = field(repr=False)
    survivors: list[dict]
    refutations: int
    tasks: int
    expected: list[str]

    @property
    def names(self) -> list[str]:
        return [r["name"] for r in self.survivors]

    @property
    def anomalies(self) -> list[dict]:
        return [r for r in self.survivors if r["name"] is None or r["issues"]]

    @property
    def resolutions(self) -> list[ResolutionGraph]:
        return [ResolutionGraph.from_dict(r["resolution"]) for r in self.survivors]

    @property
    def ok(self) -> bool:
        return not self.anomalies and sorted(self.names, key=str) == sorted(self.expected)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "expected": self.expected,
            "survivors": self.survivors,
            "tasks": self.tasks,
            "iii1b_refuted": self.refutations,
        }


def bounded_search(
    max_chain_len: int = 6,
    max_weight: int = 9,
    max_k: int = 3,
    workers: int = 1,
    box: SearchBox | None = None,
) -> SearchResult:
    box = box or SearchBox.from_bounds(max_chain_len, max_weight, max_k)
    tasks = tasks_for(box)
    records: list[dict] = []
    if workers > 1 and len(tasks) > 1:
        chunks = [tasks[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, [(c, box) for c in chunks]):
                records += part
    else:
        records = _run_chunk((tasks, box))
    unique = {_sort_key(r): r for r in records}
    survivors = [unique[k] for k in sorted(unique)]
    refuted = 0
    if not box.is_empty():
        for cand in _refutation_candidates(box):
            refute_III1b(cand)
            refuted += 1
    return SearchResult(box, survivors, refuted, len(tasks), expected_survivors(box))
