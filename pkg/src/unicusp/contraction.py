"""Blowing-down and blowing-up on SNC intersection configurations.

An :class:`IntersectionConfig` is a finite set of curves with their
self-intersection numbers and pairwise intersection numbers.  Curves of kind
``divisor`` form an SNC divisor (pairings 0/1, no cycles); at most one curve of
kind ``marked`` is carried along and pushed forward by every contraction.

Self-intersections here are the *true* values (a (-2)-curve has ``self_int ==
-2``).  :func:`chain_config` and :func:`config_chain` are the only places where
bracket notation is converted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

DIVISOR = "divisor"
MARKED = "marked"

SPROUTING = "sprouting"
SUBDIVISIONAL = "subdivisional"
INITIAL = "initial"


class ContractionError(ValueError):
    """A component cannot be blown down (or a site cannot be blown up)."""


class ContractionFailure(RuntimeError):
    """An iterated contraction got stuck or violated uniqueness.

    ``trace`` holds the steps performed before the failure and ``config`` the
    configuration at the point of failure.
    """

    def __init__(self, message: str, trace: Sequence["BlowdownStep"], config: "IntersectionConfig"):
        super().__init__(message)
        self.trace = list(trace)
        self.config = config


@dataclass(frozen=True)
class Component:
    id: str
    self_int: int
    kind: str = DIVISOR


def _key(a: str, b: str) -> frozenset:
    if a == b:
        raise ValueError(f"no pairing of {a!r} with itself; use self_int")
    return frozenset((a, b))


class IntersectionConfig:
    """Immutable intersection configuration.

    Components keep their insertion order, which is used for every
    deterministic listing (serialization, DOT, chain read-back).
    """

    __slots__ = ("_comps", "_pairs", "_order", "_adj")

    def __init__(self, components: Iterable[Component], pairs: Mapping[tuple[str, str], int] | Iterable = ()):
        comps: dict[str, Component] = {}
        for c in components:
            if c.id in comps:
                raise ValueError(f"duplicate component id {c.id!r}")
            if c.kind not in (DIVISOR, MARKED):
                raise ValueError(f"unknown component kind {c.kind!r}")
            comps[c.id] = c
        if sum(c.kind == MARKED for c in comps.values()) > 1:
            raise ValueError("at most one marked curve is supported")
        items = pairs.items() if isinstance(pairs, Mapping) else ((p[:2], p[2]) for p in pairs)
        table: dict[frozenset, int] = {}
        for (a, b), n in items:
            if a not in comps or b not in comps:
                raise ValueError(f"pairing refers to unknown component: {a!r}, {b!r}")
            if n < 0:
                raise ValueError("intersection numbers of distinct curves are non-negative")
            if n:
                table[_key(a, b)] = table.get(_key(a, b), 0) + n
        self._init(comps, table)

    def _init(self, comps: dict, table: dict) -> None:
        self._comps = comps
        self._pairs = table
        self._order = {cid: i for i, cid in enumerate(comps)}
        adj: dict[str, dict[str, int]] = {cid: {} for cid in comps}
        for key, n in table.items():
            a, b = key
            adj[a][b] = n
            adj[b][a] = n
        self._adj = adj


    # -- queries ---------------------------------------------------------
    @property
    def ids(self) -> list[str]:
        return list(self._comps)

    @property
    def divisor_ids(self) -> list[str]:
        return [c.id for c in self._comps.values() if c.kind == DIVISOR]

    @property
    def marked_id(self) -> str | None:
        return next((c.id for c in self._comps.values() if c.kind == MARKED), None)

    def __contains__(self, cid: str) -> bool:
        return cid in self._comps

    def __len__(self) -> int:
        return len(self._comps)

    def component(self, cid: str) -> Component:
        return self._comps[cid]

    def self_int(self, cid: str) -> int:
        return self._comps[cid].self_int

    def kind(self, cid: str) -> str:
        return self._comps[cid].kind

    def pairing(self, a: str, b: str) -> int:
        if a == b:
            raise ValueError(f"no pairing of {a!r} with itself; use self_int")
        row = self._adj.get(a)
        return row.get(b, 0) if row else 0

    def neighbours(self, cid: str, divisor_only: bool = False) -> list[str]:
        row = self._adj.get(cid, {})
        out = sorted(row, key=self._order.__getitem__)
        if divisor_only:
            out = [o for o in out if self._comps[o].kind == DIVISOR]
        return out

    def degree(self, cid: str) -> int:
        """Divisor-degree: number of divisor neighbours (marked curve excluded)."""
        return len(self.neighbours(cid, divisor_only=True))

    def pairs(self) -> list[tuple[str, str, int]]:
        out = []
        for key, n in self._pairs.items():
            a, b = sorted(key, key=self._order.__getitem__)
            out.append((a, b, n))
        out.sort(key=lambda p: (self._order[p[0]], self._order[p[1]]))
        return out

    def matrix(self) -> list[list[int]]:
        """Intersection matrix in component order."""
        ids = self.ids
        return [[self.self_int(a) if a == b else self.pairing(a, b) for b in ids] for a in ids]

    def is_snc(self) -> bool:
        """Divisor part has pairings in {0,1} and no cycles."""
        div = self.divisor_ids
        edges = [(a, b, n) for a, b, n in self.pairs() if self.kind(a) == DIVISOR and self.kind(b) == DIVISOR]
        if any(n > 1 for *_, n in edges):
            return False
        parent = {d: d for d in div}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b, _ in edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True

    # -- construction helpers -------------------------------------------
    def replace(self, components: Iterable[Component] | None = None, pairs=None) -> "IntersectionConfig":
        return IntersectionConfig(
            self._comps.values() if components is None else components,
            {tuple(sorted(k)): v for k, v in self._pairs.items()} if pairs is None else pairs,
        )

    def without(self, cid: str) -> "IntersectionConfig":
        comps = [c for c in self._comps.values() if c.id != cid]
        pairs = [(a, b, n) for a, b, n in self.pairs() if cid not in (a, b)]
        return IntersectionConfig(comps, pairs)

    def with_self(self, cid: str, value: int) -> "IntersectionConfig":
        comps = [Component(c.id, value, c.kind) if c.id == cid else c for c in self._comps.values()]
        return IntersectionConfig(comps, self.pairs())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntersectionConfig):
            return NotImplemented
        return set(self._comps.values()) == set(other._comps.values()) and self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash((frozenset(self._comps.values()), frozenset(self._pairs.items())))

    def __repr__(self) -> str:
        comps = ", ".join(f"{c.id}:{c.self_int}" + ("*" if c.kind == MARKED else "") for c in self._comps.values())
        return f"IntersectionConfig({comps}; {self.pairs()})"

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "components": [{"id": c.id, "self": c.self_int, "kind": c.kind} for c in self._comps.values()],
            "pairs": [[a, b, n] for a, b, n in self.pairs()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "IntersectionConfig":
        try:
            comps = [Component(str(c["id"]), int(c["self"]), c.get("kind", DIVISOR)) for c in data["components"]]
            pairs = [(str(a), str(b), int(n)) for a, b, n in data.get("pairs", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed configuration: {exc}") from exc
        return cls(comps, pairs)

    @classmethod
    def from_json(cls, text: str) -> "IntersectionConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class BlowdownStep:
    contracted_id: str
    pairings: tuple[tuple[str, int], ...]
    classification: str
    curve_multiplicity: int = 0

    def to_dict(self) -> dict:
        return {
            "contracted": self.contracted_id,
            "pairings": [list(p) for p in self.pairings],
            "classification": self.classification,
            "multiplicity": self.curve_multiplicity,
        }


def _classify(degree: int) -> str:
    return {0: INITIAL, 1: SPROUTING, 2: SUBDIVISIONAL}[degree]


def contractible(config: IntersectionConfig, cid: str) -> bool:
    if cid not in config or config.kind(cid) != DIVISOR or config.self_int(cid) != -1:
        return False
    nbrs = config.neighbours(cid, divisor_only=True)
    if len(nbrs) > 2 or any(config.pairing(cid, n) != 1 for n in nbrs):
        return False
    return not (len(nbrs) == 2 and config.pairing(*nbrs) != 0)


def blow_down(config: IntersectionConfig, cid: str) -> tuple[IntersectionConfig, BlowdownStep]:
    """Contract the (-1)-curve ``cid`` and push every other curve forward."""
    old = config._comps
    c = old.get(cid)
    if c is None:
        raise ContractionError(f"no component {cid!r}")
    if c.kind != DIVISOR:
        raise ContractionError(f"{cid!r} is the marked curve; only divisor components are contracted")
    if c.self_int != -1:
        raise ContractionError(f"{cid!r} has self-intersection {c.self_int}, not -1")
    if not contractible(config, cid):
        raise ContractionError(f"contracting {cid!r} would break the SNC condition")
    m = config._adj[cid]
    nbrs = sorted(m, key=config._order.__getitem__)
    comps = dict(old)
    del comps[cid]
    for n in nbrs:
        o = old[n]
        comps[n] = Component(n, o.self_int + m[n] ** 2, o.kind)
    pairs = dict(config._pairs)
    adj = dict(config._adj)
    del adj[cid]
    for n in nbrs:
        del pairs[frozenset((cid, n))]
        adj[n] = {k: v for k, v in adj[n].items() if k != cid}
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1 :]:
            key = frozenset((a, b))
            pairs[key] = pairs.get(key, 0) + m[a] * m[b]
            adj[a][b] = adj[b][a] = pairs[key]
    order = dict(config._order)
    del order[cid]
    marked = config.marked_id
    step = BlowdownStep(
        contracted_id=cid,
        pairings=tuple((n, m[n]) for n in nbrs),
        classification=_classify(sum(old[n].kind == DIVISOR for n in nbrs)),
        curve_multiplicity=m.get(marked, 0) if marked else 0,
    )
    out = IntersectionConfig.__new__(IntersectionConfig)
    out._comps, out._pairs, out._order, out._adj = comps, pairs, order, adj
    return out, step


def blow_up(config: IntersectionConfig, site, new_id: str | None = None) -> IntersectionConfig:
    """Blow up a general point of a component (``site`` an id) or a node (``site`` an edge)."""
    if new_id is None:
        n = 1
        while f"X{n}" in config:
            n += 1
        new_id = f"X{n}"
    if new_id in config:
        raise ContractionError(f"id {new_id!r} already in use")
    comps = [config.component(i) for i in config.ids]
    pairs = {(a, b): n for a, b, n in config.pairs()}
    if isinstance(site, str):
        if site not in config or config.kind(site) != DIVISOR:
            raise ContractionError(f"invalid sprouting site {site!r}")
        comps = [Component(c.id, c.self_int - 1, c.kind) if c.id == site else c for c in comps]
        pairs[(site, new_id)] = 1
    else:
        a, b = site
        if a not in config or b not in config or a == b:
            raise ContractionError(f"invalid edge {site!r}")
        if config.kind(a) != DIVISOR or config.kind(b) != DIVISOR or config.pairing(a, b) != 1:
            raise ContractionError(f"{site!r} is not a divisor node")
        comps = [Component(c.id, c.self_int - 1, c.kind) if c.id in (a, b) else c for c in comps]
        pairs.pop((a, b), None)
        pairs.pop((b, a), None)
        pairs[(a, new_id)] = 1
        pairs[(new_id, b)] = 1
    comps.append(Component(new_id, -1, DIVISOR))
    return IntersectionConfig(comps, pairs)


def replay_blowup(config: IntersectionConfig, step: BlowdownStep) -> IntersectionConfig:
    """Undo ``step`` on the configuration it produced, including the marked curve."""
    comps = [config.component(i) for i in config.ids]
    m = dict(step.pairings)
    pairs = {(a, b): n for a, b, n in config.pairs()}
    nbrs = list(m)
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1 :]:
            for key in ((a, b), (b, a)):
                if key in pairs:
                    pairs[key] -= m[a] * m[b]
                    if pairs[key] == 0:
                        del pairs[key]
                    break
    comps = [Component(c.id, c.self_int - m.get(c.id, 0) ** 2, c.kind) for c in comps]
    comps.append(Component(step.contracted_id, -1, DIVISOR))
    for n, v in m.items():
        pairs[(n, step.contracted_id)] = v
    return IntersectionConfig(comps, pairs)


def _minus_one(config: IntersectionConfig, among: Iterable[str] | None = None) -> list[str]:
    pool = config.divisor_ids if among is None else [i for i in config.divisor_ids if i in set(among)]
    return [i for i in pool if config.self_int(i) == -1]


def contract_subset(
    config: IntersectionConfig,
    ids: Iterable[str],
    assert_unique: bool = True,
    allow_partial: bool = False,
) -> tuple[IntersectionConfig, list[BlowdownStep]]:
    """Blow down the components ``ids`` one (-1)-curve at a time.

    With ``assert_unique`` every step must find exactly one (-1)-curve among
    the remaining ``ids``.  With ``allow_partial`` the process stops quietly
    once nothing is contractible; otherwise that is a failure.
    """
    remaining = [i for i in config.ids if i in set(ids)]
    trace: list[BlowdownStep] = []
    while remaining:
        cands = _minus_one(config, remaining)
        if assert_unique and len(cands) > 1:
            raise ContractionFailure(f"(-1)-curve not unique: {cands}", trace, config)
        cands = [c for c in cands if contractible(config, c)]
        if not cands:
            if allow_partial:
                break
            raise ContractionFailure(f"stuck with {remaining}", trace, config)
        config, step = blow_down(config, cands[0])
        trace.append(step)
        remaining.remove(cands[0])
    return config, trace


def contract_all(config: IntersectionConfig, assert_unique: bool = True) -> tuple[IntersectionConfig, list[BlowdownStep]]:
    """Contract the whole divisor part to a point; returns the final config and the trace."""
    if not config.divisor_ids:
        raise ContractionFailure("nothing to contract", [], config)
    return contract_subset(config, config.divisor_ids, assert_unique=assert_unique)


# -- linear chains ----------------------------------------------------------

def chain_config(entries: Sequence[int], prefix: str = "E") -> IntersectionConfig:
    """Configuration of the linear chain ``entries`` (bracket notation), ids ``E1..Er``."""
    comps = [Component(f"{prefix}{i + 1}", -a) for i, a in enumerate(entries)]
    pairs = [(f"{prefix}{i + 1}", f"{prefix}{i + 2}", 1) for i in range(len(entries) - 1)]
    return IntersectionConfig(comps, pairs)


def config_chain(config: IntersectionConfig) -> tuple[int, ...] | None:
    """Read the divisor part back as a chain (component order), or ``None`` if not linear."""
    ids = config.divisor_ids
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            want = 1 if ids.index(b) == i + 1 else 0
            if config.pairing(a, b) != want:
                return None
    return tuple(-config.self_int(i) for i in ids)


@dataclass
class ShrinkResult:
    steps: list[BlowdownStep]
    survivors: list[str]
    final: IntersectionConfig = field(repr=False)
    stages: list[IntersectionConfig] = field(default_factory=list, repr=False)  # after each step


def shrink_chain(
    entries: Sequence[int], target: Sequence[int], assert_unique: bool = True
) -> ShrinkResult:
    """Blow down (-1)-curves of the chain ``entries`` until it becomes ``target``.

    The terminal chain is compared in either orientation.  With
    ``assert_unique`` every intermediate stage must contain exactly one
    (-1)-curve among the components that are eventually contracted (the
    survivors may themselves be (-1)-curves, as in ``[1,1] -> [0]``).
    Raises :class:`ContractionFailure` otherwise.
    """
    target = tuple(target)
    start = chain_config(entries)
    found = _shrink_search(start, target, [], [])
    if found is None:
        raise ContractionFailure(f"{list(entries)} does not shrink to {list(target)}", [], start)
    trace, configs = found
    final = configs[-1] if configs else start
    if assert_unique:
        survivors = set(final.divisor_ids)
        for i, (step, config) in enumerate(zip(trace, [start] + configs)):
            exc = [c for c in _minus_one(config) if c not in survivors]
            if exc != [step.contracted_id]:
                raise ContractionFailure(f"(-1)-curve not unique at step {i}: {exc}", trace[:i], config)
    return ShrinkResult(trace, final.divisor_ids, final, configs)


def _shrink_search(config, target, trace, configs):
    if len(config.divisor_ids) == len(target):
        got = config_chain(config)
        if got is not None and (got == target or got[::-1] == target):
            return trace, configs
        return None
    if len(config.divisor_ids) < len(target):
        return None
    for c in _minus_one(config):
        if contractible(config, c):
            nxt, step = blow_down(config, c)
            found = _shrink_search(nxt, target, trace + [step], configs + [nxt])
            if found is not None:
                return found
    return None


# -- DOT ----------------------------------------------------------------------

def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(config: IntersectionConfig, name: str = "G") -> str:
    """Graphviz rendering of the dual graph (stable order, weights in labels)."""
    lines = [f"digraph {_dot_id(name)} {{", "  edge [dir=none];"]
    for cid in config.ids:
        c = config.component(cid)
        shape = "box" if c.kind == MARKED else "ellipse"
        lines.append(f"  {_dot_id(cid)} [label={_dot_id(f'{cid} ({c.self_int})')}, shape={shape}];")
    for a, b, n in config.pairs():
        attr = f" [label={_dot_id(str(n))}]" if n != 1 else ""
        lines.append(f"  {_dot_id(a)} -> {_dot_id(b)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
