"""Dual-graph templates of ``D + E`` for the fibration classification.

``D`` is the boundary divisor, ``C'`` the strict transform of the curve and
the ``E`` curves are the fiber components outside ``D``.  A layout is a list
of paths; path entries are scalar vertices (``S1``, ``F2'``, ...) or chain
names (``T21``, ...) that expand to their components, possibly none.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .chains import Chain
from .contraction import (
    DIVISOR,
    MARKED,
    Component,
    ContractionFailure,
    ContractionError,
    IntersectionConfig,
    contract_subset,
)

III1A = "III1a"
III1B = "III1b"
III1A_IV2A = "III1a_IV2a"
III1A_IV2B = "III1a_IV2b"
III1B_IV2A = "III1b_IV2a"
III1B_IV2B = "III1b_IV2b"
TEMPLATES = (III1A, III1B, III1A_IV2A, III1A_IV2B, III1B_IV2A, III1B_IV2B)

CHAIN_NAMES = ("T11", "T12", "T21", "T22", "T23", "T24")
E_CURVES = ("E1", "E21", "E22")

_BASE = [["C'", "D0"], ["D0", "S2"], ["D0", "F0'", "S1"]]
_III1A = [["S1", "T21", "E21", "T22", "F2'", "T23", "E22", "T24", "S2"], ["S2", "F2'"]]
_III1B = [["S1", "F2'"], ["S2", "T21", "E21", "T22", "F2'", "T23", "E22", "T24", "S2"]]
_IV2A = [["S1", "F1'", "T11", "E1", "T12", "F11", "F12", "S2"]]
_IV2B = [["S1", "F1'", "F11", "F12"], ["F11", "T11", "E1", "T12", "S2"]]

LAYOUTS: dict[str, list[list[str]]] = {
    III1A: _BASE + _III1A,
    III1B: _BASE + _III1B,
    III1A_IV2A: _BASE + _III1A + _IV2A,
    III1A_IV2B: _BASE + _III1A + _IV2B,
    III1B_IV2A: _BASE + _III1B + _IV2A,
    III1B_IV2B: _BASE + _III1B + _IV2B,
}


def has_iv2(template: str) -> bool:
    return "IV2" in template


def is_iii1b(template: str) -> bool:
    return template.startswith(III1B)


def chains_of(template: str) -> tuple[str, ...]:
    return tuple(c for c in CHAIN_NAMES if has_iv2(template) or not c.startswith("T1"))


def scalars_of(template: str) -> tuple[str, ...]:
    out = ["s1", "s2", "f2"]
    if has_iv2(template):
        out += ["f1", "f11", "f12"]
    return tuple(out)


_VERTEX_OF = {"s1": "S1", "s2": "S2", "f1": "F1'", "f2": "F2'", "f11": "F11", "f12": "F12"}


@dataclass(frozen=True)
class CandidateAssignment:
    """Weights of one template instance; ``s_i = -S_i^2``, ``f_i = -(F_i')^2``."""

    template: str
    s1: int
    s2: int
    f2: int
    T21: Chain = ()
    T22: Chain = ()
    T23: Chain = ()
    T24: Chain = ()
    f1: int | None = None
    f11: int | None = None
    f12: int | None = None
    T11: Chain = ()
    T12: Chain = ()
    k12: int | None = None
    k34: int | None = None

    def __post_init__(self):
        if self.template not in TEMPLATES:
            raise ValueError(f"unknown template {self.template!r}")
        for name in CHAIN_NAMES:
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if has_iv2(self.template) and None in (self.f1, self.f11, self.f12):
            raise ValueError(f"{self.template} needs f1, f11, f12")
        if not has_iv2(self.template) and (self.T11 or self.T12):
            raise ValueError("T11/T12 only exist with a IV2 fiber")

    def with_(self, **kw) -> "CandidateAssignment":
        return replace(self, **kw)

    def weights(self) -> dict[str, int]:
        w = {"C'": 2, "D0": 1, "F0'": 2}
        for s in scalars_of(self.template):
            w[_VERTEX_OF[s]] = getattr(self, s)
        return w

    def to_dict(self) -> dict:
        d = {"template": self.template}
        for s in scalars_of(self.template):
            d[s] = getattr(self, s)
        for c in chains_of(self.template):
            d[c] = list(getattr(self, c))
        d["k12"], d["k34"] = self.k12, self.k34
        return d


def chain_ids(name: str, chain: Chain) -> list[str]:
    return [f"{name}.{j}" for j in range(1, len(chain) + 1)]


def build_config(
    cand: CandidateAssignment,
    include_e: bool = True,
    marked: str | None = "C'",
    drop: tuple[str, ...] = (),
) -> IntersectionConfig:
    """Concrete configuration of ``D`` (plus the ``E`` curves if asked).

    ``marked`` names the one curve the engine must never contract; every
    other vertex, ``C'`` included, is of divisor kind.
    """
    weights = cand.weights()
    comps: dict[str, int] = {}
    pairs: list[tuple[str, str, int]] = []
    for path in LAYOUTS[cand.template]:
        seq: list[str] = []
        for tok in path:
            if tok in CHAIN_NAMES:
                ch = getattr(cand, tok)
                for vid, a in zip(chain_ids(tok, ch), ch):
                    comps[vid] = -a
                    seq.append(vid)
            elif tok in E_CURVES:
                if include_e:
                    comps[tok] = -1
                seq.append(tok)
            else:
                comps[tok] = -weights[tok]
                seq.append(tok)
        for u, v in zip(seq, seq[1:]):
            pairs.append((u, v, 1))
    keep = {v for v in comps if v not in drop}
    pairs = [(u, v, n) for u, v, n in pairs if u in keep and v in keep]
    merged: dict[frozenset, int] = {}
    for u, v, n in pairs:
        merged[frozenset((u, v))] = merged.get(frozenset((u, v)), 0) + n
    components = [Component(v, comps[v], MARKED if v == marked else DIVISOR) for v in comps if v in keep]
    return IntersectionConfig(components, [(*sorted(k), n) for k, n in merged.items()])


def divisor_config(cand: CandidateAssignment) -> IntersectionConfig:
    """The boundary ``D`` with ``C'`` as the marked curve."""
    return build_config(cand, include_e=False, marked="C'")


def e_neighbours(cand: CandidateAssignment, e: str) -> list[str]:
    cfg = build_config(cand, include_e=True, marked=None)
    return cfg.neighbours(e)


# -- the morphism phi onto a Hirzebruch surface -----------------------------------

def _group(cand: CandidateAssignment, names: list[str]) -> list[str]:
    out = []
    for n in names:
        out += chain_ids(n, getattr(cand, n)) if n in CHAIN_NAMES else [n]
    return out


def contraction_groups(cand: CandidateAssignment) -> list[tuple[str, list[str]]]:
    """``phi`` as a sequence of group contractions, each to a point."""
    t = cand.template
    groups = []
    if is_iii1b(t):
        groups.append(("phi2", _group(cand, ["T21", "E21", "T22", "T23", "E22", "T24"])))
    else:
        groups.append(("phi22", _group(cand, ["T23", "E22", "T24"])))
        groups.append(("phi21", _group(cand, ["T21", "E21", "T22"])))
    if has_iv2(t):
        groups.append(("phi1", _group(cand, ["T11", "E1", "T12", "F11", "F12"])))
    groups.append(("phi0", ["D0", "C'"]))
    return groups


@dataclass
class PhiResult:
    section: str
    self_int: int | None
    complete: bool
    trace: list = field(default_factory=list)
    error: str = ""


def phi_self_intersection(cand: CandidateAssignment, section: str, allow_partial: bool = False) -> PhiResult:
    """Push ``S1`` or ``S2`` forward along ``phi``, group by group.

    The section is the marked curve.  For ``S1`` the other section is left
    out, which keeps the divisor part a forest.
    """
    other = "S2" if section == "S1" else "S1"
    drop = (other,) if section == "S1" else ()
    cfg = build_config(cand, include_e=True, marked=section, drop=drop)
    trace = []
    for name, ids in contraction_groups(cand):
        ids = [v for v in ids if v in cfg]
        try:
            cfg, steps = contract_subset(cfg, ids, assert_unique=False, allow_partial=allow_partial)
        except (ContractionFailure, ContractionError) as exc:
            return PhiResult(section, None, False, trace, f"{name}: {exc}")
        trace += steps
    complete = all(v not in cfg for _, ids in contraction_groups(cand) for v in ids)
    return PhiResult(section, cfg.self_int(section), complete, trace)


def iii1b_certificate(cand: CandidateAssignment) -> PhiResult:
    """Contract as much of the fibers as possible and report ``phi(S1)^2``."""
    return phi_self_intersection(cand, "S1", allow_partial=True)


def from_dict(data: Mapping) -> CandidateAssignment:
    kw = dict(data)
    for c in CHAIN_NAMES:
        if c in kw:
            kw[c] = tuple(kw[c])
    return CandidateAssignment(**kw)
