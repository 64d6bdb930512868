"""Resolution data of the Orevkov curves C(4m) and C(4m)*."""

from __future__ import annotations

from dataclasses import dataclass

from .chains import Chain, adjoint, discriminant, repeat, star, star_power, tw
from .contraction import Component, IntersectionConfig
from .resolution import (
    ResolutionError,
    ResolutionGraph,
    a_id,
    assemble_graph,
    b_id,
    cusp_profile,
    resolution_trace,
    sprouting_counts,
)
from .report import Report

PLAIN, STAR = "plain", "star"
VARIANTS = (PLAIN, STAR)
C_PRIME_SELF = -2


@dataclass(frozen=True)
class OrevkovSpec:
    m: int
    variant: str = PLAIN

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @property
    def name(self) -> str:
        return f"C{4 * self.m}" + ("*" if self.variant == STAR else "")


@dataclass(frozen=True)
class OrevkovData:
    spec: OrevkovSpec
    resolution: ResolutionGraph
    e0_attachments: tuple[str, str]


def _tail(variant: str) -> tuple[Chain, Chain]:
    # the last A and B: [4], [2,2] for the plain curve, [7], [2_5] for the star one
    return ((4,), tw(2)) if variant == PLAIN else ((7,), tw(5))


def orevkov_resolution(spec: OrevkovSpec) -> OrevkovData:
    a_last, b_last = _tail(spec.variant)
    if spec.m == 1:
        A = (tw(6) + a_last,)
        B = (b_last,)
        res = ResolutionGraph(A, B, C_PRIME_SELF)
        return OrevkovData(spec, res, (a_id(1, 1), a_id(1, len(A[0]))))
    A = (star_power(tw(6), spec.m), a_last)
    B = (repeat(7, spec.m - 1), b_last)
    res = ResolutionGraph(A, B, C_PRIME_SELF)
    return OrevkovData(spec, res, (a_id(1, 1), b_id(1, len(B[0]))))


def with_e0(data: OrevkovData) -> IntersectionConfig:
    """The resolution graph plus a (-1)-curve E0 meeting the two attachment curves."""
    cfg = assemble_graph(data.resolution)
    x, y = data.e0_attachments
    comps = [cfg.component(v) for v in cfg.ids] + [Component("E0", -1)]
    return IntersectionConfig(comps, cfg.pairs() + [(x, "E0", 1), (y, "E0", 1)])


def cycle_rank(cfg: IntersectionConfig) -> int:
    """First Betti number of the divisor part's dual graph."""
    div = cfg.divisor_ids
    edges = [(a, b) for a, b, _ in cfg.pairs() if a in div and b in div]
    parent = {v: v for v in div}

    def root(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    loops = 0
    for a, b in edges:
        ra, rb = root(a), root(b)
        if ra == rb:
            loops += 1
        else:
            parent[ra] = rb
    return loops


def verify_orevkov(spec: OrevkovSpec) -> Report:
    data = orevkov_resolution(spec)
    res = data.resolution
    rep = Report(f"Orevkov curve {spec.name} (m={spec.m}, {spec.variant})")
    rep.values["A"] = [list(a) for a in res.A]
    rep.values["B"] = [list(b) for b in res.B]
    rep.values["o"] = list(res.o)
    expected_o = [7] if spec.m == 1 else [6, 1]
    rep.add("o-values", list(res.o) == expected_o, f"expected {expected_o}")
    rep.add("d(A1) = d(A1*)", discriminant(res.A[0]) == discriminant(adjoint(res.A[0])))
    try:
        final, trace = resolution_trace(res)
        prof = cusp_profile(res, trace)
        counts = sprouting_counts(res, trace)
    except (ResolutionError, RuntimeError, ValueError) as exc:
        rep.add("contraction", False, str(exc))
        return rep
    rep.values.update(degree=prof.degree, multiplicities=list(prof.multiplicities), genus_defect=prof.genus_defect)
    rep.values["phases"] = [list(c) for c in counts]
    rep.add("unique contraction", True, f"{len(trace)} steps")
    rep.add("perfect square", final.self_int("C") == prof.degree ** 2, f"C^2 -> {final.self_int('C')}")
    rep.add("genus defect 0", prof.genus_defect == 0)
    rep.add("degree^2 = C'^2 + sum m^2", prof.degree ** 2 == res.c_prime_self + sum(m * m for m in prof.multiplicities))
    loops = cycle_rank(with_e0(data))
    rep.add("E0 closes exactly one loop", loops == 1, f"attached at {data.e0_attachments[0]}, {data.e0_attachments[1]}")
    if spec.m >= 2:
        # m = 1 has A1 = [TW6, a], so the recursion starts from TW6 itself
        prev = tw(6) if spec.m == 2 else orevkov_resolution(OrevkovSpec(spec.m - 1, spec.variant)).resolution.A[0]
        rep.add("A1 = TW6 * A1(m-1)", res.A[0] == star(tw(6), prev))
    return rep
