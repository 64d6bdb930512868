import json
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unicusp.chains import adjoint, tw
from unicusp.classification import (
    REFUTED,
    Rejection,
    SearchBox,
    bounded_search,
    check_III1a_fiber,
    check_IV2a_fiber,
    check_IV2b_fiber,
    derive_resolution,
    e22_attachments,
    orevkov_candidate,
    phi_check,
    refute_III1b,
)
from unicusp.orevkov import PLAIN, STAR, OrevkovSpec, orevkov_resolution
from unicusp.resolution import cusp_profile, parse_resolution, validate_resolution
from unicusp.templates import (
    III1A,
    III1A_IV2A,
    III1A_IV2B,
    III1B,
    III1B_IV2A,
    CandidateAssignment,
    chains_of,
    divisor_config,
    has_iv2,
    phi_self_intersection,
)

C4_DATA = CandidateAssignment(III1A, s1=2, s2=4, f2=2, T23=tw(5))
C4_STAR_DATA = CandidateAssignment(III1A_IV2B, s1=2, s2=7, f2=2, T23=tw(5), f1=2, f11=2, f12=2, k34=6)


# -- fiber identities ---------------------------------------------------------------

def test_iii1a_case_i_accepted():
    assert check_III1a_fiber(C4_DATA) == (1, 6)
    assert phi_check(C4_DATA) == (-1, 4)


def test_iii1a_case_ii_accepted():
    # T24 = [7]: [F2', T23] is the adjoint of [7, 7]
    cand = C4_DATA.with_(T23=(2, 2, 2, 2, 3, 2, 2, 2, 2, 2), T24=(7,))
    assert adjoint((2,) + cand.T23) == (7, 7)
    assert check_III1a_fiber(cand) == (1, 6)


def test_iii1a_case_ii_with_short_t23_rejected():
    cand = C4_DATA.with_(T24=(7,), s2=7)
    with pytest.raises(Rejection) as info:
        check_III1a_fiber(cand)
    assert info.value.identity.startswith("[F2',T23]*")


def test_iii1a_s2_relation():
    with pytest.raises(Rejection) as info:
        check_III1a_fiber(C4_DATA.with_(s2=3))
    assert info.value.identity == "k34 = s2 + 2"


def test_iii1a_other_failures():
    with pytest.raises(Rejection, match=r"\[S1,T21\]"):
        check_III1a_fiber(C4_DATA.with_(T22=(2,)))
    with pytest.raises(Rejection, match="T23 nonempty"):
        check_III1a_fiber(CandidateAssignment(III1A, s1=2, s2=4, f2=3, T24=(2,)))
    with pytest.raises(Rejection, match="template"):
        check_III1a_fiber(CandidateAssignment(III1B, s1=2, s2=4, f2=2, T23=tw(5)))


def test_iv2b_accepts_c4_star_data():
    check_IV2b_fiber(C4_STAR_DATA)
    check_III1a_fiber(C4_STAR_DATA)


def test_iv2b_rejections():
    with pytest.raises(Rejection):
        check_IV2b_fiber(C4_STAR_DATA.with_(s2=6))  # s2 = k34
    with pytest.raises(Rejection, match=r"T11 = T12 = \[\]|\[F11,T11\]"):
        check_IV2b_fiber(C4_STAR_DATA.with_(T12=(2,)))
    with pytest.raises(Rejection, match="F1'"):
        check_IV2b_fiber(C4_STAR_DATA.with_(f1=3))
    with pytest.raises(Rejection, match="template"):
        check_IV2b_fiber(C4_DATA)


def test_iv2a_identity():
    ok = CandidateAssignment(III1A_IV2A, s1=2, s2=5, f2=2, T23=tw(5), f1=3, T11=(), T12=(), f11=2, f12=2)
    check_IV2a_fiber(ok)
    with pytest.raises(Rejection):
        check_IV2a_fiber(ok.with_(f12=3))


# -- III1b refutation -----------------------------------------------------------------

def test_minimal_iii1b_refuted():
    ref = refute_III1b(CandidateAssignment(III1B, s1=2, s2=3, f2=2))
    assert ref.ok and ref.phi_s1 <= -2


def test_iii1b_iv2a_refuted():
    cand = CandidateAssignment(III1B_IV2A, s1=4, s2=3, f2=2, f1=2, f11=2, f12=2, T11=(3,), T21=(2,))
    assert refute_III1b(cand).ok


def test_refute_requires_iii1b():
    with pytest.raises(Rejection):
        refute_III1b(C4_DATA)


_chain = st.lists(st.integers(2, 9), max_size=4).map(tuple)
_weight = st.integers(2, 9)


@st.composite
def iii1b_candidates(draw):
    t = draw(st.sampled_from(REFUTED))
    kw = {c: draw(_chain) for c in chains_of(t)}
    if has_iv2(t):
        kw.update(f1=draw(_weight), f11=draw(_weight), f12=draw(_weight))
    return CandidateAssignment(t, s1=draw(_weight), s2=draw(st.integers(3, 9)), f2=draw(_weight), **kw)


@settings(max_examples=60, deadline=None)
@given(iii1b_candidates())
def test_every_iii1b_candidate_refuted(cand):
    assert refute_III1b(cand).phi_s1 <= -2


# -- identities versus the engine -------------------------------------------------------

@st.composite
def iii1a_solutions(draw):
    """Instances built from the adjoint identities alone."""
    s1 = draw(_weight)
    t21 = tuple(draw(st.lists(st.integers(2, 6), max_size=3)))
    adj = adjoint((s1,) + t21)
    t22, k12 = adj[:-1], adj[-1] - 1
    s2 = draw(st.integers(3, 7))
    t24 = tuple(draw(st.lists(st.integers(2, 7), max_size=2)))
    ft = adjoint(t24 + (s2 + 3,) + tw(k12 - 1))
    return CandidateAssignment(III1A, s1=s1, s2=s2, f2=ft[0], T21=t21, T22=t22, T23=ft[1:], T24=t24)


@settings(max_examples=80, deadline=None)
@given(iii1a_solutions())
def test_identities_imply_engine_values(cand):
    check_III1a_fiber(cand, engine=False)
    assert phi_self_intersection(cand, "S2").self_int == 4
    assert phi_self_intersection(cand, "S1").self_int == -1


@settings(max_examples=80, deadline=None)
@given(iii1a_solutions(), st.sampled_from(["s1", "s2", "f2", "T22", "T23"]), st.integers(1, 2))
def test_perturbed_identities_agree_with_engine(cand, field, delta):
    v = getattr(cand, field)
    bad = cand.with_(**{field: v + delta if isinstance(v, int) else v + (2,) * delta})
    try:
        check_III1a_fiber(bad, engine=False)
    except Rejection:
        return
    assert phi_check(bad) == (-1, 4)


# -- resolutions of the Orevkov instances -----------------------------------------------

@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("variant", [PLAIN, STAR])
def test_derive_resolution_orevkov(m, variant):
    spec = OrevkovSpec(m, variant)
    cand = orevkov_candidate(spec)
    res = derive_resolution(cand.template, cand)
    assert res == orevkov_resolution(spec).resolution
    assert validate_resolution(res.A, res.B) == list(res.o)
    assert cusp_profile(res).genus_defect == 0
    assert e22_attachments(cand) == tuple(sorted(orevkov_resolution(spec).e0_attachments))


# -- bounded search ----------------------------------------------------------------------

def test_small_search():
    res = bounded_search(2, 7, 1)
    assert sorted(res.names) == sorted(["C4", "C4*", "C8", "C8*"])
    assert res.ok and not res.anomalies
    for r in res.survivors:
        assert r["template"] not in REFUTED


def test_search_without_weight_seven():
    res = bounded_search(6, 6, 3)
    assert res.names == ["C4"] and res.ok


def test_empty_bounds():
    res = bounded_search(0, 9, 3)
    assert res.survivors == [] and res.ok and res.refutations == 0


@pytest.mark.slow
def test_search_worker_independence():
    one = bounded_search(2, 7, 1, workers=1).to_dict()
    two = bounded_search(2, 7, 1, workers=3).to_dict()
    assert json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)


# -- brute-force oracle ---------------------------------------------------------------------

ORACLE_BOX = SearchBox(
    s1=(2, 3),
    s2=(3, 4, 5, 6, 7),
    f=(2, 3),
    T21=((), (2,), (7,)),
    T24=((), (2,), (7,)),
    T11=((), (2,)),
)


def _brute_force(box):
    """Enumerate the free quantities, derive the rest from the identities, parse ``D``."""
    found = set()
    for t in (III1A, III1A_IV2A, III1A_IV2B):
        for s1, t21, s2, t24 in product(box.s1, box.T21, box.s2, box.T24):
            adj = adjoint((s1,) + t21)
            t22, k12 = adj[:-1], adj[-1] - 1
            extras = [{}]
            if t == III1A:
                k34 = s2 + 2
            elif t == III1A_IV2A:
                k34 = s2 + 1
                extras = []
                for f1, t11 in product(box.f, box.T11):
                    tail = adjoint((f1,) + t11)
                    if len(tail) >= 2:
                        extras.append(dict(f1=f1, T11=t11, T12=tail[:-2], f11=tail[-2], f12=tail[-1]))
            else:
                extras = []
                for f11, t11 in product(box.f, box.T11):
                    a = adjoint((f11,) + t11)
                    if s2 - (a[-1] - 1) >= 1:
                        extras.append(dict(f1=2, f12=2, f11=f11, T11=t11, T12=a[:-1], k34=s2 - a[-1] + 1))
            for ex in extras:
                k = ex.pop("k34", k34)
                ft = adjoint(t24 + (k + 1,) + tw(k12 - 1))
                if len(ft) < 2:
                    continue
                cand = CandidateAssignment(
                    t, s1=s1, s2=s2, f2=ft[0], T21=t21, T22=t22, T23=ft[1:], T24=t24, k12=k12, k34=k, **ex
                )
                parses = parse_resolution(divisor_config(cand))
                if parses:
                    found.add((json.dumps(cand.to_dict(), sort_keys=True), parses[0][0].to_json()))
    return found


@pytest.mark.slow
def test_search_matches_brute_force():
    expected = _brute_force(ORACLE_BOX)
    got = {
        (json.dumps(r["candidate"], sort_keys=True), json.dumps(r["resolution"], separators=(",", ":")))
        for r in bounded_search(box=ORACLE_BOX).survivors
    }
    assert got == expected
    assert len(expected) == 4

