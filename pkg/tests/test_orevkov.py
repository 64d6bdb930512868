import pytest

from unicusp.chains import adjoint, discriminant, star, star_power, tw
from unicusp.contraction import Component, IntersectionConfig
from unicusp.orevkov import (
    PLAIN,
    STAR,
    VARIANTS,
    OrevkovSpec,
    cycle_rank,
    orevkov_resolution,
    verify_orevkov,
    with_e0,
)
from unicusp.resolution import cusp_profile


def test_displayed_data():
    r = orevkov_resolution(OrevkovSpec(1, PLAIN)).resolution
    assert r.A == ((2, 2, 2, 2, 2, 2, 4),) and r.B == ((2, 2),) and r.c_prime_self == -2
    r = orevkov_resolution(OrevkovSpec(1, STAR)).resolution
    assert r.A == ((2, 2, 2, 2, 2, 2, 7),) and r.B == ((2, 2, 2, 2, 2),)
    r = orevkov_resolution(OrevkovSpec(2, PLAIN)).resolution
    assert r.A == ((2, 2, 2, 2, 2, 3, 2, 2, 2, 2, 2), (4,)) and r.B == ((7,), (2, 2))
    r = orevkov_resolution(OrevkovSpec(4, STAR)).resolution
    assert r.A == (star_power(tw(6), 4), (7,)) and r.B == ((7, 7, 7), tw(5))


@pytest.mark.parametrize("m", [0, -1, 1.5])
def test_domain(m):
    with pytest.raises(ValueError):
        OrevkovSpec(m)
    with pytest.raises(ValueError):
        OrevkovSpec(1, "other")


def test_e0_attachments():
    assert orevkov_resolution(OrevkovSpec(1)).e0_attachments == ("A1.1", "A1.7")
    assert orevkov_resolution(OrevkovSpec(3, STAR)).e0_attachments == ("A1.1", "B1.2")


def test_cycle_rank():
    tri = IntersectionConfig([Component(x, -2) for x in "abc"], [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
    assert cycle_rank(tri) == 1
    assert cycle_rank(tri.without("a")) == 0
    assert cycle_rank(with_e0(orevkov_resolution(OrevkovSpec(2)))) == 1


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("variant", VARIANTS)
def test_family_invariants(m, variant):
    res = orevkov_resolution(OrevkovSpec(m, variant)).resolution
    assert res.o == ((7,) if m == 1 else (6, 1))
    assert adjoint(res.A[0]) == res.B[0] + (res.o[0] + 1,)
    assert discriminant(res.A[0]) == discriminant(adjoint(res.A[0]))
    prof = cusp_profile(res)
    assert prof.genus_defect == 0
    assert prof.degree ** 2 + 2 == sum(x * x for x in prof.multiplicities)
    if m >= 3:
        assert res.A[0] == star(tw(6), orevkov_resolution(OrevkovSpec(m - 1, variant)).resolution.A[0])
    rep = verify_orevkov(OrevkovSpec(m, variant))
    assert rep.ok, rep.render()


def test_degrees():
    # plain degrees are the Fibonacci numbers F(4m+2); star degrees double them
    fib = [0, 1]
    while len(fib) < 30:
        fib.append(fib[-1] + fib[-2])
    for m in range(1, 5):
        assert verify_orevkov(OrevkovSpec(m)).values["degree"] == fib[4 * m + 2]
        assert verify_orevkov(OrevkovSpec(m, STAR)).values["degree"] == 2 * fib[4 * m + 2]


def test_report_render_and_dict():
    rep = verify_orevkov(OrevkovSpec(1))
    text = rep.render()
    assert "degree: 8" in text and "genus_defect: 0" in text and text.endswith("result: PASS\n")
    assert rep.to_dict()["ok"] is True
