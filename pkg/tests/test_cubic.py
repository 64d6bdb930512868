import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unicusp.cubic import (
    CHECKS,
    FLEXES,
    OMEGA,
    OMEGA2,
    ONE,
    SIXTH_ROOTS,
    ZERO,
    Conic,
    CycRational,
    DoubleLine,
    ProjPoint,
    apply_transform,
    collinear,
    displayed_conics,
    on_cubic,
    phi_param,
    poly_at,
    preserves_cubic,
    random_parameter,
    restrict_to_cubic,
    sextactic_conic,
    sixth_power,
)

Q1, Q2, Q3 = displayed_conics()

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=7)
cyc = st.builds(CycRational, fractions, fractions)
nonzero = cyc.filter(bool)


def test_omega_arithmetic():
    assert OMEGA * OMEGA == CycRational(-1, -1)
    assert OMEGA * OMEGA2 == ONE
    assert OMEGA.conj() == OMEGA2
    assert OMEGA ** 3 == ONE and OMEGA ** -1 == OMEGA2
    assert (ONE + OMEGA + OMEGA2) == ZERO


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@given(cyc, cyc, cyc)
def test_field_laws(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x.norm() == 0) == (not x)


@given(nonzero)
def test_inverse(x):
    assert x * x.inverse() == ONE
    assert x * x.conj() == CycRational(x.norm())


@given(cyc)
def test_json_round_trip(x):
    assert CycRational.from_json(x.to_json()) == x


def test_phi_examples():
    assert phi_param(1) == ProjPoint.make(1, -1, 0)
    assert phi_param(OMEGA) == ProjPoint.make(1, -OMEGA, 0)
    p = phi_param(2)
    assert p == ProjPoint.make(2, -4, 7) and p.coords == (ONE, CycRational(-2), CycRational(Fraction(7, 2)))
    assert on_cubic(p)
    with pytest.raises(ValueError):
        phi_param(0)


@given(nonzero)
def test_phi_lands_on_cubic(t):
    assert on_cubic(phi_param(t))


def test_collinear_examples():
    assert collinear(2, 3, Fraction(1, 6))
    assert collinear(1, 1, 1)
    assert not collinear(2, 3, 5)


@given(nonzero, nonzero)
def test_collinear_product_law(t1, t2):
    t3 = (t1 * t2).inverse()
    assert collinear(t1, t2, t3)
    assert not collinear(t1, t2, t3 + 1) or t1 * t2 * (t3 + 1) == ONE


def test_collinear_pseudo_random_triples():
    rng = random.Random(7)
    for k in range(500):
        t1, t2 = random_parameter(rng), random_parameter(rng)
        t3 = (t1 * t2).inverse() if k % 2 else random_parameter(rng)
        assert collinear(t1, t2, t3) == (t1 * t2 * t3 == ONE)


def test_sextactic_examples():
    assert sextactic_conic(-1) == Conic.make(21, 21, 1, -22, -6, -6) == Q1
    assert sextactic_conic(-OMEGA) == Q2
    assert sextactic_conic(-OMEGA2) == Q3
    line = sextactic_conic(1)
    assert isinstance(line, DoubleLine)
    assert not sum((a * b for a, b in zip(line.line, FLEXES[0].coords)), ZERO)
    with pytest.raises(ValueError):
        sextactic_conic(2)


def test_case_split():
    irreducible = [a for a in SIXTH_ROOTS if isinstance(sextactic_conic(a), Conic)]
    assert set(irreducible) == {-ONE, -OMEGA, -OMEGA2}
    assert all(sextactic_conic(a).is_irreducible() for a in irreducible)


def test_restriction_examples():
    assert restrict_to_cubic(Q1) == tuple(CycRational(c) for c in (1, 6, 15, 20, 15, 6, 1))
    assert restrict_to_cubic(Q2) == sixth_power(-OMEGA)
    assert restrict_to_cubic(Conic.make(1, 0, 0, 0, 0, 0)) == tuple(CycRational(c) for c in (0, 0, 0, 0, 1, 0, 0))


@pytest.mark.parametrize("alpha", SIXTH_ROOTS, ids=str)
def test_restriction_is_sixth_power(alpha):
    r = sextactic_conic(alpha)
    q = r if isinstance(r, Conic) else r.conic
    assert restrict_to_cubic(q) == sixth_power(alpha)


@given(st.sampled_from([Q1, Q2, Q3, Conic.make(1, 2, 3, 4, 5, 6)]), nonzero)
def test_restriction_matches_substitution(q, t):
    unscaled = ProjPoint(t, -t * t, t * t * t - 1)
    assert q(unscaled) == poly_at(restrict_to_cubic(q), t)


def test_transform_examples():
    O1, O2, O3 = FLEXES
    assert apply_transform(1, O1) == O1
    assert apply_transform(1, O2) == O3
    assert apply_transform(2, Q3).same_as(Q1)
    with pytest.raises(ValueError):
        apply_transform(4, O1)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_transforms_preserve_cubic(i):
    assert preserves_cubic(i)


@given(st.sampled_from([1, 2, 3]), nonzero)
def test_transformed_points_stay_on_cubic(i, t):
    assert on_cubic(apply_transform(i, phi_param(t)))


@pytest.mark.parametrize("name", sorted(CHECKS))
def test_reports_pass(name):
    rep = CHECKS[name]()
    assert rep.ok, rep.render()
