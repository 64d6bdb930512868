from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unicusp.chains import (
    ChainDomainError,
    adjoint,
    adjoint_by_inductance,
    adjoint_by_twos,
    chain_from_inductance,
    chain_view,
    discriminant,
    format_chain,
    inductance,
    parse_chain,
    star,
    star_power,
    tw,
)

from oracles import admissible, any_chain, chain_matrix, det


@pytest.mark.parametrize(
    "c, expected",
    [((), 1), ((2,), 2), ((2, 3), 5), ((2, 2, 2, 2, 2, 2, 4), 22)],
)
def test_discriminant_examples(c, expected):
    assert discriminant(c) == expected
    if c:
        assert det(chain_matrix(c)) == expected


@given(any_chain)
def test_discriminant_matches_determinant(c):
    assert discriminant(c) == det(chain_matrix(c))


@given(any_chain.filter(lambda c: len(c) > 1))
def test_recurrence_from_both_ends(c):
    d = discriminant
    assert d(c) == c[0] * d(c[1:]) - d(c[2:])
    assert d(c) == c[-1] * d(c[:-1]) - d(c[:-2])
    assert d(c) == d(c[::-1])


@pytest.mark.parametrize("c, q", [((2,), Fraction(1, 2)), ((2, 2), Fraction(2, 3)), ((2, 3), Fraction(3, 5))])
def test_inductance_examples(c, q):
    assert inductance(c) == q
    assert chain_from_inductance(q) == c


@given(admissible)
def test_inductance_in_unit_interval_and_round_trip(c):
    q = inductance(c)
    assert 0 < q < 1
    assert q.denominator == discriminant(c)
    assert chain_from_inductance(q) == c


@pytest.mark.parametrize("bad", [(), (1,), (2, 0, 3)])
def test_inductance_rejects_non_admissible(bad):
    with pytest.raises(ChainDomainError):
        inductance(bad)


@pytest.mark.parametrize("q", [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-1, 3)])
def test_chain_from_inductance_domain(q):
    with pytest.raises(ChainDomainError):
        chain_from_inductance(q)


@pytest.mark.parametrize(
    "c, expected",
    [((2, 2, 2, 2, 2, 2, 4), (2, 2, 8)), ((2, 2), (3,)), ((2, 3), (2, 3))],
)
def test_adjoint_examples(c, expected):
    assert adjoint(c) == expected
    assert adjoint_by_inductance(c) == adjoint_by_twos(c) == expected


@given(admissible)
def test_adjoint_properties(c):
    a = adjoint(c)
    assert adjoint(a) == c
    assert adjoint(c[::-1]) == a[::-1]
    assert discriminant(a) == discriminant(c) == discriminant(a[1:]) + discriminant(c[:-1])


@given(admissible, st.integers(1, 6))
def test_adjoint_of_appended_entry(c, n):
    assert adjoint(c + (n + 1,)) == star(tw(n), adjoint(c))


def test_adjoint_of_twos():
    for n in range(1, 30):
        assert adjoint(tw(n)) == (n + 1,)


def test_adjoint_rejects_non_admissible():
    with pytest.raises(ChainDomainError):
        adjoint((2, 1))


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ((2, 2), (2,), (2, 3)),
        ((2,) * 6, (2,) * 6, (2, 2, 2, 2, 2, 3, 2, 2, 2, 2, 2)),
        ((3,), (2,), (4,)),
    ],
)
def test_star_examples(a, b, expected):
    assert star(a, b) == expected


@given(any_chain, any_chain, any_chain)
def test_star_associative(a, b, c):
    assert star(star(a, b), c) == star(a, star(b, c))
    assert len(star(a, b)) == len(a) + len(b) - 1


def test_star_rejects_empty():
    with pytest.raises(ChainDomainError):
        star((), (2,))
    with pytest.raises(ChainDomainError):
        star((2,), ())


def test_star_power(tw6):
    assert star_power(tw6, 2) == (2,) * 5 + (3,) + (2,) * 5
    assert star_power((2, 3), 1) == (2, 3)
    assert star_power(tw6, 3) == (2,) * 5 + (3,) + (2,) * 4 + (3,) + (2,) * 5
    with pytest.raises(ChainDomainError):
        star_power(tw6, 0)


def test_chain_views():
    assert chain_view((2, 3), "transpose") == (3, 2)
    assert chain_view((2, 3), "drop_first") == (3,)
    assert chain_view((2, 3), "drop_last") == (2,)
    with pytest.raises(ChainDomainError):
        chain_view((), "drop_first")
    with pytest.raises(ChainDomainError):
        chain_view((), "drop_last")


def test_det_identity_and_gcd_small():
    for c in [(2, 3, 4), (5, 2, 2, 7), (2,) * 8]:
        d = discriminant
        assert d(c[1:]) * d(c[:-1]) - d(c) * d(c[1:-1]) == 1
        assert gcd(d(c), d(c[1:])) == 1 and d(c) > d(c[1:]) > 0


def test_chain_text_round_trip():
    assert parse_chain("[2,2,8]") == (2, 2, 8)
    assert format_chain((2, 2, 8)) == "[2,2,8]"
    assert parse_chain(format_chain(())) == ()
    for bad in ["[2,", "{}", "[true]", '["2"]']:
        with pytest.raises(ChainDomainError):
            parse_chain(bad)
