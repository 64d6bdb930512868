"""Weighted linear chains in bracket notation.

A chain is a tuple of integers ``(a1, ..., ar)``; entry ``a`` stands for a
rational curve of self-intersection ``-a``.  All functions are pure and work
with arbitrary-precision integers.  Rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

Chain = tuple[int, ...]


class ChainDomainError(ValueError):
    """Raised when a chain operation is applied outside its domain."""


def chain(entries: Iterable[int]) -> Chain:
    return tuple(int(a) for a in entries)


def tw(n: int) -> Chain:
    """The chain ``[2_n]`` of ``n`` (-2)-curves (empty for ``n == 0``)."""
    if n < 0:
        raise ChainDomainError(f"TW({n}) is undefined")
    return (2,) * n


def repeat(a: int, n: int) -> Chain:
    """``[(a)_n]``."""
    return (a,) * n


def is_admissible(c: Sequence[int]) -> bool:
    return len(c) > 0 and all(a >= 2 for a in c)


def _require_admissible(c: Sequence[int], what: str) -> None:
    if not is_admissible(c):
        raise ChainDomainError(f"{what} requires an admissible chain, got {list(c)}")


def discriminant(c: Sequence[int]) -> int:
    """Determinant of the negated intersection matrix; ``d(()) == 1``."""
    prev, cur = 0, 1
    for a in reversed(c):
        prev, cur = cur, a * cur - prev
    return cur


def transpose(c: Sequence[int]) -> Chain:
    return tuple(reversed(c))


def drop_first(c: Sequence[int]) -> Chain:
    if not c:
        raise ChainDomainError("drop_first of the empty chain")
    return tuple(c[1:])


def drop_last(c: Sequence[int]) -> Chain:
    if not c:
        raise ChainDomainError("drop_last of the empty chain")
    return tuple(c[:-1])


_VIEWS = {"transpose": transpose, "drop_first": drop_first, "drop_last": drop_last}


def chain_view(c: Sequence[int], selector: str) -> Chain:
    try:
        view = _VIEWS[selector]
    except KeyError:
        raise ChainDomainError(f"unknown chain view {selector!r}") from None
    return view(c)


def inductance(c: Sequence[int]) -> Fraction:
    """``d(drop_first(c)) / d(c)``, a rational in (0, 1)."""
    _require_admissible(c, "inductance")
    return Fraction(discriminant(c[1:]), discriminant(c))


def chain_from_inductance(q: Fraction) -> Chain:
    """Inverse of :func:`inductance` via the ceiling expansion of ``1/q``."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise ChainDomainError(f"inductance must lie in (0, 1), got {q}")
    return _expand(q.numerator, q.denominator)


def _expand(num: int, den: int) -> Chain:
    # num/den in (0, 1), coprime; each step maps it to ceil(den/num) - den/num
    out = []
    while num:
        a = -(-den // num)
        num, den = a * num - den, num
        out.append(a)
    return tuple(out)


def star(a: Sequence[int], b: Sequence[int]) -> Chain:
    """``A * B = [drop_last(A), a_r + b_1 - 1, drop_first(B)]``."""
    if not a or not b:
        raise ChainDomainError("star is defined for non-empty chains only")
    return tuple(a[:-1]) + (a[-1] + b[0] - 1,) + tuple(b[1:])


def star_power(a: Sequence[int], n: int) -> Chain:
    if n < 1:
        raise ChainDomainError(f"star power needs n >= 1, got {n}")
    if not a:
        raise ChainDomainError("star is defined for non-empty chains only")
    out = tuple(a)
    for _ in range(n - 1):
        out = star(out, a)
    return out


def star_all(chains: Iterable[Sequence[int]]) -> Chain:
    it = iter(chains)
    out = tuple(next(it))
    for c in it:
        out = star(out, c)
    return out


def adjoint_by_inductance(c: Sequence[int]) -> Chain:
    """``e^-1(1 - e(transpose(c)))``."""
    _require_admissible(c, "adjoint")
    q = 1 - inductance(transpose(c))
    return _expand(q.numerator, q.denominator)


def adjoint_by_twos(c: Sequence[int]) -> Chain:
    """``TW(a_r - 1) * ... * TW(a_1 - 1)``, integer arithmetic only."""
    _require_admissible(c, "adjoint")
    out: list[int] = []
    for a in reversed(c):
        n = a - 1
        if out:
            out[-1] += 1  # gluing two runs of 2's: 2 + 2 - 1
            out.extend((2,) * (n - 1))
        else:
            out.extend((2,) * n)
    return tuple(out)


CROSS_CHECK = __debug__


def adjoint(c: Sequence[int]) -> Chain:
    """The adjoint chain ``c*``.

    With ``CROSS_CHECK`` set (the default unless Python runs with ``-O``)
    both formulas are evaluated and compared.
    """
    out = adjoint_by_twos(c)
    if CROSS_CHECK:
        other = adjoint_by_inductance(c)
        if other != out:
            raise AssertionError(f"adjoint mismatch for {list(c)}: {out} vs {other}")
    return out


def format_chain(c: Sequence[int]) -> str:
    return "[" + ",".join(str(a) for a in c) + "]"


def parse_chain(text: str) -> Chain:
    """Parse ``[2,2,8]`` (JSON array of integers)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChainDomainError(f"not a chain: {text!r}") from exc
    if not isinstance(data, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in data):
        raise ChainDomainError(f"not a chain: {text!r}")
    return tuple(data)
