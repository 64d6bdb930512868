"""Exact geometry of the nodal cubic ``N: x^3 + y^3 - xyz = 0`` over Q(omega).

``N`` minus its node is the group C*, parametrised by
``t -> (t, -t^2, t^3 - 1)``.  The module checks the group law, finds the
conics meeting ``N`` in a single point (sextactic conics) and verifies the
projective symmetries permuting the flexes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Union

from .report import Report

Number = Union[int, Fraction, "CycRational"]


@dataclass(frozen=True)
class CycRational:
    """``a + b*omega`` with ``omega^2 + omega + 1 = 0``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def of(x: Number) -> "CycRational":
        return x if isinstance(x, CycRational) else CycRational(Fraction(x))

    def __add__(self, o: Number) -> "CycRational":
        o = CycRational.of(o)
        return CycRational(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "CycRational":
        return CycRational(-self.a, -self.b)

    def __sub__(self, o: Number) -> "CycRational":
        return self + (-CycRational.of(o))

    def __rsub__(self, o: Number) -> "CycRational":
        return CycRational.of(o) - self

    def __mul__(self, o: Number) -> "CycRational":
        o = CycRational.of(o)
        a, b, c, d = self.a, self.b, o.a, o.b
        # omega^2 = -1 - omega
        return CycRational(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conj(self) -> "CycRational":
        """Complex conjugation, which swaps omega and omega^2."""
        return CycRational(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "CycRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(omega)")
        c = self.conj()
        return CycRational(c.a / n, c.b / n)

    def __truediv__(self, o: Number) -> "CycRational":
        return self * CycRational.of(o).inverse()

    def __rtruediv__(self, o: Number) -> "CycRational":
        return CycRational.of(o) * self.inverse()

    def __pow__(self, n: int) -> "CycRational":
        base = self if n >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, o) -> bool:
        if isinstance(o, (int, Fraction)):
            o = CycRational(o)
        if not isinstance(o, CycRational):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        w = "w" if self.b == 1 else "-w" if self.b == -1 else f"{self.b}w"
        if not self.a:
            return w
        return f"{self.a}{w}" if w.startswith("-") else f"{self.a}+{w}"

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @staticmethod
    def from_json(d: dict) -> "CycRational":
        return CycRational(Fraction(d["a"]), Fraction(d["b"]))


ZERO, ONE = CycRational(0), CycRational(1)
OMEGA = CycRational(0, 1)
OMEGA2 = OMEGA * OMEGA
SIXTH_ROOTS = (ONE, OMEGA, OMEGA2, -ONE, -OMEGA, -OMEGA2)


def _canonical(coords: tuple) -> tuple:
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("all coordinates vanish")
    return tuple(c / lead for c in coords)


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^2, scaled so its first nonzero coordinate is 1."""

    x: CycRational
    y: CycRational
    z: CycRational

    @staticmethod
    def make(x: Number, y: Number, z: Number) -> "ProjPoint":
        return ProjPoint(*_canonical(tuple(CycRational.of(v) for v in (x, y, z))))

    @property
    def coords(self) -> tuple:
        return (self.x, self.y, self.z)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def on_cubic(p: ProjPoint) -> bool:
    x, y, z = p.coords
    return not (x * x * x + y * y * y - x * y * z)


def phi_param(t: Number) -> ProjPoint:
    t = CycRational.of(t)
    if not t:
        raise ValueError("the parametrisation is defined on C* only")
    return ProjPoint.make(t, -t * t, t * t * t - 1)


NODE = ProjPoint.make(0, 0, 1)
FLEXES = (phi_param(ONE), phi_param(OMEGA), phi_param(OMEGA2))  # O1, O2, O3
SEXTACTIC_POINTS = (phi_param(-ONE), phi_param(-OMEGA), phi_param(-OMEGA2))  # P1, P2, P3


def _det3(m) -> CycRational:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def collinear(t1: Number, t2: Number, t3: Number) -> bool:
    """Whether ``phi(t1), phi(t2), phi(t3)`` lie on a line.

    For distinct parameters the product test ``t1 t2 t3 = 1`` is checked
    against the determinant of the three points.
    """
    ts = [CycRational.of(t) for t in (t1, t2, t3)]
    by_product = ts[0] * ts[1] * ts[2] == ONE
    if len(set(ts)) == 3:
        by_det = not _det3([phi_param(t).coords for t in ts])
        if by_det != by_product:
            raise AssertionError(f"group law and determinant disagree at {[str(t) for t in ts]}")
    return by_product


# -- conics ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Conic:
    """``a x^2 + b y^2 + c z^2 + d xy + e xz + f yz``."""

    a: CycRational
    b: CycRational
    c: CycRational
    d: CycRational
    e: CycRational
    f: CycRational

    @staticmethod
    def make(*coeffs: Number) -> "Conic":
        cs = tuple(CycRational.of(v) for v in coeffs)
        if not any(cs):
            raise ValueError("all conic coefficients vanish")
        return Conic(*cs)

    @property
    def coeffs(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def normalized(self) -> "Conic":
        return Conic(*_canonical(self.coeffs))

    def matrix(self) -> list[list[CycRational]]:
        h = Fraction(1, 2)
        a, b, c, d, e, f = self.coeffs
        return [[a, d * h, e * h], [d * h, b, f * h], [e * h, f * h, c]]

    @staticmethod
    def from_matrix(m) -> "Conic":
        return Conic.make(m[0][0], m[1][1], m[2][2], m[0][1] * 2, m[0][2] * 2, m[1][2] * 2)

    def __call__(self, p: ProjPoint) -> CycRational:
        x, y, z = p.coords
        a, b, c, d, e, f = self.coeffs
        return a * x * x + b * y * y + c * z * z + d * x * y + e * x * z + f * y * z

    def gradient(self, p: ProjPoint) -> tuple:
        x, y, z = p.coords
        a, b, c, d, e, f = self.coeffs
        return (2 * a * x + d * y + e * z, 2 * b * y + d * x + f * z, 2 * c * z + e * x + f * y)

    def is_irreducible(self) -> bool:
        return bool(_det3(self.matrix()))

    def same_as(self, other: "Conic") -> bool:
        return self.normalized() == other.normalized()

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


@dataclass(frozen=True)
class DoubleLine:
    """A rank-one conic, the square of ``line``."""

    line: tuple
    conic: Conic


def _sextactic_coeffs(alpha: CycRational) -> Conic:
    e, f = 6 * alpha**5, 6 * alpha
    return Conic.make(15 * alpha**4 - f, 15 * alpha**2 - e, 1, 20 * alpha**3 - 2, e, f)


def sextactic_conic(alpha: Number) -> Conic | DoubleLine:
    """The conic meeting ``N`` only at ``phi(alpha)``, ``alpha^6 = 1``."""
    alpha = CycRational.of(alpha)
    if alpha**6 != ONE:
        raise ValueError(f"alpha must be a sixth root of unity, got {alpha}")
    q = _sextactic_coeffs(alpha)
    if q.is_irreducible():
        return q
    m = q.matrix()
    row = next(r for r in m if any(r))
    return DoubleLine(_canonical(tuple(row)), q)


def restrict_to_cubic(q: Conic) -> tuple:
    """Coefficients of ``q(phi(t))`` from ``t^6`` down to ``t^0``."""
    a, b, c, d, e, f = q.coeffs
    return (c, -f, b + e, -(2 * c + d), a + f, -e, c)


def sixth_power(alpha: Number) -> tuple:
    """Coefficients of ``(t - alpha)^6`` from ``t^6`` down."""
    alpha = CycRational.of(alpha)
    return tuple(comb(6, k) * (-alpha) ** k for k in range(7))


def poly_at(coeffs: tuple, t: Number) -> CycRational:
    out = ZERO
    for c in coeffs:
        out = out * t + c
    return out


# -- projective transformations ------------------------------------------------------------

TRANSFORMS = {
    1: ((ZERO, ONE, ZERO), (ONE, ZERO, ZERO), (ZERO, ZERO, ONE)),
    2: ((ZERO, OMEGA2, ZERO), (OMEGA, ZERO, ZERO), (ZERO, ZERO, ONE)),
    3: ((ZERO, OMEGA, ZERO), (OMEGA2, ZERO, ZERO), (ZERO, ZERO, ONE)),
}


def _mat_mul(m, n):
    return [[sum((m[i][k] * n[k][j] for k in range(3)), ZERO) for j in range(3)] for i in range(3)]


def _transpose(m):
    return [[m[j][i] for j in range(3)] for i in range(3)]


def _inverse(m):
    det = _det3(m)
    if not det:
        raise ValueError("singular matrix")
    cof = [
        [
            (m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3])
            - (m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3])
            for j in range(3)
        ]
        for i in range(3)
    ]
    return [[cof[j][i] / det for j in range(3)] for i in range(3)]


def apply_transform(i: int, target: ProjPoint | Conic) -> ProjPoint | Conic:
    """Points map by ``M p``; conics by ``M^-T S M^-1``."""
    if i not in TRANSFORMS:
        raise ValueError(f"transform index must be 1, 2 or 3, got {i!r}")
    m = TRANSFORMS[i]
    if isinstance(target, ProjPoint):
        return ProjPoint.make(*(sum((m[r][k] * target.coords[k] for k in range(3)), ZERO) for r in range(3)))
    inv = _inverse(m)
    return Conic.from_matrix(_mat_mul(_transpose(inv), _mat_mul(target.matrix(), inv))).normalized()


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, ZERO) + c1 * c2
    return {e: c for e, c in out.items() if c}


def cubic_form_after(i: int) -> dict:
    """``x^3 + y^3 - xyz`` with ``M_i`` substituted, as ``{exponents: coefficient}``."""
    m = TRANSFORMS[i]
    lin = [{(1, 0, 0): m[r][0], (0, 1, 0): m[r][1], (0, 0, 1): m[r][2]} for r in range(3)]
    lin = [{e: c for e, c in f.items() if c} for f in lin]
    x, y, z = lin
    out: dict = {}
    for term, sign in ((_poly_mul(_poly_mul(x, x), x), 1), (_poly_mul(_poly_mul(y, y), y), 1), (_poly_mul(_poly_mul(x, y), z), -1)):
        for e, c in term.items():
            out[e] = out.get(e, ZERO) + sign * c
    return {e: c for e, c in out.items() if c}


CUBIC_FORM = {(3, 0, 0): ONE, (0, 3, 0): ONE, (1, 1, 1): -ONE}


def preserves_cubic(i: int) -> bool:
    form = cubic_form_after(i)
    if set(form) != set(CUBIC_FORM):
        return False
    ratios = {form[e] / CUBIC_FORM[e] for e in form}
    return len(ratios) == 1


# -- verification reports --------------------------------------------------------------------

def _irreducible_roots() -> list[CycRational]:
    return [al for al in SIXTH_ROOTS if isinstance(sextactic_conic(al), Conic)]


def displayed_conics() -> tuple[Conic, Conic, Conic]:
    """Q1, Q2, Q3 with coefficients written out."""
    w, w2 = OMEGA, OMEGA2
    return (
        Conic.make(21, 21, 1, -22, -6, -6),
        Conic.make(21 * w, 21 * w2, 1, -22, -6 * w2, -6 * w),
        Conic.make(21 * w2, 21 * w, 1, -22, -6 * w, -6 * w2),
    )


def check_conics() -> Report:
    rep = Report("sextactic conics of the nodal cubic")
    qs = displayed_conics()
    for k, alpha in enumerate((-ONE, -OMEGA, -OMEGA2)):
        q = sextactic_conic(alpha)
        name = f"Q{k + 1}"
        rep.add(f"{name} coefficients", isinstance(q, Conic) and q == qs[k], str(q))
        rep.add(f"{name} restricted to N is (t - alpha)^6", restrict_to_cubic(qs[k]) == sixth_power(alpha))
        p, o = SEXTACTIC_POINTS[k], FLEXES[k]
        rep.add(f"{name} passes through P{k + 1}", not qs[k](p))
        grad = qs[k].gradient(p)
        rep.add(f"tangent to {name} at P{k + 1} passes through O{k + 1}", not sum((g * c for g, c in zip(grad, o.coords)), ZERO))
    for alpha in SIXTH_ROOTS:
        r = sextactic_conic(alpha)
        q = r if isinstance(r, Conic) else r.conic
        rep.add(f"alpha={alpha}: restriction equals (t - alpha)^6", restrict_to_cubic(q) == sixth_power(alpha))
    degenerate = [al for al in SIXTH_ROOTS if isinstance(sextactic_conic(al), DoubleLine)]
    rep.add("irreducible cases are alpha in {-1, -w, -w^2}", set(_irreducible_roots()) == {-ONE, -OMEGA, -OMEGA2})
    rep.add("double tangent lines for alpha in {1, w, w^2}", set(degenerate) == {ONE, OMEGA, OMEGA2})
    for al, o in zip((ONE, OMEGA, OMEGA2), FLEXES):
        line = sextactic_conic(al).line
        rep.add(f"double line for alpha={al} passes through its flex", not sum((l * c for l, c in zip(line, o.coords)), ZERO))
    rep.values["Q1"] = str(qs[0])
    rep.values["Q1 on N"] = "(" + ", ".join(str(c) for c in restrict_to_cubic(qs[0])) + ")"
    return rep


def random_parameter(rng: random.Random) -> CycRational:
    while True:
        t = CycRational(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        if t:
            return t


def check_group_law(samples: int = 500, seed: int = 0) -> Report:
    rep = Report("group law on the nodal cubic")
    rep.add("phi(1) = O1 = (1, -1, 0)", phi_param(1) == ProjPoint.make(1, -1, 0))
    rep.add("phi(w) = O2 = (1, -w, 0)", phi_param(OMEGA) == ProjPoint.make(1, -OMEGA, 0))
    rep.add("phi(w^2) = O3 = (1, -w^2, 0)", phi_param(OMEGA2) == ProjPoint.make(1, -OMEGA2, 0))
    rng = random.Random(seed)
    agree = hits = 0
    for k in range(samples):
        t1, t2 = random_parameter(rng), random_parameter(rng)
        t3 = (t1 * t2).inverse() if k % 2 == 0 else random_parameter(rng)
        if len({t1, t2, t3}) < 3:
            t3 = t3 + 1 if t3 + 1 else t3 + 2
        if not all(on_cubic(phi_param(t)) for t in (t1, t2, t3)):
            break
        try:
            hits += collinear(t1, t2, t3)
        except AssertionError:
            break
        agree += 1
    rep.add(f"collinear iff t1 t2 t3 = 1 on {samples} triples", agree == samples, f"{hits} collinear")
    rep.values["triples"] = samples
    return rep


def check_transforms() -> Report:
    rep = Report("projective symmetries of the nodal cubic")
    qs = displayed_conics()
    for i in (1, 2, 3):
        j, k = [x for x in (1, 2, 3) if x != i]
        rep.add(f"phi{i} preserves N", preserves_cubic(i))
        rep.add(f"phi{i}(O{i}) = O{i}", apply_transform(i, FLEXES[i - 1]) == FLEXES[i - 1])
        rep.add(f"phi{i} swaps O{j} and O{k}", apply_transform(i, FLEXES[j - 1]) == FLEXES[k - 1] and apply_transform(i, FLEXES[k - 1]) == FLEXES[j - 1])
        rep.add(f"phi{i}(Q{i}) = Q{i}", apply_transform(i, qs[i - 1]).same_as(qs[i - 1]))
        rep.add(f"phi{i} swaps Q{j} and Q{k}", apply_transform(i, qs[j - 1]).same_as(qs[k - 1]) and apply_transform(i, qs[k - 1]).same_as(qs[j - 1]))
    return rep


CHECKS = {"conics": check_conics, "group-law": check_group_law, "transforms": check_transforms}
