"""Pencil of quadrics in 4-space, point configurations, and line classes.

The ambient model: two 5x5 symmetric rational matrices span a pencil whose
degree-5 characteristic polynomial ``det(t Q1 - Q2)`` has five distinct
roots; the roots parametrize the singular members, and their images under
the Veronese map (1 : t : t^2) are five plane points in general position.
Blowing those up recovers the surface, whose sixteen line classes and ten
conic fibrations live in the rank-6 divisor lattice handled here.

Everything is exact; irrational characteristic roots are rejected rather
than approximated (the toolkit's working regime is rational roots).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from . import linalg
from .exactpoly import (
    MPoly,
    Rat,
    VarTable,
    as_rat,
    poly_derivative,
    poly_eval,
    to_text,
    univariate_gcd,
)

__all__ = [
    "PencilError",
    "ConfigError",
    "QuadricPencil",
    "PointConfig",
    "DivisorClass",
    "ConicFibration",
    "SingularMember",
    "T_VARS",
    "characteristic_polynomial",
    "standard_dp4_quadrics",
    "singular_members",
    "member_corank",
    "veronese_points",
    "normalize_config",
    "enumerate_lines",
    "conic_fibrations",
    "zeta_numerology",
    "vmrt_class_sum",
    "cross_ratio",
    "mobius_from_pairs",
    "mobius_apply",
    "match_directions_to_parameters",
]

T_VARS = VarTable(("t",))

HomPoint = tuple[Fraction, Fraction, Fraction]


class PencilError(ValueError):
    """Invalid or non-generic quadric pencil."""


class ConfigError(ValueError):
    """Invalid point configuration."""


# ---------------------------------------------------------------------------
# Point configurations
# ---------------------------------------------------------------------------


def _hom(point: Sequence[Rat]) -> HomPoint:
    if len(point) != 3:
        raise ConfigError(f"homogeneous plane points need 3 coordinates, got {point}")
    coords = tuple(as_rat(c) for c in point)
    if all(c == 0 for c in coords):
        raise ConfigError("(0:0:0) is not a projective point")
    return coords  # type: ignore[return-value]


def _proportional(p: HomPoint, q: HomPoint) -> bool:
    return (
        p[0] * q[1] == p[1] * q[0]
        and p[0] * q[2] == p[2] * q[0]
        and p[1] * q[2] == p[2] * q[1]
    )


def _collinear(p: HomPoint, q: HomPoint, r: HomPoint) -> bool:
    return linalg.det([list(p), list(q), list(r)]) == 0


def _check_general_position(points: Sequence[HomPoint]) -> None:
    for i, j in itertools.combinations(range(len(points)), 2):
        if _proportional(points[i], points[j]):
            raise ConfigError(f"points not distinct: #{i + 1} and #{j + 1}")
    for i, j, k in itertools.combinations(range(len(points)), 3):
        if _collinear(points[i], points[j], points[k]):
            raise ConfigError(f"general position violated: points #{i + 1}, #{j + 1}, #{k + 1} are collinear")


@dataclass(frozen=True)
class PointConfig:
    """Five plane points in general position, in normalized coordinates.

    ``transform`` carries the first four raw points to the projective frame
    (1:0:0), (1:1:0), (1:0:1), (1:alpha:beta) and the fifth to the affine
    point (1:a:b); over the rationals the frame branch is always
    (alpha, beta) = (1, -1).
    """

    raw_points: tuple[HomPoint, ...]
    transform: tuple[tuple[Fraction, ...], ...]
    alpha_beta: tuple[Fraction, Fraction]
    ab: tuple[Fraction, Fraction]

    def __post_init__(self) -> None:
        _check_general_position(self.normalized_points())

    def normalized_points(self) -> list[HomPoint]:
        one = Fraction(1)
        alpha, beta = self.alpha_beta
        a, b = self.ab
        return [
            (one, Fraction(0), Fraction(0)),
            (one, one, Fraction(0)),
            (one, Fraction(0), one),
            (one, alpha, beta),
            (one, a, b),
        ]

    def affine_points(self) -> list[tuple[Fraction, Fraction]]:
        return [(p[1] / p[0], p[2] / p[0]) for p in self.normalized_points()]

    @classmethod
    def from_ab(cls, a: Rat, b: Rat, alpha_beta: tuple[Rat, Rat] = (1, -1)) -> "PointConfig":
        a, b = as_rat(a), as_rat(b)
        pair = (as_rat(alpha_beta[0]), as_rat(alpha_beta[1]))
        one, zero = Fraction(1), Fraction(0)
        points = (
            (one, zero, zero),
            (one, one, zero),
            (one, zero, one),
            (one, pair[0], pair[1]),
            (one, a, b),
        )
        return cls(
            raw_points=points,
            transform=tuple(tuple(row) for row in linalg.identity(3)),
            alpha_beta=pair,
            ab=(a, b),
        )

    @classmethod
    def from_theta(cls, theta: Sequence[Rat]) -> "PointConfig":
        return normalize_config(veronese_points(theta))

    def to_json(self) -> dict:
        from .exactpoly import rat_str

        return {
            "raw_points": [[rat_str(c) for c in p] for p in self.raw_points],
            "transform": [[rat_str(c) for c in row] for row in self.transform],
            "alpha_beta": [rat_str(self.alpha_beta[0]), rat_str(self.alpha_beta[1])],
            "ab": [rat_str(self.ab[0]), rat_str(self.ab[1])],
        }


def _frame_matrix(p1: HomPoint, p2: HomPoint, p3: HomPoint, p4: HomPoint) -> linalg.Matrix:
    # Columns lambda_i * p_i where lambda solves [p1 p2 p3] lambda = p4.
    cols = [list(p1), list(p2), list(p3)]
    a = [[cols[j][i] for j in range(3)] for i in range(3)]
    lam = linalg.mat_vec(linalg.mat_inverse(a), list(p4))
    if any(l == 0 for l in lam):
        raise ConfigError("frame points are degenerate (three of them collinear)")
    return [[lam[j] * cols[j][i] for j in range(3)] for i in range(3)]


def normalize_config(points: Sequence[Sequence[Rat]]) -> PointConfig:
    """Move five general-position points to the canonical frame.

    The returned configuration stores the input points (reordered when the
    fifth initially lands on the line at infinity, which over the rationals
    can always be repaired by swapping the roles of the last two points) and
    the exact 3x3 transform realizing the normalization.
    """
    if len(points) != 5:
        raise ConfigError(f"expected five points, got {len(points)}")
    pts = [_hom(p) for p in points]
    _check_general_position(pts)
    targets = [
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(1), Fraction(0)),
        (Fraction(1), Fraction(0), Fraction(1)),
        (Fraction(1), Fraction(1), Fraction(-1)),
    ]
    source_frame = _frame_matrix(*pts[:4])
    target_frame = _frame_matrix(*targets)
    transform = linalg.mat_mul(target_frame, linalg.mat_inverse(source_frame))
    ordered = list(pts)
    image5 = linalg.mat_vec(transform, list(pts[4]))
    if image5[0] == 0:
        # Fifth point at infinity in the new frame: swap the 4th and 5th
        # roles with the triangular transform fixing the first three points.
        if image5[1] == 0:
            raise ConfigError("degenerate image of the fifth point")  # pragma: no cover
        b = image5[2] / image5[1]
        # b*(b+1) = 0 would force the image to be collinear with two frame
        # points, which general position already excludes.
        x, y, z = b, -b * b - 2 * b, Fraction(1)
        swap = [[x, y, z], [Fraction(0), x + y, Fraction(0)], [Fraction(0), Fraction(0), x + z]]
        transform = linalg.mat_mul(swap, transform)
        ordered = pts[:3] + [pts[4], pts[3]]
        image5 = linalg.mat_vec(transform, list(ordered[4]))
        if image5[0] == 0:  # would need b^2 + b + 1 = 0, impossible over Q
            raise ConfigError("fifth point cannot be moved off the line at infinity")  # pragma: no cover
    a, b = image5[1] / image5[0], image5[2] / image5[0]
    config = PointConfig(
        raw_points=tuple(ordered),
        transform=tuple(tuple(row) for row in transform),
        alpha_beta=(Fraction(1), Fraction(-1)),
        ab=(a, b),
    )
    for raw, target in zip(ordered, config.normalized_points()):
        image = linalg.mat_vec([list(r) for r in config.transform], list(raw))
        if not _proportional(tuple(image), target):  # pragma: no cover - re-verification
            raise ArithmeticError("normalization transform failed re-verification")
    return config


# ---------------------------------------------------------------------------
# Quadric pencils
# ---------------------------------------------------------------------------


def _int_nth_root(n: int, k: int) -> Optional[int]:
    if n < 0:
        return None
    if n in (0, 1):
        return n
    lo, hi = 1, 1 << ((n.bit_length() + k - 1) // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


@dataclass(frozen=True)
class QuadricPencil:
    """Pair of 5x5 symmetric rational matrices spanning a pencil of quadrics.

    Construction rescales both matrices by a common rational square when that
    makes ``det Q1 = 1`` exactly (a congruence by a scalar, so the
    characteristic roots are untouched); otherwise comparisons downstream are
    made against the monic characteristic polynomial instead.
    """

    q1: tuple[tuple[Fraction, ...], ...]
    q2: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        for name, m in (("Q1", self.q1), ("Q2", self.q2)):
            if len(m) != 5 or any(len(row) != 5 for row in m):
                raise PencilError(f"{name} must be 5x5")
            for i in range(5):
                for j in range(5):
                    if m[i][j] != m[j][i]:
                        raise PencilError(f"{name} is not symmetric")
        d = linalg.det([list(r) for r in self.q1])
        if d == 0:
            raise PencilError("Q1 is singular")

    @classmethod
    def make(cls, q1: Sequence[Sequence[Rat]], q2: Sequence[Sequence[Rat]]) -> "QuadricPencil":
        m1 = tuple(tuple(as_rat(x) for x in row) for row in q1)
        m2 = tuple(tuple(as_rat(x) for x in row) for row in q2)
        d = linalg.det([list(r) for r in m1])
        if d > 0 and d != 1:
            # det(c * Q1) = c^5 det Q1; a common factor c = s^2 keeps the
            # roots fixed, so unit normalization needs 1/d to be a 10th power.
            num = _int_nth_root(d.denominator, 10)
            den = _int_nth_root(d.numerator, 10)
            if num is not None and den is not None:
                c = Fraction(num, den) ** 2
                m1 = tuple(tuple(x * c for x in row) for row in m1)
                m2 = tuple(tuple(x * c for x in row) for row in m2)
        return cls(m1, m2)

    def det_q1(self) -> Fraction:
        return linalg.det([list(r) for r in self.q1])

    def member(self, e1: Rat, e2: Rat) -> list[list[Fraction]]:
        """The quadric e2*Q1 - e1*Q2 of the pencil."""
        e1, e2 = as_rat(e1), as_rat(e2)
        return [[e2 * self.q1[i][j] - e1 * self.q2[i][j] for j in range(5)] for i in range(5)]


def characteristic_polynomial(pencil: QuadricPencil) -> MPoly:
    """Exact degree-5 polynomial ``det(t Q1 - Q2)``.

    Raises `PencilError` when the polynomial has a repeated root (detected by
    a nonconstant gcd with its derivative), since the whole toolkit assumes a
    generic pencil.
    """
    t = MPoly.variable(T_VARS, "t")
    rows = [
        [t * pencil.q1[i][j] - MPoly.const(T_VARS, pencil.q2[i][j]) for j in range(5)]
        for i in range(5)
    ]
    p = linalg.mpoly_det(rows)
    if p.degree_in("t") != 5:
        raise PencilError("characteristic polynomial must have degree 5")
    g = univariate_gcd(p, poly_derivative(p, "t"), "t")
    if g.total_degree() > 0:
        raise PencilError(f"pencil not generic: repeated characteristic roots (gcd {to_text(g)})")
    return p


def _monic(p: MPoly) -> MPoly:
    return p * (1 / p.leading_coefficient())


def standard_dp4_quadrics(theta: Sequence[Rat]) -> QuadricPencil:
    """Diagonal model pencil with prescribed characteristic roots.

    The two diagonals are ``1 / P'(theta_i)`` and ``theta_i / P'(theta_i)``
    where P is the monic quintic with the given roots.
    """
    th = [as_rat(t) for t in theta]
    if len(th) != 5:
        raise PencilError("exactly five characteristic roots are required")
    if len(set(th)) != 5:
        raise PencilError(f"characteristic roots must be distinct, got {th}")
    t = MPoly.variable(T_VARS, "t")
    poly = MPoly.const(T_VARS, 1)
    for root in th:
        poly = poly * (t - root)
    dpoly = poly_derivative(poly, "t")
    weights = [poly_eval(dpoly, {"t": root}) for root in th]
    zero = Fraction(0)
    q1 = tuple(tuple(1 / weights[i] if i == j else zero for j in range(5)) for i in range(5))
    q2 = tuple(tuple(th[i] / weights[i] if i == j else zero for j in range(5)) for i in range(5))
    return QuadricPencil.make(q1, q2)


def _factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    n = abs(n)
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    f = 7
    step = 4
    while f * f <= n:
        while n % f == 0:
            factors[f] = factors.get(f, 0) + 1
            n //= f
        f += step
        step = 6 - step
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def _rational_roots(p: MPoly) -> tuple[list[Fraction], MPoly]:
    """All rational roots (with multiplicity) and the rootless cofactor."""
    coeffs = [Fraction(0)] * (p.degree_in("t") + 1)
    for exp, c in p.terms.items():
        coeffs[exp[0]] = c
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots: list[Fraction] = []
    while len(ints) > 1 and ints[0] == 0:
        roots.append(Fraction(0))
        ints = ints[1:]
    if len(ints) > 1:
        candidates = {Fraction(0)}
        for num in _divisors(ints[0]):
            for d in _divisors(ints[-1]):
                candidates.add(Fraction(num, d))
                candidates.add(Fraction(-num, d))
        candidates.discard(Fraction(0))
        for cand in sorted(candidates):
            while len(ints) > 1 and sum(c * cand**k for k, c in enumerate(ints)) == 0:
                roots.append(cand)
                # synthetic division by (t - cand)
                quotient = [Fraction(0)] * (len(ints) - 1)
                carry = Fraction(ints[-1])
                for k in range(len(ints) - 2, -1, -1):
                    quotient[k] = carry
                    carry = ints[k] + carry * cand
                ints = quotient
            if len(ints) == 1:
                break
    cofactor_terms = {(k,): c for k, c in enumerate(ints) if c}
    return roots, MPoly(T_VARS, cofactor_terms)


@dataclass(frozen=True)
class SingularMember:
    theta: Fraction
    parameter: tuple[Fraction, Fraction]  # (1 : theta)


def singular_members(pencil: QuadricPencil) -> list[SingularMember]:
    """The five pencil parameters with singular member, all rational.

    Each root is re-verified by ``det(theta Q1 - Q2) = 0``.  Irrational roots
    raise, reporting the rootless factor: this toolkit works in the
    rational-root regime only.
    """
    p = _monic(characteristic_polynomial(pencil))
    roots, cofactor = _rational_roots(p)
    if cofactor.total_degree() > 0:
        raise PencilError(
            "rational-root regime only: non-rational factor remains: " + to_text(cofactor)
        )
    if len(roots) != 5:  # pragma: no cover - distinctness already enforced
        raise PencilError(f"expected 5 rational roots, found {len(roots)}")
    members = []
    for theta in sorted(roots):
        m = [[theta * pencil.q1[i][j] - pencil.q2[i][j] for j in range(5)] for i in range(5)]
        if linalg.det(m) != 0:  # pragma: no cover - roots satisfy this by construction
            raise ArithmeticError("claimed singular member has nonzero determinant")
        members.append(SingularMember(theta, (Fraction(1), theta)))
    return members


def member_corank(pencil: QuadricPencil, theta: Rat) -> int:
    theta = as_rat(theta)
    m = [[theta * pencil.q1[i][j] - pencil.q2[i][j] for j in range(5)] for i in range(5)]
    return 5 - linalg.rank(m)


def veronese_points(theta: Sequence[Rat]) -> list[HomPoint]:
    """Images (1 : t : t^2) of the five pencil parameters on the plane conic."""
    th = [as_rat(t) for t in theta]
    if len(set(th)) != len(th):
        raise PencilError(f"parameters must be distinct, got {th}")
    return [(Fraction(1), t, t * t) for t in th]


# ---------------------------------------------------------------------------
# Divisor lattice: the 16 lines and 10 conic fibrations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisorClass:
    """Class d*L - sum(m_i E_i) in the blow-up basis, with its intersection form."""

    d: int
    m: tuple[int, int, int, int, int]
    label: str = field(default="", compare=False)

    def dot(self, other: "DivisorClass") -> int:
        return self.d * other.d - sum(a * b for a, b in zip(self.m, other.m))

    def self_intersection(self) -> int:
        return self.dot(self)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.d + other.d, tuple(a + b for a, b in zip(self.m, other.m)))  # type: ignore[arg-type]


def anticanonical_class() -> DivisorClass:
    return DivisorClass(3, (1, 1, 1, 1, 1), label="-K")


def exceptional_class(i: int) -> DivisorClass:
    if not 1 <= i <= 5:
        raise ValueError("index must be 1..5")
    m = [0] * 5
    m[i - 1] = -1
    return DivisorClass(0, tuple(m), label=f"E{i}")  # type: ignore[arg-type]


def line_class(i: int, j: int) -> DivisorClass:
    if not (1 <= i <= 5 and 1 <= j <= 5 and i != j):
        raise ValueError("need two distinct indices in 1..5")
    i, j = min(i, j), max(i, j)
    m = [0] * 5
    m[i - 1] = m[j - 1] = 1
    return DivisorClass(1, tuple(m), label=f"l{i}{j}")  # type: ignore[arg-type]


def conic_class() -> DivisorClass:
    return DivisorClass(2, (1, 1, 1, 1, 1), label="C")


def enumerate_lines() -> list[DivisorClass]:
    """The 16 line classes: the conic transform, five exceptionals, ten joins."""
    lines = [conic_class()]
    lines.extend(exceptional_class(i) for i in range(1, 6))
    lines.extend(line_class(i, j) for i, j in itertools.combinations(range(1, 6), 2))
    return lines


@dataclass(frozen=True)
class ConicFibration:
    """Conic fibration with its fiber class and four singular fibers."""

    i: int
    j: int
    fiber_class: DivisorClass
    singular_fibers: tuple[tuple[DivisorClass, DivisorClass], ...]


def conic_fibrations() -> list[ConicFibration]:
    """The ten conic fibrations (i = 1..5, j = 1, 2), four singular fibers each."""
    out = []
    for i in range(1, 6):
        others = [k for k in range(1, 6) if k != i]
        fiber1 = DivisorClass(1, tuple(1 if k == i else 0 for k in range(1, 6)), label=f"L-E{i}")
        fibers1 = tuple((line_class(k, i), exceptional_class(k)) for k in others)
        out.append(ConicFibration(i, 1, fiber1, fibers1))
        fiber2 = DivisorClass(2, tuple(0 if k == i else 1 for k in range(1, 6)), label=f"2L-sum+E{i}")
        pairings = (
            ((others[0], others[1]), (others[2], others[3])),
            ((others[0], others[2]), (others[1], others[3])),
            ((others[0], others[3]), (others[1], others[2])),
        )
        fibers2 = tuple(
            (line_class(*pair1), line_class(*pair2)) for pair1, pair2 in pairings
        ) + ((conic_class(), exceptional_class(i)),)
        out.append(ConicFibration(i, 2, fiber2, fibers2))
    return out


def zeta_numerology(k_squared: int = 4, c2: int = 8) -> dict:
    """Tautological-class intersection numbers on the projectivized tangent bundle.

    The relation ``zeta^2 = -pi*K . zeta - pi*c2`` gives ``zeta^3 = K^2 - c2``;
    the base locus of the degree-2 tautological system is sixteen curves of
    equal multiplicity a with ``(2 zeta)^2 . zeta = -16 a``.
    """
    zeta_cubed = k_squared - c2
    multiplicity = Fraction(-4 * zeta_cubed, 16)
    return {
        "zeta_cubed": zeta_cubed,
        "base_multiplicity": multiplicity,
        "base_multiplicity_sum": -4 * zeta_cubed,
        "euler_characteristic_blowup": 2 * c2 + 32,
    }


def vmrt_class_sum(i: int) -> bool:
    """The two dual-variety classes of the i-th fibration pair sum to 2*zeta.

    Classes live in the free module on (zeta, L, E1..E5).
    """
    if not 1 <= i <= 5:
        raise ValueError("index must be 1..5")
    c1 = [1, -1] + [1] * 5
    c2 = [1, 1] + [-1] * 5
    c1[1 + i] -= 2
    c2[1 + i] += 2
    total = [a + b for a, b in zip(c1, c2)]
    return total == [2, 0, 0, 0, 0, 0, 0]


# ---------------------------------------------------------------------------
# Projective line bookkeeping: cross ratios and Moebius matching
# ---------------------------------------------------------------------------

P1Point = tuple[Fraction, Fraction]


def _p1(point: Sequence[Rat]) -> P1Point:
    a, b = as_rat(point[0]), as_rat(point[1])
    if a == 0 and b == 0:
        raise ValueError("(0:0) is not a point of the projective line")
    return (a, b)


def _p1_det(p: P1Point, q: P1Point) -> Fraction:
    return p[0] * q[1] - p[1] * q[0]


def cross_ratio(p1: Sequence[Rat], p2: Sequence[Rat], p3: Sequence[Rat], p4: Sequence[Rat]) -> tuple[Fraction, Fraction]:
    """Cross ratio of four distinct points of the projective line.

    Returned projectively as a pair (numerator, denominator) so the value
    infinity stays exact.
    """
    a, b, c, d = _p1(p1), _p1(p2), _p1(p3), _p1(p4)
    return (_p1_det(a, c) * _p1_det(b, d), _p1_det(a, d) * _p1_det(b, c))


def mobius_from_pairs(pairs: Sequence[tuple[Sequence[Rat], Sequence[Rat]]]) -> tuple[tuple[Fraction, ...], ...]:
    """The unique projective-line map sending three source points to three targets."""
    if len(pairs) != 3:
        raise ValueError("a Moebius map is determined by exactly three point pairs")
    rows = []
    for source, target in pairs:
        (s0, s1), (t0, t1) = _p1(source), _p1(target)
        # t1*(alpha*s0 + beta*s1) - t0*(gamma*s0 + delta*s1) = 0
        rows.append([t1 * s0, t1 * s1, -t0 * s0, -t0 * s1])
    null = linalg.kernel(rows, 4)
    if len(null) != 1:
        raise ValueError(f"degenerate point pairs (solution space dimension {len(null)})")
    alpha, beta, gamma, delta = null[0]
    m = ((alpha, beta), (gamma, delta))
    if alpha * delta - beta * gamma == 0:
        raise ValueError("point pairs do not determine an invertible map")
    return m


def mobius_apply(m: Sequence[Sequence[Rat]], point: Sequence[Rat]) -> P1Point:
    (a, b), (c, d) = ((as_rat(x) for x in row) for row in m)
    p0, p1 = _p1(point)
    return (a * p0 + b * p1, c * p0 + d * p1)


def match_directions_to_parameters(
    directions: Sequence[Sequence[Rat]], parameters: Sequence[Sequence[Rat]]
) -> dict:
    """Match five pencil directions to five singular parameters by a Moebius map.

    Fits the map on the first three pairs of each candidate bijection and
    accepts only exact zero residual on the two held-out pairs.  Returns the
    permutation (directions index -> parameters index), the map, and the
    held-out residuals (all zero on success); raises when no bijection works.
    """
    dirs = [_p1(d) for d in directions]
    params = [_p1(p) for p in parameters]
    if len(dirs) != 5 or len(params) != 5:
        raise ValueError("need exactly five directions and five parameters")
    for perm in itertools.permutations(range(5)):
        try:
            m = mobius_from_pairs([(dirs[k], params[perm[k]]) for k in range(3)])
        except ValueError:
            continue
        residuals = []
        for k in (3, 4):
            image = mobius_apply(m, dirs[k])
            residuals.append(_p1_det(image, params[perm[k]]))
        if all(r == 0 for r in residuals):
            return {
                "permutation": tuple(perm),
                "matrix": m,
                "held_out_residuals": tuple(residuals),
            }
    raise ValueError("no Moebius map matches the directions to the parameters")
