"""Level-surface and pencil-member probes through the chart model.

A basis pair (H, G) of fields restricts at a chart point x0 to two binary
quadrics in the fiber coordinates (u, v).  Solving H = e1, G = e2 exactly
classifies the fiber over x0: four simple points for generic data, a whole
conic over the distinguished nodes paired with their own pencil direction,
and various exactly-detected degenerations in between.  Fibers with
irrational coordinates are never materialized -- reports carry discriminants
and root-field data instead, which is enough to certify counts with
multiplicity and the free involution (u, v) -> (-u, -v).

The chart discriminant of the pencil combination is the branch-curve
equation; its exact square test detects the five reducible members, whose
directions are found independently by node proportionality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .exactpoly import (
    MPoly,
    Rat,
    VarTable,
    as_rat,
    binary_quadratic_discriminant,
    exact_divide,
    perfect_square_test,
    poly_derivative,
    poly_eval,
    poly_substitute_linear,
    rat_sqrt,
    univariate_gcd,
)
from .pencil import PointConfig
from .sections import PLANE_VARS, SectionBasis

__all__ = [
    "FiberStatus",
    "BinaryQuadric",
    "FiberLine",
    "FiberReport",
    "SpecialDirections",
    "WitnessNode",
    "ReducibilityResult",
    "TangencyReport",
    "LevelsError",
    "restrict_at_point",
    "fiber_count",
    "chart_discriminant",
    "special_directions",
    "reducibility_test",
    "branch_quadrics",
    "branch_model_ranks",
    "ebi_cubic",
    "line_tangency_check",
]

T_PARAM = VarTable(("t",))


class LevelsError(ValueError):
    """Degenerate input to a level-surface probe."""


class FiberStatus(str, Enum):
    FOUR_POINTS = "four_points"
    TWO_DOUBLE = "two_double"
    DOUBLE_DOUBLE = "double_double"
    WHOLE_LINE = "whole_line"
    OTHER_DEGENERATE = "other-degenerate"


@dataclass(frozen=True)
class BinaryQuadric:
    """Quadric c_u2 u^2 + c_uv uv + c_v2 v^2 with exact coefficients."""

    c_u2: Fraction
    c_uv: Fraction
    c_v2: Fraction

    def __call__(self, u: Fraction, v: Fraction) -> Fraction:
        return self.c_u2 * u * u + self.c_uv * u * v + self.c_v2 * v * v

    def is_zero(self) -> bool:
        return self.c_u2 == 0 and self.c_uv == 0 and self.c_v2 == 0

    def discriminant(self) -> Fraction:
        return self.c_uv * self.c_uv - 4 * self.c_u2 * self.c_v2


def _direction_pair(e: Sequence[Rat]) -> tuple[Fraction, Fraction]:
    e1, e2 = as_rat(e[0]), as_rat(e[1])
    if e1 == 0 and e2 == 0:
        raise LevelsError("the direction (0, 0) is not allowed")
    return e1, e2


def restrict_at_point(basis: SectionBasis, e: Sequence[Rat], x0: Sequence[Rat]) -> BinaryQuadric:
    """Binary quadric of the pencil member e2*H - e1*G at a chart point."""
    e1, e2 = _direction_pair(e)
    x, y = as_rat(x0[0]), as_rat(x0[1])
    f0, g0, h0 = basis.H.restrict(x, y)
    c0, d0, e0 = basis.G.restrict(x, y)
    return BinaryQuadric(e2 * f0 - e1 * c0, e2 * h0 - e1 * e0, e2 * g0 - e1 * d0)


@dataclass(frozen=True)
class FiberLine:
    """Solutions of the fiber system along one root line of the direction quadric.

    ``direction`` is a primitive rational direction or None when the two
    directions are an irrational conjugate pair (then ``conjugate_quadric``
    holds the defining binary quadric).  ``radius_square`` is the exact value
    of s^2 for solutions s * direction; it is None for conjugate or dead
    lines (dead = both fields vanish along the line, so the affine fiber
    misses it).
    """

    direction: Optional[tuple[Fraction, Fraction]]
    conjugate_quadric: Optional[tuple[Fraction, Fraction, Fraction]]
    multiplicity: int
    alive: bool
    radius_square: Optional[Fraction]


@dataclass(frozen=True)
class FiberReport:
    """Exact classification of one fiber of the level-surface projection."""

    base_point: tuple[Fraction, Fraction]
    direction_e: tuple[Fraction, Fraction]
    status: FiberStatus
    solution_data: tuple[FiberLine, ...]
    involution_pairs: Optional[tuple[int, ...]]  # indices into solution_data, one per orbit


def _primitive_direction(du: Fraction, dv: Fraction) -> tuple[Fraction, Fraction]:
    prim = linalg.primitive_integer_vector([du, dv])
    return (Fraction(prim[0]), Fraction(prim[1]))


def fiber_count(basis: SectionBasis, e: Sequence[Rat], x0: Sequence[Rat]) -> FiberReport:
    """Solve H(x0, u, v) = e1, G(x0, u, v) = e2 exactly and classify.

    Any fiber solution must lie on the zero set of the pencil quadric
    e2*H(x0) - e1*G(x0), a pair of lines through the fiber origin; on each
    root line the two equations become one value equation s^2 = rho, so
    solutions come in involution orbits {+s d, -s d} and the orbit count,
    multiplicities, and rationality data are all exactly decidable.
    """
    e1, e2 = _direction_pair(e)
    x, y = as_rat(x0[0]), as_rat(x0[1])
    if (x, y) in set(basis.config.affine_points()):
        raise LevelsError("base point is the chart image of a blown-up point")
    f0, g0, h0 = basis.H.restrict(x, y)
    c0, d0, e0 = basis.G.restrict(x, y)
    pencil_q = BinaryQuadric(e2 * f0 - e1 * c0, e2 * h0 - e1 * e0, e2 * g0 - e1 * d0)
    h_quadric = BinaryQuadric(f0, h0, g0)
    g_quadric = BinaryQuadric(c0, e0, d0)

    if pencil_q.is_zero():
        if h_quadric.is_zero() and g_quadric.is_zero():
            status = FiberStatus.OTHER_DEGENERATE  # all sections vanish: empty fiber
            return FiberReport((x, y), (e1, e2), status, (), ())
        return FiberReport((x, y), (e1, e2), FiberStatus.WHOLE_LINE, (), None)

    # Root lines of the direction quadric, with multiplicity.
    lines: list[FiberLine] = []
    F, Hq, Gq = pencil_q.c_u2, pencil_q.c_uv, pencil_q.c_v2
    rational_dirs: list[tuple[tuple[Fraction, Fraction], int]] = []
    conjugate: Optional[tuple[Fraction, Fraction, Fraction]] = None
    if F != 0:
        disc = pencil_q.discriminant()
        if disc == 0:
            rational_dirs.append((_primitive_direction(-Hq / (2 * F), Fraction(1)), 2))
        else:
            root = rat_sqrt(disc)
            if root is None:
                conjugate = (F, Hq, Gq)
            else:
                rational_dirs.append((_primitive_direction((-Hq + root) / (2 * F), Fraction(1)), 1))
                rational_dirs.append((_primitive_direction((-Hq - root) / (2 * F), Fraction(1)), 1))
    elif Hq != 0:
        rational_dirs.append(((Fraction(1), Fraction(0)), 1))
        rational_dirs.append((_primitive_direction(-Gq / Hq, Fraction(1)), 1))
    else:  # F = Hq = 0, Gq != 0
        rational_dirs.append(((Fraction(1), Fraction(0)), 2))

    orbit_lines: list[int] = []
    degenerate = False
    statuses: list[tuple[int, bool]] = []  # (multiplicity, alive) per line
    for direction, mult in rational_dirs:
        du, dv = direction
        alpha = h_quadric(du, dv)
        beta = g_quadric(du, dv)
        alive = not (alpha == 0 and beta == 0)
        radius = None
        if alive:
            radius = e1 / alpha if alpha != 0 else e2 / beta
            if radius == 0:  # pragma: no cover - impossible for e != 0 on a root line
                raise ArithmeticError("zero radius on an alive line")
        lines.append(FiberLine(direction, None, mult, alive, radius))
        statuses.append((mult, alive))
        if alive:
            orbit_lines.append(len(lines) - 1)  # one orbit {+s d, -s d} per alive line
        else:
            degenerate = True
    if conjugate is not None:
        F, Hq, Gq = conjugate
        # Reduce both fields along u = t*v with F t^2 + Hq t + Gq = 0:
        # each restriction is linear in t, so vanishing is a rational test.
        a1, a0 = h0 - f0 * Hq / F, g0 - f0 * Gq / F
        b1, b0 = e0 - c0 * Hq / F, d0 - c0 * Gq / F
        alive = not (a1 == 0 and a0 == 0 and b1 == 0 and b0 == 0)
        lines.append(FiberLine(None, conjugate, 1, alive, None))
        statuses.append((1, alive))
        statuses.append((1, alive))
        if alive:
            orbit_lines.extend([len(lines) - 1, len(lines) - 1])
        else:
            degenerate = True

    total_mult = sum(m for m, alive in statuses if alive)
    if degenerate or total_mult == 0:
        status = FiberStatus.OTHER_DEGENERATE
    elif total_mult == 2 and len(statuses) == 2 and all(m == 1 for m, _ in statuses):
        # two distinct direction roots, both alive: 4 simple points
        status = FiberStatus.FOUR_POINTS
    elif len(statuses) == 1 and statuses[0][0] == 2:
        status = FiberStatus.TWO_DOUBLE
    else:  # pragma: no cover - defensive
        status = FiberStatus.OTHER_DEGENERATE
    if status is FiberStatus.FOUR_POINTS and len(orbit_lines) != 2:  # pragma: no cover
        raise ArithmeticError("four-point fiber must consist of two involution orbits")
    return FiberReport((x, y), (e1, e2), status, tuple(lines), tuple(orbit_lines))


def chart_discriminant(basis: SectionBasis, e: Sequence[Rat]) -> MPoly:
    """Discriminant of the fiber quadratic as an exact polynomial in (x, y).

    This is the chart equation of the branch curve of the pencil member at
    direction e; total degree is bounded by 8 and drops to 6 for true
    section pairs because the top-degree parts cancel.
    """
    e1, e2 = _direction_pair(e)
    a = basis.H.f * e2 - basis.G.f * e1
    b = basis.H.g * e2 - basis.G.g * e1
    c = basis.H.h * e2 - basis.G.h * e1
    return binary_quadratic_discriminant(a, c, b)


@dataclass(frozen=True)
class WitnessNode:
    """A chart node certifying one special direction."""

    node: tuple[Fraction, Fraction]
    pairing: tuple[tuple[int, int], tuple[int, int]]
    direction: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class SpecialDirections:
    """The five pencil directions with reducible member, with witnesses."""

    directions: tuple[tuple[Fraction, Fraction], ...]
    witnesses: tuple[tuple[WitnessNode, ...], ...]


def _cross(p: Sequence[Fraction], q: Sequence[Fraction]) -> tuple[Fraction, Fraction, Fraction]:
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def _node_of_pairing(points: Sequence[tuple[Fraction, ...]], pair1: tuple[int, int], pair2: tuple[int, int]):
    line1 = _cross(points[pair1[0] - 1], points[pair1[1] - 1])
    line2 = _cross(points[pair2[0] - 1], points[pair2[1] - 1])
    node = _cross(line1, line2)
    if all(c == 0 for c in node):  # pragma: no cover - distinct lines always meet once
        raise LevelsError("coincident lines in a singular fiber")
    if node[0] == 0:
        return None  # node on the line at infinity: not chart-visible
    return (node[1] / node[0], node[2] / node[0])


def special_directions(basis: SectionBasis, config: PointConfig) -> SpecialDirections:
    """Detect the five special directions by node proportionality.

    For each i the three chart-visible nodes of the second conic fibration
    (intersections of the joins over the pairings of the other four points)
    must restrict H and G to proportional binary quadrics; the common ratio
    is the direction, and all witnesses for one i must agree exactly.
    """
    points = config.normalized_points()
    directions: list[tuple[Fraction, Fraction]] = []
    witnesses: list[tuple[WitnessNode, ...]] = []
    for i in range(1, 6):
        others = [k for k in range(1, 6) if k != i]
        pairings = (
            ((others[0], others[1]), (others[2], others[3])),
            ((others[0], others[2]), (others[1], others[3])),
            ((others[0], others[3]), (others[1], others[2])),
        )
        nodes: list[WitnessNode] = []
        direction_i: Optional[tuple[Fraction, Fraction]] = None
        for pair1, pair2 in pairings:
            node = _node_of_pairing(points, pair1, pair2)
            if node is None:
                continue
            f0, g0, h0 = basis.H.restrict(*node)
            c0, d0, e0 = basis.G.restrict(*node)
            if f0 == g0 == h0 == 0 and c0 == d0 == e0 == 0:
                raise LevelsError(f"unexpected deeper degeneracy at node {node}")
            if f0 * d0 - g0 * c0 != 0 or f0 * e0 - h0 * c0 != 0 or g0 * e0 - h0 * d0 != 0:
                raise LevelsError(f"restrictions not proportional at node {node}")
            for num, den in ((f0, c0), (g0, d0), (h0, e0)):
                if num != 0 or den != 0:
                    prim = linalg.primitive_integer_vector([num, den])
                    direction = (Fraction(prim[0]), Fraction(prim[1]))
                    break
            if direction_i is None:
                direction_i = direction
            elif direction_i != direction:
                raise LevelsError(f"inconsistent witness directions for index {i}")
            nodes.append(WitnessNode(node, (pair1, pair2), direction))
        if direction_i is None:
            raise LevelsError(f"no chart-visible witness nodes for index {i}")
        directions.append(direction_i)
        witnesses.append(tuple(nodes))
    if len(set(directions)) != 5:
        raise LevelsError(f"special directions are not pairwise distinct: {directions}")
    return SpecialDirections(tuple(directions), tuple(witnesses))


def chart_base_curves(config: PointConfig) -> list[MPoly]:
    """Chart equations of the eleven base curves visible in the chart.

    These are the ten joins of base-point pairs and the unique conic through
    all five points; a fiber over a point of any of them misses the solutions
    along the lifted base direction, so genericity of a sample point means
    exactly: on none of these curves.
    """
    pts = config.affine_points()
    x = MPoly.variable(PLANE_VARS, "x")
    y = MPoly.variable(PLANE_VARS, "y")
    curves = []
    for (px, py), (qx, qy) in itertools.combinations(pts, 2):
        curves.append((y - py) * (qx - px) - (x - px) * (qy - py))
    conic_monomials = ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))
    rows = [[px**a * py**b for a, b in conic_monomials] for px, py in pts]
    null = linalg.kernel(rows, 6)
    if len(null) != 1:  # pragma: no cover - general position forces a unique conic
        raise LevelsError("no unique conic through the five base points")
    coeffs = linalg.primitive_integer_vector(null[0])
    curves.append(MPoly(PLANE_VARS, {m: Fraction(c) for m, c in zip(conic_monomials, coeffs) if c}))
    return curves


def is_generic_sample(basis: SectionBasis, e: Sequence[Rat], x0: Sequence[Rat]) -> bool:
    """Exact genericity test for a fiber sample: off every base curve and
    off the branch curve of the chosen direction."""
    x, y = as_rat(x0[0]), as_rat(x0[1])
    point = {"x": x, "y": y}
    if any(poly_eval(curve, point) == 0 for curve in chart_base_curves(basis.config)):
        return False
    return poly_eval(chart_discriminant(basis, e), point) != 0


@dataclass(frozen=True)
class ReducibilityResult:
    reducible: bool
    sqrt: Optional[MPoly]


def reducibility_test(basis: SectionBasis, e: Sequence[Rat]) -> ReducibilityResult:
    """Whether the chart discriminant at direction e is an exact square."""
    outcome = perfect_square_test(chart_discriminant(basis, e))
    return ReducibilityResult(outcome.is_square, outcome.sqrt)


# ---------------------------------------------------------------------------
# Ambient branch model
# ---------------------------------------------------------------------------


def branch_quadrics(theta: Sequence[Rat], theta6: Rat) -> tuple[tuple[Fraction, ...], ...]:
    """Diagonals of the three branch-curve quadrics for an auxiliary parameter.

    With Q the monic sextic vanishing at the five pencil roots and theta6,
    the diagonals are 1/Q'(theta_i), theta_i/Q'(theta_i), theta_i^2/Q'(theta_i)
    restricted to the five pencil roots.
    """
    th = [as_rat(t) for t in theta]
    t6 = as_rat(theta6)
    values = th + [t6]
    if len(th) != 5 or len(set(values)) != 6:
        raise LevelsError("need six pairwise distinct parameters")
    derivs = []
    for i, ti in enumerate(th):
        prod = Fraction(1)
        for j, tj in enumerate(values):
            if j != i:
                prod *= ti - tj
        derivs.append(prod)
    return (
        tuple(1 / d for d in derivs),
        tuple(t / d for t, d in zip(th, derivs)),
        tuple(t * t / d for t, d in zip(th, derivs)),
    )


def branch_model_ranks(theta: Sequence[Rat], theta6: Rat) -> dict:
    """Exact rank data showing the branch curve lies on the surface.

    The two diagonal quadrics cutting the surface are rational combinations
    of the three branch quadrics, so stacking all five coefficient vectors
    leaves rank 3 = rank of the branch triple alone.
    """
    th = [as_rat(t) for t in theta]
    t = MPoly.variable(T_PARAM, "t")
    poly = MPoly.const(T_PARAM, 1)
    for root in th:
        poly = poly * (t - root)
    dpoly = poly_derivative(poly, "t")
    surface = [
        [1 / poly_eval(dpoly, {"t": root}) for root in th],
        [root / poly_eval(dpoly, {"t": root}) for root in th],
    ]
    branch = [list(row) for row in branch_quadrics(th, theta6)]
    stacked = surface + branch
    return {
        "rank_surface_pencil": linalg.rank(surface),
        "rank_branch_triple": linalg.rank(branch),
        "rank_stacked": linalg.rank(stacked),
        "branch_curve_on_surface": linalg.rank(stacked) == linalg.rank(branch),
    }


# ---------------------------------------------------------------------------
# The tangency cubic of a special direction
# ---------------------------------------------------------------------------

_CUBIC_MONOMIALS: tuple[tuple[int, int, int], ...] = tuple(
    (i, j, 3 - i - j) for i in range(3, -1, -1) for j in range(3 - i, -1, -1)
)


def _cubic_eval_row(point: tuple[Fraction, ...]) -> list[Fraction]:
    x0, x1, x2 = point
    return [x0**a * x1**b * x2**c for a, b, c in _CUBIC_MONOMIALS]


def _cubic_tangent_row(at: tuple[Fraction, ...], toward: tuple[Fraction, ...]) -> list[Fraction]:
    row = []
    for a, b, c in _CUBIC_MONOMIALS:
        x0, x1, x2 = at
        grad = (
            (a * x0 ** (a - 1) * x1**b * x2**c if a else Fraction(0)),
            (b * x0**a * x1 ** (b - 1) * x2**c if b else Fraction(0)),
            (c * x0**a * x1**b * x2 ** (c - 1) if c else Fraction(0)),
        )
        row.append(sum(g * t for g, t in zip(grad, toward)))
    return row


@dataclass(frozen=True)
class EbiCubicReport:
    index: int
    dim_tangency: int
    dim_with_base_point: int
    tangency_basis: tuple[tuple[Fraction, ...], ...]
    cubic: Optional[tuple[Fraction, ...]]
    cubic_chart: Optional[MPoly]


def ebi_cubic(config: PointConfig, i: int) -> EbiCubicReport:
    """Plane cubics tangent to the i-th joins at the other four base points.

    For each k != i the cubic must pass through p_k with tangent line the
    join of p_i and p_k (8 linear conditions on the 10 coefficients); adding
    passage through p_i makes 9.  Exact solution dimensions and bases are
    reported, plus the unique projective solution of the 9-condition system
    when it exists.
    """
    if not 1 <= i <= 5:
        raise ValueError("index must be 1..5")
    points = config.normalized_points()
    rows: list[list[Fraction]] = []
    pi = points[i - 1]
    for k in range(1, 6):
        if k == i:
            continue
        pk = points[k - 1]
        rows.append(_cubic_eval_row(pk))
        rows.append(_cubic_tangent_row(pk, pi))
    kernel8 = linalg.kernel(rows, len(_CUBIC_MONOMIALS))
    rows9 = rows + [_cubic_eval_row(pi)]
    kernel9 = linalg.kernel(rows9, len(_CUBIC_MONOMIALS))
    cubic = None
    chart = None
    if len(kernel9) == 1:
        cubic = tuple(Fraction(c) for c in linalg.primitive_integer_vector(kernel9[0]))
        terms = {}
        for (a, b, c), coeff in zip(_CUBIC_MONOMIALS, cubic):
            if coeff:
                terms[(b, c)] = coeff  # chart: x0 = 1, exponents of (x, y)
        chart = MPoly(PLANE_VARS, terms)
    basis8 = tuple(tuple(Fraction(c) for c in linalg.primitive_integer_vector(v)) for v in kernel8)
    return EbiCubicReport(
        index=i,
        dim_tangency=len(kernel8),
        dim_with_base_point=len(kernel9),
        tangency_basis=basis8,
        cubic=cubic,
        cubic_chart=chart,
    )


# ---------------------------------------------------------------------------
# Tangency of the branch curve to the chart-visible lines
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TangencyReport:
    pair: tuple[int, int]
    restriction_degree: int
    gcd_degree: int
    witnesses: tuple[Fraction, ...]
    residual_factor: Optional[MPoly]

    def has_tangency_witness(self) -> bool:
        return bool(self.witnesses) or (self.residual_factor is not None and self.residual_factor.total_degree() > 0)


def line_tangency_check(basis: SectionBasis, e: Sequence[Rat], pair: tuple[int, int]) -> TangencyReport:
    """Repeated roots of the branch curve restricted to the join of two base points.

    The join is parametrized by p_i + t (p_j - p_i); the two base points sit
    at t = 0 and t = 1 and are stripped from the repeated-root report, so any
    surviving repeated root witnesses a genuine tangency of the branch curve
    with the line.  Witness parameters are returned exactly when rational;
    an irrational (or higher-degree) repeated factor is returned as the
    residual polynomial.
    """
    i, j = pair
    if not (1 <= i <= 5 and 1 <= j <= 5 and i != j):
        raise ValueError("need two distinct indices in 1..5")
    affine = basis.config.affine_points()
    pi, pj = affine[i - 1], affine[j - 1]
    delta = chart_discriminant(basis, e)
    t = MPoly.variable(T_PARAM, "t")
    image_x = t * (pj[0] - pi[0]) + pi[0]
    image_y = t * (pj[1] - pi[1]) + pi[1]
    restricted = poly_substitute_linear(delta, {"x": image_x, "y": image_y})
    if restricted.is_zero():
        raise LevelsError("discriminant vanishes identically along the line")
    g = univariate_gcd(restricted, poly_derivative(restricted, "t"), "t")
    stripped = g
    for root in (Fraction(0), Fraction(1)):
        factor = t - root
        while stripped.degree_in("t") > 0 and poly_eval(stripped, {"t": root}) == 0:
            quotient = exact_divide(stripped, factor)
            if quotient is None:  # pragma: no cover - the root test guarantees divisibility
                raise ArithmeticError("failed to strip a certified root")
            stripped = quotient
    witnesses: list[Fraction] = []
    residual: Optional[MPoly] = None
    if stripped.degree_in("t") == 1:
        c1 = stripped.coefficient((1,))
        c0 = stripped.coefficient((0,))
        tau = -c0 / c1
        if poly_eval(restricted, {"t": tau}) != 0:  # pragma: no cover
            raise ArithmeticError("tangency witness does not lie on the curve")
        witnesses.append(tau)
    elif stripped.degree_in("t") > 1:
        residual = stripped
    return TangencyReport(
        pair=(min(i, j), max(i, j)),
        restriction_degree=restricted.degree_in("t"),
        gcd_degree=g.degree_in("t"),
        witnesses=tuple(witnesses),
        residual_factor=residual,
    )
