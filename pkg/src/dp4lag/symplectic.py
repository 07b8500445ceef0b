"""Poisson bracket, Hamiltonian frames, and involutivity certificates.

For two fiberwise-quadratic functions H, G on the cotangent chart the
bracket expression

    R = H_y G_v - H_v G_y + H_x G_u - H_u G_x

is computed as an exact polynomial in (x, y, u, v).  The fibration defined
by the pair is Lagrangian precisely when R vanishes identically for a basis
pair, which the certificate here establishes by exact cancellation -- not
numerically, and with redundant pointwise spot checks on top.

A symbolic tier re-runs the kernel computation with the fifth base point
(a, b) kept as polynomial indeterminates, proving the vanishing of R for
every configuration at once away from an explicitly reported degeneracy
locus.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .exactpoly import MPoly, Rat, VarTable, as_rat, poly_derivative, poly_eval
from .pencil import PointConfig
from .sections import (
    NUM_SLOTS,
    SLOTS,
    SLOT_INDEX,
    SectionBasis,
    SymField,
    assemble_system,
    blowup_point_constraints,
    kernel_basis,
    p2_constraints,
    point_constraint_coefficients,
)

__all__ = [
    "ChartVector",
    "InvolutivityCertificate",
    "SymbolicInvolutivity",
    "poisson_bracket_chart",
    "poisson_R",
    "hamiltonian_frame",
    "omega_pairing",
    "involutivity_certificate",
    "symbolic_involutivity",
]

ChartPoint = tuple[Fraction, Fraction, Fraction, Fraction]


def poisson_bracket_chart(hp: MPoly, gp: MPoly) -> MPoly:
    """Bracket polynomial of two chart functions over any table containing x,y,u,v."""
    for name in ("x", "y", "u", "v"):
        if name not in hp.vars:
            raise ValueError(f"chart variable {name!r} missing from the polynomial ring")
    hx, hy = poly_derivative(hp, "x"), poly_derivative(hp, "y")
    hu, hv = poly_derivative(hp, "u"), poly_derivative(hp, "v")
    gx, gy = poly_derivative(gp, "x"), poly_derivative(gp, "y")
    gu, gv = poly_derivative(gp, "u"), poly_derivative(gp, "v")
    return hy * gv - hv * gy + hx * gu - hu * gx


def poisson_R(H: SymField, G: SymField) -> MPoly:
    """The bracket expression of two fields as a polynomial in (x, y, u, v)."""
    return poisson_bracket_chart(H.chart_polynomial(), G.chart_polynomial())


@dataclass(frozen=True)
class ChartVector:
    """Exact tangent vector at an explicit cotangent-chart point."""

    base_point: ChartPoint
    components: tuple[Fraction, Fraction, Fraction, Fraction]


def _chart_point(q: Sequence[Rat]) -> ChartPoint:
    if len(q) != 4:
        raise ValueError("chart points have four coordinates (x, y, u, v)")
    return tuple(as_rat(c) for c in q)  # type: ignore[return-value]


def _partials_at(field: SymField, q: ChartPoint) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    chart = field.chart_polynomial()
    point = dict(zip(("x", "y", "u", "v"), q))
    return tuple(
        poly_eval(poly_derivative(chart, name), point) for name in ("x", "y", "u", "v")
    )  # type: ignore[return-value]


def hamiltonian_frame(H: SymField, G: SymField, q: Sequence[Rat]) -> tuple[ChartVector, ChartVector]:
    """The pair of Hamiltonian tangent vectors of (H, G) at a chart point.

    Both vectors use the same sign convention, A = (-H_u, -H_v, H_x, H_y),
    which is the one making ``omega(A, B)`` equal the bracket expression at q
    for arbitrary fields (flipping B's overall sign would flip that identity's
    sign without changing any involutivity verdict).
    """
    point = _chart_point(q)
    hx, hy, hu, hv = _partials_at(H, point)
    gx, gy, gu, gv = _partials_at(G, point)
    a = ChartVector(point, (-hu, -hv, hx, hy))
    b = ChartVector(point, (-gu, -gv, gx, gy))
    return a, b


def omega_pairing(a: ChartVector, b: ChartVector) -> Fraction:
    """Canonical symplectic pairing dx^du + dy^dv of two vectors at one point."""
    if a.base_point != b.base_point:
        raise ValueError("vectors must be attached to the same chart point")
    ax, ay, au, av = a.components
    bx, by, bu, bv = b.components
    return ax * bu - au * bx + ay * bv - av * by


@dataclass(frozen=True)
class InvolutivityCertificate:
    """Exact involutivity evidence for one configuration."""

    config: PointConfig
    basis: SectionBasis
    R_poly: MPoly
    is_zero: bool
    sample_checks: tuple[tuple[ChartPoint, Fraction], ...]


def _sample_points(config: PointConfig, count: int, seed: int) -> list[ChartPoint]:
    rng = random.Random(seed)
    forbidden = set(config.affine_points())
    points: list[ChartPoint] = []
    while len(points) < count:
        x = Fraction(rng.randint(-99, 99), rng.randint(1, 9))
        y = Fraction(rng.randint(-99, 99), rng.randint(1, 9))
        if (x, y) in forbidden:
            continue
        u = Fraction(rng.randint(-99, 99), rng.randint(1, 9))
        v = Fraction(rng.randint(-99, 99), rng.randint(1, 9))
        points.append((x, y, u, v))
    return points


def involutivity_certificate(config: PointConfig, samples: int = 10, seed: int = 0) -> InvolutivityCertificate:
    """Compute the kernel basis and certify that its bracket vanishes.

    The certificate records the bracket polynomial itself (vanishing is an
    exact statement about its term map) plus redundant sample evaluations
    computed through the frame pairing rather than the polynomial, so the two
    routes check each other.
    """
    basis = kernel_basis(assemble_system(config), config)
    r_poly = poisson_R(basis.H, basis.G)
    checks = []
    for q in _sample_points(config, samples, seed):
        a, b = hamiltonian_frame(basis.H, basis.G, q)
        via_pairing = omega_pairing(a, b)
        via_poly = poly_eval(r_poly, dict(zip(("x", "y", "u", "v"), q)))
        if via_pairing != via_poly:  # pragma: no cover - identity holds exactly
            raise ArithmeticError("frame pairing disagrees with the bracket polynomial")
        checks.append((q, via_poly))
    return InvolutivityCertificate(
        config=config,
        basis=basis,
        R_poly=r_poly,
        is_zero=r_poly.is_zero(),
        sample_checks=tuple(checks),
    )


# ---------------------------------------------------------------------------
# Symbolic tier: the fifth point stays an indeterminate pair (a, b)
# ---------------------------------------------------------------------------

AB_VARS = VarTable(("a", "b"))
SYMBOLIC_CHART_VARS = VarTable(("x", "y", "u", "v", "a", "b"))


@dataclass(frozen=True)
class SymbolicInvolutivity:
    """Involutivity of the kernel pair proved with (a, b) symbolic."""

    branch: tuple[Fraction, Fraction]
    reduced_dimension: int
    H_chart: MPoly
    G_chart: MPoly
    R_poly: MPoly
    is_zero: bool
    degeneracy_locus: MPoly

    def specialize_basis(self, a: Rat, b: Rat) -> tuple[SymField, SymField]:
        """Evaluate the symbolic kernel pair at a concrete (a, b)."""
        point = {"a": as_rat(a), "b": as_rat(b)}

        def specialize(chart: MPoly) -> SymField:
            values = {}
            for exp, c in chart.terms.items():
                ix, iy, iu, iv, ia, ib = exp
                key = (ix, iy, iu, iv)
                values[key] = values.get(key, Fraction(0)) + c * point["a"] ** ia * point["b"] ** ib
            slots = [Fraction(0)] * NUM_SLOTS
            for (ix, iy, iu, iv), c in values.items():
                if c == 0:
                    continue
                family = {(2, 0): "f", (0, 2): "g", (1, 1): "h"}[(iu, iv)]
                slots[SLOT_INDEX[(family, ix, iy)]] = c
            return SymField.from_slots(slots)

        return specialize(self.H_chart), specialize(self.G_chart)


def symbolic_involutivity(branch: tuple[Rat, Rat] = (1, -1)) -> SymbolicInvolutivity:
    """Prove R = 0 with the fifth point symbolic, for one frame branch.

    The 46 constraint rows that do not involve (a, b) are eliminated first
    over the rationals; the seven symbolic rows then act on the small reduced
    space and their exact polynomial kernel is computed fraction-free.  The
    product of elimination pivots is reported as the degeneracy locus: the
    parametrized kernel pair is valid wherever it does not vanish.
    """
    alpha, beta = as_rat(branch[0]), as_rat(branch[1])
    if (alpha, beta) not in ((Fraction(1), Fraction(-1)), (Fraction(1), Fraction(-1, 2))):
        raise ValueError("supported frame branches are (1, -1) and (1, -1/2)")
    rows = [r.row() for r in p2_constraints()]
    for pt in ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (alpha, beta)):
        rows.extend(r.row() for r in blowup_point_constraints(pt))
    reduced_basis = linalg.kernel(rows, NUM_SLOTS)
    d = len(reduced_basis)

    a_poly = MPoly.variable(AB_VARS, "a")
    b_poly = MPoly.variable(AB_VARS, "b")
    one = MPoly.const(AB_VARS, 1)
    symbolic_rows = point_constraint_coefficients(a_poly, b_poly, one=one)
    zero = MPoly.zero(AB_VARS)
    reduced_matrix: list[list[MPoly]] = []
    for _, coeffs in symbolic_rows:
        row = []
        for vec in reduced_basis:
            acc = zero
            for slot, poly_coeff in coeffs.items():
                weight = vec[SLOT_INDEX[slot]]
                if weight:
                    acc = acc + poly_coeff * weight
            row.append(acc)
        reduced_matrix.append(row)
    vectors, pivot_product, _ = linalg.mpoly_kernel(reduced_matrix)
    if len(vectors) != 2:
        raise ArithmeticError(f"symbolic kernel has dimension {len(vectors)}, expected 2")
    if pivot_product.is_zero():
        raise ArithmeticError("symbolic elimination pivots vanish identically")

    def lift(weights: list[MPoly]) -> MPoly:
        """Assemble the chart polynomial f u^2 + g v^2 + h uv with (a, b) symbolic."""
        terms: dict[tuple[int, ...], Fraction] = {}
        uv_exponent = {"f": (2, 0), "g": (0, 2), "h": (1, 1)}
        for k, vec in enumerate(reduced_basis):
            w = weights[k]
            if w.is_zero():
                continue
            for slot, coeff in zip(SLOTS, vec):
                if coeff == 0:
                    continue
                family, i, j = slot
                eu, ev = uv_exponent[family]
                for (ea, eb), c in w.terms.items():
                    exp = (i, j, eu, ev, ea, eb)
                    val = terms.get(exp, Fraction(0)) + coeff * c
                    if val:
                        terms[exp] = val
                    elif exp in terms:
                        del terms[exp]
        return MPoly(SYMBOLIC_CHART_VARS, terms)

    h_chart = lift(vectors[0])
    g_chart = lift(vectors[1])
    r_poly = poisson_bracket_chart(h_chart, g_chart)
    return SymbolicInvolutivity(
        branch=(alpha, beta),
        reduced_dimension=d,
        H_chart=h_chart,
        G_chart=g_chart,
        R_poly=r_poly,
        is_zero=r_poly.is_zero(),
        degeneracy_locus=pivot_product,
    )
