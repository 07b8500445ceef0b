"""Linear constraints cutting out the global symmetric 2-tensor fields.

A field is written on the affine chart as ``f(x,y) (d/dx)^2 + g(x,y) (d/dy)^2
+ h(x,y) (d/dx)(d/dy)`` with f, g, h of degree at most 4, i.e. 45 coefficient
slots.  Regularity on all of the projective plane imposes 18 linear forms on
the slots; regularity after blowing up an affine point (a, b) imposes 7 more.
For five base points in general position the full system has 53 rows and its
exact kernel is 2-dimensional; the canonically normalized kernel basis is the
pair of fields every other module consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional, Sequence

from . import linalg
from .exactpoly import MPoly, Rat, VarTable, as_rat, poly_eval

if TYPE_CHECKING:  # pragma: no cover
    from .pencil import PointConfig

__all__ = [
    "PLANE_VARS",
    "CHART_VARS",
    "SLOTS",
    "SLOT_INDEX",
    "NUM_SLOTS",
    "SymField",
    "LinearFunctional",
    "ConstraintSystem",
    "SectionBasis",
    "SectionSpaceError",
    "p2_constraints",
    "blowup_point_constraints",
    "point_constraint_coefficients",
    "assemble_system",
    "kernel_basis",
    "section_space_dimension",
    "chart_transport_check",
]

PLANE_VARS = VarTable(("x", "y"))
CHART_VARS = VarTable(("x", "y", "u", "v"))

Slot = tuple[str, int, int]

# Coefficient slots (family, i, j) for monomial x^i y^j, i + j <= 4.  The
# order is fixed once and for all: it is the column order of every constraint
# matrix and the pivot order of the canonical kernel normalization.
SLOTS: tuple[Slot, ...] = tuple(
    (family, i, d - i) for family in ("f", "g", "h") for d in range(5) for i in range(d, -1, -1)
)
SLOT_INDEX: dict[Slot, int] = {slot: k for k, slot in enumerate(SLOTS)}
NUM_SLOTS = len(SLOTS)
assert NUM_SLOTS == 45


class SectionSpaceError(ValueError):
    """Kernel dimension differs from the expected value."""

    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


def _check_plane_poly(p: MPoly, name: str) -> MPoly:
    if p.vars != PLANE_VARS:
        raise ValueError(f"{name} must live over variables {PLANE_VARS.names}")
    if p.total_degree() > 4:
        raise ValueError(f"{name} must have degree <= 4, got {p.total_degree()}")
    return p


@dataclass(frozen=True)
class SymField:
    """Symmetric 2-tensor field on the affine chart.

    As a fiberwise-quadratic function on the cotangent chart it equals
    ``f u^2 + g v^2 + h u v``, which is automatically even under
    ``(u, v) -> (-u, -v)``.
    """

    f: MPoly
    g: MPoly
    h: MPoly

    def __post_init__(self) -> None:
        _check_plane_poly(self.f, "f")
        _check_plane_poly(self.g, "g")
        _check_plane_poly(self.h, "h")

    @classmethod
    def zero(cls) -> "SymField":
        z = MPoly.zero(PLANE_VARS)
        return cls(z, z, z)

    @classmethod
    def from_slots(cls, values: Sequence[Rat]) -> "SymField":
        if len(values) != NUM_SLOTS:
            raise ValueError(f"expected {NUM_SLOTS} slot values, got {len(values)}")
        parts: dict[str, dict[tuple[int, int], Fraction]] = {"f": {}, "g": {}, "h": {}}
        for slot, value in zip(SLOTS, values):
            v = as_rat(value)
            if v:
                family, i, j = slot
                parts[family][(i, j)] = v
        return cls(
            MPoly(PLANE_VARS, parts["f"]),
            MPoly(PLANE_VARS, parts["g"]),
            MPoly(PLANE_VARS, parts["h"]),
        )

    def slots(self) -> list[Fraction]:
        polys = {"f": self.f, "g": self.g, "h": self.h}
        return [polys[family].coefficient((i, j)) for family, i, j in SLOTS]

    def chart_polynomial(self) -> MPoly:
        """The field as a polynomial in (x, y, u, v)."""
        u = MPoly.variable(CHART_VARS, "u")
        v = MPoly.variable(CHART_VARS, "v")
        f = self.f.with_vars(CHART_VARS)
        g = self.g.with_vars(CHART_VARS)
        h = self.h.with_vars(CHART_VARS)
        return f * u * u + g * v * v + h * u * v

    def restrict(self, x0: Rat, y0: Rat) -> tuple[Fraction, Fraction, Fraction]:
        """Coefficients (f, g, h) of the binary quadric at a chart point."""
        point = {"x": as_rat(x0), "y": as_rat(y0)}
        return (poly_eval(self.f, point), poly_eval(self.g, point), poly_eval(self.h, point))


@dataclass(frozen=True)
class LinearFunctional:
    """Exact linear form on the 45 coefficient slots."""

    label: str
    coeffs: tuple[tuple[Slot, Fraction], ...]

    @classmethod
    def make(cls, label: str, coeffs: dict[Slot, Rat]) -> "LinearFunctional":
        for slot in coeffs:
            if slot not in SLOT_INDEX:
                raise ValueError(f"unknown slot {slot}")
        cleaned = tuple(
            sorted(((slot, as_rat(c)) for slot, c in coeffs.items() if as_rat(c) != 0), key=lambda t: SLOT_INDEX[t[0]])
        )
        return cls(label, cleaned)

    def row(self) -> list[Fraction]:
        out = [Fraction(0)] * NUM_SLOTS
        for slot, c in self.coeffs:
            out[SLOT_INDEX[slot]] = c
        return out

    def evaluate(self, field: SymField) -> Fraction:
        values = field.slots()
        return sum((c * values[SLOT_INDEX[slot]] for slot, c in self.coeffs), Fraction(0))


@dataclass(frozen=True)
class ConstraintSystem:
    """Ordered constraint rows with provenance labels.

    Systems assembled from a point configuration carry it along so the
    kernel computation can hand it to downstream consumers.
    """

    rows: tuple[LinearFunctional, ...]
    config: Optional["PointConfig"] = None

    def matrix(self) -> list[list[Fraction]]:
        return [r.row() for r in self.rows]

    def labels(self) -> list[str]:
        return [r.label for r in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


# The 18 regularity forms on the projective plane, in their canonical order.
_P2_FORMS: tuple[tuple[str, dict[Slot, int]], ...] = (
    ("h04", {("h", 0, 4): 1}),
    ("h13-2g04", {("h", 1, 3): 1, ("g", 0, 4): -2}),
    ("h22-2g13", {("h", 2, 2): 1, ("g", 1, 3): -2}),
    ("h31-2g22", {("h", 3, 1): 1, ("g", 2, 2): -2}),
    ("h40-2g31", {("h", 4, 0): 1, ("g", 3, 1): -2}),
    ("g40", {("g", 4, 0): 1}),
    ("f03", {("f", 0, 3): 1}),
    ("f12-h03", {("f", 1, 2): 1, ("h", 0, 3): -1}),
    ("f21+g03-h12", {("f", 2, 1): 1, ("g", 0, 3): 1, ("h", 1, 2): -1}),
    ("f30+g12-h21", {("f", 3, 0): 1, ("g", 1, 2): 1, ("h", 2, 1): -1}),
    ("g21-h30", {("g", 2, 1): 1, ("h", 3, 0): -1}),
    ("g30", {("g", 3, 0): 1}),
    ("f04", {("f", 0, 4): 1}),
    ("f13", {("f", 1, 3): 1}),
    ("f22-g04", {("f", 2, 2): 1, ("g", 0, 4): -1}),
    ("f31-g13", {("f", 3, 1): 1, ("g", 1, 3): -1}),
    ("f40-g22", {("f", 4, 0): 1, ("g", 2, 2): -1}),
    ("g31", {("g", 3, 1): 1}),
)


def p2_constraints() -> list[LinearFunctional]:
    """The 18 linear forms whose vanishing makes a field regular on the plane."""
    return [LinearFunctional.make(f"plane:{name}", {s: Fraction(c) for s, c in coeffs.items()}) for name, coeffs in _P2_FORMS]


def point_constraint_coefficients(a, b, *, one=Fraction(1)):
    """Slot coefficients of the 7 blow-up conditions at the affine point (a, b).

    Works over any exact coefficient arithmetic: ``a``, ``b`` and ``one`` may
    be rationals or polynomials, which is how the symbolic verification tier
    reuses this construction.  Returns ``[(name, {slot: coeff}), ...]`` with
    the conditions in the order f, g, h, g_x, f_y, g_y - h_x, f_x - h_y.
    """
    pow_a = [one]
    pow_b = [one]
    for _ in range(4):
        pow_a.append(pow_a[-1] * a)
        pow_b.append(pow_b[-1] * b)

    def monomials(family: str):
        return [(family, i, j) for (fam, i, j) in SLOTS if fam == family]

    def eval_row(family: str) -> dict[Slot, object]:
        return {(family, i, j): pow_a[i] * pow_b[j] for _, i, j in monomials(family)}

    def dx_row(family: str) -> dict[Slot, object]:
        return {(family, i, j): pow_a[i - 1] * pow_b[j] * i for _, i, j in monomials(family) if i >= 1}

    def dy_row(family: str) -> dict[Slot, object]:
        return {(family, i, j): pow_a[i] * pow_b[j - 1] * j for _, i, j in monomials(family) if j >= 1}

    def merge(pos: dict, neg: dict) -> dict:
        out = dict(pos)
        for slot, c in neg.items():
            out[slot] = out[slot] - c if slot in out else -c
        return out

    return [
        ("f", eval_row("f")),
        ("g", eval_row("g")),
        ("h", eval_row("h")),
        ("g_x", dx_row("g")),
        ("f_y", dy_row("f")),
        ("g_y-h_x", merge(dy_row("g"), dx_row("h"))),
        ("f_x-h_y", merge(dx_row("f"), dy_row("h"))),
    ]


def blowup_point_constraints(point: tuple[Rat, Rat]) -> list[LinearFunctional]:
    """The 7 linear forms imposed by blowing up the affine point (a, b)."""
    a, b = as_rat(point[0]), as_rat(point[1])
    rows = point_constraint_coefficients(a, b)
    tag = f"({a},{b})"
    return [LinearFunctional.make(f"point{tag}:{name}", coeffs) for name, coeffs in rows]


def assemble_system(config: "PointConfig") -> ConstraintSystem:
    """The full 18 + 7 * 5 = 53 row system for a five-point configuration."""
    points = config.affine_points()
    if len(points) != 5:
        raise ValueError("a five-point configuration is required")
    rows = list(p2_constraints())
    for k, pt in enumerate(points, start=1):
        for functional in blowup_point_constraints(pt):
            rows.append(LinearFunctional.make(f"p{k}:{functional.label.split(':', 1)[1]}", dict(functional.coeffs)))
    return ConstraintSystem(tuple(rows), config)


@dataclass(frozen=True)
class SectionBasis:
    """Canonical ordered basis (H, G) of the kernel of a 53-row system."""

    H: SymField
    G: SymField
    config: "PointConfig"

    def pair(self) -> tuple[SymField, SymField]:
        return (self.H, self.G)


def _normalize_kernel(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    reduced, _ = linalg.rref(vectors)
    out = []
    for row in reduced:
        if any(row):
            out.append([Fraction(n) for n in linalg.primitive_integer_vector(row)])
    return out


def kernel_basis(system: ConstraintSystem, config: Optional["PointConfig"] = None) -> SectionBasis:
    """Exact kernel of the system, canonically normalized and re-verified.

    Raises `SectionSpaceError` carrying the computed dimension whenever the
    kernel is not 2-dimensional.
    """
    vectors = linalg.kernel(system.matrix(), NUM_SLOTS)
    if len(vectors) != 2:
        raise SectionSpaceError(f"kernel dimension is {len(vectors)}, expected 2", len(vectors))
    h_vec, g_vec = _normalize_kernel(vectors)
    H = SymField.from_slots(h_vec)
    G = SymField.from_slots(g_vec)
    for functional in system.rows:
        if functional.evaluate(H) != 0 or functional.evaluate(G) != 0:
            raise ArithmeticError(f"kernel verification failed on row {functional.label}")
    config = config if config is not None else system.config
    if config is None:
        raise ValueError("kernel_basis needs a system assembled from a configuration")
    return SectionBasis(H, G, config)


def section_space_dimension(config: "PointConfig", k: int) -> int:
    """Exact kernel dimension of the system with only the first k points."""
    if not 0 <= k <= 5:
        raise ValueError("k must be between 0 and 5")
    rows = [r.row() for r in p2_constraints()]
    for pt in config.affine_points()[:k]:
        rows.extend(r.row() for r in blowup_point_constraints(pt))
    return len(linalg.kernel(rows, NUM_SLOTS))


_UV = VarTable(("u", "v"))


def chart_transport_check(field: SymField) -> bool:
    """Regularity of the field in the opposite chart of the plane.

    Transporting through x = v/u, y = 1/u and clearing denominators leaves
    three coefficient numerators in (u, v); the field extends regularly iff
    the second is divisible by u^2 and the third by u.  (The first is a
    polynomial outright for degree <= 4 input.)
    """
    f, g, h = field.f, field.g, field.h

    def gather(*pieces) -> MPoly:
        total = MPoly.zero(_UV)
        for poly, sign, v_shift in pieces:
            terms: dict[tuple[int, int], Fraction] = {}
            for (i, j), c in poly.terms.items():
                exp = (4 - i - j, i + v_shift)
                terms[exp] = terms.get(exp, Fraction(0)) + (c if sign > 0 else -c)
            total = total + MPoly(_UV, terms)
        return total

    dv2_numerator = gather((f, 1, 0), (g, 1, 2), (h, -1, 1))  # coefficient of (d/dv)^2, cleared by u^2
    dudv_numerator = gather((g * 2, 1, 1), (h, -1, 0))  # coefficient of (d/du)(d/dv), cleared by u

    def divisible_by_u(p: MPoly, k: int) -> bool:
        return all(exp[0] >= k for exp in p.terms)

    return divisible_by_u(dv2_numerator, 2) and divisible_by_u(dudv_numerator, 1)
