"""The P2 x P1 model: points, conic matrix, fiber types and singular points."""
from dataclasses import dataclass

import pandas as pd
import sympy
from tqdm import tqdm

from . import utils
from .exactnum import Surd, format_scalar, scalar_rank
from .polycore import (
    BASE_VARS,
    BIFORM_VARS,
    PositiveDimensionalError,
    binary_form_roots,
    evaluate,
    field_of_poly,
    format_poly,
    generator,
    normalize_projective,
    partial_derivative,
    poly_ring,
    solve_zero_dimensional,
)
from .utils import CharVarError, message

FIBER_KINDS = {3: "smooth", 2: "degenerate", 1: "double line"}
CHARTS = tuple((p2, p1) for p2 in ("x", "y", "u") for p1 in ("z", "w"))


class ProjModelError(CharVarError):
    stage = "projmodel"


class ConicShapeError(ProjModelError, ValueError):
    pass


class SingularLocusError(ProjModelError):
    """The singular locus is not a finite set of points."""


@dataclass(frozen=True)
class BiPoint:
    """Point [p2 : p1] of a product of projective spaces, stored in normal form."""

    p2: tuple
    p1: tuple

    def __post_init__(self):
        object.__setattr__(self, "p2", normalize_projective(self.p2))
        object.__setattr__(self, "p1", normalize_projective(self.p1))

    @classmethod
    def from_coords(cls, coords, names=BIFORM_VARS):
        """Build from a mapping of x, y, u, z, w (or x, y, z, w) to scalars."""
        split = 3 if "u" in names else 2
        return cls(tuple(coords[n] for n in names[:split]), tuple(coords[n] for n in names[split:]))

    def coords(self, names=BIFORM_VARS):
        return dict(zip(names, self.p2 + self.p1))

    def sort_key(self):
        return tuple(Surd.lift(c).sort_key() for c in self.p2 + self.p1)

    def __str__(self):
        left = ",".join(format_scalar(c) for c in self.p2)
        right = ",".join(format_scalar(c) for c in self.p1)
        return f"[{left}:{right}]"

    def to_dict(self):
        return {"p2": [format_scalar(c) for c in self.p2], "p1": [format_scalar(c) for c in self.p1]}


@dataclass(frozen=True)
class ConicMatrix:
    """Symmetric 3x3 matrix of binary forms of degree b with (x,y,u) M (x,y,u)^T = F."""

    entries: tuple
    b: int

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    @property
    def ring(self):
        return self.entries[0][0].ring

    def det(self):
        expr = sympy.Matrix([[e.as_expr() for e in row] for row in self.entries]).det(method="berkowitz")
        return self.ring.from_expr(sympy.expand(expr))

    def at(self, point):
        values = dict(zip(BASE_VARS, normalize_projective(point)))
        return [[evaluate(e, values) for e in row] for row in self.entries]

    def rank_at(self, point):
        return scalar_rank(self.at(point))

    def reconstruct(self):
        ring = poly_ring(BIFORM_VARS, field_of_poly(self.entries[0][0]).d)
        variables = [generator(ring, n) for n in ("x", "y", "u")]
        total = ring.zero
        for i in range(3):
            for j in range(3):
                total += self.entries[i][j].set_ring(ring) * variables[i] * variables[j]
        return total

    def to_dict(self):
        return [[format_poly(e) for e in row] for row in self.entries]


def conic_matrix(F):
    """Quadratic-form matrix of a bidegree (2, b) form; off-diagonal entries are halves."""
    if F.a != 2:
        raise ConicShapeError(f"A conic matrix needs bidegree (2, b), got {F.bidegree}")
    ring = poly_ring(BASE_VARS, F.field.d)
    half = ring.domain.convert(sympy.Rational(1, 2))
    entries = [[ring.zero for _ in range(3)] for _ in range(3)]
    for monom, coeff in F.poly.items():
        idx = [i for i in range(3) for _ in range(monom[i])]
        term = ring.from_dict({monom[3:]: coeff})
        i, j = idx
        if i == j:
            entries[i][i] += term
        else:
            entries[i][j] += term * half
            entries[j][i] += term * half
    M = ConicMatrix(tuple(tuple(row) for row in entries), F.b)
    if M.reconstruct() != F.poly:
        raise ProjModelError("Conic matrix does not reconstruct its form", poly=F.text())
    return M


@dataclass(frozen=True)
class FiberClass:
    point: tuple
    rank: int
    kind: str
    multiplicity: int

    def to_dict(self):
        return {
            "zw": [format_scalar(c) for c in self.point],
            "rank": self.rank,
            "kind": self.kind,
            "multiplicity": self.multiplicity,
        }


def classify_fibers(M, radicands=None):
    """Non-smooth fibers from the roots of det M, typed by the rank of M there."""
    det = M.det()
    if not det:
        raise ProjModelError("det M vanishes identically")
    if det.is_ground:
        return []
    fibers = []
    for point, multiplicity in binary_form_roots(det, radicands=radicands):
        rank = M.rank_at(point)
        if rank == 0:
            raise ProjModelError(f"Conic matrix vanishes at [{point[0]}:{point[1]}]")
        if rank == 3:
            raise ProjModelError(f"Root [{point[0]}:{point[1]}] of det M has full rank")
        fibers.append(FiberClass(point, rank, FIBER_KINDS[rank], multiplicity))
    total = sum(f.multiplicity for f in fibers)
    if total != 3 * M.b:
        raise ProjModelError(f"Fiber multiplicities sum to {total}, expected {3 * M.b}")
    return fibers


def fiber_table(fibers):
    return pd.DataFrame(
        [
            {
                "zw": "[" + ",".join(format_scalar(c) for c in f.point) + "]",
                "rank": f.rank,
                "kind": f.kind,
                "multiplicity": f.multiplicity,
            }
            for f in fibers
        ],
        columns=["zw", "rank", "kind", "multiplicity"],
    )


def singular_points(F, charts=CHARTS, radicands=None, verbosity=None):
    """Common zeros of F and its five partials, found in the six affine charts."""
    if verbosity is None:
        verbosity = utils.global_verbosity
    partials = F.partials()
    found = {}
    for p2, p1 in tqdm(charts, desc="charts", disable=verbosity < 3, leave=False):
        local = F.chart(p2, p1)
        names = [str(s) for s in local.ring.symbols]
        system = [local] + [partial_derivative(local, v) for v in names]
        try:
            solutions = solve_zero_dimensional(system, names, radicands=radicands)
        except PositiveDimensionalError as err:
            raise SingularLocusError(
                "Singular locus is positive dimensional", chart=f"{p2}=1,{p1}=1", poly=F.text()
            ) from err
        for sol in solutions:
            point = BiPoint.from_coords({**sol, p2: 1, p1: 1})
            found[point] = point
        message(f"singular_points: chart {p2}=1,{p1}=1 gives {len(solutions)}", message_verbosity=3)

    for point in found:
        values = point.coords()
        if evaluate(F.poly, values) or any(evaluate(d, values) for d in partials.values()):
            raise ProjModelError(f"{point} is not a singular point", poly=F.text())
    return sorted(found, key=BiPoint.sort_key)


def geometric_genus(a, b):
    """p_g = (a - 1)(a - 2)(b - 1) / 2 for a bidegree (a, b) hypersurface."""
    if a < 0 or b < 0:
        raise ValueError(f"Bidegree must be non-negative, got ({a}, {b})")
    return (a - 1) * (a - 2) * (b - 1) // 2


def intersection_number(c1, c2):
    """Intersection number a1 b2 + a2 b1 of two curves on P1 x P1."""
    (a1, b1), (a2, b2) = c1, c2
    return a1 * b2 + a2 * b1
