"""Euler characteristic of F = g + u^2 h through the projection to P1 x P1.

Forgetting u maps Z(F) onto P1 x P1, generically 2 to 1, branched along
B = Z(g). The fibers over L = B n Q, where Q = Z(h), are infinite and the
points P = [0,0,1 : z0,w0] over roots of h are where the map is undefined.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np
from sympy import Poly, Symbol

from .exactnum import IncompatibleFieldError, Surd, field_domain, format_scalar
from .polycore import (
    BASE_VARS,
    BIFORM_VARS,
    BiForm,
    binary_form_roots,
    evaluate,
    factor_biform,
    field_of_poly,
    format_poly,
    poly_ring,
    solve_zero_dimensional,
    specialize,
)
from .projmodel import BiPoint, intersection_number
from .utils import CharVarError, message, report_info

BASE_PRODUCT_VARS = ("x", "y", "z", "w")


class EulerError(CharVarError):
    stage = "euler"


class ShapeError(EulerError, ValueError):
    """F is not of the form g(x, y, z, w) + u^2 h(z, w)."""


class BranchLocusError(EulerError):
    pass


class FiberDichotomyError(EulerError):
    pass


@dataclass(frozen=True)
class EvenSplit:
    g: object
    h: object
    bidegree: tuple

    def to_dict(self):
        return {"g": format_poly(self.g), "h": format_poly(self.h), "bidegree": list(self.bidegree)}


def split_even(F):
    """Write F = g + u^2 h; anything odd in u is a shape error."""
    if F.a != 2:
        raise ShapeError(f"Euler engine needs bidegree (2, b), got {F.bidegree}", poly=F.text())
    d = F.field.d
    g_ring, h_ring = poly_ring(BASE_PRODUCT_VARS, d), poly_ring(BASE_VARS, d)
    g_terms, h_terms = {}, {}
    for (i, j, k, l, m), coeff in F.poly.items():
        if k == 2:
            h_terms[(l, m)] = coeff
        elif k == 0:
            g_terms[(i, j, l, m)] = coeff
        else:
            raise ShapeError("F has terms odd in u", poly=F.text())
    h = h_ring.from_dict(h_terms)
    if not h:
        raise ShapeError("F has no u^2 term", poly=F.text())
    return EvenSplit(g_ring.from_dict(g_terms), h, F.bidegree)


def _as_biform(g):
    """Embed g(x, y, z, w) into the BiForm ring with u absent."""
    ring = poly_ring(BIFORM_VARS, field_of_poly(g).d)
    return BiForm.from_poly(ring.from_dict({(i, j, 0, l, m): c for (i, j, l, m), c in g.items()}))


def _drop_u(poly):
    ring = poly_ring(BASE_PRODUCT_VARS, field_of_poly(poly).d)
    return ring.from_dict({(i, j, l, m): c for (i, j, k, l, m), c in poly.items()})


def _line(names, point):
    """Linear form vanishing at ``point`` of P1 in ``names`` (inside the x, y, z, w ring)."""
    p, q = (Surd.lift(c) for c in point)
    i, j = BASE_PRODUCT_VARS.index(names[0]), BASE_PRODUCT_VARS.index(names[1])
    e_i = tuple(1 if k == i else 0 for k in range(4))
    e_j = tuple(1 if k == j else 0 for k in range(4))
    field_d = p.field.join(q.field).d
    ring = poly_ring(BASE_PRODUCT_VARS, field_d)
    return ring.from_dict({e_i: q.to_domain(ring.domain), e_j: (-p).to_domain(ring.domain)})


@dataclass(frozen=True)
class BranchComponent:
    poly: object
    bidegree: tuple

    def to_dict(self):
        return {"poly": format_poly(self.poly), "bidegree": list(self.bidegree)}


@dataclass(frozen=True)
class BranchPoint:
    point: BiPoint
    components: tuple

    def to_dict(self):
        return {"point": str(self.point), "components": list(self.components)}


@dataclass(frozen=True)
class BranchGeometry:
    components: tuple
    points: tuple
    evidence: tuple
    chi: int

    def to_dict(self):
        return {
            "components": [c.to_dict() for c in self.components],
            "intersections": [p.to_dict() for p in self.points],
            "evidence": [dict(e) for e in self.evidence],
            "chi_B": self.chi,
        }


def _pair_intersections(f1, f2, radicands=None):
    points = set()
    for p2, p1 in itertools.product(("x", "y"), ("z", "w")):
        system = [specialize(f, {p2: 1, p1: 1}) for f in (f1, f2)]
        names = [str(s) for s in system[0].ring.symbols]
        for sol in solve_zero_dimensional(system, names, radicands=radicands):
            points.add(BiPoint.from_coords({**sol, p2: 1, p1: 1}, BASE_PRODUCT_VARS))
    return points


def branch_geometry(g, radicands=None):
    """Components of B = Z(g), their pairwise intersections and chi(B).

    chi(B) = 2 #components - sum over points of (k - 1), k the number of
    components through the point; every component must be rational.
    """
    if not g:
        raise BranchLocusError("The branch polynomial vanishes identically")
    components = []
    for factor in factor_biform(_as_biform(g)):
        if factor.multiplicity > 1:
            raise BranchLocusError("Branch locus is not reduced", factor=factor.form.text())
        a, b = factor.form.bidegree
        poly = _drop_u(factor.form.poly)
        if a == 0 or b == 0:
            names = ("z", "w") if a == 0 else ("x", "y")
            for point, mult in binary_form_roots(poly, names, radicands=radicands):
                if mult > 1:
                    raise BranchLocusError("Branch locus has a repeated ruling", factor=factor.form.text())
                line = _line(names, point)
                components.append(BranchComponent(line, (0, 1) if a == 0 else (1, 0)))
            continue
        if (a - 1) * (b - 1) != 0:
            raise BranchLocusError(
                f"Branch component of bidegree ({a},{b}) has genus {(a - 1) * (b - 1)}",
                factor=factor.form.text(),
            )
        components.append(BranchComponent(poly, (a, b)))
    components.sort(key=lambda c: (c.bidegree, format_poly(c.poly)))

    incidence = {}
    evidence = []
    for (i, c1), (j, c2) in itertools.combinations(enumerate(components), 2):
        points = _pair_intersections(c1.poly, c2.poly, radicands=radicands)
        for point in points:
            incidence.setdefault(point, set()).update((i, j))
        evidence.append(
            {
                "pair": [i, j],
                "predicted": intersection_number(c1.bidegree, c2.bidegree),
                "found": len(points),
            }
        )
    points = tuple(
        BranchPoint(p, tuple(sorted(incidence[p]))) for p in sorted(incidence, key=BiPoint.sort_key)
    )
    chi = 2 * len(components) - sum(len(p.components) - 1 for p in points)
    return BranchGeometry(tuple(components), points, tuple(evidence), chi)


@dataclass(frozen=True)
class FiberRoot:
    """Fiber of Q over one root of h: its L-points and the fundamental point."""

    root: tuple
    fundamental: BiPoint
    l_points: tuple
    discriminant: object
    conjugate_pair: bool

    @property
    def punctures(self):
        return 2 if self.conjugate_pair else len(self.l_points)

    def to_dict(self):
        return {
            "root": [format_scalar(c) for c in self.root],
            "fundamental_point": str(self.fundamental),
            "L": [str(p) for p in self.l_points],
            "discriminant": format_scalar(self.discriminant),
            "conjugate_pair": self.conjugate_pair,
        }


@dataclass(frozen=True)
class InfiniteFibers:
    roots: tuple
    chi_Q: int
    chi_L: int
    chi_phi_L: int

    @property
    def L_count(self):
        return 2 * len(self.roots)

    @property
    def P(self):
        return tuple(r.fundamental for r in self.roots)

    @property
    def L(self):
        return tuple(p for r in self.roots for p in r.l_points)

    def to_dict(self):
        return {
            "roots": [r.to_dict() for r in self.roots],
            "L_count": self.L_count,
            "P_count": len(self.roots),
            "chi_Q": self.chi_Q,
            "chi_L": self.chi_L,
            "chi_phi_inverse_L": self.chi_phi_L,
        }


def _binary_quadratic(g, z0, w0):
    q = specialize(g, {"z": z0, "w": w0})
    coeff = {m: Surd.from_domain(q.ring.domain, c) for m, c in q.items()}
    return (coeff.get((2, 0), Surd(0)), coeff.get((1, 1), Surd(0)), coeff.get((0, 2), Surd(0)))


def _quadratic_points(A, B, C, s):
    if A:
        return [((-B + s), 2 * A), ((-B - s), 2 * A)]
    return [(Surd(1), Surd(0)), (-C, B)]


def infinite_fibers(split, radicands=None):
    """L-points over each root of h, the fundamental points and the Euler terms they give."""
    roots = []
    for (z0, w0), mult in binary_form_roots(split.h, radicands=radicands):
        if mult > 1:
            raise EulerError(f"h has a repeated root [{z0}:{w0}]", h=format_poly(split.h))
        A, B, C = _binary_quadratic(split.g, z0, w0)
        if not (A or B or C):
            raise EulerError(f"g vanishes on the whole fiber over [{z0}:{w0}]")
        disc = B * B - 4 * A * C
        if not disc:
            raise EulerError(f"g has a double root over [{z0}:{w0}]", discriminant=disc)
        points = ()
        pair = True
        s = disc.sqrt()
        if s is not None:
            try:
                points = tuple(
                    BiPoint((x, y), (z0, w0)) for x, y in _quadratic_points(A, B, C, s)
                )
                pair = False
            except IncompatibleFieldError:
                points = ()
        for point in points:
            values = point.coords(BASE_PRODUCT_VARS)
            if evaluate(split.g, values) or evaluate(split.h, values):
                raise EulerError(f"L-point {point} is not on g = h = 0")
        fundamental = BiPoint((0, 0, 1), (z0, w0))
        root = FiberRoot((z0, w0), fundamental, points, disc.to_scalar(), pair)
        if root.punctures != 2:
            raise EulerError(f"Fiber of Q over [{z0}:{w0}] has {root.punctures} punctures, expected 2")
        roots.append(root)
    chi_Q = sum(2 - r.punctures for r in roots)
    chi_L = 2 * len(roots)
    chi_phi_L = 2 * chi_L - len(roots)
    return InfiniteFibers(tuple(roots), chi_Q, chi_L, chi_phi_L)


def chi_singular_model(branch, fibers):
    """chi(S) = 2 chi(P1 x P1) - chi(Q) - chi(B) - chi(L) + chi(phi^-1(L))."""
    return 2 * 4 - fibers.chi_Q - branch.chi - fibers.chi_L + fibers.chi_phi_L


def chi_from_conic_fibration(fiber_classes):
    """2 chi(P1) plus one for every fiber of two crossing lines; double lines add nothing."""
    return 4 + sum(1 for f in fiber_classes if f.rank == 2)


@dataclass(frozen=True)
class SurfaceClassification:
    chi_singular: int
    chi_smooth: int
    blowup_count: object
    verdict: str
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "chi_singular": self.chi_singular,
            "chi_smooth": self.chi_smooth,
            "blowup_count": self.blowup_count,
            "verdict": self.verdict,
            "evidence": dict(self.evidence),
        }


def classify_surface(chi_sing, resolution, fiber_table, evidence=None):
    """chi of the resolved surface and what it is: P2 blown up at chi - 3 points, or undecided."""
    if not all(r.smooth for r in resolution):
        raise EulerError("Some singular point does not resolve in one blow-up")
    increments = sum(r.chi_increment for r in resolution)
    chi_smooth = chi_sing + increments
    degenerate = [f for f in fiber_table if f.rank < 3]
    evidence = dict(evidence or {})
    evidence.update({"increments": increments, "non_smooth_fibers": len(degenerate)})
    if not degenerate and chi_smooth == 4:
        return SurfaceClassification(chi_sing, chi_smooth, None, report_info["verdict_indeterminate"], evidence)
    n = chi_smooth - 3
    if n < 0:
        raise EulerError(f"chi = {chi_smooth} is too small for a rational surface")
    return SurfaceClassification(chi_sing, chi_smooth, n, report_info["verdict_blown_up"].format(n), evidence)


def _random_projective(rng, size=2, bound=20):
    while True:
        v = [int(c) for c in rng.integers(-bound, bound + 1, size=size)]
        if any(v):
            return v


def _u_root_count(split, values):
    u = Symbol("u")
    g0, h0 = evaluate(split.g, values), evaluate(split.h, values)
    field_d = g0.field.join(h0.field).d
    poly = Poly(g0.as_expr() + h0.as_expr() * u**2, u, domain=field_domain(field_d))
    if poly.is_zero:
        return None
    return poly.sqf_part().degree()


def _sample_on_component(component, rng):
    """A rational point on a branch component linear in one of the factors, or None."""
    a, b = component.bidegree
    if b == 1:
        x, y = _random_projective(rng)
        line = specialize(component.poly, {"x": x, "y": y})
        coeffs = {m: Surd.from_domain(line.ring.domain, c) for m, c in line.items()}
        cz, cw = coeffs.get((1, 0), Surd(0)), coeffs.get((0, 1), Surd(0))
        if not (cz or cw):
            return None
        return {"x": x, "y": y, "z": -cw, "w": cz}
    if a == 1:
        z, w = _random_projective(rng)
        line = specialize(component.poly, {"z": z, "w": w})
        coeffs = {m: Surd.from_domain(line.ring.domain, c) for m, c in line.items()}
        cx, cy = coeffs.get((1, 0), Surd(0)), coeffs.get((0, 1), Surd(0))
        if not (cx or cy):
            return None
        return {"x": -cy, "y": cx, "z": z, "w": w}
    return None


def fiber_dichotomy_check(split, branch, samples=200, seed=0):
    """Sample the fibers of the projection: 2 u-roots off B u Q, 1 on B off L."""
    rng = np.random.default_rng(seed)
    off_branch = 0
    while off_branch < samples:
        x, y = _random_projective(rng)
        z, w = _random_projective(rng)
        values = {"x": x, "y": y, "z": z, "w": w}
        if not evaluate(split.g, values) or not evaluate(split.h, values):
            continue
        count = _u_root_count(split, values)
        if count != 2:
            raise FiberDichotomyError(f"{count} u-roots over {values}, expected 2")
        off_branch += 1

    on_branch = 0
    attempts = 0
    while on_branch < samples and attempts < 20 * samples and branch.components:
        attempts += 1
        component = branch.components[int(rng.integers(len(branch.components)))]
        values = _sample_on_component(component, rng)
        if values is None or not evaluate(split.h, values):
            continue
        count = _u_root_count(split, values)
        if count != 1:
            raise FiberDichotomyError(f"{count} u-roots over branch point {values}, expected 1")
        on_branch += 1
    message(f"fiber_dichotomy_check: {off_branch} generic, {on_branch} branch samples", message_verbosity=3)
    return {"off_branch": off_branch, "on_branch": on_branch}
