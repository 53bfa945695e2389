"""Single blow-ups of isolated singular points and their Euler characteristic increments."""
from dataclasses import dataclass

import sympy

from .exactnum import Surd, format_scalar, scalar_rank
from .polycore import (
    PositiveDimensionalError,
    exact_divide,
    field_of_poly,
    format_poly,
    generator,
    min_total_degree,
    partial_derivative,
    poly_ring,
    solve_zero_dimensional,
    specialize,
    substitute,
    translate,
    varset_of,
)
from .projmodel import BiPoint
from .utils import CharVarError

CHART_NAMES = ("a", "b", "c")


class ResolveError(CharVarError):
    stage = "resolve"


class NotSingularError(ResolveError, ValueError):
    pass


class ExceptionalCurveError(ResolveError):
    """The exceptional curve is not a smooth conic and needs further analysis."""


@dataclass(frozen=True)
class LocalChart:
    """Affine chart of P2 x P1 around ``point``, translated so the point is the origin."""

    point: BiPoint
    p2_fixed: str
    p1_fixed: str
    names: tuple
    offsets: tuple
    poly: object

    def to_bipoint(self, values):
        """Point of P2 x P1 for local coordinates ``values`` (name -> scalar)."""
        coords = {self.p2_fixed: 1, self.p1_fixed: 1}
        for name, offset in zip(self.names, self.offsets):
            coords[name] = Surd.lift(values[name]) + offset
        return BiPoint.from_coords(coords)

    def text(self):
        return format_poly(self.poly)


def localize(F, point):
    """Local equation of F at ``point``, in the chart where its leading coordinates are 1."""
    coords = point.coords()
    p2_fixed = next(n for n in ("x", "y", "u") if Surd.lift(coords[n]))
    p1_fixed = next(n for n in ("z", "w") if Surd.lift(coords[n]))
    chart = F.chart(p2_fixed, p1_fixed)
    names = varset_of(chart)
    offsets = tuple(Surd.lift(coords[n]) for n in names)
    local = translate(chart, dict(zip(names, offsets)))
    if local and min_total_degree(local) < 2:
        raise NotSingularError(f"{point} is not a singular point of F", poly=F.text())
    return LocalChart(point, p2_fixed, p1_fixed, names, offsets, local)


@dataclass(frozen=True)
class BlowupChartResult:
    """Chart ``chart`` = 1 of the blow-up: v_k stays, v_j = v_k * t_j for j != k."""

    chart: str
    variables: tuple
    source_variables: tuple
    pivot: str
    strict_transform: object
    multiplicity: int
    exceptional_curve: object

    def to_dict(self):
        return {
            "chart": f"{self.chart}=1",
            "variables": list(self.variables),
            "strict_transform": format_poly(self.strict_transform),
            "multiplicity": self.multiplicity,
            "exceptional_curve": format_poly(self.exceptional_curve),
        }


def blow_up_origin(F_loc):
    """Blow up the origin of Z(F_loc) in A3; returns the results for charts a, b, c.

    In chart k the pivot variable v_k keeps its name and the others are
    replaced by the chart coordinates, e.g. (y, u, w) -> (y, b, c) for k = a.
    """
    names = varset_of(F_loc)
    if len(names) != 3:
        raise ValueError(f"Expected a polynomial in three variables, got {names}")
    if set(names) & set(CHART_NAMES):
        raise ValueError(f"Local variables {names} clash with chart names {CHART_NAMES}")
    if not F_loc:
        raise ResolveError("Cannot blow up the zero polynomial")
    k = min_total_degree(F_loc)
    if k < 2:
        raise NotSingularError(f"The origin has multiplicity {k}, not a singular point")
    field = field_of_poly(F_loc)
    results = []
    for pivot_index, chart in enumerate(CHART_NAMES):
        variables = tuple(
            names[i] if i == pivot_index else CHART_NAMES[i] for i in range(3)
        )
        ring = poly_ring(variables, field.d)
        pivot = generator(ring, names[pivot_index])
        bindings = {
            names[i]: pivot * generator(ring, CHART_NAMES[i]) if i != pivot_index else pivot
            for i in range(3)
        }
        total = substitute(F_loc, bindings, ring)
        divisor = pivot**k
        strict = exact_divide(total, divisor)
        if not strict:
            raise ResolveError("Strict transform vanishes identically", chart=chart)
        if strict * divisor != total:
            raise ResolveError("Blow-up identity fails", chart=chart)
        curve = specialize(strict, {names[pivot_index]: 0})
        results.append(BlowupChartResult(chart, variables, names, names[pivot_index], strict, k, curve))
    return tuple(results)


def _rehomogenize(result):
    ring = poly_ring(CHART_NAMES, field_of_poly(result.exceptional_curve).d)
    degree = result.multiplicity
    other = [n for n in CHART_NAMES if n != result.chart]
    terms = {}
    for monom, coeff in result.exceptional_curve.items():
        exps = dict(zip(other, monom))
        exps[result.chart] = degree - sum(monom)
        if exps[result.chart] < 0:
            raise ExceptionalCurveError("Exceptional curve exceeds the multiplicity", chart=result.chart)
        terms[tuple(exps[n] for n in CHART_NAMES)] = coeff
    return ring.from_dict(terms)


@dataclass(frozen=True)
class ExceptionalConic:
    conic: object
    rank: int
    genus: int

    def to_dict(self):
        return {"conic": format_poly(self.conic), "rank": self.rank, "genus": self.genus}


def exceptional_conic(results):
    """Glue the three chart curves into one plane conic and read its genus from the rank."""
    if any(r.multiplicity != 2 for r in results):
        raise ExceptionalCurveError(
            f"Exceptional curve has degree {results[0].multiplicity}, only conics are handled"
        )
    forms = [_rehomogenize(r) for r in results]
    conic = forms[0]
    for form in forms[1:]:
        if form != conic:
            raise ExceptionalCurveError(
                "Chart curves do not glue to one conic",
                first=format_poly(conic),
                other=format_poly(form),
            )
    domain = conic.ring.domain
    half = sympy.Rational(1, 2)
    matrix = [[Surd(0)] * 3 for _ in range(3)]
    for monom, coeff in conic.items():
        idx = [i for i in range(3) for _ in range(monom[i])]
        value = Surd.from_domain(domain, coeff)
        i, j = idx
        if i == j:
            matrix[i][i] = matrix[i][i] + value
        else:
            matrix[i][j] = matrix[i][j] + value * half
            matrix[j][i] = matrix[j][i] + value * half
    rank = scalar_rank(matrix)
    if rank != 3:
        raise ExceptionalCurveError(
            f"Exceptional conic {format_poly(conic)} has rank {rank}; needs further analysis",
            rank=rank,
        )
    return ExceptionalConic(conic, rank, 0)


@dataclass(frozen=True)
class AuditResult:
    smooth: bool
    offending: tuple = ()
    positive_dimensional: bool = False

    def __bool__(self):
        return self.smooth

    def to_dict(self):
        return {
            "smooth": self.smooth,
            "offending": [str(p) if isinstance(p, BiPoint) else _local_text(p) for p in self.offending],
            "positive_dimensional": self.positive_dimensional,
        }


def _local_text(values):
    return "(" + ",".join(format_scalar(v) for v in values) + ")"


def blow_down(result, values):
    """Local coordinates (before the blow-up) of a chart solution."""
    pivot = Surd.lift(values[result.pivot])
    out = {}
    for i, name in enumerate(result.source_variables):
        if name == result.pivot:
            out[name] = pivot
        else:
            out[name] = pivot * values[CHART_NAMES[i]]
    return out


def smoothness_audit(result, other_sing, chart=None, radicands=None):
    """Check that the strict transform is smooth except over ``other_sing``.

    With ``chart`` the residual singular points are compared as BiPoints;
    without it ``other_sing`` holds tuples of local coordinates.
    """
    strict = result.strict_transform
    names = list(result.variables)
    system = [strict] + [partial_derivative(strict, n) for n in names]
    try:
        solutions = solve_zero_dimensional(system, names, radicands=radicands)
    except PositiveDimensionalError:
        return AuditResult(False, (), True)
    allowed = set(other_sing)
    offending = []
    for sol in solutions:
        down = blow_down(result, sol)
        if chart is not None:
            image = chart.to_bipoint(down)
        else:
            image = tuple(down[n].to_scalar() for n in result.source_variables)
        if image not in allowed:
            offending.append(image)
    return AuditResult(not offending, tuple(offending), False)


def chi_increment(genus, kind):
    """+1 for blowing up a smooth point, 2 g + 1 for a singular point with a genus g curve."""
    if genus < 0:
        raise ValueError(f"Genus must be non-negative, got {genus}")
    if kind == "smooth":
        return 1
    if kind == "singular":
        return 2 * genus + 1
    raise ValueError(f"Unknown point kind '{kind}'")


@dataclass(frozen=True)
class ResolutionRecord:
    point: BiPoint
    local: LocalChart
    charts: tuple
    conic: ExceptionalConic
    audits: tuple

    @property
    def genus(self):
        return self.conic.genus

    @property
    def smooth(self):
        return all(self.audits)

    @property
    def chi_increment(self):
        return chi_increment(self.genus, "singular")

    def to_dict(self):
        return {
            "point": str(self.point),
            "local_equation": self.local.text(),
            "charts": [c.to_dict() for c in self.charts],
            "exceptional_conic": format_poly(self.conic.conic),
            "genus": self.genus,
            "smooth": self.smooth,
            "audits": [a.to_dict() for a in self.audits],
            "chi_increment": self.chi_increment,
        }


def resolve_point(F, point, singular, radicands=None):
    """Blow up one singular point of F and audit the three charts."""
    local = localize(F, point)
    results = blow_up_origin(local.poly)
    conic = exceptional_conic(results)
    others = [p for p in singular if p != point]
    audits = tuple(smoothness_audit(r, others, chart=local, radicands=radicands) for r in results)
    return ResolutionRecord(point, local, results, conic, audits)


def resolve_all(F, singular, radicands=None):
    return [resolve_point(F, p, singular, radicands=radicands) for p in singular]
