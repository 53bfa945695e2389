"""Trace coordinates: p(m, s, r) -> f(x, y, z) and the component split.

The trace map is x = m + 1/m, y = s + 1/s, z = m s + 1/(m s) + r.
"""
from dataclasses import dataclass, field, replace

from .polycore import (
    REP_VARS,
    TRACE_VARS,
    LaurentPoly,
    bihomogenize,
    dehomogenize,
    factor_biform,
    format_poly,
    gcd_multivariate,
    index_of,
    partial_derivative,
    poly_ring,
    substitute,
)
from .utils import CharVarError, message, solver_config


class TraceEliminationError(CharVarError):
    stage = "traceelim"


class SymmetrizationError(TraceEliminationError, ValueError):
    pass


class NonSquarefreeError(TraceEliminationError):
    pass


@dataclass(frozen=True)
class TracePoly:
    """Character polynomial in (x, y, z) with its bidegree (deg in {x, y}, deg in z)."""

    poly: object
    bidegree: tuple
    provenance: str = ""
    canonical: object = None
    conic_candidate: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "conic_candidate", self.bidegree[0] == 2)

    @classmethod
    def from_poly(cls, poly, provenance="", canonical=None):
        if not poly:
            raise TraceEliminationError("The zero polynomial is not a character polynomial")
        a = max(m[0] + m[1] for m in poly.keys())
        b = max(m[2] for m in poly.keys())
        return cls(poly, (a, b), provenance, canonical)

    def text(self):
        return format_poly(self.poly)

    def to_dict(self):
        return {
            "poly": self.text(),
            "bidegree": list(self.bidegree),
            "provenance": self.provenance,
            "canonical": self.canonical,
            "conic_candidate": self.conic_candidate,
        }


def trace_images(ring=None):
    """LaurentPoly images of x, y and z in (m, s, r)."""
    ring = ring or poly_ring(REP_VARS)

    def mono(*exps):
        return LaurentPoly.monomial(ring, exps)

    return {
        "x": mono(1, 0, 0) + mono(-1, 0, 0),
        "y": mono(0, 1, 0) + mono(0, -1, 0),
        "z": mono(1, 1, 0) + mono(-1, -1, 0) + mono(0, 0, 1),
    }


def symmetrize(p):
    """The unique m^alpha s^beta p invariant under (m, s, r) -> (1/m, 1/s, r)."""
    laurent = LaurentPoly(p) if not isinstance(p, LaurentPoly) else p
    if laurent.is_zero:
        raise SymmetrizationError("Cannot symmetrize zero")
    shift = []
    for i in range(2):
        low, high = laurent.degree_range(i)
        if (low + high) % 2:
            raise SymmetrizationError(
                f"Exponent range [{low}, {high}] of {REP_VARS[i]} is not centrable",
                poly=laurent.text(),
            )
        shift.append(-(low + high) // 2)
    result = laurent * LaurentPoly.monomial(laurent.ring, (shift[0], shift[1], 0))
    if result != result.invert_variables(("m", "s")):
        raise SymmetrizationError("Polynomial is not symmetric under inversion", poly=laurent.text())
    return result


def _weight_key(exps):
    a, b, c = exps
    return (a + b + 3 * c, c, a, b)


def normalize_character(poly):
    """Primitive over QQ, sign fixed by the grlex-leading coefficient of the top z-power."""
    _, poly = poly.clear_denoms()
    _, poly = poly.primitive()
    top = max(m[2] for m in poly.keys())
    lead = max(
        ((m, c) for m, c in poly.items() if m[2] == top),
        key=lambda mc: (mc[0][0] + mc[0][1], mc[0][0], mc[0][1]),
    )[1]
    return -poly if lead < 0 else poly


def to_trace_coords(p, provenance=""):
    """Rewrite a symmetrizable p(m, s, r) as a polynomial in the traces x, y, z.

    Under the weight a + b + 3c (ties by (c, a, b)) the image of x^i y^j z^k
    leads with m^i s^j r^k and coefficient 1, so leading-term reduction
    solves the coefficient system exactly.
    """
    target = symmetrize(p)
    ring = target.ring
    images = trace_images(ring)
    caches = {name: {0: LaurentPoly(ring.one)} for name in TRACE_VARS}

    def power(name, e):
        if e not in caches[name]:
            caches[name][e] = power(name, e - 1) * images[name]
        return caches[name][e]

    trace_ring = poly_ring(TRACE_VARS, 1)
    coeffs = {}
    remainder = target
    cap = solver_config["trace_iteration_cap"]
    steps = 0
    while not remainder.is_zero:
        steps += 1
        if steps > cap:
            raise TraceEliminationError(f"Trace reduction did not finish in {cap} steps")
        lead, coeff = max(remainder.terms(), key=lambda t: _weight_key(t[0]))
        if min(lead) < 0:
            raise TraceEliminationError(
                f"Residual leading monomial {lead} is outside the trace subring",
                provenance=provenance,
            )
        coeffs[lead] = coeff
        image = power("x", lead[0]) * power("y", lead[1]) * power("z", lead[2])
        remainder = remainder - LaurentPoly(image.numer * coeff, image.shift)
    message(f"to_trace_coords: {len(coeffs)} trace monomials in {steps} steps", message_verbosity=3)

    f = normalize_character(trace_ring.from_dict(coeffs))
    return verify_trace_image(f, p, provenance, target=target)


def verify_trace_image(f, p, provenance="", target=None):
    """Check that f(x, y, z) pulled back to (m, s, r) is a unit times sym(p).

    Raises:
        TraceEliminationError: when the identity or deg_z f = deg_r p fails

    Returns:
        TracePoly
    """
    if target is None:
        target = symmetrize(p)
    ring = target.ring
    if not f:
        raise TraceEliminationError("The zero polynomial is not a character polynomial", provenance=provenance)
    back = substitute(f, trace_images(ring), ring)
    if back.is_zero:
        raise TraceEliminationError("Back-substitution identity fails", provenance=provenance)
    scale = ring.domain.quo(target.numer.LC, back.numer.LC)
    if back.shift != target.shift or back.numer * scale != target.numer:
        raise TraceEliminationError("Back-substitution identity fails", provenance=provenance)

    tp = TracePoly.from_poly(f, provenance)
    p_poly = p.numer if isinstance(p, LaurentPoly) else p
    if tp.bidegree[1] != p_poly.degree(index_of(p_poly.ring, "r")):
        raise TraceEliminationError(
            f"deg_z f = {tp.bidegree[1]} differs from deg_r p", provenance=provenance
        )
    return tp


def is_squarefree(f):
    """gcd(f, df/dz) is free of z."""
    g = gcd_multivariate(f, partial_derivative(f, "z"))
    return g.degree(2) <= 0


def component_split(tp):
    """Irreducible components over QQ, each as a TracePoly, in canonical order."""
    if tp.poly.is_ground:
        return []
    factors = factor_biform(bihomogenize(tp.poly))
    components = []
    for factor in factors:
        if factor.multiplicity > 1:
            raise NonSquarefreeError(
                "Character polynomial has a repeated factor",
                factor=factor.form.text(),
                multiplicity=factor.multiplicity,
            )
        poly = normalize_character(dehomogenize(factor.form))
        components.append(TracePoly.from_poly(poly, tp.provenance))
    components.sort(key=lambda c: (c.bidegree, c.text()))
    total = tuple(sum(c.bidegree[k] for c in components) for k in range(2))
    if total != tp.bidegree:
        raise TraceEliminationError(
            f"Component bidegrees sum to {total}, expected {tp.bidegree}", provenance=tp.provenance
        )
    return [replace(c, provenance=f"{tp.provenance} component {i + 1}".strip()) for i, c in enumerate(components)]
