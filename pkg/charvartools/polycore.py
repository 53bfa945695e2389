"""Sparse exact multivariate and Laurent polynomial kernel.

Polynomials are ``sympy.polys.rings.PolyElement`` objects over ``QQ`` or
``QQ<sqrt(d)>`` in graded-lex order (see :func:`poly_ring`). Laurent
polynomials are a normalized (numerator, shift) pair over such a ring.
Every factorization and solver result is verified exactly before it is
returned.
"""
import functools
import itertools
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass
from tokenize import TokenError

import sympy
from sympy import Poly, Rational, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.monomials import monomial_ldiv
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import CoercionFailed, ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from .exactnum import (
    ComplexRadicandError,
    IncompatibleFieldError,
    QuadraticField,
    Surd,
    field_domain,
    try_sqrt,
)
from .utils import CharVarError, message, solver_config

TRACE_VARS = ("x", "y", "z")
REP_VARS = ("m", "s", "r")
BIFORM_VARS = ("x", "y", "u", "z", "w")
BASE_VARS = ("z", "w")
MAX_VARIABLES = 6

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class PolyCoreError(CharVarError):
    stage = "polycore"


class ExactDivisionError(PolyCoreError, ArithmeticError):
    """Division left a nonzero remainder."""


class UnsplittableFactorError(PolyCoreError):
    """A factor has no roots in QQ or a single quadratic field."""


class PositiveDimensionalError(PolyCoreError):
    """A polynomial system expected to be zero-dimensional is not."""


class DegreeBoundError(PolyCoreError):
    pass


class BiFormError(PolyCoreError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Rings


@functools.lru_cache(maxsize=None)
def poly_ring(varset, d=1):
    """Graded-lex polynomial ring in ``varset`` over QQ(sqrt(d))."""
    varset = tuple(varset)
    if len(set(varset)) != len(varset):
        raise ValueError(f"Variable names must be unique, got {varset}")
    if len(varset) > MAX_VARIABLES:
        raise ValueError(f"At most {MAX_VARIABLES} variables are supported, got {len(varset)}")
    return PolyRing(list(varset), field_domain(d), grlex)


@functools.lru_cache(maxsize=None)
def _domain_field(domain):
    return QuadraticField.from_domain(domain)


def varset_of(p):
    return tuple(str(s) for s in p.ring.symbols)


def field_of_poly(p):
    return _domain_field(p.ring.domain)


def index_of(ring, name):
    names = [str(s) for s in ring.symbols]
    try:
        return names.index(str(name))
    except ValueError as err:
        raise ValueError(f"Variable '{name}' is not one of {names}") from err


def generator(ring, name):
    return ring.gens[index_of(ring, name)]


def change_field(p, d):
    """Re-express ``p`` over QQ(sqrt(d)), which must contain its coefficients."""
    field = field_of_poly(p).join(QuadraticField(d))
    if field.d == field_of_poly(p).d:
        return p
    return p.set_ring(poly_ring(varset_of(p), field.d))


def common_ring(p, q):
    if varset_of(p) != varset_of(q):
        raise ValueError(f"Variable sets differ: {varset_of(p)} vs {varset_of(q)}")
    field = field_of_poly(p).join(field_of_poly(q))
    return change_field(p, field.d), change_field(q, field.d)


def to_domain_element(value, domain):
    value = Surd.lift(value)
    if value.d != 1 and _domain_field(domain).d != value.d:
        raise IncompatibleFieldError(
            f"{value} does not lie in {_domain_field(domain)}",
            radicands=(value.d, _domain_field(domain).d),
        )
    return value.to_domain(domain)


def total_degree(p):
    return max((sum(m) for m in p.keys()), default=-1)


def min_total_degree(p):
    return min((sum(m) for m in p.keys()), default=-1)


# ---------------------------------------------------------------------------
# Text format


def _radicand_of_expr(expr):
    if expr.has(sympy.I):
        raise ComplexRadicandError(f"'{expr}' has a complex coefficient")
    radicands = set()
    for power in expr.atoms(sympy.Pow):
        if power.exp == Rational(1, 2) and power.base.is_Integer:
            radicands.add(Surd(0, 1, int(power.base)).d)
    if len(radicands) > 1:
        raise IncompatibleFieldError(f"Several radicands {sorted(radicands)} in one polynomial")
    return radicands.pop() if radicands else 1


def parse_poly(text, varset, d=None):
    """Parse canonical polynomial text (``^`` or ``**`` powers) into ``varset``."""
    names = tuple(varset)
    local = {name: Symbol(name) for name in names}
    try:
        expr = parse_expr(str(text), local_dict=local, transformations=_TRANSFORMATIONS)
    except (SyntaxError, TypeError, TokenError, sympy.SympifyError) as err:
        raise ValueError(f"Cannot parse polynomial '{text}'") from err
    extra = sorted(str(s) for s in expr.free_symbols - set(local.values()))
    if extra:
        raise ValueError(f"Polynomial '{text}' uses variables {extra} outside {names}")
    if d is None:
        d = _radicand_of_expr(expr)
    ring = poly_ring(names, d)
    try:
        return ring.from_expr(sympy.expand(expr))
    except (ValueError, CoercionFailed) as err:
        raise ValueError(f"'{text}' is not a polynomial over {QuadraticField(d)} in {names}") from err


def _monomial_text(names, monom):
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in zip(names, monom) if e)


def format_poly(p):
    """Canonical text: grlex-descending terms, ``^`` powers, parenthesized surds."""
    if not p:
        return "0"
    names = varset_of(p)
    domain = p.ring.domain
    pieces = []
    for monom, coeff in p.terms():
        c = Surd.from_domain(domain, coeff)
        negative = c.canonical_sign() < 0
        if negative:
            c = -c
        coeff_text = f"({c})" if (c.a != 0 and c.b != 0) else str(c)
        mono = _monomial_text(names, monom)
        if not mono:
            body = coeff_text
        elif c == 1:
            body = mono
        else:
            body = f"{coeff_text}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Laurent polynomials


@dataclass(frozen=True)
class LaurentPoly:
    """``numer * prod(v_i ** shift_i)`` with ``numer`` not divisible by any variable."""

    numer: PolyElement
    shift: tuple = ()

    def __post_init__(self):
        numer = self.numer
        nvars = numer.ring.ngens
        shift = tuple(int(e) for e in self.shift) if self.shift else (0,) * nvars
        if len(shift) != nvars:
            raise ValueError(f"Shift {shift} does not match {nvars} variables")
        if not numer:
            shift = (0,) * nvars
        else:
            low = tuple(min(m[i] for m in numer.keys()) for i in range(nvars))
            if any(low):
                numer = numer.ring.from_dict({monomial_ldiv(m, low): c for m, c in numer.items()})
                shift = tuple(s + e for s, e in zip(shift, low))
        object.__setattr__(self, "numer", numer)
        object.__setattr__(self, "shift", shift)

    @classmethod
    def from_terms(cls, ring, terms):
        """Build from a mapping of signed exponent tuples to domain coefficients."""
        terms = {tuple(e): c for e, c in terms.items() if c}
        if not terms:
            return cls(ring.zero)
        low = tuple(min(e[i] for e in terms) for i in range(ring.ngens))
        numer = ring.from_dict({tuple(a - b for a, b in zip(e, low)): c for e, c in terms.items()})
        return cls(numer, low)

    @classmethod
    def monomial(cls, ring, exps, coeff=1):
        return cls.from_terms(ring, {tuple(exps): ring.domain.convert(coeff)})

    @classmethod
    def lift(cls, value, ring):
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, PolyElement):
            return cls(value)
        return cls(ring.ground_new(to_domain_element(value, ring.domain)))

    @property
    def ring(self):
        return self.numer.ring

    @property
    def is_zero(self):
        return not self.numer

    def __bool__(self):
        return bool(self.numer)

    def terms(self):
        for monom, coeff in self.numer.terms():
            yield tuple(a + b for a, b in zip(monom, self.shift)), coeff

    def as_dict(self):
        return dict(self.terms())

    def degree_range(self, i):
        if self.is_zero:
            return (0, 0)
        top = max(m[i] for m in self.numer.keys())
        return (self.shift[i], self.shift[i] + top)

    def _align(self, other):
        other = LaurentPoly.lift(other, self.ring)
        a, b = common_ring(self.numer, other.numer)
        low = tuple(min(s, t) for s, t in zip(self.shift, other.shift))
        a = a.mul_monom(tuple(s - m for s, m in zip(self.shift, low)))
        b = b.mul_monom(tuple(t - m for t, m in zip(other.shift, low)))
        return a, b, low

    def __add__(self, other):
        a, b, low = self._align(other)
        return LaurentPoly(a + b, low)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, low = self._align(other)
        return LaurentPoly(a - b, low)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentPoly(-self.numer, self.shift)

    def __mul__(self, other):
        if not isinstance(other, (LaurentPoly, PolyElement)):
            return self.scale(other)
        other = LaurentPoly.lift(other, self.ring)
        a, b = common_ring(self.numer, other.numer)
        return LaurentPoly(a * b, tuple(s + t for s, t in zip(self.shift, other.shift)))

    __rmul__ = __mul__

    def scale(self, value):
        c = to_domain_element(value, self.ring.domain)
        return LaurentPoly(self.numer * c, self.shift)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            if len(self.numer) != 1:
                raise ValueError("Only Laurent monomials can be inverted")
            ((monom, coeff),) = self.terms()
            inverse = LaurentPoly.from_terms(
                self.ring, {tuple(-e for e in monom): self.ring.domain.quo(self.ring.domain.one, coeff)}
            )
            return inverse ** (-k)
        return LaurentPoly(self.numer**k, tuple(s * k for s in self.shift))

    def exact_divide(self, other):
        other = LaurentPoly.lift(other, self.ring)
        quotient = exact_divide(self.numer, other.numer)
        return LaurentPoly(quotient, tuple(s - t for s, t in zip(self.shift, other.shift)))

    def clear_denominators(self):
        """Return ``(poly, unit)`` with ``poly = self * prod(v_i ** unit_i)`` polynomial."""
        unit = tuple(max(0, -s) for s in self.shift)
        return self.numer.mul_monom(tuple(max(0, s) for s in self.shift)), unit

    def invert_variables(self, names):
        idx = {index_of(self.ring, n) for n in names}
        return LaurentPoly.from_terms(
            self.ring,
            {tuple(-e if i in idx else e for i, e in enumerate(m)): c for m, c in self.terms()},
        )

    def text(self):
        if self.is_zero:
            return "0"
        unit = _monomial_text(varset_of(self.numer), self.shift)
        body = format_poly(self.numer)
        return f"{unit}*({body})" if unit else body


# ---------------------------------------------------------------------------
# Ring operations


def exact_divide(p, q):
    """Exact quotient ``p / q``; raises ExactDivisionError on a nonzero remainder."""
    if isinstance(p, LaurentPoly):
        return p.exact_divide(q)
    p, q = common_ring(p, q)
    if not q:
        raise ZeroDivisionError("Polynomial division by zero")
    try:
        return p.exquo(q)
    except ExactQuotientFailed as err:
        raise ExactDivisionError(
            "Division leaves a nonzero remainder",
            dividend=format_poly(p),
            divisor=format_poly(q),
        ) from err


def ring_ops(p, q, op):
    """``op`` is one of add, sub, mul, div; inputs share a varset."""
    if isinstance(p, LaurentPoly) or isinstance(q, LaurentPoly):
        ring = p.ring if isinstance(p, LaurentPoly) else q.ring
        p, q = LaurentPoly.lift(p, ring), LaurentPoly.lift(q, ring)
        if varset_of(p.numer) != varset_of(q.numer):
            raise ValueError("Variable sets differ")
    else:
        p, q = common_ring(p, q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "div":
        return exact_divide(p, q)
    raise ValueError(f"Unknown ring operation '{op}'")


def _power_cached(base, e, cache):
    if e not in cache:
        cache[e] = base**e
    return cache[e]


def substitute(p, bindings, target_ring=None):
    """Compose ``p`` with ``bindings`` (name -> LaurentPoly, PolyElement or scalar).

    Unbound variables pass through to the generator of the same name in the
    target ring. The result is a LaurentPoly as soon as one image is Laurent.
    """
    names = varset_of(p)
    unknown = set(bindings) - set(names)
    if unknown:
        raise ValueError(f"Bound variables {sorted(unknown)} are not in {names}")
    laurent = any(isinstance(b, LaurentPoly) for b in bindings.values())
    if target_ring is None:
        images = [b for b in bindings.values() if isinstance(b, (LaurentPoly, PolyElement))]
        target_ring = images[0].ring if images else p.ring
    field = field_of_poly(p).join(_domain_field(target_ring.domain))
    for value in bindings.values():
        if isinstance(value, LaurentPoly):
            field = field.join(field_of_poly(value.numer))
        elif isinstance(value, PolyElement):
            field = field.join(field_of_poly(value))
        else:
            field = field.join(Surd.lift(value).field)
    target_ring = poly_ring(tuple(str(s) for s in target_ring.symbols), field.d)

    images = []
    for name in names:
        if name in bindings:
            image = bindings[name]
        else:
            image = generator(target_ring, name)
        if isinstance(image, LaurentPoly):
            image = LaurentPoly(image.numer.set_ring(target_ring), image.shift)
        elif isinstance(image, PolyElement):
            image = image.set_ring(target_ring)
        else:
            image = target_ring.ground_new(to_domain_element(image, target_ring.domain))
        if laurent:
            image = LaurentPoly.lift(image, target_ring)
        images.append(image)

    result = LaurentPoly(target_ring.zero) if laurent else target_ring.zero
    caches = [{} for _ in names]
    source = p.ring.domain
    for monom, coeff in p.items():
        term = target_ring.ground_new(target_ring.domain.convert(coeff, source))
        if laurent:
            term = LaurentPoly(term)
        for i, e in enumerate(monom):
            if e:
                term = term * _power_cached(images[i], e, caches[i])
        result = result + term
    return result


def translate(p, offsets):
    """Substitute v -> v + c for each ``name: c`` in ``offsets``."""
    field = field_of_poly(p)
    for value in offsets.values():
        field = field.join(Surd.lift(value).field)
    ring = poly_ring(varset_of(p), field.d)
    bindings = {
        name: generator(ring, name) + to_domain_element(value, ring.domain)
        for name, value in offsets.items()
        if Surd.lift(value)
    }
    return substitute(p.set_ring(ring), bindings, ring) if bindings else p.set_ring(ring)


def specialize(p, values, keep=None):
    """Set each ``name: scalar`` of ``values``; the remaining variables form the new ring."""
    names = varset_of(p)
    keep = tuple(n for n in names if n not in values) if keep is None else tuple(keep)
    field = field_of_poly(p)
    point = {}
    for name, value in values.items():
        point[name] = Surd.lift(value)
        field = field.join(point[name].field)
    ring = poly_ring(keep, field.d)
    keep_idx = [index_of(p.ring, n) for n in keep]
    fixed = [(index_of(p.ring, n), v) for n, v in point.items()]
    terms = defaultdict(lambda: Surd(0))
    for monom, coeff in p.items():
        value = Surd.from_domain(p.ring.domain, coeff)
        for i, v in fixed:
            if monom[i]:
                value = value * v ** monom[i]
        terms[tuple(monom[i] for i in keep_idx)] += value
    return ring.from_dict({m: c.to_domain(ring.domain) for m, c in terms.items() if c})


def evaluate(p, values):
    """Exact value of ``p`` at ``values`` (mapping name -> scalar, or a sequence in ring order)."""
    if isinstance(p, Poly):
        names = [str(g) for g in p.gens]
        items = [(m, Surd.lift(c)) for m, c in p.terms()]
    else:
        names = varset_of(p)
        items = [(m, Surd.from_domain(p.ring.domain, c)) for m, c in p.items()]
    if isinstance(values, Mapping):
        point = [Surd.lift(values[n]) if n in values else None for n in names]
    else:
        point = [Surd.lift(v) for v in values]
    total = Surd(0)
    caches = [{} for _ in names]
    for monom, coeff in items:
        term = coeff
        for i, e in enumerate(monom):
            if e:
                if point[i] is None:
                    raise ValueError(f"No value given for '{names[i]}'")
                term = term * _power_cached(point[i], e, caches[i])
        total = total + term
    return total


def partial_derivative(p, v):
    return p.diff(generator(p.ring, v))


# ---------------------------------------------------------------------------
# GCD, units, resultants


def normalize_unit(p):
    """Canonical representative of ``p`` up to a nonzero scalar.

    Over QQ: primitive integer form with positive grlex-leading coefficient.
    Over QQ(sqrt(d)): the leading coefficient becomes 1, whose rational part
    is positive; when every coefficient is then rational the QQ form is used,
    so a rational polynomial normalizes the same way in either ring.
    """
    if not p:
        return p
    if field_of_poly(p).is_rational:
        _, p = p.clear_denoms()
        _, p = p.primitive()
        return -p if p.LC < 0 else p
    p = p.monic()
    domain = p.ring.domain
    coeffs = [Surd.from_domain(domain, c) for c in p.values()]
    if not all(c.is_rational for c in coeffs):
        return p
    den = functools.reduce(sympy.ilcm, (int(c.a.q) for c in coeffs), 1)
    num = functools.reduce(sympy.igcd, (int(c.a * den) for c in coeffs), 0)
    return p.mul_ground(domain.from_sympy(Rational(den, num)))


def strip_monomial(p):
    """Split off the largest monomial dividing ``p``; returns ``(exps, cofactor)``."""
    laurent = LaurentPoly(p)
    return laurent.shift, laurent.numer


def same_up_to_unit(p, q):
    """True when p and q agree up to a scalar and a monomial factor."""
    if varset_of(p) != varset_of(q):
        return False
    p, q = common_ring(p, q)
    return normalize_unit(strip_monomial(p)[1]) == normalize_unit(strip_monomial(q)[1])


def gcd_multivariate(p, q):
    p, q = common_ring(p, q)
    if not p and not q:
        return p.ring.zero
    return normalize_unit(p.gcd(q))


def resultant(p, q, v):
    """Sylvester resultant of ``p`` and ``q`` with respect to ``v``."""
    p, q = common_ring(p, q)
    ring = p.ring
    i = index_of(ring, v)
    if p.degree(i) <= 0 or q.degree(i) <= 0:
        raise ValueError(f"Both polynomials must depend on '{v}'")
    symbols = list(ring.symbols)
    order = [symbols[i]] + symbols[:i] + symbols[i + 1:]
    res = Poly(p.as_expr(), *order, domain=ring.domain).resultant(
        Poly(q.as_expr(), *order, domain=ring.domain)
    )
    expr = res.as_expr() if isinstance(res, Poly) else sympy.sympify(res)
    return ring.from_expr(sympy.expand(expr))


# ---------------------------------------------------------------------------
# Univariate factorization


@dataclass(frozen=True)
class UnivariateFactor:
    """Monic irreducible factor; linear factors carry their root."""

    factor: Poly
    multiplicity: int
    root: object = None


def _as_univariate_poly(p):
    if isinstance(p, Poly):
        if len(p.gens) != 1:
            raise ValueError(f"Expected a univariate polynomial, got generators {p.gens}")
        return p
    live = [i for i in range(p.ring.ngens) if p.degree(i) > 0]
    if len(live) > 1:
        raise ValueError(f"'{format_poly(p)}' is not univariate")
    gen = p.ring.symbols[live[0] if live else 0]
    return Poly(p.as_expr(), gen, domain=p.ring.domain)


def _check_radicand(root, radicands):
    if radicands is None:
        radicands = solver_config["radicands"]
    if root.d != 1 and radicands is not None and root.d not in radicands:
        raise UnsplittableFactorError(
            f"Root {root} needs sqrt({root.d}), which is not an allowed radicand",
            root=root,
            allowed=sorted(radicands),
        )


def _quadratic_roots(fac):
    a, b, c = (Surd.lift(v) for v in fac.all_coeffs())
    if not (a.is_rational and b.is_rational and c.is_rational):
        return None
    disc = b.a**2 - 4 * a.a * c.a
    s = try_sqrt(disc)
    if s is None:
        return None
    s = Surd.lift(s)
    return [(-b + s) / (2 * a), (-b - s) / (2 * a)]


def univariate_factor(p, radicands=None, strict=True):
    """Irreducible factors over the active field, splitting linear and quadratic ones.

    Quadratic factors with rational coefficients are split over QQ(sqrt(d'))
    when their discriminant allows. Any remaining factor of degree >= 2
    raises UnsplittableFactorError, unless ``strict`` is False, in which case
    it is returned without a root.
    """
    P = _as_univariate_poly(p)
    if P.is_zero:
        raise ValueError("Cannot factor the zero polynomial")
    degree = P.degree()
    if degree > solver_config["max_univariate_degree"]:
        raise DegreeBoundError(
            f"Degree {degree} exceeds the univariate cap {solver_config['max_univariate_degree']}"
        )
    if degree <= 0:
        return []
    gen = P.gens[0]
    lc, factors = P.factor_list()
    product = Poly(lc, gen, domain=P.domain)
    for fac, mult in factors:
        product = product * fac**mult
    if product != P:
        raise ExactDivisionError("Factorization does not reproduce its input", poly=str(P.as_expr()))

    out = []
    for fac, mult in factors:
        fac = fac.monic()
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            root = Surd.lift(-c0 / c1)
            _check_radicand(root, radicands)
            out.append(UnivariateFactor(fac, mult, root))
            continue
        roots = _quadratic_roots(fac) if fac.degree() == 2 else None
        if roots is None:
            if strict:
                raise UnsplittableFactorError(
                    f"Factor {fac.as_expr()} does not split over QQ or a quadratic field",
                    factor=fac.as_expr(),
                )
            out.append(UnivariateFactor(fac, mult))
            continue
        active = _domain_field(P.domain).d
        if active != 1 and roots[0].d not in (1, active):
            raise UnsplittableFactorError(
                f"Roots of {fac.as_expr()} need sqrt({roots[0].d}) outside QQ(sqrt({active}))",
                factor=fac.as_expr(),
            )
        domain = field_domain(roots[0].d)
        for root in roots:
            _check_radicand(root, radicands)
            out.append(UnivariateFactor(Poly(gen - root.as_expr(), gen, domain=domain), mult, root))

    for item in out:
        if item.root is None:
            continue
        try:
            value = evaluate(P, {str(gen): item.root})
        except IncompatibleFieldError as err:
            raise UnsplittableFactorError(
                f"Root {item.root} lies outside the field of {P.as_expr()}", root=item.root
            ) from err
        if value:
            raise UnsplittableFactorError(f"Claimed root {item.root} is not a root", root=item.root)
    return sorted(
        out,
        key=lambda f: (f.root is None, f.root.sort_key() if f.root is not None else (), str(f.factor.as_expr())),
    )


def univariate_roots(p, radicands=None):
    """Distinct roots with multiplicities, every factor must split."""
    return [(f.root, f.multiplicity) for f in univariate_factor(p, radicands=radicands)]


def normalize_projective(coords):
    """Scale so the first nonzero coordinate is 1."""
    coords = [Surd.lift(c) for c in coords]
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("All projective coordinates vanish")
    return tuple((c / lead).to_scalar() for c in coords)


def binary_form_roots(form, names=BASE_VARS, radicands=None):
    """Projective roots of a binary form as ``((z0, w0), multiplicity)`` pairs."""
    if not form:
        raise ValueError("The zero form has no isolated roots")
    i, j = index_of(form.ring, names[0]), index_of(form.ring, names[1])
    others = [k for k in range(form.ring.ngens) if k not in (i, j)]
    if any(m[k] for m in form.keys() for k in others):
        raise ValueError(f"'{format_poly(form)}' involves variables other than {names}")
    at_infinity = min(m[j] for m in form.keys())
    roots = []
    if at_infinity:
        roots.append((normalize_projective((1, 0)), at_infinity))
    ring = poly_ring((names[0],), field_of_poly(form).d)
    affine = ring.from_dict({(m[i],): c for m, c in form.items()})
    if affine.degree(0) > 0:
        for fac in univariate_factor(affine, radicands=radicands):
            roots.append((normalize_projective((fac.root, 1)), fac.multiplicity))
    return sorted(roots, key=lambda r: tuple(Surd.lift(c).sort_key() for c in r[0]))


# ---------------------------------------------------------------------------
# Bihomogeneous forms


@dataclass(frozen=True)
class BiForm:
    """Bihomogeneous polynomial on P2 x P1 in (x, y, u ; z, w)."""

    poly: PolyElement
    bidegree: tuple

    def __post_init__(self):
        if varset_of(self.poly) != BIFORM_VARS:
            raise BiFormError(f"BiForm variables must be {BIFORM_VARS}, got {varset_of(self.poly)}")
        a, b = (int(v) for v in self.bidegree)
        for monom in self.poly.keys():
            if sum(monom[:3]) != a or sum(monom[3:]) != b:
                raise BiFormError(
                    f"Monomial {monom} is not of bidegree ({a},{b})", poly=format_poly(self.poly)
                )
        object.__setattr__(self, "bidegree", (a, b))

    @classmethod
    def from_poly(cls, poly):
        if not poly:
            raise BiFormError("The zero polynomial has no bidegree")
        monom = next(iter(poly.keys()))
        return cls(poly, (sum(monom[:3]), sum(monom[3:])))

    @classmethod
    def parse(cls, text):
        return cls.from_poly(parse_poly(text, BIFORM_VARS))

    @property
    def a(self):
        return self.bidegree[0]

    @property
    def b(self):
        return self.bidegree[1]

    @property
    def field(self):
        return field_of_poly(self.poly)

    def text(self):
        return format_poly(self.poly)

    def partials(self):
        return {name: partial_derivative(self.poly, name) for name in BIFORM_VARS}

    def euler_relations_hold(self):
        d = self.partials()
        g = {n: generator(self.poly.ring, n) for n in BIFORM_VARS}
        first = g["x"] * d["x"] + g["y"] * d["y"] + g["u"] * d["u"]
        second = g["z"] * d["z"] + g["w"] * d["w"]
        return first == self.poly * self.a and second == self.poly * self.b

    def chart(self, p2_name, p1_name):
        """Affine chart {p2_name = 1, p1_name = 1}, in the remaining three variables."""
        return specialize(self.poly, {p2_name: 1, p1_name: 1})

    def __str__(self):
        return self.text()


def bihomogenize(f):
    """f = u^a w^b f(x/u, y/u, z/w) with a the {x,y}-degree and b the z-degree."""
    if varset_of(f) != TRACE_VARS:
        raise ValueError(f"Expected a polynomial in {TRACE_VARS}, got {varset_of(f)}")
    if not f:
        raise ValueError("Cannot bihomogenize the zero polynomial")
    a = max(m[0] + m[1] for m in f.keys())
    b = max(m[2] for m in f.keys())
    ring = poly_ring(BIFORM_VARS, field_of_poly(f).d)
    terms = {(i, j, a - i - j, k, b - k): c for (i, j, k), c in f.items()}
    return BiForm(ring.from_dict(terms), (a, b))


def dehomogenize(F):
    """Set u = 1 and w = 1."""
    ring = poly_ring(TRACE_VARS, F.field.d)
    return ring.from_dict({(m[0], m[1], m[3]): c for m, c in F.poly.items()})


@dataclass(frozen=True)
class BiFactor:
    form: BiForm
    multiplicity: int = 1


def factor_biform(F):
    """Irreducible factors of a BiForm; the product is re-verified by exact division.

    The (z, w)-content is extracted first by a coefficient GCD, the primitive
    part is factored over the coefficient field.

    This is the biform factorization step (the ``factor_biform_interp``
    operation). It uses sympy's multivariate ``factor_list`` rather than
    specializing (z, w) and interpolating the factors; the output contract is
    the same, a list of factors whose product is a unit times ``F``.
    """
    cap_a, cap_b = solver_config["max_biform_bidegree"]
    if F.a > cap_a or F.b > cap_b:
        raise DegreeBoundError(f"Bidegree {F.bidegree} exceeds the cap {(cap_a, cap_b)}")
    poly = F.poly
    ring = poly.ring
    if poly.is_ground:
        return []
    groups = defaultdict(dict)
    for monom, coeff in poly.items():
        groups[monom[:3]][(0, 0, 0) + monom[3:]] = coeff
    content = functools.reduce(lambda g, h: g.gcd(h), (ring.from_dict(t) for t in groups.values()))
    content = normalize_unit(content)
    primitive = exact_divide(poly, content)

    merged = {}
    for part in (content, primitive):
        if part.is_ground:
            continue
        _, factors = part.factor_list()
        for fac, mult in factors:
            fac = normalize_unit(fac)
            if fac.is_ground:
                continue
            merged[fac] = merged.get(fac, 0) + mult

    product = ring.one
    for fac, mult in merged.items():
        product = product * fac**mult
    quotient = exact_divide(poly, product)
    if not quotient.is_ground:
        raise ExactDivisionError("Factors do not multiply to the input", poly=format_poly(poly))

    result = [BiFactor(BiForm.from_poly(fac), mult) for fac, mult in merged.items()]
    message(f"factor_biform: {F.bidegree} -> {[f.form.bidegree for f in result]}", message_verbosity=3)
    return sorted(result, key=lambda f: (f.form.bidegree, f.form.text()))


# ---------------------------------------------------------------------------
# Zero-dimensional systems


def _clean(equations):
    seen = {}
    for eq in equations:
        if eq.is_zero:
            continue
        if eq.is_ground:
            return None
        monic = eq.monic()
        seen.setdefault(monic, monic)
    return tuple(seen.values())


@functools.lru_cache(maxsize=4096)
def _irreducible_factors(eq):
    _, factors = eq.factor_list()
    return tuple((fac.monic(), mult) for fac, mult in factors)


def _poly_resultant(f, g, v, gens, domain):
    others = [x for x in gens if x != v]
    res = Poly(f.as_expr(), v, *others, domain=domain).resultant(Poly(g.as_expr(), v, *others, domain=domain))
    expr = res.as_expr() if isinstance(res, Poly) else sympy.sympify(res)
    return Poly(sympy.expand(expr), *gens, domain=domain)


def _specialize_univariate(eq, solution, v, gens):
    coeffs = defaultdict(lambda: Surd(0))
    iv = gens.index(v)
    for monom, coeff in eq.terms():
        term = Surd.lift(coeff)
        for g, e in zip(gens, monom):
            if e and g != v:
                term = term * solution[g] ** e
        coeffs[monom[iv]] += term
    field = QuadraticField(1)
    for c in coeffs.values():
        field = field.join(c.field)
    expr = sum((c.as_expr() * v**k for k, c in coeffs.items()), sympy.Integer(0))
    return Poly(expr, v, domain=field.domain)


def _univariate_gcd(f, g):
    domain = f.domain.unify(g.domain)
    return f.set_domain(domain).gcd(g.set_domain(domain))


def _evaluate_at(eq, solution, gens):
    return evaluate(eq, {str(g): solution[g] for g in gens if g in solution})


def _triangulate(equations, order, gens, domain, radicands):
    equations = _clean(equations)
    if equations is None:
        return []
    if not order:
        return [{}]

    for i, eq in enumerate(equations):
        factors = _irreducible_factors(eq)
        if len(factors) > 1 or factors[0][1] > 1:
            rest = equations[:i] + equations[i + 1:]
            solutions = []
            for fac, _ in factors:
                solutions.extend(_triangulate((fac,) + rest, order, gens, domain, radicands))
            return solutions

    for v in order:
        for eq in equations:
            if eq.degree(v) != 1:
                continue
            lead = eq.diff(v)
            if not lead.is_ground:
                continue
            image = sympy.expand(v - eq.as_expr() / lead.as_expr())
            rest = tuple(
                Poly(sympy.expand(other.as_expr().subs(v, image)), *gens, domain=domain)
                for other in equations
                if other is not eq
            )
            remaining = tuple(x for x in order if x != v)
            image_poly = Poly(image, *gens, domain=domain)
            solutions = []
            for sol in _triangulate(rest, remaining, gens, domain, radicands):
                value = _evaluate_at(image_poly, sol, gens)
                solutions.append({**sol, v: value})
            return solutions

    v, rest_order = order[0], order[1:]
    involved = sorted(
        (eq for eq in equations if eq.degree(v) > 0),
        key=lambda eq: (eq.degree(v), eq.total_degree(), str(eq.as_expr())),
    )
    free = [eq for eq in equations if eq.degree(v) <= 0]
    if not involved:
        if _triangulate(tuple(free), rest_order, gens, domain, radicands):
            raise PositiveDimensionalError(f"The system does not constrain '{v}'", variable=v)
        return []
    projected = list(free)
    for other in involved[1:]:
        projected.append(_poly_resultant(involved[0], other, v, gens, domain))
    if len(involved) > 2:
        projected.append(_poly_resultant(involved[1], involved[2], v, gens, domain))

    solutions = []
    for sol in _triangulate(tuple(projected), rest_order, gens, domain, radicands):
        univariates = [_specialize_univariate(eq, sol, v, gens) for eq in involved]
        nonzero = [u for u in univariates if not u.is_zero]
        if not nonzero:
            raise PositiveDimensionalError(f"'{v}' is free over a solution", variable=v)
        g = functools.reduce(_univariate_gcd, nonzero)
        if g.degree() <= 0:
            continue
        for fac in univariate_factor(g, radicands=radicands):
            solutions.append({**sol, v: fac.root})
    return solutions


def _elimination_orders(gens, equations):
    def weight(g):
        return (max((eq.degree(g) for eq in equations), default=0), gens.index(g))

    first = tuple(sorted(gens, key=weight))
    yield first
    for order in itertools.permutations(gens):
        if order != first:
            yield order


def solve_zero_dimensional(equations, unknowns=None, radicands=None):
    """All common zeros of ``equations`` as dicts name -> Scalar, sorted.

    Raises PositiveDimensionalError when the common zero set is not finite and
    UnsplittableFactorError when a coordinate needs more than one quadratic
    extension, in both cases only after every elimination order failed.
    """
    equations = list(equations)
    if not equations:
        raise PositiveDimensionalError("An empty system is not zero-dimensional")
    if unknowns is None:
        first = equations[0]
        unknowns = [str(g) for g in first.gens] if isinstance(first, Poly) else varset_of(first)
    gens = tuple(Symbol(n) for n in unknowns)
    field = QuadraticField(1)
    for eq in equations:
        field = field.join(
            _domain_field(eq.domain) if isinstance(eq, Poly) else field_of_poly(eq)
        )
    domain = field.domain
    polys = tuple(Poly(eq.as_expr(), *gens, domain=domain) for eq in equations)

    failures = []
    for order in _elimination_orders(gens, polys):
        try:
            raw = _triangulate(polys, order, gens, domain, radicands)
        except (PositiveDimensionalError, UnsplittableFactorError, IncompatibleFieldError) as err:
            message(f"solve_zero_dimensional: order {order} failed ({err})", message_verbosity=3)
            failures.append(err)
            continue
        unique = {}
        for sol in raw:
            point = {str(g): sol[g].to_scalar() for g in gens}
            key = tuple(Surd.lift(point[str(g)]).sort_key() for g in gens)
            unique[key] = point
        for point in unique.values():
            for eq in polys:
                if evaluate(eq, point):
                    raise PolyCoreError("Solver returned a non-solution", point=point)
        return [unique[k] for k in sorted(unique)]
    raise failures[0]
