"""Exact scalars: rationals and elements of a quadratic field QQ(sqrt(d)).

Every coefficient and point coordinate of the pipeline is a ``Scalar``, i.e.
a sympy ``Rational`` or a :class:`Surd`. Internally all arithmetic lifts to
``Surd`` (a rational is the surd with ``b == 0``), so that division by zero
raises instead of silently producing ``zoo``.
"""
import functools
from dataclasses import dataclass

import sympy
from sympy import QQ, Rational, integer_nthroot, sqrt
from sympy.ntheory.factor_ import core
from sympy.polys.matrices import DomainMatrix

from .utils import CharVarError


class IncompatibleFieldError(CharVarError):
    """Two values live in different quadratic fields."""

    stage = "exactnum"


class ComplexRadicandError(CharVarError, ValueError):
    stage = "exactnum"


def _split_square(d):
    """Write a positive integer d as k**2 * d0 with d0 squarefree."""
    d0 = int(core(d))
    k, exact = integer_nthroot(d // d0, 2)
    assert exact
    return int(k), d0


@functools.lru_cache(maxsize=None)
def field_domain(d):
    """The sympy domain QQ or QQ<sqrt(d)> for a squarefree radicand d."""
    if d == 1:
        return QQ
    return QQ.algebraic_field(sqrt(d))


@dataclass(frozen=True)
class QuadraticField:
    """Field descriptor, ``d == 1`` stands for QQ itself."""

    d: int = 1

    @property
    def domain(self):
        return field_domain(self.d)

    @property
    def is_rational(self):
        return self.d == 1

    def join(self, other):
        if self.d == other.d or other.d == 1:
            return self
        if self.d == 1:
            return other
        raise IncompatibleFieldError(
            f"Incompatible radicands sqrt({self.d}) and sqrt({other.d})",
            radicands=(self.d, other.d),
        )

    @classmethod
    def from_domain(cls, domain):
        if domain == QQ or domain == sympy.ZZ:
            return cls(1)
        generator = Surd.from_expr(domain.ext.as_expr())
        return cls(generator.d)

    def __str__(self):
        return "QQ" if self.d == 1 else f"QQ(sqrt({self.d}))"


@functools.total_ordering
@dataclass(frozen=True, eq=False)
class Surd:
    """The number a + b*sqrt(d) with rational a, b and squarefree d.

    The constructor normalizes: square factors of d move into b, and when
    b vanishes d is reset to 1.
    """

    a: Rational = Rational(0)
    b: Rational = Rational(0)
    d: int = 1

    def __post_init__(self):
        a = Rational(self.a)
        b = Rational(self.b)
        d = int(self.d)
        if d < 0:
            raise ComplexRadicandError(f"Complex radicand sqrt({d}) is unsupported", radicand=d)
        if d == 0:
            b, d = Rational(0), 1
        else:
            k, d = _split_square(d)
            b = b * k
            if d == 1:
                a, b = a + b, Rational(0)
        if b == 0:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def lift(cls, value):
        if isinstance(value, Surd):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value)
        if isinstance(value, sympy.Basic):
            return cls.from_expr(value)
        try:
            return cls(Rational(value))
        except (TypeError, ValueError, sympy.SympifyError) as err:
            raise TypeError(f"Cannot interpret {value!r} as an exact scalar") from err

    @classmethod
    def from_expr(cls, expr):
        """Read a sympy expression of the shape a + b*sqrt(d)."""
        expr = sympy.sympify(expr)
        if expr.is_Rational:
            return cls(expr)
        if expr.free_symbols:
            raise ValueError(f"'{expr}' is not a number")
        if expr.has(sympy.I):
            raise ComplexRadicandError(f"'{expr}' is not real", value=expr)
        expr = sympy.expand(sympy.radsimp(expr))
        a, b, d = Rational(0), Rational(0), 1
        for term, coeff in expr.as_coefficients_dict().items():
            if not coeff.is_Rational:
                raise ValueError(f"'{expr}' has a non-rational coefficient")
            if term == 1:
                a += coeff
                continue
            base, exponent = term.as_base_exp()
            if not (base.is_Integer and base > 1 and exponent == Rational(1, 2)):
                raise ValueError(f"'{expr}' does not lie in a quadratic field")
            _, radicand = _split_square(int(base))
            if d not in (1, radicand):
                raise IncompatibleFieldError(
                    f"'{expr}' needs two radicands", radicands=(d, radicand)
                )
            d = radicand
            b += coeff * sqrt(int(base)) / sqrt(radicand)
        return cls(a, b, d)

    @classmethod
    def from_domain(cls, domain, element):
        if domain == QQ:
            return cls(QQ.to_sympy(element))
        return cls.from_expr(domain.to_sympy(element))

    def to_domain(self, domain):
        return domain.from_sympy(self.as_expr())

    def as_expr(self):
        return self.a + self.b * sqrt(self.d)

    def to_scalar(self):
        return self.a if self.b == 0 else self

    @property
    def field(self):
        return QuadraticField(self.d)

    @property
    def is_rational(self):
        return self.b == 0

    @property
    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero

    def _common(self, other):
        return self.field.join(other.field).d

    def __add__(self, other):
        try:
            other = Surd.lift(other)
        except TypeError:
            return NotImplemented
        return Surd(self.a + other.a, self.b + other.b, self._common(other))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            other = Surd.lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = Surd.lift(other)
        except TypeError:
            return NotImplemented
        d = self._common(other)
        return Surd(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + other.a * self.b,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return Surd(self.a, -self.b, self.d)

    def norm(self):
        return self.a**2 - self.d * self.b**2

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("Inverse of zero")
        n = self.norm()
        return Surd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        try:
            other = Surd.lift(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Surd.lift(other) * self.inverse()

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Surd(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            other = Surd.lift(other)
        except TypeError:
            return NotImplemented
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def canonical_sign(self):
        """Sign of the rational part, or of the surd part when a == 0."""
        if self.a != 0:
            return 1 if self.a > 0 else -1
        if self.b != 0:
            return 1 if self.b > 0 else -1
        return 0

    def real_sign(self):
        """Exact sign of the real number a + b*sqrt(d)."""
        sa = bool(self.a > 0) - bool(self.a < 0)
        sb = bool(self.b > 0) - bool(self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        return sa if self.a**2 > self.d * self.b**2 else sb

    def __lt__(self, other):
        return (self - Surd.lift(other)).real_sign() < 0

    def sqrt(self):
        """Square root inside QQ(sqrt(d)), or None when there is none."""
        if self.is_zero:
            return Surd(0)
        if self.b == 0:
            root = try_sqrt(self.a)
            return None if root is None else Surd.lift(root)
        s = try_sqrt(self.norm())
        if s is None or not isinstance(s, Rational):
            return None
        for t in ((self.a + s) / 2, (self.a - s) / 2):
            if t <= 0:
                continue
            p = try_sqrt(t)
            if not isinstance(p, Rational):
                continue
            candidate = Surd(p, self.b / (2 * p), self.d)
            if candidate * candidate == self:
                return candidate
        return None

    def sort_key(self):
        return (self.a, self.b, self.d)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.b == 1:
            surd = f"sqrt({self.d})"
        elif self.b == -1:
            surd = f"-sqrt({self.d})"
        else:
            surd = f"{self.b}*sqrt({self.d})"
        if self.a == 0:
            return surd
        if surd.startswith("-"):
            return f"{self.a}{surd}"
        return f"{self.a}+{surd}"

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.d})"


def surd_normalize(a, b=0, d=1):
    """Normalize a + b*sqrt(d), returning a ``Rational`` when b*sqrt(d) is rational.

    Examples:
        surd_normalize(1, 2, 8) -> 1+4*sqrt(2)
        surd_normalize(3, 0, 5) -> 3
    """
    return Surd(a, b, d).to_scalar()


def try_sqrt(q):
    """Square root of a rational inside QQ or a single QQ(sqrt(d)); None if q < 0."""
    q = Rational(q)
    if q < 0:
        return None
    if q == 0:
        return Rational(0)
    radicand = int(q.p) * int(q.q)
    k, d = _split_square(radicand)
    return surd_normalize(0, Rational(k, q.q), d)


def scalar_field_join(x, y):
    """Common QuadraticField of two scalars; raises IncompatibleFieldError."""
    return Surd.lift(x).field.join(Surd.lift(y).field)


def field_of(values):
    field = QuadraticField(1)
    for value in values:
        field = field.join(Surd.lift(value).field)
    return field


def parse_scalar(text):
    """Parse ``p/q`` or ``a+b*sqrt(d)`` text into a Scalar."""
    try:
        expr = sympy.sympify(str(text), rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as err:
        raise ValueError(f"Cannot parse scalar '{text}'") from err
    return Surd.from_expr(expr).to_scalar()


def format_scalar(value):
    return str(Surd.lift(value))


def scalar_rank(rows):
    """Exact rank of a matrix of scalars, computed over their common field."""
    field = field_of(v for row in rows for v in row)
    domain = field.domain
    elements = [[Surd.lift(v).to_domain(domain) for v in row] for row in rows]
    return DomainMatrix(elements, (len(rows), len(rows[0])), domain).rank()
