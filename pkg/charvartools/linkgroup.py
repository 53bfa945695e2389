"""Two-bridge relator words and the representation-variety polynomials.

The group is presented as <a, b | a w = w a>. Generators are sent to

    a -> [[m, 1], [0, 1/m]],    b -> [[s, 0], [r, 1/s]]

and the relation a w = w a cuts out the representation variety in (m, s, r).
"""
import re
from dataclasses import dataclass

from .polycore import (
    REP_VARS,
    LaurentPoly,
    exact_divide,
    format_poly,
    gcd_multivariate,
    parse_poly,
    poly_ring,
    same_up_to_unit,
    strip_monomial,
)
from .utils import CharVarError

_LETTER = re.compile(r"([ab])(?:\^\(?([+-]?1)\)?)?")


class LinkGroupError(CharVarError):
    stage = "linkgroup"


class RelationShapeError(LinkGroupError):
    """The commutator matrix of the relation does not have the expected shape."""


class CofactorError(LinkGroupError):
    pass


@dataclass(frozen=True)
class Letter:
    generator: str
    exponent: int = 1

    def __post_init__(self):
        if self.generator not in ("a", "b"):
            raise ValueError(f"Unknown generator '{self.generator}', expected 'a' or 'b'")
        if self.exponent not in (1, -1):
            raise ValueError(f"Exponent must be +1 or -1, got {self.exponent}")

    def inverse(self):
        return Letter(self.generator, -self.exponent)

    def __str__(self):
        return self.generator if self.exponent == 1 else f"{self.generator}^-1"


@dataclass(frozen=True)
class GroupWord:
    """A word in a, b and their inverses, e.g. ``b a b^-1 a^-1 b^-1 a b``."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def parse(cls, text):
        letters = []
        compact = "".join(str(text).split())
        pos = 0
        while pos < len(compact):
            match = _LETTER.match(compact, pos)
            if match is None:
                raise ValueError(f"Cannot parse word '{text}' at position {pos}")
            letters.append(Letter(match.group(1), int(match.group(2) or 1)))
            pos = match.end()
        return cls(tuple(letters))

    def __str__(self):
        return " ".join(str(letter) for letter in self.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other):
        return GroupWord(self.letters + tuple(other.letters))

    def inverse(self):
        return GroupWord(tuple(letter.inverse() for letter in reversed(self.letters)))

    @property
    def exponents(self):
        return tuple(letter.exponent for letter in self.letters)


def surgery_exponent(n, i):
    """(-1) ** floor(i (4n - 1) / 8n)."""
    return -1 if (i * (4 * n - 1) // (8 * n)) % 2 else 1


def surgery_word(n):
    """Relator word of M_br(1/n): letters b, a, b, ..., b of length 8n - 1."""
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    return GroupWord(
        tuple(Letter("b" if i % 2 else "a", surgery_exponent(n, i)) for i in range(1, 8 * n))
    )


def schubert_label(n):
    return f"S({8 * n},{4 * n + 1})"


def manifold_label(n):
    return f"M_br(1/{n})"


def rep_ring():
    return poly_ring(REP_VARS)


@dataclass(frozen=True)
class SymMat2:
    """2x2 matrix with LaurentPoly entries in (m, s, r)."""

    e11: LaurentPoly
    e12: LaurentPoly
    e21: LaurentPoly
    e22: LaurentPoly

    @classmethod
    def identity(cls):
        ring = rep_ring()
        one, zero = LaurentPoly(ring.one), LaurentPoly(ring.zero)
        return cls(one, zero, zero, one)

    @classmethod
    def letter(cls, letter):
        ring = rep_ring()

        def mono(m=0, s=0, r=0, c=1):
            return LaurentPoly.monomial(ring, (m, s, r), c)

        zero = LaurentPoly(ring.zero)
        if letter.generator == "a":
            if letter.exponent == 1:
                return cls(mono(m=1), mono(), zero, mono(m=-1))
            return cls(mono(m=-1), mono(c=-1), zero, mono(m=1))
        if letter.exponent == 1:
            return cls(mono(s=1), zero, mono(r=1), mono(s=-1))
        return cls(mono(s=-1), zero, mono(r=1, c=-1), mono(s=1))

    def __matmul__(self, other):
        return SymMat2(
            self.e11 * other.e11 + self.e12 * other.e21,
            self.e11 * other.e12 + self.e12 * other.e22,
            self.e21 * other.e11 + self.e22 * other.e21,
            self.e21 * other.e12 + self.e22 * other.e22,
        )

    def det(self):
        return self.e11 * self.e22 - self.e12 * self.e21

    def entries(self):
        return (self.e11, self.e12, self.e21, self.e22)


def rep_matrices(word):
    """Product of the letter matrices of ``word``, composed left to right."""
    result = SymMat2.identity()
    for letter in word:
        result = result @ SymMat2.letter(letter)
    return result


@dataclass(frozen=True)
class RelationPolys:
    p1: object
    p2: object
    unit1: tuple
    unit2: tuple

    def to_dict(self):
        return {
            "p1": format_poly(self.p1),
            "p2": format_poly(self.p2),
            "unit1": list(self.unit1),
            "unit2": list(self.unit2),
        }


def relation_polys(word):
    """p1 = w21 and p2 = w11 + w12 (1/m - m) - w22 with Laurent units cleared.

    The full commutator w a - a w is checked to be

        [[-p1, p2], [p1 (m - 1/m), p1]]
    """
    ring = rep_ring()
    W = rep_matrices(word)
    A = SymMat2.letter(Letter("a", 1))
    WA, AW = W @ A, A @ W
    c11, c12, c21, c22 = (x - y for x, y in zip(WA.entries(), AW.entries()))
    p1 = W.e21
    m_minus_inv = LaurentPoly.monomial(ring, (1, 0, 0)) - LaurentPoly.monomial(ring, (-1, 0, 0))
    p2 = W.e11 - W.e12 * m_minus_inv - W.e22
    if c11 != -p1 or c22 != p1 or c21 != p1 * m_minus_inv or c12 != p2:
        raise RelationShapeError("Commutator matrix has an unexpected shape", word=str(word))
    poly1, unit1 = p1.clear_denominators()
    poly2, unit2 = p2.clear_denominators()
    return RelationPolys(poly1, poly2, unit1, unit2)


@dataclass(frozen=True)
class NonabelianPart:
    p: object
    g1: object
    g2: object
    abelian_locus: bool

    @property
    def trivial(self):
        """True when gcd(p1, p2) is a unit."""
        return self.p.is_ground

    def to_dict(self):
        return {
            "p": format_poly(self.p),
            "g1": format_poly(self.g1),
            "g2": format_poly(self.g2),
            "abelian_locus": self.abelian_locus,
            "trivial": self.trivial,
        }


def nonabelian_part(p1, p2, gcd=None):
    """Split Z(p1, p2) = Z(g1, g2) u Z(p) with p = gcd(p1, p2).

    Monomial factors of the gcd are units in (m, s) and are moved into the
    cofactors. A previously computed ``gcd`` is only checked by exact division.
    """
    if not p1 or not p2:
        raise LinkGroupError("Relation polynomials must be nonzero")
    p = gcd_multivariate(p1, p2) if gcd is None else gcd
    if not p:
        raise LinkGroupError("Zero gcd")
    _, p = strip_monomial(p)
    g1 = exact_divide(p1, p)
    g2 = exact_divide(p2, p)
    _, shared = strip_monomial(gcd_multivariate(g1, g2))
    if not shared.is_ground:
        raise CofactorError(
            "Cofactors are not coprime", g1=format_poly(g1), g2=format_poly(g2)
        )
    abelian = same_up_to_unit(g1, parse_poly("r", REP_VARS)) and same_up_to_unit(
        g2, parse_poly("s^2 - 1", REP_VARS)
    )
    return NonabelianPart(p, g1, g2, abelian)
