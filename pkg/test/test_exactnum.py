""" Test exact scalar arithmetic in rationals and quadratic fields. """

import sys
import unittest
from pathlib import Path

libpath = str(Path(__file__).resolve().parents[1])
if libpath not in sys.path:
    sys.path.append(libpath)

import numpy as np
from sympy import Rational

import config  # noqa: F401
from charvartools.exactnum import (
    ComplexRadicandError,
    IncompatibleFieldError,
    QuadraticField,
    Surd,
    field_domain,
    field_of,
    format_scalar,
    parse_scalar,
    scalar_field_join,
    scalar_rank,
    surd_normalize,
    try_sqrt,
)
from helper import message

SQRT2 = Surd(0, 1, 2)


class TestSurdNormalize(unittest.TestCase):
    """Normal form of a + b sqrt(d)"""

    def test_square_factor_moves_out(self):
        value = surd_normalize(1, 2, 8)
        self.assertEqual(value, Surd(1, 4, 2))
        self.assertEqual(str(value), "1+4*sqrt(2)")

    def test_rational_when_surd_part_vanishes(self):
        value = surd_normalize(3, 0, 5)
        self.assertIsInstance(value, Rational)
        self.assertEqual(value, 3)
        self.assertEqual(surd_normalize(1, 3, 4), 7)

    def test_half_root_two(self):
        value = surd_normalize(0, Rational(1, 2), 2)
        self.assertEqual(str(value), "1/2*sqrt(2)")
        self.assertEqual(value, 1 / SQRT2)

    def test_negative_radicand(self):
        with self.assertRaises(ComplexRadicandError):
            Surd(0, 1, -2)
        with self.assertRaises(ValueError):
            Surd(0, 1, -2)


class TestTrySqrt(unittest.TestCase):
    def test_values(self):
        self.assertEqual(try_sqrt(Rational(9, 4)), Rational(3, 2))
        self.assertEqual(try_sqrt(2), SQRT2)
        self.assertEqual(try_sqrt(6).d, 6)
        self.assertEqual(try_sqrt(Rational(1, 2)), Surd(0, Rational(1, 2), 2))
        self.assertEqual(try_sqrt(0), 0)
        self.assertIsNone(try_sqrt(-3))


class TestFieldJoin(unittest.TestCase):
    def test_join(self):
        self.assertEqual(scalar_field_join(Rational(1, 2), SQRT2), QuadraticField(2))
        self.assertEqual(scalar_field_join(3, 5), QuadraticField(1))
        with self.assertRaises(IncompatibleFieldError):
            scalar_field_join(SQRT2, Surd(0, 1, 3))
        self.assertEqual(field_of([1, Rational(2, 3), Surd(1, 1, 2)]), QuadraticField(2))

    def test_arithmetic_across_fields_fails(self):
        with self.assertRaises(IncompatibleFieldError):
            SQRT2 + Surd(0, 1, 3)

    def test_domain(self):
        self.assertEqual(QuadraticField.from_domain(field_domain(2)), QuadraticField(2))
        self.assertTrue(QuadraticField.from_domain(field_domain(1)).is_rational)
        self.assertEqual(str(QuadraticField(3)), "QQ(sqrt(3))")
        value = Surd(Rational(2, 3), -5, 2)
        self.assertEqual(Surd.from_domain(field_domain(2), value.to_domain(field_domain(2))), value)


class TestSurdArithmetic(unittest.TestCase):
    def test_ring_operations(self):
        one_plus = Surd(1, 1, 2)
        self.assertEqual(one_plus * one_plus.conjugate(), -1)
        self.assertEqual(one_plus.norm(), -1)
        self.assertEqual(one_plus * one_plus.inverse(), 1)
        self.assertEqual(one_plus**2, Surd(3, 2, 2))
        self.assertEqual(one_plus ** -2 * one_plus**2, 1)
        self.assertEqual(2 - SQRT2, Surd(2, -1, 2))
        self.assertEqual(1 / SQRT2, Surd(0, Rational(1, 2), 2))

    def test_division_by_zero(self):
        with self.assertRaises(ZeroDivisionError):
            SQRT2 / Surd(0)
        with self.assertRaises(ZeroDivisionError):
            Surd(0).inverse()

    def test_rational_surds_hash_like_rationals(self):
        self.assertEqual(Surd(3), 3)
        self.assertIn(Rational(3), {Surd(3)})
        self.assertFalse(Surd(0))
        self.assertTrue(SQRT2)

    def test_exact_sign_and_order(self):
        self.assertEqual(Surd(3, -2, 2).real_sign(), 1)
        self.assertEqual(Surd(1, -1, 2).real_sign(), -1)
        self.assertEqual(Surd(-3, 2, 2).real_sign(), -1)
        values = [Surd(1, 1, 2), Surd(2), SQRT2, Surd(-1, 1, 2)]
        self.assertEqual(sorted(values), [Surd(-1, 1, 2), SQRT2, Surd(2), Surd(1, 1, 2)])

    def test_sqrt_inside_field(self):
        self.assertEqual(Surd(3, 2, 2).sqrt(), Surd(1, 1, 2))
        self.assertEqual(Surd(Rational(1, 2)).sqrt(), Surd(0, Rational(1, 2), 2))
        self.assertIsNone(SQRT2.sqrt())
        self.assertIsNone(Surd(-2).sqrt())
        self.assertEqual(Surd(0).sqrt(), 0)


class TestScalarText(unittest.TestCase):
    def test_parse_and_format(self):
        self.assertEqual(parse_scalar("1/2+3*sqrt(8)"), Surd(Rational(1, 2), 6, 2))
        self.assertEqual(parse_scalar("-3/2"), Rational(-3, 2))
        self.assertEqual(format_scalar(Rational(-3, 2)), "-3/2")
        self.assertEqual(format_scalar(Surd(1, -1, 2)), "1-sqrt(2)")
        with self.assertRaises(ComplexRadicandError):
            parse_scalar("sqrt(-2)")
        with self.assertRaises(ValueError):
            parse_scalar("x + 1")


class TestScalarRank(unittest.TestCase):
    def test_rank(self):
        message("rank of small exact matrices", message_verbosity=3)
        self.assertEqual(scalar_rank([[1, 0], [0, 0]]), 1)
        self.assertEqual(scalar_rank([[SQRT2, 2], [1, SQRT2]]), 1)
        self.assertEqual(scalar_rank([[SQRT2, 1], [1, SQRT2]]), 2)
        self.assertEqual(scalar_rank([[0, 0, 0]] * 3), 0)


def random_rational(rng):
    return Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))


def random_surd(rng, d):
    return Surd(random_rational(rng), random_rational(rng), d)


class TestRandomizedFieldLaws(unittest.TestCase):
    """Seeded random surds obey the field laws and survive a text round trip"""

    radicands = (2, 3, 5, 8, 12)

    def test_field_axioms(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            d = int(rng.choice(self.radicands))
            x, y, z = (random_surd(rng, d) for _ in range(3))
            self.assertEqual((x + y) + z, x + (y + z))
            self.assertEqual((x * y) * z, x * (y * z))
            self.assertEqual(x * (y + z), x * y + x * z)
            self.assertEqual(x * y, y * x)
            self.assertEqual(x - x, 0)
            if x:
                self.assertEqual(x * x.inverse(), 1)
                self.assertEqual((y / x) * x, y)

    def test_normalize_is_idempotent(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            d = int(rng.choice(self.radicands))
            value = Surd.lift(surd_normalize(random_rational(rng), random_rational(rng), d))
            self.assertEqual(Surd.lift(surd_normalize(value.a, value.b, value.d)), value)
            again = Surd(value.a, value.b, value.d)
            self.assertEqual((again.a, again.b, again.d), (value.a, value.b, value.d))

    def test_text_round_trip(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            value = surd_normalize(random_rational(rng), random_rational(rng), int(rng.choice(self.radicands)))
            text = format_scalar(value)
            self.assertEqual(parse_scalar(text), value)
            self.assertEqual(format_scalar(parse_scalar(text)), text)


if __name__ == "__main__":
    unittest.main(argv=["first-arg-is-ignored"], exit=False, verbosity=3)
