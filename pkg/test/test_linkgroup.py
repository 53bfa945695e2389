""" Test relator words, representation matrices and the relation
polynomials of two-bridge link groups.
"""

import sys
import unittest
from pathlib import Path

libpath = str(Path(__file__).resolve().parents[1])
if libpath not in sys.path:
    sys.path.append(libpath)

import numpy as np
from sympy import Rational

import config  # noqa: F401
from charvartools.linkgroup import (
    GroupWord,
    Letter,
    SymMat2,
    manifold_label,
    nonabelian_part,
    relation_polys,
    rep_matrices,
    rep_ring,
    schubert_label,
    surgery_exponent,
    surgery_word,
)
from charvartools.polycore import REP_VARS, LaurentPoly, evaluate, index_of, parse_poly, same_up_to_unit
from helper import WHITEHEAD_P, WHITEHEAD_P1, WHITEHEAD_P2, WHITEHEAD_WORD, message


def mono(m=0, s=0, r=0, c=1):
    return LaurentPoly.monomial(rep_ring(), (m, s, r), c)


def random_word(rng, max_length=15):
    length = int(rng.integers(0, max_length + 1))
    return GroupWord(
        tuple(Letter(str(rng.choice(["a", "b"])), int(rng.choice([1, -1]))) for _ in range(length))
    )


def random_point(rng):
    def nonzero():
        return Rational(int(rng.choice([-1, 1])) * int(rng.integers(1, 12)), int(rng.integers(1, 7)))

    return {"m": nonzero(), "s": nonzero(), "r": Rational(int(rng.integers(-10, 11)), int(rng.integers(1, 7)))}


class TestWords(unittest.TestCase):
    def test_whitehead_word(self):
        word = surgery_word(1)
        self.assertEqual(str(word), WHITEHEAD_WORD)
        self.assertEqual(len(word), 7)
        self.assertEqual(GroupWord.parse(WHITEHEAD_WORD), word)
        self.assertEqual(GroupWord.parse("bab^-1a^-1b^-1ab"), word)

    def test_surgery_words(self):
        for n in (2, 3, 4):
            word = surgery_word(n)
            self.assertEqual(len(word), 8 * n - 1)
            self.assertEqual(word.exponents, tuple(reversed(word.exponents)))
            self.assertEqual([letter.generator for letter in word][:3], ["b", "a", "b"])
        self.assertEqual(surgery_exponent(2, 3), -1)
        self.assertEqual(surgery_exponent(2, 5), 1)
        with self.assertRaises(ValueError):
            surgery_word(0)

    def test_labels(self):
        self.assertEqual(schubert_label(1), "S(8,5)")
        self.assertEqual(schubert_label(3), "S(24,13)")
        self.assertEqual(manifold_label(2), "M_br(1/2)")

    def test_parse_errors(self):
        self.assertEqual(str(GroupWord.parse("b a^(-1)")), "b a^-1")
        with self.assertRaises(ValueError):
            GroupWord.parse("b c")
        with self.assertRaises(ValueError):
            Letter("a", 2)


class TestRepMatrices(unittest.TestCase):
    def test_single_letters(self):
        B = rep_matrices(GroupWord.parse("b"))
        self.assertEqual(B.entries(), (mono(s=1), LaurentPoly(rep_ring().zero), mono(r=1), mono(s=-1)))
        AB = rep_matrices(GroupWord.parse("a b"))
        self.assertEqual(AB.e11, mono(m=1, s=1) + mono(r=1))
        self.assertEqual((mono(m=1) * mono(m=-1)), mono())

    def test_multiplicative_and_unimodular(self):
        w1, w2 = GroupWord.parse("a b^-1"), GroupWord.parse("b a b")
        self.assertEqual(rep_matrices(w1 + w2), rep_matrices(w1) @ rep_matrices(w2))
        self.assertEqual(rep_matrices(w1 + w1.inverse()), SymMat2.identity())
        self.assertEqual(rep_matrices(surgery_word(1)).det(), mono())

    def test_random_words(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            w1, w2 = random_word(rng), random_word(rng)
            M1, M2 = rep_matrices(w1), rep_matrices(w2)
            self.assertEqual(M1.det(), mono(), msg=str(w1))
            self.assertEqual(rep_matrices(w1 + w2), M1 @ M2, msg=f"{w1} | {w2}")
            self.assertEqual(rep_matrices(w1.inverse()) @ M1, SymMat2.identity())


class TestRelationPolys(unittest.TestCase):
    def test_whitehead(self):
        rel = relation_polys(surgery_word(1))
        message(f"p1 = {rel.to_dict()['p1']}", message_verbosity=3)
        self.assertTrue(same_up_to_unit(rel.p1, parse_poly(WHITEHEAD_P1, REP_VARS)))
        self.assertTrue(same_up_to_unit(rel.p2, parse_poly(WHITEHEAD_P2, REP_VARS)))

        part = nonabelian_part(rel.p1, rel.p2)
        self.assertTrue(same_up_to_unit(part.p, parse_poly(WHITEHEAD_P, REP_VARS)))
        self.assertTrue(same_up_to_unit(part.g1, parse_poly("r*s", REP_VARS)))
        self.assertTrue(same_up_to_unit(part.g2, parse_poly("s^2 - 1", REP_VARS)))
        self.assertTrue(part.abelian_locus)
        self.assertFalse(part.trivial)

    def test_cached_gcd_is_checked(self):
        rel = relation_polys(surgery_word(1))
        p = parse_poly(WHITEHEAD_P, REP_VARS)
        part = nonabelian_part(rel.p1, rel.p2, gcd=p)
        self.assertTrue(same_up_to_unit(part.p, p))

    def test_equal_inputs(self):
        p = parse_poly(WHITEHEAD_P, REP_VARS)
        part = nonabelian_part(p, p)
        self.assertTrue(same_up_to_unit(part.p, p))
        self.assertTrue(part.g1.is_ground and part.g2.is_ground)
        self.assertFalse(part.abelian_locus)

    def test_abelian_only_word(self):
        rel = relation_polys(GroupWord.parse("b"))
        part = nonabelian_part(rel.p1, rel.p2)
        self.assertTrue(part.trivial)
        self.assertTrue(part.to_dict()["trivial"])

    def test_surgery_n2_degree(self):
        rel = relation_polys(surgery_word(2))
        part = nonabelian_part(rel.p1, rel.p2)
        self.assertEqual(part.p.degree(index_of(part.p.ring, "r")), 7)

    def test_cofactors_at_random_points(self):
        rng = np.random.default_rng(9)
        for n in (1, 2):
            rel = relation_polys(surgery_word(n))
            part = nonabelian_part(rel.p1, rel.p2)
            for _ in range(50):
                point = random_point(rng)
                p_value = evaluate(part.p, point)
                self.assertEqual(evaluate(rel.p1, point), evaluate(part.g1, point) * p_value)
                self.assertEqual(evaluate(rel.p2, point), evaluate(part.g2, point) * p_value)


if __name__ == "__main__":
    unittest.main(argv=["first-arg-is-ignored"], exit=False, verbosity=3)
