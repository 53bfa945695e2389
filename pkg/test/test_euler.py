""" Test the even split F = g + u^2 h, the branch curve, the infinite
fibers and the Euler characteristic bookkeeping.
"""

import sys
import unittest
from pathlib import Path
from types import SimpleNamespace

libpath = str(Path(__file__).resolve().parents[1])
if libpath not in sys.path:
    sys.path.append(libpath)

import config  # noqa: F401
from charvartools.euler import (
    BASE_PRODUCT_VARS,
    EulerError,
    ShapeError,
    branch_geometry,
    chi_singular_model,
    classify_surface,
    fiber_dichotomy_check,
    infinite_fibers,
    split_even,
)
from charvartools.polycore import BASE_VARS, BiForm
from charvartools.projmodel import classify_fibers, conic_matrix, singular_points
from charvartools.resolve import resolve_all
from charvartools.utils import report_info
from helper import N2_F, N2_G, N2_H, WHITEHEAD_F, WHITEHEAD_G, WHITEHEAD_H, message, poly_matches


class TestSplitEven(unittest.TestCase):
    def test_whitehead(self):
        split = split_even(BiForm.parse(WHITEHEAD_F))
        self.assertTrue(poly_matches(split.g, WHITEHEAD_G, BASE_PRODUCT_VARS, up_to_unit=False))
        self.assertTrue(poly_matches(split.h, WHITEHEAD_H, BASE_VARS, up_to_unit=False))
        self.assertEqual(split.bidegree, (2, 3))

    def test_n2(self):
        split = split_even(BiForm.parse(N2_F))
        self.assertTrue(poly_matches(split.g, N2_G, BASE_PRODUCT_VARS, up_to_unit=False))
        self.assertTrue(poly_matches(split.h, N2_H, BASE_VARS, up_to_unit=False))

    def test_shape_errors(self):
        with self.assertRaises(ShapeError):
            split_even(BiForm.parse("x*u*z + u^2*w"))
        with self.assertRaises(ShapeError):
            split_even(BiForm.parse("x^2*z + y^2*w"))
        with self.assertRaises(ShapeError):
            split_even(BiForm.parse("x^3*z + u^3*w"))


class TestBranchGeometry(unittest.TestCase):
    def test_whitehead(self):
        branch = branch_geometry(split_even(BiForm.parse(WHITEHEAD_F)).g)
        message(branch.to_dict(), message_verbosity=3)
        self.assertEqual([c.bidegree for c in branch.components], [(0, 1), (1, 1), (1, 1)])
        self.assertEqual(
            sorted(str(p.point) for p in branch.points),
            sorted(["[1,0:1,0]", "[0,1:1,0]", "[1,1:1,1]", "[1,-1:1,-1]"]),
        )
        self.assertEqual(branch.chi, 2)
        for item in branch.evidence:
            self.assertEqual(item["predicted"], item["found"])

    def test_n2(self):
        branch = branch_geometry(split_even(BiForm.parse(N2_F)).g)
        self.assertEqual([c.bidegree for c in branch.components], [(0, 1), (2, 1)])
        self.assertEqual(len(branch.points), 2)
        self.assertEqual(branch.chi, 2)


class TestInfiniteFibers(unittest.TestCase):
    def test_whitehead(self):
        split = split_even(BiForm.parse(WHITEHEAD_F))
        fibers = infinite_fibers(split)
        self.assertEqual(len(fibers.roots), 3)
        self.assertEqual(fibers.L_count, 6)
        self.assertEqual(len(fibers.L), 6)
        self.assertFalse(any(r.conjugate_pair for r in fibers.roots))
        self.assertEqual((fibers.chi_Q, fibers.chi_L, fibers.chi_phi_L), (0, 6, 9))
        self.assertIn("[0,0,1:0,1]", [str(p) for p in fibers.P])
        branch = branch_geometry(split.g)
        self.assertEqual(chi_singular_model(branch, fibers), 9)

    def test_n2_conjugate_pairs(self):
        split = split_even(BiForm.parse(N2_F))
        fibers = infinite_fibers(split)
        self.assertEqual(len(fibers.roots), 2)
        self.assertTrue(all(r.conjugate_pair for r in fibers.roots))
        self.assertEqual(fibers.roots[0].discriminant, -2)
        self.assertEqual(fibers.L_count, 4)
        self.assertEqual((fibers.chi_Q, fibers.chi_L, fibers.chi_phi_L), (0, 4, 6))
        self.assertEqual(chi_singular_model(branch_geometry(split.g), fibers), 8)

    def test_repeated_root(self):
        split = split_even(BiForm.parse("x^2*z^2 + y^2*w^2 + u^2*z^2"))
        with self.assertRaises(EulerError):
            infinite_fibers(split)


class TestClassification(unittest.TestCase):
    def _classify(self, text):
        F = BiForm.parse(text)
        split = split_even(F)
        branch = branch_geometry(split.g)
        chi_sing = chi_singular_model(branch, infinite_fibers(split))
        resolution = resolve_all(F, singular_points(F))
        fibers = classify_fibers(conic_matrix(F))
        return classify_surface(chi_sing, resolution, fibers), split, branch

    def test_whitehead(self):
        surface, _, _ = self._classify(WHITEHEAD_F)
        self.assertEqual((surface.chi_singular, surface.chi_smooth), (9, 13))
        self.assertEqual(surface.blowup_count, 10)
        self.assertEqual(surface.verdict, "P2 blown up at 10 points")
        self.assertEqual(surface.evidence["increments"], 4)

    def test_n2(self):
        surface, split, branch = self._classify(N2_F)
        self.assertEqual((surface.chi_singular, surface.chi_smooth), (8, 10))
        self.assertEqual(surface.verdict, "P2 blown up at 7 points")
        counts = fiber_dichotomy_check(split, branch, samples=50, seed=3)
        self.assertEqual(counts, {"off_branch": 50, "on_branch": 50})

    def test_indeterminate(self):
        surface = classify_surface(4, [], [])
        self.assertIsNone(surface.blowup_count)
        self.assertEqual(surface.verdict, report_info["verdict_indeterminate"])

    def test_unresolved_point(self):
        with self.assertRaises(EulerError):
            classify_surface(9, [SimpleNamespace(smooth=False, chi_increment=1)], [])


class TestFiberDichotomy(unittest.TestCase):
    def test_whitehead(self):
        split = split_even(BiForm.parse(WHITEHEAD_F))
        branch = branch_geometry(split.g)
        counts = fiber_dichotomy_check(split, branch, samples=200, seed=0)
        self.assertEqual(counts["off_branch"], 200)
        self.assertEqual(counts["on_branch"], 200)


if __name__ == "__main__":
    unittest.main(argv=["first-arg-is-ignored"], exit=False, verbosity=3)
