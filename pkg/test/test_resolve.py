""" Test localization, single blow-ups, the exceptional conic and the
smoothness audit.
"""

import sys
import unittest
from pathlib import Path

libpath = str(Path(__file__).resolve().parents[1])
if libpath not in sys.path:
    sys.path.append(libpath)

import config  # noqa: F401
from charvartools.polycore import BiForm, parse_poly
from charvartools.projmodel import BiPoint, singular_points
from charvartools.resolve import (
    CHART_NAMES,
    ExceptionalCurveError,
    NotSingularError,
    blow_up_origin,
    chi_increment,
    exceptional_conic,
    localize,
    resolve_all,
    resolve_point,
    smoothness_audit,
)
from helper import N2_F, WHITEHEAD_F, message

LOCAL_VARS = ("y", "u", "w")


class TestLocalize(unittest.TestCase):
    def test_whitehead_first_point(self):
        local = localize(BiForm.parse(WHITEHEAD_F), BiPoint((1, 0, 0), (1, 0)))
        self.assertEqual((local.p2_fixed, local.p1_fixed), ("x", "z"))
        self.assertEqual(local.names, LOCAL_VARS)
        expected = parse_poly("u^2 + w^2 - w*y + w^2*y^2 - w^3*y - 2*u^2*w^2", LOCAL_VARS)
        self.assertEqual(local.poly, expected)
        self.assertEqual(local.to_bipoint({"y": 0, "u": 0, "w": 0}), local.point)

    def test_translated_point(self):
        local = localize(BiForm.parse(WHITEHEAD_F), BiPoint((1, 1, 0), (1, 1)))
        self.assertEqual(local.offsets, (1, 0, 1))
        self.assertEqual(local.to_bipoint({"y": 0, "u": 0, "w": 0}), BiPoint((1, 1, 0), (1, 1)))

    def test_not_singular(self):
        with self.assertRaises(NotSingularError):
            localize(BiForm.parse(WHITEHEAD_F), BiPoint((0, 0, 1), (1, 0)))


class TestBlowUp(unittest.TestCase):
    def setUp(self):
        local = localize(BiForm.parse(WHITEHEAD_F), BiPoint((1, 0, 0), (1, 0)))
        self.results = blow_up_origin(local.poly)

    def test_chart_curves(self):
        a, b, c = self.results
        self.assertEqual([r.chart for r in self.results], list(CHART_NAMES))
        self.assertEqual(a.variables, ("y", "b", "c"))
        self.assertEqual(a.exceptional_curve, parse_poly("b^2 + c^2 - c", ("b", "c")))
        self.assertEqual(b.exceptional_curve, parse_poly("1 - a*c + c^2", ("a", "c")))
        self.assertEqual(c.exceptional_curve, parse_poly("1 - a + b^2", ("a", "b")))
        self.assertTrue(all(r.multiplicity == 2 for r in self.results))

    def test_exceptional_conic(self):
        conic = exceptional_conic(self.results)
        self.assertEqual(conic.conic, parse_poly("b^2 + c^2 - a*c", CHART_NAMES))
        self.assertEqual((conic.rank, conic.genus), (3, 0))

    def test_audit(self):
        # the other two singular points with x = z = 1, as local (y, u, w)
        others = [(1, 0, 1), (-1, 0, -1)]
        for result in self.results:
            self.assertTrue(smoothness_audit(result, others))
        self.assertFalse(smoothness_audit(self.results[0], []))

    def test_smooth_origin(self):
        with self.assertRaises(NotSingularError):
            blow_up_origin(parse_poly("y + u^2 + w^2", LOCAL_VARS))


class TestCusp(unittest.TestCase):
    def setUp(self):
        self.results = blow_up_origin(parse_poly("u^2 - w^3", LOCAL_VARS))

    def test_rank_one_conic(self):
        with self.assertRaises(ExceptionalCurveError) as ctx:
            exceptional_conic(self.results)
        self.assertEqual(ctx.exception.detail["rank"], 1)

    def test_audit_finds_singular_line(self):
        audit = smoothness_audit(self.results[0], [])
        self.assertFalse(audit)
        self.assertTrue(audit.positive_dimensional)


class TestResolution(unittest.TestCase):
    def test_whitehead(self):
        F = BiForm.parse(WHITEHEAD_F)
        singular = singular_points(F)
        records = resolve_all(F, singular)
        self.assertEqual(len(records), 4)
        for record in records:
            message(record.to_dict(), message_verbosity=3)
            self.assertTrue(record.smooth)
            self.assertEqual(record.genus, 0)
        self.assertEqual(sum(r.chi_increment for r in records), 4)

    def test_n2_point(self):
        F = BiForm.parse(N2_F)
        singular = singular_points(F)
        record = resolve_point(F, singular[0], singular)
        self.assertTrue(record.smooth)
        self.assertEqual(record.to_dict()["chi_increment"], 1)

    def test_chi_increment(self):
        self.assertEqual(chi_increment(0, "smooth"), 1)
        self.assertEqual(chi_increment(0, "singular"), 1)
        self.assertEqual(chi_increment(1, "singular"), 3)
        with self.assertRaises(ValueError):
            chi_increment(-1, "singular")
        with self.assertRaises(ValueError):
            chi_increment(0, "cusp")


if __name__ == "__main__":
    unittest.main(argv=["first-arg-is-ignored"], exit=False, verbosity=3)
