import unittest
from fractions import Fraction

from toric_residues.config import Settings
from toric_residues.errors import DegreeError, MirrorError, NotInIdealError
from toric_residues.fan import Fan
from toric_residues.mirror import ConsistencyReport, GammaWeights, ResidueMirror, hessian
from toric_residues.polynomial import Polynomial


def segment_fan():
    """ Cone over [-1, 1] with rays (-1,1), (1,1) and the interior point (0,1) last """
    return Fan(
        generators=((-1, 1), (1, 1), (0, 1)),
        max_cones=(frozenset({0, 2}), frozenset({1, 2})),
        boundary_faces=(frozenset({0}), frozenset({1})),
        lifting=(1, 1, 0),
    )


def plane_fan():
    """ Cone over the reflexive triangle of the projective plane, origin last """
    return Fan(
        generators=((-1, -1, 1), (0, 1, 1), (1, 0, 1), (0, 0, 1)),
        max_cones=(frozenset({0, 1, 3}), frozenset({1, 2, 3}), frozenset({0, 2, 3})),
        boundary_faces=(frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})),
        lifting=(1, 1, 1, 0),
    )


class HessianTestCase(unittest.TestCase):
    def test_segment(self):
        expansion = hessian(segment_fan().generators)
        terms = {t.a_exponent: (t.coefficient, t.t_exponent) for t in expansion.terms}
        self.assertEqual(
            terms,
            {
                (1, 1, 0): (4, (0, 2)),
                (1, 0, 1): (1, (-1, 2)),
                (0, 1, 1): (1, (1, 2)),
            },
        )

    def test_specialize(self):
        """ Specialized Hessian as an element of the semigroup ring """
        values = hessian(segment_fan().generators).specialize([Fraction(1, 2), 1, 3])
        self.assertEqual(values, {(0, 2): 2, (-1, 2): Fraction(3, 2), (1, 2): 3})

    def test_too_few_generators(self):
        with self.assertRaises(MirrorError):
            hessian([(1, 0, 1), (0, 1, 1)])

    def test_gamma_weights(self):
        expansion = hessian(segment_fan().generators, GammaWeights.create([2, 2, 2]))
        self.assertEqual(expansion.polynomial().terms[(1, 1, 0)], 16)
        with self.assertRaises(MirrorError):
            hessian(segment_fan().generators, GammaWeights.create([1, 1, 2]))
        with self.assertRaises(MirrorError):
            GammaWeights.create([0, 1, 1])


class SegmentMirrorTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        super(SegmentMirrorTestCase, cls).setUpClass()
        cls.mirror = ResidueMirror(segment_fan())
        cls.polynomial = Polynomial.monomial((1, 0, 1))

    def test_completion(self):
        self.assertEqual(self.mirror.v0, (0, -1))
        self.assertEqual(self.mirror.mori.wall_relations, ((1, 1, -2),))

    def test_rm_coefficients(self):
        self.assertEqual(self.mirror.rm_coefficient((1, 0, 1), (0, 0, 0)), 1)
        self.assertEqual(self.mirror.rm_coefficient((1, 0, 1), (1, 1, -2)), 4)
        self.assertEqual(self.mirror.rm_coefficient((1, 1, 0), (0, 0, 0)), 0)

    def test_rm_series(self):
        """ Geometric series in 4 a1 a2 / a3^2 """
        table = self.mirror.rm_series(self.polynomial, 4)
        self.assertEqual(
            table.entries,
            {(0, 0, 0): 1, (1, 1, -2): 4, (2, 2, -4): 16},
        )
        self.assertEqual(table.degree((2, 2, -4)), 4)
        self.assertEqual(table.partial_sum([Fraction(1, 10), Fraction(1, 10), 1]), Fraction(10416, 10000))

    def test_rm_monomial_series(self):
        table = self.mirror.rm_monomial_series((1, 0, 1), 2)
        self.assertEqual(table.base_exponent, (-1, 0, -1))
        self.assertEqual(table.a_exponent((1, 1, -2)), (0, 1, -3))
        self.assertEqual(table.coefficient((1, 1, -2)), 4)

    def test_not_interior(self):
        with self.assertRaises(NotInIdealError):
            self.mirror.rm_coefficient((2, 0, 0), (0, 0, 0))
        with self.assertRaises(DegreeError):
            self.mirror.rm_coefficient((1, 0, 0), (0, 0, 0))
        with self.assertRaises(MirrorError):
            self.mirror.rm_coefficient((1, 0, 1), (1, 0, 0))

    def test_polynomial_degree(self):
        with self.assertRaises(DegreeError):
            self.mirror.rm_series(Polynomial.monomial((1, 0, 0)), 2)

    def test_hessian_identity(self):
        """ The Hessian maps to the total volume """
        report = self.mirror.verify_hessian_identity(bound=4)
        self.assertEqual(report.expected, 2)
        self.assertEqual(report.observed, 2)
        self.assertTrue(report.passed)

    def test_ideal_vanishing(self):
        (monomial,) = self.mirror.delta_monomials(1)
        self.assertEqual(monomial.point, (0, 1))
        self.assertEqual(monomial.lift, (0, 0, 1))
        for w in [(1, 0), (0, 1), (0, 0)]:
            self.assertTrue(self.mirror.verify_ideal_vanishing(w, monomial, 4))

    def test_completion_independence(self):
        other = self.mirror.with_completion((1, -4))
        self.assertEqual(other.v0, (1, -4))
        self.assertTrue(other.rm_series(self.polynomial, 4).same_coefficients(self.mirror.rm_series(self.polynomial, 4)))

    def test_seed_independence(self):
        table = self.mirror.with_seed(7).rm_series(self.polynomial, 4)
        self.assertEqual(table.coefficient((2, 2, -4)), 16)

    def test_artinian_residue(self):
        a = [Fraction(1, 10), Fraction(1, 10), 1]
        residue = self.mirror.artinian_residue(a, self.mirror.ideal_element(self.polynomial, a))
        self.assertEqual(residue, Fraction(25, 24))

    def test_artinian_hessian(self):
        a = [Fraction(1, 3), Fraction(2, 7), 1]
        self.assertEqual(self.mirror.artinian_residue(a, self.mirror.hessian().specialize(a)), 2)

    def test_residue_series_consistency(self):
        report = self.mirror.verify_residue_series_consistency(self.polynomial)
        self.assertEqual(report.bounds, [2, 4, 6])
        self.assertEqual(len(report.rows), 3)
        self.assertTrue(report.passed)

    def test_parallel_table(self):
        mirror = ResidueMirror(segment_fan(), settings=Settings(jobs=2))
        table = mirror.rm_series(self.polynomial, 4)
        self.assertEqual(table.coefficient((2, 2, -4)), 16)


class ConsistencyReportTestCase(unittest.TestCase):
    def report(self, first, second):
        return ConsistencyReport(
            rows=[(Fraction(1, 8), Fraction(1), first), (Fraction(1, 16), Fraction(1), second)], bounds=[2, 4, 6]
        )

    def test_strictly_decreasing(self):
        gaps = [Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)]
        self.assertTrue(self.report(gaps, [g / 2 for g in gaps]).passed)

    def test_constant_gaps_fail(self):
        """ Gaps that do not shrink with the bound fail the check """
        self.assertFalse(self.report([Fraction(1, 10)] * 3, [Fraction(1, 20)] * 3).passed)

    def test_vanished_gaps(self):
        self.assertTrue(self.report([Fraction(1, 10), 0, 0], [Fraction(1, 20), 0, 0]).passed)

    def test_growing_with_epsilon_fails(self):
        gaps = [Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)]
        self.assertFalse(self.report(gaps, [g * 2 for g in gaps]).passed)

class PlaneMirrorTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        super(PlaneMirrorTestCase, cls).setUpClass()
        cls.mirror = ResidueMirror(plane_fan())
        cls.polynomial = Polynomial.monomial((1, 1, 0, 1))

    def test_rm_series(self):
        table = self.mirror.rm_series(self.polynomial, 3)
        self.assertEqual(table.entries, {(0, 0, 0, 0): 1, (1, 1, 1, -3): -27})

    def test_hessian_identity(self):
        report = self.mirror.verify_hessian_identity()
        self.assertEqual(report.expected, 3)
        self.assertTrue(report.passed)

    def test_artinian_residue(self):
        a = [Fraction(1, 10), Fraction(1, 10), Fraction(1, 10), 1]
        residue = self.mirror.artinian_residue(a, self.mirror.ideal_element(self.polynomial, a))
        self.assertEqual(residue, Fraction(1000, 1027))


if __name__ == "__main__":
    unittest.main()
