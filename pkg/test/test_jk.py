import unittest
from fractions import Fraction

from toric_residues.errors import DegreeError, JKError
from toric_residues.fan import Fan, complete
from toric_residues.jk import BrionEvaluator, JeffreyKirwan, evaluate_top_class, restricted_forms
from toric_residues.polynomial import LaurentMonomial, Polynomial


def completed_segment():
    """ Rays (-1,1), (1,1), (0,1) with v0 = (0,-1) at index 0 """
    fan = Fan(
        generators=((-1, 1), (1, 1), (0, 1)),
        max_cones=(frozenset({0, 2}), frozenset({1, 2})),
        boundary_faces=(frozenset({0}), frozenset({1})),
        lifting=(1, 1, 0),
    )
    return complete(fan).fan


def projective_plane():
    """ Complete fan of the projective plane """
    return Fan(
        generators=((-1, -1), (0, 1), (1, 0)),
        max_cones=(frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 2})),
    )


class JeffreyKirwanTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        super(JeffreyKirwanTestCase, cls).setUpClass()
        cls.fan = completed_segment()
        cls.jk = JeffreyKirwan(cls.fan)

    def test_forms_vanish_on_relations(self):
        forms = restricted_forms(self.fan)
        self.assertEqual(forms.dimension, 2)

    def test_basic_fractions(self):
        """ Basic fractions evaluate to the inverse volume of the complementary cone """
        self.assertEqual(self.jk.jk_basic({0, 2}), 1)
        self.assertEqual(self.jk.jk_basic({1, 2}), 0)
        with self.assertRaises(JKError):
            self.jk.jk_basic({0})

    def test_residues(self):
        self.assertEqual(self.jk.jk_residue((-1, 0, -1, 0)), 1)
        self.assertEqual(self.jk.jk_residue((-1, 0, 0, -1)), 0)
        self.assertEqual(self.jk.jk_residue((-1, -1, -2, 2)), 4)
        self.assertEqual(self.jk.jk_residue(LaurentMonomial((-1, -1, -1, 1))), -2)

    def test_degenerate(self):
        """ Denominators not spanning the relation space give zero """
        self.assertEqual(self.jk.jk_residue((0, -1, -1, 0)), 0)

    def test_degree_mismatch(self):
        with self.assertRaises(DegreeError):
            self.jk.jk_residue((0, 0, 0, 0))
        with self.assertRaises(JKError):
            self.jk.jk_residue((-1, -1))

    def test_seed_independence(self):
        """ Seeded tie-breaks give the same residue """
        for seed in [1, 2, 3]:
            jk = JeffreyKirwan(self.fan, seed=seed)
            self.assertEqual(jk.jk_residue((-1, -1, -2, 2)), 4)
            self.assertEqual(jk.jk_residue((-1, -1, -1, 1)), -2)

    def test_residue_of_polynomial(self):
        numerator = Polynomial.linear([0, 1, 1, 0])
        self.assertEqual(self.jk.residue(numerator, (-1, -1, -1, 0)), 2)

    def test_max_terms(self):
        jk = JeffreyKirwan(self.fan, max_terms=0)
        with self.assertRaises(JKError):
            jk.jk_residue((-1, -1, -2, 2))


class BrionTestCase(unittest.TestCase):
    def test_cone_monomials(self):
        fan = completed_segment()
        self.assertEqual(evaluate_top_class(fan, Polynomial.monomial((0, 1, 0, 1))), 1)
        self.assertEqual(evaluate_top_class(fan, Polynomial.monomial((1, 0, 0, 1))), 0)

    def test_projective_plane(self):
        """ Every product of two distinct rays integrates to one """
        evaluator = BrionEvaluator(projective_plane())
        self.assertEqual(evaluator.evaluate(Polynomial.monomial((1, 1, 0))), 1)
        self.assertEqual(evaluator.evaluate(Polynomial.monomial((2, 0, 0))), 1)
        self.assertEqual(evaluator.evaluate(Polynomial.zero(3)), 0)

    def test_bridge(self):
        """ Evaluation agrees with the residue of the monomial over all rays """
        fan = completed_segment()
        jk = JeffreyKirwan(fan)
        for exponents in [(0, 1, 0, 1), (0, 0, 0, 2), (1, 1, 0, 0), (0, 0, 2, 0)]:
            shifted = tuple(e - 1 for e in exponents)
            self.assertEqual(
                evaluate_top_class(fan, Polynomial.monomial(exponents)), jk.jk_residue(shifted), exponents
            )

    def test_degree_mismatch(self):
        with self.assertRaises(DegreeError):
            evaluate_top_class(projective_plane(), Polynomial.monomial((1, 0, 0)))
        with self.assertRaises(DegreeError):
            evaluate_top_class(projective_plane(), Polynomial.monomial((1, 1)))

    def test_rational_values(self):
        self.assertIsInstance(evaluate_top_class(projective_plane(), Polynomial.monomial((0, 1, 1))), Fraction)


if __name__ == "__main__":
    unittest.main()
