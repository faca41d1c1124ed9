import unittest

from toric_residues.cayley import (
    NefPartition,
    build_cayley,
    ci_crosscheck,
    ci_series_coefficient,
    evaluation_compatibility,
    kill_x0_identity,
    pushforward_identity,
    star_fan,
    substitution_identity,
    wall_bijection,
)
from toric_residues.errors import CayleyError, DegreeError, MirrorError
from toric_residues.fan import Triangulation
from toric_residues.lattice import LatticePolytope
from toric_residues.polynomial import Polynomial


def segment():
    polytope = LatticePolytope.from_points([(-1,), (1,)])
    return polytope, Triangulation.create(polytope.lattice_points, [[0, 1], [1, 2]], [1, 0, 1])


def plane():
    polytope = LatticePolytope.from_points([(1, 0), (0, 1), (-1, -1)])
    return polytope, Triangulation.create(
        polytope.lattice_points, [[0, 1, 2], [1, 2, 3], [0, 1, 3]], [1, 0, 1, 1]
    )


def square():
    polytope = LatticePolytope.from_points([(-1, 0), (1, 0), (0, -1), (0, 1)])
    return polytope, Triangulation.create(
        polytope.lattice_points, [[0, 1, 2], [0, 2, 3], [1, 2, 4], [2, 3, 4]], [1, 1, 0, 1, 1]
    )


class NefPartitionTestCase(unittest.TestCase):
    def test_from_lists(self):
        partition = NefPartition.from_lists([[1, 4], [2, 3]])
        self.assertEqual(partition.parts, (frozenset({0, 3}), frozenset({1, 2})))
        self.assertEqual(partition.r, 2)
        self.assertEqual(partition.part_of(2), 1)

    def test_lift(self):
        """ The extra entries balance each part """
        partition = NefPartition.from_lists([[1, 4], [2, 3]])
        self.assertEqual(partition.part_degrees((1, 0, 0, 1)), (2, 0))
        self.assertEqual(partition.lift((1, 0, 0, 1)), (1, 0, 0, 1, -2, 0))

    def test_empty_part(self):
        with self.assertRaises(CayleyError) as context:
            NefPartition.from_lists([[1, 2], []]).validate(2)
        self.assertEqual(context.exception.check, "empty-part")

    def test_bad_partition(self):
        for parts in ([[1], [1, 2]], [[1]], [[1, 2, 3]]):
            with self.assertRaises(CayleyError) as context:
                NefPartition.from_lists(parts).validate(2)
            self.assertEqual(context.exception.check, "bad-partition")


class CayleyTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        super(CayleyTestCase, cls).setUpClass()
        cls.segment = build_cayley(*segment(), NefPartition.from_lists([[1, 2]]))
        cls.plane = build_cayley(*plane(), NefPartition.from_lists([[1, 2, 3]]))
        cls.square = build_cayley(*square(), NefPartition.from_lists([[1, 4], [2, 3]]))

    def test_star_fan(self):
        fan, zero = star_fan(*segment())
        self.assertEqual(zero, 1)
        self.assertEqual(fan.generators, ((-1,), (1,)))
        self.assertTrue(fan.is_complete())

    def test_segment(self):
        """ Rays of the part first, the extra generator last """
        cayley = self.segment
        self.assertEqual(cayley.fan.generators, ((-1, 1), (1, 1), (0, 1)))
        self.assertEqual(cayley.fan.lifting, (1, 1, 0))
        self.assertEqual(cayley.v0, (0, -1))
        self.assertEqual(cayley.extras(), Polynomial.monomial((0, 0, 1)))

    def test_plane(self):
        cayley = self.plane
        self.assertEqual(cayley.fan.generators, ((-1, -1, 1), (0, 1, 1), (1, 0, 1), (0, 0, 1)))
        self.assertEqual(cayley.v0, (0, 0, -1))

    def test_square(self):
        cayley = self.square
        self.assertEqual((cayley.n, cayley.r, cayley.dimension), (4, 2, 3))
        self.assertEqual(cayley.fan.size, 6)
        self.assertEqual(len(cayley.fan.max_cones), 4)
        self.assertEqual(cayley.fan.total_volume, 4)
        self.assertEqual(cayley.project((1, 0, 0, 1, -2, 0)), (1, 0, 0, 1))

    def test_wall_bijection(self):
        for cayley in [self.segment, self.plane, self.square]:
            self.assertTrue(wall_bijection(cayley))

    def test_not_reflexive(self):
        polytope = LatticePolytope.from_points([(0, 0), (2, 0), (0, 1)])
        triangulation = Triangulation.create(polytope.lattice_points, [[0, 1, 2], [1, 2, 3]])
        with self.assertRaises(CayleyError) as context:
            build_cayley(polytope, triangulation, NefPartition.from_lists([[1, 2, 3]]))
        self.assertEqual(context.exception.check, "not-reflexive")

    def test_invalid_partition(self):
        with self.assertRaises(CayleyError) as context:
            build_cayley(*segment(), NefPartition.from_lists([[1, 2], []]))
        self.assertEqual(context.exception.check, "empty-part")


class CompleteIntersectionTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        super(CompleteIntersectionTestCase, cls).setUpClass()
        cls.segment = build_cayley(*segment(), NefPartition.from_lists([[1, 2]]))
        cls.segment_mirror = cls.segment.mirror()
        cls.plane = build_cayley(*plane(), NefPartition.from_lists([[1, 2, 3]]))
        cls.square = build_cayley(*square(), NefPartition.from_lists([[1, 4], [2, 3]]))

    def test_segment_coefficients(self):
        x1 = Polynomial.monomial((1, 0))
        for k in range(4):
            self.assertEqual(ci_series_coefficient(self.segment, x1, (k, k)), 4 ** k)

    def test_plane_coefficients(self):
        x1x2 = Polynomial.monomial((1, 1, 0))
        self.assertEqual(ci_series_coefficient(self.plane, x1x2, (0, 0, 0)), 1)
        self.assertEqual(ci_series_coefficient(self.plane, x1x2, (1, 1, 1)), -27)

    def test_square_constant_term(self):
        x1x3 = Polynomial.monomial((1, 0, 1, 0))
        self.assertEqual(ci_series_coefficient(self.square, x1x3, (0, 0, 0, 0)), 1)

    def test_coefficient_errors(self):
        with self.assertRaises(DegreeError):
            ci_series_coefficient(self.segment, Polynomial.monomial((1, 0, 0)), (0, 0))
        with self.assertRaises(DegreeError):
            ci_series_coefficient(self.segment, Polynomial.monomial((1, 1)), (0, 0))
        with self.assertRaises(MirrorError):
            ci_series_coefficient(self.segment, Polynomial.monomial((1, 0)), (-1, -1))

    def test_crosscheck(self):
        """ Evaluation on the base fan matches the residue series on the Cayley fan """
        agreement = ci_crosscheck(self.segment_mirror, self.segment, Polynomial.monomial((1, 0)), (1, 1))
        self.assertEqual((agreement.left, agreement.right), (4, 4))

    def test_pushforward(self):
        agreement = pushforward_identity(self.segment_mirror, self.segment, (-1, 0))
        self.assertEqual((agreement.left, agreement.right), (1, 1))

    def test_kill_x0(self):
        self.assertTrue(kill_x0_identity(self.segment_mirror, self.segment, 1, (-1, -1)))
        with self.assertRaises(MirrorError):
            kill_x0_identity(self.segment_mirror, self.segment, 0, (-1, 0))

    def test_substitution(self):
        agreement = substitution_identity(self.segment_mirror, self.segment, (-1, -1), 0, 1)
        self.assertEqual((agreement.left, agreement.right), (-2, -2))

    def test_evaluation_compatibility(self):
        agreement = evaluation_compatibility(self.segment_mirror, self.segment, Polynomial.monomial((1, 0)))
        self.assertEqual((agreement.left, agreement.right), (1, 1))


if __name__ == "__main__":
    unittest.main()
