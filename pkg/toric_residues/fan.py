import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from toric_residues.errors import (
    FanError,
    InvariantViolation,
    LatticeError,
    TriangulationError,
)
from toric_residues.lattice import (
    LatticePolytope,
    PointedCone,
    cone_facets,
    cone_volume,
    columns_kernel,
)
from toric_residues.linalg import (
    Vector,
    clear_denominators,
    determinant,
    dot,
    inverse,
    mat_vec,
    primitive,
    solve,
    transpose,
)

logger = logging.getLogger(__name__)

LIFTING_SLACKS = (1, 16, 256)

Cone = FrozenSet[int]


@dataclass(frozen=True)
class Triangulation:
    points: Tuple[Vector, ...]
    simplices: Tuple[Cone, ...]
    lifting: Optional[Tuple[int, ...]] = None

    @classmethod
    def create(cls, points, simplices, lifting=None):
        return cls(
            points=tuple(tuple(int(x) for x in p) for p in points),
            simplices=tuple(frozenset(int(i) for i in s) for s in simplices),
            lifting=tuple(int(h) for h in lifting) if lifting is not None else None,
        )

    def with_lifting(self, lifting):
        return Triangulation(self.points, self.simplices, tuple(int(h) for h in lifting))

    @property
    def dimension(self):
        return len(self.points[0])

    def homogenized(self, index) -> Vector:
        return self.points[index] + (1,)


@dataclass(frozen=True)
class RelationLattice:
    kernel_basis: Tuple[Vector, ...]

    @property
    def rank(self):
        return len(self.kernel_basis)

    @cached_property
    def _chart(self):
        if not self.kernel_basis:
            return (), ()
        columns = len(self.kernel_basis[0])
        for subset in itertools.combinations(range(columns), self.rank):
            minor = [[row[j] for j in subset] for row in self.kernel_basis]
            minor_inverse = inverse(minor)
            if minor_inverse is not None:
                return subset, minor_inverse
        raise InvariantViolation(f"Kernel basis {self.kernel_basis} has no invertible minor")

    def coordinates(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Kernel-basis coordinates of a lattice vector, FanError if it is not in the lattice"""
        vector = tuple(vector)
        subset, minor_inverse = self._chart
        restricted = [vector[j] for j in subset]
        coords = tuple(
            sum((restricted[k] * minor_inverse[k][i] for k in range(self.rank)), Fraction(0))
            for i in range(self.rank)
        )
        if any(c.denominator != 1 for c in coords) or self.element(coords) != vector:
            raise FanError(f"{vector} is not an element of the relation lattice {self.kernel_basis}")
        return tuple(int(c) for c in coords)

    def element(self, coordinates: Sequence[int]) -> Vector:
        if not self.kernel_basis:
            return ()
        return tuple(
            int(sum(c * row[j] for c, row in zip(coordinates, self.kernel_basis)))
            for j in range(len(self.kernel_basis[0]))
        )

    def contains(self, vector) -> bool:
        try:
            self.coordinates(vector)
        except FanError:
            return False
        return True


@dataclass(frozen=True)
class Fan:
    """Simplicial fan given by primitive generators and maximal cones as index sets"""

    generators: Tuple[Vector, ...]
    max_cones: Tuple[Cone, ...]
    boundary_faces: Tuple[Cone, ...] = ()
    lifting: Optional[Tuple[int, ...]] = None

    @property
    def rank(self):
        return len(self.generators[0])

    @property
    def size(self):
        return len(self.generators)

    @cached_property
    def cone_set(self):
        return frozenset(self.max_cones)

    def vectors(self, cone) -> List[Vector]:
        return [self.generators[i] for i in sorted(cone)]

    def volume(self, cone) -> int:
        return cone_volume(self.vectors(cone))

    @cached_property
    def total_volume(self) -> int:
        return sum(self.volume(c) for c in self.max_cones)

    def is_max_cone(self, indices) -> bool:
        return frozenset(indices) in self.cone_set

    def is_cone(self, indices) -> bool:
        """True iff the generators lie in a common maximal cone"""
        indices = frozenset(indices)
        return any(indices <= c for c in self.max_cones)

    @cached_property
    def walls(self) -> Dict[Cone, Tuple[Cone, ...]]:
        faces = {}
        for cone in self.max_cones:
            for i in sorted(cone):
                faces.setdefault(cone - {i}, []).append(cone)
        return {face: tuple(cones) for face, cones in faces.items()}

    def opposite_sides(self, face, first, second) -> bool:
        ordered = self.vectors(face)
        (a,) = first - face
        (b,) = second - face
        left = determinant(ordered + [self.generators[a]])
        right = determinant(ordered + [self.generators[b]])
        return left * right < 0

    @cached_property
    def relation_lattice(self) -> RelationLattice:
        return RelationLattice(columns_kernel(self.generators))

    def check_simplicial(self):
        for cone in self.max_cones:
            if len(cone) != self.rank or self.volume(cone) == 0:
                raise FanError(f"Cone {sorted(cone)} is not simplicial of full rank", check="fan-simplicial")

    def incomplete_walls(self) -> List[Cone]:
        """Walls not shared by exactly two maximal cones lying on opposite sides"""
        bad = []
        for face, cones in self.walls.items():
            if len(cones) != 2 or not self.opposite_sides(face, *cones):
                bad.append(face)
        return bad

    def is_complete(self) -> bool:
        return not self.incomplete_walls()


@dataclass(frozen=True)
class CompletedFan:
    """Completion obtained by adding the ray v0, generator index 0 in ``fan``"""

    base: Fan
    v0: Vector
    extra_cones: Tuple[Cone, ...]
    fan: Fan

    @property
    def size(self):
        return self.fan.size


@dataclass(frozen=True)
class MoriData:
    wall_relations: Tuple[Vector, ...]
    ample: Optional[Tuple[int, ...]]
    lattice: RelationLattice

    def degree(self, beta, ample=None) -> int:
        return dot(ample or self.ample, beta)


def _boundary_face(polytope_cone: PointedCone, vectors) -> bool:
    return any(all(dot(n, v) == 0 for v in vectors) for n in polytope_cone.facets)


def _fail(check, message, pair=None):
    witnesses = {"pair": sorted(pair)} if pair is not None else None
    logger.error(message)
    raise TriangulationError(message, check=check, witnesses=witnesses)


def validate_triangulation(polytope: LatticePolytope, triangulation: Triangulation):
    """Raise a TriangulationError naming the first failed check"""
    points = triangulation.points
    if sorted(points) != sorted(polytope.lattice_points) or len(set(points)) != len(points):
        _fail("triangulation-points", "Triangulation points must be exactly the lattice points of the polytope")

    d = polytope.dimension
    cone = polytope.cone()
    simplices = triangulation.simplices
    for k, simplex in enumerate(simplices):
        if len(simplex) != d + 1 or any(not 0 <= i < len(points) for i in simplex):
            _fail("triangulation-simplex", f"Simplex {k} {sorted(simplex)} needs {d + 1} valid point indices")
        if cone_volume([triangulation.homogenized(i) for i in sorted(simplex)]) == 0:
            _fail("triangulation-degenerate", f"Simplex {k} {sorted(simplex)} is not full-dimensional")

    unused = set(range(len(points))) - set().union(*simplices)
    if unused:
        _fail("triangulation-unused-point", f"Lattice points {sorted(unused)} are not vertices of the triangulation")

    faces: Dict[Cone, List[int]] = {}
    for k, simplex in enumerate(simplices):
        for i in sorted(simplex):
            faces.setdefault(simplex - {i}, []).append(k)

    probe = Fan(tuple(triangulation.homogenized(i) for i in range(len(points))), simplices)
    gaps = []
    for face, owners in faces.items():
        vectors = [triangulation.homogenized(i) for i in face]
        if _boundary_face(cone, vectors):
            if len(owners) > 1:
                _fail("triangulation-overlap", f"Simplices {owners[:2]} overlap along a boundary face", owners[:2])
        elif len(owners) == 1:
            gaps.append((face, owners[0]))
        elif len(owners) > 2:
            _fail("triangulation-overlap", f"Simplices {owners[:2]} overlap along face {sorted(face)}", owners[:2])
        elif not probe.opposite_sides(face, simplices[owners[0]], simplices[owners[1]]):
            _fail("triangulation-overlap", f"Simplices {owners} lie on the same side of face {sorted(face)}", owners)

    # the barycenter of the first simplex must not be covered twice
    first = [triangulation.homogenized(i) for i in sorted(simplices[0])]
    barycenter = tuple(sum(v[k] for v in first) for k in range(d + 1))
    for k, simplex in enumerate(simplices[1:], start=1):
        weights = solve(transpose([triangulation.homogenized(i) for i in sorted(simplex)]), barycenter)
        if all(w >= 0 for w in weights):
            _fail("triangulation-overlap", f"Simplices [0, {k}] overlap", (0, k))

    for face, owner in gaps:
        _fail("triangulation-gap", f"Interior face {sorted(face)} of simplex {owner} is not shared")


def build_fan(polytope: LatticePolytope, triangulation: Triangulation) -> Fan:
    validate_triangulation(polytope, triangulation)
    generators = tuple(triangulation.homogenized(i) for i in range(len(triangulation.points)))
    faces: Dict[Cone, int] = {}
    for simplex in triangulation.simplices:
        for i in simplex:
            faces[simplex - {i}] = faces.get(simplex - {i}, 0) + 1
    boundary = tuple(face for face, count in faces.items() if count == 1)
    fan = Fan(
        generators=generators,
        max_cones=triangulation.simplices,
        boundary_faces=boundary,
        lifting=triangulation.lifting,
    )
    logger.info(f"Built fan with {fan.size} rays, {len(fan.max_cones)} maximal cones and volume {fan.total_volume}")
    return fan


def _interpolant(triangulation, simplex, lifting):
    vertices = sorted(simplex)
    return solve([triangulation.homogenized(i) for i in vertices], [lifting[i] for i in vertices])


def verify_coherence(polytope: LatticePolytope, triangulation: Triangulation, lifting) -> bool:
    """Every simplex interpolant lies strictly below the lifting at all other points"""
    if lifting is None or len(lifting) != len(triangulation.points):
        return False
    for simplex in triangulation.simplices:
        affine = _interpolant(triangulation, simplex, lifting)
        for q in range(len(triangulation.points)):
            if q in simplex:
                continue
            if dot(affine, triangulation.homogenized(q)) >= lifting[q]:
                logger.debug(f"Lifting {tuple(lifting)} fails at point {q} for simplex {sorted(simplex)}")
                return False
    return True


def find_lifting(polytope: LatticePolytope, triangulation: Triangulation) -> Optional[Tuple[int, ...]]:
    """Search an integral coherence certificate, None if the triangulation is not coherent"""
    count = len(triangulation.points)
    rows = []
    for simplex in triangulation.simplices:
        vertices = sorted(simplex)
        columns = transpose([triangulation.homogenized(i) for i in vertices])
        for q in range(count):
            if q in simplex:
                continue
            weights = solve(columns, triangulation.homogenized(q))
            row = [0.0] * count
            for i, w in zip(vertices, weights):
                row[i] += float(w)
            row[q] -= 1.0
            rows.append(row)

    if not rows:
        return tuple(0 for _ in range(count))

    # retried with a larger slack when rounding fails
    for slack in LIFTING_SLACKS:
        result = linprog(
            c=np.ones(count),
            A_ub=np.array(rows),
            b_ub=np.full(len(rows), -float(slack)),
            bounds=[(0, None)] * count,
            method="highs",
        )
        if result.status == 2:
            logger.info(f"No lifting found, the triangulation is not coherent: {result.message}")
            return None
        if not result.success:
            logger.warning(f"Lifting search at slack {slack} stopped: {result.message}")
            continue

        candidates = [
            tuple(int(round(x)) for x in result.x),
            clear_denominators([Fraction(x).limit_denominator(10 ** 6) for x in result.x]),
        ]
        for candidate in candidates:
            if verify_coherence(polytope, triangulation, candidate):
                logger.info(f"Found lifting {candidate}")
                return candidate
        logger.warning(f"Rounding the solution {tuple(result.x)} at slack {slack} did not certify coherence")

    logger.error(f"Feasible lifting could not be rounded to a certificate for slacks {LIFTING_SLACKS}")
    return None


def default_completion(fan: Fan, cone: PointedCone) -> Vector:
    """Negative height vector when its negative is interior, else minus the sum of the rays"""
    height = tuple(0 for _ in range(fan.rank - 1)) + (-1,)
    if cone.is_interior(tuple(-x for x in height)):
        return height
    total = primitive([sum(g[k] for g in fan.generators) for k in range(fan.rank)])
    return tuple(-x for x in total)


def alternative_completions(fan: Fan, v0: Vector):
    """Further valid completion vectors different from ``v0``"""
    total = [sum(g[k] for g in fan.generators) for k in range(fan.rank)]
    seen = {tuple(v0)}
    for g in fan.generators:
        candidate = tuple(-x for x in primitive([t + x for t, x in zip(total, g)]))
        if candidate not in seen:
            seen.add(candidate)
            yield candidate


def complete(fan: Fan, v0: Optional[Sequence[int]] = None) -> CompletedFan:
    cone = PointedCone.from_generators(fan.generators)
    v0 = tuple(int(x) for x in v0) if v0 is not None else default_completion(fan, cone)
    if len(v0) != fan.rank:
        raise FanError(f"Completion vector {v0} must have length {fan.rank}", check="completion")
    if primitive(v0) != v0:
        raise FanError(f"Completion vector {v0} is not primitive", check="completion")
    if not cone.is_interior(tuple(-x for x in v0)):
        raise FanError(f"Completion vector {v0}: its negative is not interior to the cone", check="completion")

    shifted = tuple(frozenset(i + 1 for i in c) for c in fan.max_cones)
    extra = tuple(frozenset({0} | {i + 1 for i in face}) for face in fan.boundary_faces)
    completed = Fan(generators=(v0,) + fan.generators, max_cones=shifted + extra)

    completed.check_simplicial()
    bad = completed.incomplete_walls()
    if bad:
        raise InvariantViolation(f"Completion by {v0} is not complete at walls {[sorted(w) for w in bad]}")

    logger.info(f"Completed fan by v0={v0} with {len(extra)} extra cones")
    return CompletedFan(base=fan, v0=v0, extra_cones=extra, fan=completed)


def wall_relations(fan: Fan) -> MoriData:
    """Primitive relation of every interior wall, positive on the two opposite rays"""
    relations = []
    for face, cones in fan.walls.items():
        if len(cones) == 1:
            continue
        if len(cones) != 2:
            raise FanError(f"Wall {sorted(face)} lies in {len(cones)} maximal cones")
        support = sorted(cones[0] | cones[1])
        kernel = columns_kernel([fan.generators[i] for i in support])
        if len(kernel) != 1:
            raise FanError(f"Wall {sorted(face)} is not simplicial", check="fan-simplicial")
        (opposite,) = cones[0] - face
        relation = kernel[0]
        if relation[support.index(opposite)] < 0:
            relation = tuple(-x for x in relation)
        beta = [0] * fan.size
        for i, value in zip(support, relation):
            beta[i] = value
        beta = tuple(beta)
        if beta not in relations:
            relations.append(beta)
    return MoriData(wall_relations=tuple(sorted(relations)), ample=fan.lifting, lattice=fan.relation_lattice)


def enumerate_effective(mori: MoriData, bound: int, ample: Optional[Sequence[int]] = None) -> List[Vector]:
    """Lattice points of the Mori cone of L-degree at most ``bound``, ordered by (degree, lex)"""
    ample = tuple(ample) if ample is not None else mori.ample
    if ample is None:
        raise FanError("Effective classes need an ample function", check="not-quasi-projective")
    lattice = mori.lattice
    zero = tuple(0 for _ in ample)
    for wall in mori.wall_relations:
        if dot(ample, wall) <= 0:
            raise FanError(f"Ample function {ample} is not positive on wall relation {wall}", check="not-quasi-projective")
    if bound < 0:
        return []
    if lattice.rank == 0 or not mori.wall_relations:
        return [zero]

    walls = [lattice.coordinates(w) for w in mori.wall_relations]
    try:
        normals = cone_facets(walls)
    except LatticeError as e:
        raise FanError(f"Mori cone is degenerate: {e}")

    weights = [dot(ample, row) for row in lattice.kernel_basis]
    corners = [tuple(Fraction(0) for _ in weights)]
    for w in walls:
        scale = Fraction(bound, dot(weights, w))
        corners.append(tuple(scale * x for x in w))
    ranges = [
        range(math.floor(min(c[k] for c in corners)), math.ceil(max(c[k] for c in corners)) + 1)
        for k in range(lattice.rank)
    ]

    found = []
    for coords in itertools.product(*ranges):
        degree = dot(weights, coords)
        if degree <= bound and all(dot(n, coords) >= 0 for n in normals):
            found.append((degree, lattice.element(coords)))
    found.sort()
    logger.info(f"Enumerated {len(found)} effective classes up to degree {bound}")
    return [beta for _, beta in found]


def barycentric(vectors: Sequence[Vector], point: Sequence[int]) -> Tuple[Fraction, ...]:
    """Coordinates of ``point`` in the basis ``vectors``"""
    inv = inverse(transpose(vectors))
    if inv is None:
        raise FanError(f"Vectors {vectors} are dependent")
    return mat_vec(inv, point)
