import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple

from toric_residues.errors import LatticeError
from toric_residues.linalg import Vector, determinant, dot, integer_kernel, rank

logger = logging.getLogger(__name__)

MAX_FACET_RANK = 6


def integer_kernel_basis(matrix: Sequence[Sequence[int]], columns: int = None) -> Tuple[Vector, ...]:
    """Rows form a saturated lattice basis of the integer kernel of ``matrix``"""
    return integer_kernel([tuple(row) for row in matrix], columns)


def columns_kernel(vectors: Sequence[Sequence[int]]) -> Tuple[Vector, ...]:
    """Integer relations among ``vectors``, i.e. the kernel of the map e_i -> vectors[i]"""
    if not vectors:
        return ()
    rows = [tuple(v[k] for v in vectors) for k in range(len(vectors[0]))]
    return integer_kernel_basis(rows, len(vectors))


def cone_volume(generators: Sequence[Sequence[int]]) -> int:
    """Lattice volume |det| of a square configuration, 0 when dependent"""
    generators = [tuple(g) for g in generators]
    if any(len(g) != len(generators) for g in generators):
        raise LatticeError(
            f"Cone volume needs k vectors in a rank-k lattice, got {len(generators)} vectors "
            f"of length {[len(g) for g in generators]}"
        )
    return abs(int(determinant(generators)))


def cone_facets(generators: Sequence[Sequence[int]]) -> Tuple[Vector, ...]:
    """Primitive inward facet normals of the cone positively spanned by ``generators``

    The cone must be full-dimensional and pointed. Candidates are the kernels of all
    rank-deficient-by-one subsets, kept when every generator pairs with the same sign.
    """
    generators = sorted(set(tuple(g) for g in generators))
    if not generators:
        raise LatticeError("Cone without generators")
    ambient = len(generators[0])
    if ambient > MAX_FACET_RANK:
        raise LatticeError(f"Facet enumeration is limited to rank {MAX_FACET_RANK}, got {ambient}")
    if rank(generators) != ambient:
        raise LatticeError(f"Cone generated by {generators} is not full-dimensional")

    if ambient == 1:
        signs = {g[0] > 0 for g in generators if g[0] != 0}
        if len(signs) != 1:
            raise LatticeError(f"Cone generated by {generators} contains a line")
        return ((1,),) if signs == {True} else ((-1,),)

    normals = []
    for subset in itertools.combinations(generators, ambient - 1):
        kernel = columns_kernel_rows(subset)
        if len(kernel) != 1:
            continue
        normal = kernel[0]
        pairings = [dot(normal, g) for g in generators]
        if all(p >= 0 for p in pairings):
            candidate = normal
        elif all(p <= 0 for p in pairings):
            candidate = tuple(-x for x in normal)
        else:
            continue
        if candidate not in normals:
            normals.append(candidate)

    for g in generators:
        if all(dot(n, g) == 0 for n in normals):
            raise LatticeError(f"Cone generated by {generators} contains a line")
    return tuple(sorted(normals))


def columns_kernel_rows(rows: Sequence[Sequence[int]]) -> Tuple[Vector, ...]:
    """Integer vectors orthogonal to all given rows"""
    return integer_kernel_basis(rows, len(rows[0]))


def facet_inequalities(points: Sequence[Sequence[int]], cone: bool = False):
    """Irredundant facet system as (normal, offset) pairs meaning <normal, x> + offset >= 0

    With ``cone`` the points are cone generators and all offsets are 0, otherwise they are
    the points of a full-dimensional polytope and the normals are primitive.
    """
    if cone:
        return tuple((normal, 0) for normal in cone_facets(points))
    lifted = cone_facets([tuple(p) + (1,) for p in points])
    return tuple((normal[:-1], normal[-1]) for normal in lifted)


@dataclass(frozen=True)
class PointedCone:
    generators: Tuple[Vector, ...]
    facets: Tuple[Vector, ...]

    @classmethod
    def from_generators(cls, generators):
        generators = tuple(tuple(g) for g in generators)
        return cls(generators=generators, facets=cone_facets(generators))

    @property
    def rank(self):
        return len(self.generators[0])

    def contains(self, point) -> bool:
        return all(dot(n, point) >= 0 for n in self.facets)

    def is_interior(self, point) -> bool:
        return is_interior(point, self)


def is_interior(point: Sequence[int], cone: PointedCone) -> bool:
    """True iff every facet pairing is strictly positive"""
    if len(point) != cone.rank:
        raise LatticeError(f"Point {tuple(point)} does not live in the rank-{cone.rank} ambient lattice")
    return all(dot(n, point) > 0 for n in cone.facets)


@dataclass(frozen=True)
class LatticePolytope:
    vertices: Tuple[Vector, ...]
    facets: Tuple[Tuple[Vector, int], ...]

    @classmethod
    def from_points(cls, points):
        points = sorted(set(tuple(int(x) for x in p) for p in points))
        if not points:
            raise LatticeError("Polytope without points")
        facets = facet_inequalities(points)
        dimension = len(points[0])
        vertices = tuple(
            p for p in points
            if rank([n for n, c in facets if dot(n, p) + c == 0] or [(0,) * dimension]) == dimension
        )
        logger.debug(f"Polytope with {len(vertices)} vertices and {len(facets)} facets")
        return cls(vertices=vertices, facets=facets)

    @property
    def dimension(self):
        return len(self.vertices[0])

    def contains(self, point) -> bool:
        return all(dot(n, point) + c >= 0 for n, c in self.facets)

    @cached_property
    def lattice_points(self) -> Tuple[Vector, ...]:
        return lattice_points(self)

    def cone(self) -> PointedCone:
        """The cone over the polytope placed at height 1"""
        return PointedCone(
            generators=tuple(v + (1,) for v in self.vertices),
            facets=tuple(n + (c,) for n, c in self.facets),
        )


def lattice_points(polytope: LatticePolytope) -> Tuple[Vector, ...]:
    """All lattice points of the polytope in lexicographic order"""
    lower = [min(v[k] for v in polytope.vertices) for k in range(polytope.dimension)]
    upper = [max(v[k] for v in polytope.vertices) for k in range(polytope.dimension)]
    box = itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lower, upper)))
    return tuple(p for p in box if polytope.contains(p))


def is_reflexive(polytope: LatticePolytope) -> bool:
    """Origin interior and every facet of the form <w, x> >= -1"""
    return all(c == 1 for _, c in polytope.facets)
