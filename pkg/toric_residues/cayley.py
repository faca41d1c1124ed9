"""Nef-partitions and the Cayley polytope

The base polytope is reflexive with a star triangulation, its nonzero lattice points in
lexicographic order are the rays v_1..v_n of the complete fan. The Cayley polytope lives
in M x Z^r with generators (v_i, e_j) for i in E_j and (0, e_j); it is handled through the
unimodular chart (x, y) -> (x, y_1, ..., y_{r-1}, y_1 + ... + y_r) so that it is a
full-dimensional polytope at height one.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import FrozenSet, Optional, Sequence, Tuple

from toric_residues.config import Settings
from toric_residues.errors import CayleyError, CoherenceError, DegreeError, MirrorError
from toric_residues.fan import (
    Fan,
    Triangulation,
    build_fan,
    find_lifting,
    validate_triangulation,
    verify_coherence,
    wall_relations,
)
from toric_residues.jk import JeffreyKirwan, evaluate_top_class
from toric_residues.lattice import LatticePolytope, is_reflexive
from toric_residues.linalg import Vector
from toric_residues.mirror import ResidueMirror
from toric_residues.morrison_plesser import Agreement, mp_evaluate
from toric_residues.polynomial import Polynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NefPartition:
    """Disjoint parts E_1..E_r covering the ray indices, 0-based"""

    parts: Tuple[FrozenSet[int], ...]

    @classmethod
    def from_lists(cls, parts, one_based=True):
        shift = 1 if one_based else 0
        return cls(tuple(frozenset(int(i) - shift for i in part) for part in parts))

    @property
    def r(self):
        return len(self.parts)

    def part_of(self, index) -> int:
        for j, part in enumerate(self.parts):
            if index in part:
                return j
        raise CayleyError(f"Ray {index} lies in no part", check="bad-partition")

    def l_values(self, count) -> Tuple[Tuple[int, ...], ...]:
        """l_j at every ray"""
        return tuple(tuple(int(i in part) for i in range(count)) for part in self.parts)

    def part_degrees(self, beta) -> Tuple[int, ...]:
        return tuple(sum(beta[i] for i in part) for part in self.parts)

    def lift(self, beta) -> Vector:
        """beta_{n+j} = -sum_{E_j} beta_i"""
        return tuple(beta) + tuple(-d for d in self.part_degrees(beta))

    def validate(self, count):
        for j, part in enumerate(self.parts):
            if not part:
                raise CayleyError(f"Part {j + 1} of the nef-partition is empty", check="empty-part")
        covered = [i for part in self.parts for i in part]
        if sorted(covered) != list(range(count)):
            raise CayleyError(
                f"Parts {[sorted(p) for p in self.parts]} must partition the rays 0..{count - 1}",
                check="bad-partition",
            )


@dataclass(frozen=True)
class CayleyData:
    base_polytope: LatticePolytope
    base_triangulation: Triangulation
    base_fan: Fan
    partition: NefPartition
    native_generators: Tuple[Vector, ...]
    polytope: LatticePolytope
    triangulation: Triangulation
    fan: Fan
    v0: Vector

    @property
    def n(self):
        return self.base_fan.size

    @property
    def r(self):
        return self.partition.r

    @property
    def dimension(self):
        return self.polytope.dimension

    def lift(self, beta_bar) -> Vector:
        return self.partition.lift(beta_bar)

    def project(self, beta) -> Vector:
        return tuple(beta[:self.n])

    def simplex_grading(self, simplex) -> Tuple[int, ...]:
        """Number of base rays of each part among the vertices of a Cayley simplex"""
        return tuple(len(part & simplex) for part in self.partition.parts)

    def extras(self) -> Polynomial:
        """x_{n+1} ... x_{n+r}"""
        size = self.n + self.r
        return Polynomial.monomial([int(i >= self.n) for i in range(size)])

    @cached_property
    def base_jk(self) -> JeffreyKirwan:
        return JeffreyKirwan(self.base_fan)

    def mirror(self, settings: Optional[Settings] = None, seed=None) -> ResidueMirror:
        return ResidueMirror(self.fan, v0=self.v0, settings=settings, seed=seed)


def _chart(native: Vector, r: int) -> Vector:
    head, tail = native[:len(native) - r], native[len(native) - r:]
    return tuple(head) + tuple(tail[:r - 1]) + (sum(tail),)


def star_fan(polytope: LatticePolytope, triangulation: Triangulation) -> Tuple[Fan, int]:
    """The complete fan over a star triangulation and the index of the origin"""
    validate_triangulation(polytope, triangulation)
    origin = tuple(0 for _ in range(polytope.dimension))
    if origin not in triangulation.points:
        raise CayleyError("The origin is not a lattice point of the polytope", check="not-star")
    zero = triangulation.points.index(origin)
    for k, simplex in enumerate(triangulation.simplices):
        if zero not in simplex:
            raise CayleyError(f"Simplex {k} {sorted(simplex)} does not contain the origin", check="not-star")

    def renumber(i):
        return i - (i > zero)

    generators = tuple(p for i, p in enumerate(triangulation.points) if i != zero)
    cones = tuple(frozenset(renumber(i) for i in simplex - {zero}) for simplex in triangulation.simplices)
    lifting = None
    if triangulation.lifting is not None:
        lifting = tuple(h - triangulation.lifting[zero] for i, h in enumerate(triangulation.lifting) if i != zero)
    fan = Fan(generators=generators, max_cones=cones, lifting=lifting)
    fan.check_simplicial()
    if not fan.is_complete():
        raise CayleyError("The star triangulation does not give a complete fan", check="not-star")
    return fan, zero


def build_cayley(polytope: LatticePolytope, triangulation: Triangulation, partition: NefPartition) -> CayleyData:
    if not is_reflexive(polytope):
        raise CayleyError(f"Polytope with vertices {polytope.vertices} is not reflexive", check="not-reflexive")
    fan_bar, zero = star_fan(polytope, triangulation)
    n, r = fan_bar.size, partition.r
    partition.validate(n)

    for beta in wall_relations(fan_bar).wall_relations:
        degrees = partition.part_degrees(beta)
        if any(d < 0 for d in degrees):
            raise CayleyError(f"Wall relation {beta} has negative part degrees {degrees}", check="not-nef")

    def unit(j):
        return tuple(int(k == j) for k in range(r))

    native = tuple(v + unit(partition.part_of(i)) for i, v in enumerate(fan_bar.generators))
    native += tuple(tuple(0 for _ in range(polytope.dimension)) + unit(j) for j in range(r))
    points = tuple(_chart(g, r)[:-1] for g in native)

    cayley_polytope = LatticePolytope.from_points(points)
    if sorted(cayley_polytope.lattice_points) != sorted(points):
        raise CayleyError(
            "The Cayley polytope has lattice points besides the origin and the rays of each part",
            check="bad-partition",
        )

    extras = frozenset(range(n, n + r))
    simplices = tuple(
        frozenset(i - (i > zero) for i in simplex - {zero}) | extras for simplex in triangulation.simplices
    )
    cayley_triangulation = Triangulation.create(points, simplices)
    if triangulation.lifting is not None:
        h = triangulation.lifting
        lifting = tuple(x for i, x in enumerate(h) if i != zero) + (h[zero],) * r
        if verify_coherence(cayley_polytope, cayley_triangulation, lifting):
            cayley_triangulation = cayley_triangulation.with_lifting(lifting)
    if cayley_triangulation.lifting is None:
        lifting = find_lifting(cayley_polytope, cayley_triangulation)
        if lifting is None:
            raise CoherenceError("The Cayley triangulation admits no lifting certificate", check="coherence")
        cayley_triangulation = cayley_triangulation.with_lifting(lifting)

    fan = build_fan(cayley_polytope, cayley_triangulation)
    v0 = _chart(tuple(0 for _ in range(polytope.dimension)) + (-1,) * r, r)
    logger.info(f"Cayley polytope of dimension {cayley_polytope.dimension} with {r} parts and {fan.size} rays")
    return CayleyData(
        base_polytope=polytope,
        base_triangulation=triangulation,
        base_fan=fan_bar,
        partition=partition,
        native_generators=native,
        polytope=cayley_polytope,
        triangulation=cayley_triangulation,
        fan=fan,
        v0=v0,
    )


def ci_series_coefficient(cayley: CayleyData, polynomial: Polynomial, beta_bar: Sequence[int]) -> Fraction:
    """Complete intersection coefficient of a^beta by evaluation on the split base fan"""
    beta_bar = tuple(beta_bar)
    if polynomial.variables != cayley.n:
        raise DegreeError(f"Polynomial in {polynomial.variables} variables, expected {cayley.n}")
    if not polynomial.is_homogeneous(cayley.base_fan.rank):
        raise DegreeError(f"Polynomial of degrees {polynomial.degrees}, expected {cayley.base_fan.rank}")
    if any(d < 0 for d in cayley.partition.part_degrees(beta_bar)):
        raise MirrorError(f"Class {beta_bar} lifts with a positive coefficient on the extra rays")
    return mp_evaluate(cayley.base_fan, polynomial, beta_bar, cayley.partition.parts)


def ci_crosscheck(mirror: ResidueMirror, cayley: CayleyData, polynomial: Polynomial, beta_bar) -> Agreement:
    """The coefficient of beta against the residue series of x_{n+1}...x_{n+r} P on the Cayley fan"""
    left = ci_series_coefficient(cayley, polynomial, beta_bar)
    lifted = polynomial.pad(after=cayley.r) * cayley.extras()
    right = mirror.series_coefficient(lifted, cayley.lift(beta_bar))
    if left != right:
        logger.error(f"Coefficient at {tuple(beta_bar)}: {left} by evaluation, {right} on the Cayley fan")
    return Agreement(left, right)


def wall_bijection(cayley: CayleyData) -> bool:
    """Projection maps the wall relations of the Cayley fan onto those of the base fan"""
    cayley_walls = wall_relations(cayley.fan).wall_relations
    base_walls = set(wall_relations(cayley.base_fan).wall_relations)
    projected = {cayley.project(w) for w in cayley_walls}
    lifts_back = all(cayley.lift(cayley.project(w)) == w for w in cayley_walls)
    return lifts_back and len(projected) == len(cayley_walls) and projected == base_walls


def _hat(cayley, exponents, x0=-1):
    return (x0,) + tuple(exponents) + (0,) * cayley.r


def pushforward_identity(mirror: ResidueMirror, cayley: CayleyData, exponents: Sequence[int]) -> Agreement:
    """<x^m> on the base fan equals <x^m / x_0> on the completed Cayley fan"""
    return Agreement(
        cayley.base_jk.jk_residue(tuple(exponents)),
        mirror.jk.jk_residue(_hat(cayley, exponents)),
    )


def kill_x0_identity(mirror: ResidueMirror, cayley: CayleyData, power: int, exponents: Sequence[int]) -> bool:
    """<x_0^l x^m / x_0> vanishes on the completed Cayley fan for l > 0"""
    if power <= 0:
        raise MirrorError(f"Power {power} of x_0 must be positive")
    return mirror.jk.jk_residue(_hat(cayley, exponents, power - 1)) == 0


def substitution_identity(
    mirror: ResidueMirror, cayley: CayleyData, exponents: Sequence[int], part: int, power: int
) -> Agreement:
    """<x^m x_{n+j}^k / x_0> on the Cayley fan equals <x^m (-sum_{E_j} x_i)^k> on the base fan"""
    full = list(_hat(cayley, exponents))
    full[1 + cayley.n + part] += power
    form = Polynomial.linear([-int(i in cayley.partition.parts[part]) for i in range(cayley.n)])
    return Agreement(
        mirror.jk.jk_residue(tuple(full)),
        cayley.base_jk.residue(form ** power, exponents),
    )


def evaluation_compatibility(mirror: ResidueMirror, cayley: CayleyData, polynomial: Polynomial) -> Agreement:
    """<P> on the base fan equals <chi_{n+1}...chi_{n+r} P> on the completed Cayley fan"""
    lifted = (polynomial.pad(after=cayley.r) * cayley.extras()).pad(before=1)
    return Agreement(
        evaluate_top_class(cayley.base_fan, polynomial),
        evaluate_top_class(mirror.completed.fan, lifted),
    )
