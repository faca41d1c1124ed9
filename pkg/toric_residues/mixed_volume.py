"""Mixed residues and mixed volumes of the parts of a nef-partition"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from toric_residues.cayley import CayleyData
from toric_residues.errors import InvariantViolation, MirrorError
from toric_residues.lattice import cone_volume
from toric_residues.linalg import Vector, determinant, rank, solve
from toric_residues.mirror import HessianTerm, ResidueMirror, hessian
from toric_residues.polynomial import Polynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GradedComponent:
    k: Tuple[int, ...]
    terms: Tuple[HessianTerm, ...]
    variables: int

    def polynomial(self) -> Polynomial:
        return Polynomial(self.variables, {t.a_exponent: t.coefficient for t in self.terms})


@dataclass
class MixedVolumeTable:
    entries: Dict[Tuple[int, ...], Fraction]

    def volume_polynomial(self, c: Sequence) -> Fraction:
        total = Fraction(0)
        for k_bar, value in self.entries.items():
            term = value
            for x, e in zip(c, k_bar):
                term *= Fraction(x) ** e
            total += term
        return total


@dataclass
class MixedVolumeRow:
    k: Tuple[int, ...]
    residue: Fraction
    volume: Fraction

    @property
    def passed(self):
        return self.residue == self.volume


@dataclass
class MixedVolumeReport:
    rows: List[MixedVolumeRow] = field(default_factory=list)

    @property
    def passed(self):
        return all(row.passed for row in self.rows)


def term_grading(cayley: CayleyData, support) -> Tuple[int, ...]:
    """Z^r-degree of a product of generators: rays of E_j plus the extra ray n + j"""
    support = frozenset(support)
    base = cayley.simplex_grading(support)
    return tuple(b + int(cayley.n + j in support) for j, b in enumerate(base))


def admissible_degrees(cayley: CayleyData) -> List[Tuple[int, ...]]:
    total = cayley.dimension + 1
    return [
        k for k in itertools.product(range(1, total + 1), repeat=cayley.r)
        if sum(k) == total
    ]


def graded_hessian_component(cayley: CayleyData, k: Sequence[int]) -> GradedComponent:
    k = tuple(int(x) for x in k)
    if len(k) != cayley.r or any(x <= 0 for x in k) or sum(k) != cayley.dimension + 1:
        raise MirrorError(f"Degree {k} needs {cayley.r} positive entries summing to {cayley.dimension + 1}")
    expansion = hessian(cayley.fan.generators)
    terms = tuple(t for t in expansion.terms if term_grading(cayley, t.support) == k)
    return GradedComponent(k=k, terms=terms, variables=expansion.variables)


def mixed_residue(mirror: ResidueMirror, cayley: CayleyData, k: Sequence[int], bound: int) -> Fraction:
    """Constant coefficient of the residue series of the k-component of the Hessian"""
    component = graded_hessian_component(cayley, k)
    if not component.terms:
        return Fraction(0)
    table = mirror.rm_series(component.polynomial(), bound)
    zero = tuple(0 for _ in range(mirror.size))
    for beta in table.support():
        if beta != zero:
            logger.error(f"Mixed residue of degree {component.k} has coefficient {table.coefficient(beta)} at {beta}")
            raise InvariantViolation(f"Mixed residue series of degree {component.k} is not constant")
    return table.coefficient(zero)


def scaled_simplex_volume(cayley: CayleyData, simplex, c: Sequence) -> Fraction:
    """Volume of a Cayley simplex after scaling the rays of E_j by c_j"""
    rows = []
    dimension = cayley.base_fan.rank
    for i in sorted(simplex):
        native = cayley.native_generators[i]
        if i < cayley.n:
            scale = Fraction(c[cayley.partition.part_of(i)])
            rows.append(tuple(scale * x for x in native[:dimension]) + tuple(native[dimension:]))
        else:
            rows.append(native)
    return abs(determinant(rows))


def scaled_volume(cayley: CayleyData, c: Sequence) -> Fraction:
    return sum((scaled_simplex_volume(cayley, s, c) for s in cayley.triangulation.simplices), Fraction(0))


def mixed_volume_by_grading(cayley: CayleyData, k_bar: Sequence[int]) -> Fraction:
    k_bar = tuple(k_bar)
    return Fraction(sum(
        cone_volume([cayley.native_generators[i] for i in sorted(s)])
        for s in cayley.triangulation.simplices
        if cayley.simplex_grading(s) == k_bar
    ))


def interpolate_volume_polynomial(cayley: CayleyData) -> Dict[Tuple[int, ...], Fraction]:
    """Coefficients of c -> Vol of the scaled Cayley polytope from exact values on a grid"""
    degree = cayley.base_fan.rank
    exponents = list(itertools.product(range(degree + 1), repeat=cayley.r))
    nodes = list(itertools.product(range(1, degree + 2), repeat=cayley.r))
    rows = [
        [Fraction(1) * _power_product(node, e) for e in exponents]
        for node in nodes
    ]
    values = [scaled_volume(cayley, node) for node in nodes]
    coefficients = solve(rows, values)
    if coefficients is None:
        raise InvariantViolation("Interpolation grid is singular")
    return {e: c for e, c in zip(exponents, coefficients)}


def _power_product(node, exponents):
    result = 1
    for x, e in zip(node, exponents):
        result *= x ** e
    return result


def mixed_volume(cayley: CayleyData, k_bar: Sequence[int], coefficients=None) -> Fraction:
    k_bar = tuple(int(x) for x in k_bar)
    if len(k_bar) != cayley.r or any(x < 0 for x in k_bar) or sum(k_bar) != cayley.base_fan.rank:
        raise MirrorError(f"Degree {k_bar} needs {cayley.r} entries >= 0 summing to {cayley.base_fan.rank}")
    by_grading = mixed_volume_by_grading(cayley, k_bar)
    coefficients = coefficients or interpolate_volume_polynomial(cayley)
    by_interpolation = coefficients.get(k_bar, Fraction(0))
    if by_grading != by_interpolation:
        logger.error(f"Mixed volume {k_bar}: {by_grading} by grading, {by_interpolation} by interpolation")
        raise InvariantViolation(f"Mixed volume routes disagree at {k_bar}")
    return by_grading


def mixed_volume_table(cayley: CayleyData) -> MixedVolumeTable:
    coefficients = interpolate_volume_polynomial(cayley)
    for exponents, value in coefficients.items():
        if sum(exponents) != cayley.base_fan.rank and value:
            raise InvariantViolation(f"Volume polynomial has a term {value} c^{exponents} of the wrong degree")
    degrees = [
        k for k in itertools.product(range(cayley.base_fan.rank + 1), repeat=cayley.r)
        if sum(k) == cayley.base_fan.rank
    ]
    return MixedVolumeTable({k: mixed_volume(cayley, k, coefficients) for k in degrees})


def verify_mixed_volume_theorem(mirror: ResidueMirror, cayley: CayleyData, bound: int) -> MixedVolumeReport:
    report = MixedVolumeReport()
    table = mixed_volume_table(cayley)
    for k in admissible_degrees(cayley):
        k_bar = tuple(x - 1 for x in k)
        row = MixedVolumeRow(k=k, residue=mixed_residue(mirror, cayley, k, bound), volume=table.entries[k_bar])
        if not row.passed:
            logger.error(f"Mixed residue {row.residue} differs from mixed volume {row.volume} at {k}")
        report.rows.append(row)
    return report


def grading_closure(cayley: CayleyData) -> bool:
    """The graded components reassemble the full Hessian term by term"""
    expansion = hessian(cayley.fan.generators)
    collected = sorted(
        (t.support for k in admissible_degrees(cayley) for t in graded_hessian_component(cayley, k).terms)
    )
    return collected == sorted(t.support for t in expansion.terms)


def degeneracy(cayley: CayleyData, table: MixedVolumeTable) -> List[Vector]:
    """Degrees k_bar exceeding the dimension of some part but carrying a nonzero volume"""
    dimensions = [rank([cayley.base_fan.generators[i] for i in part]) for part in cayley.partition.parts]
    return [
        k for k, value in table.entries.items()
        if value and any(x > d for x, d in zip(k, dimensions))
    ]
