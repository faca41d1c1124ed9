"""Residue mirror map

The semigroup ring side of the correspondence: lattice points of the cone over the
polytope, the ideal of interior monomials, the Hessian, the residue mirror map sending
interior monomials to Laurent series with Jeffrey-Kirwan coefficients, and an independent
toric residue computed by linear algebra in one graded piece.
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from toric_residues.config import Settings
from toric_residues.errors import (
    DegenerateSpecializationError,
    DegreeError,
    MirrorError,
    NotInIdealError,
)
from toric_residues.fan import Fan, complete, enumerate_effective, wall_relations
from toric_residues.jk import JeffreyKirwan
from toric_residues.lattice import PointedCone, cone_volume
from toric_residues.linalg import Vector, dot, nullspace, rank, solve_consistent
from toric_residues.polynomial import Polynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeltaMonomial:
    point: Vector
    degree: int
    interior: bool
    lift: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class GammaWeights:
    values: Tuple[Fraction, ...]

    @classmethod
    def ones(cls, count):
        return cls(tuple(Fraction(1) for _ in range(count)))

    @classmethod
    def create(cls, values):
        values = tuple(Fraction(v) for v in values)
        if any(v <= 0 for v in values):
            raise MirrorError(f"Weights {values} must be positive")
        return cls(values)

    def dual_vector(self, generators: Sequence[Vector]) -> Tuple[Fraction, ...]:
        """The vector w with <w, v_i> = 1/gamma_i for every generator"""
        if len(generators) != len(self.values):
            raise MirrorError(f"{len(self.values)} weights for {len(generators)} generators")
        w = solve_consistent(generators, [1 / g for g in self.values])
        if w is None:
            raise MirrorError(f"Weights {self.values} admit no dual vector")
        return w


@dataclass(frozen=True)
class HessianTerm:
    support: Tuple[int, ...]
    coefficient: Fraction
    a_exponent: Tuple[int, ...]
    t_exponent: Vector


@dataclass(frozen=True)
class HessianExpansion:
    variables: int
    terms: Tuple[HessianTerm, ...]

    def polynomial(self) -> Polynomial:
        return Polynomial(self.variables, {t.a_exponent: t.coefficient for t in self.terms})

    def specialize(self, a: Sequence) -> Dict[Vector, Fraction]:
        """The element of the semigroup ring at the given parameter values"""
        result: Dict[Vector, Fraction] = {}
        for term in self.terms:
            value = term.coefficient
            for i in term.support:
                value *= Fraction(a[i])
            result[term.t_exponent] = result.get(term.t_exponent, Fraction(0)) + value
        return result


def hessian(generators: Sequence[Vector], gamma: Optional[GammaWeights] = None) -> HessianExpansion:
    """Expansion sum_J V(J)^2 prod_J gamma_i a_i t^{v_i} over nondegenerate (d+1)-subsets"""
    generators = [tuple(g) for g in generators]
    size = len(generators[0])
    if size > len(generators):
        raise MirrorError(f"Hessian needs at least {size} generators, got {len(generators)}")
    gamma = gamma or GammaWeights.ones(len(generators))
    gamma.dual_vector(generators)

    terms = []
    for support in itertools.combinations(range(len(generators)), size):
        volume = cone_volume([generators[i] for i in support])
        if not volume:
            continue
        coefficient = Fraction(volume ** 2)
        for i in support:
            coefficient *= gamma.values[i]
        terms.append(
            HessianTerm(
                support=support,
                coefficient=coefficient,
                a_exponent=tuple(int(i in support) for i in range(len(generators))),
                t_exponent=tuple(sum(generators[i][k] for i in support) for k in range(size)),
            )
        )
    return HessianExpansion(variables=len(generators), terms=tuple(terms))


@dataclass
class SeriesTable:
    """Laurent series coefficients keyed by effective class, the monomial of beta is a^(base + beta)"""

    base_exponent: Vector
    entries: Dict[Vector, Fraction]
    bound: int
    ample: Tuple[int, ...]
    v0: Vector
    degrees: Dict[Vector, int] = field(default_factory=dict)

    def coefficient(self, beta) -> Fraction:
        return self.entries.get(tuple(beta), Fraction(0))

    def support(self) -> List[Vector]:
        return [beta for beta, value in self.entries.items() if value]

    def a_exponent(self, beta) -> Vector:
        return tuple(b + m for b, m in zip(beta, self.base_exponent))

    def degree(self, beta) -> int:
        return self.degrees.get(tuple(beta), dot(self.ample, beta))

    def partial_sum(self, a: Sequence, bound: Optional[int] = None) -> Fraction:
        bound = self.bound if bound is None else bound
        total = Fraction(0)
        for beta, value in self.entries.items():
            if not value or self.degree(beta) > bound:
                continue
            term = value
            for x, e in zip(a, self.a_exponent(beta)):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def same_coefficients(self, other: "SeriesTable") -> bool:
        keys = set(self.entries) | set(other.entries)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys)

    def __add__(self, other: "SeriesTable") -> "SeriesTable":
        if self.base_exponent != other.base_exponent:
            raise MirrorError("Tables with different base exponents cannot be added")
        entries = dict(self.entries)
        for beta, value in other.entries.items():
            entries[beta] = entries.get(beta, Fraction(0)) + value
        return SeriesTable(
            self.base_exponent, entries, min(self.bound, other.bound), self.ample, self.v0,
            {**other.degrees, **self.degrees},
        )


@dataclass
class HessianReport:
    expected: Fraction
    observed: Fraction
    violations: Dict[Vector, Fraction]

    @property
    def passed(self):
        return self.expected == self.observed and not self.violations


@dataclass
class ConsistencyReport:
    rows: List[Tuple[Fraction, Fraction, List[Fraction]]]
    bounds: List[int]

    @property
    def passed(self) -> bool:
        # gaps shrink strictly with the bound and with epsilon until they vanish
        by_bound = all(
            all(b < a or a == 0 for a, b in zip(gaps, gaps[1:])) for _, _, gaps in self.rows
        )
        by_epsilon = all(
            all(b < a or a == 0 for a, b in zip(column, column[1:]))
            for column in ([gaps[k] for _, _, gaps in self.rows] for k in range(len(self.bounds)))
        )
        return by_bound and by_epsilon


def _coefficients(args):
    mirror, polynomial, betas = args
    return [mirror.series_coefficient(polynomial, beta) for beta in betas]


class ResidueMirror:
    """Residue mirror map of the fan over a coherent triangulation

    Generator i of ``fan`` is variable i of every polynomial; in the completed fan it has
    index i + 1 and the completion ray has index 0.
    """

    def __init__(self, fan: Fan, v0=None, settings: Optional[Settings] = None, seed: Optional[int] = None):
        self.fan = fan
        self.settings = settings or Settings()
        self.seed = seed
        self.completed = complete(fan, v0)
        self.jk = JeffreyKirwan(self.completed.fan, max_terms=self.settings.max_terms, seed=seed)
        self.mori = wall_relations(fan)
        self.cone = PointedCone.from_generators(fan.generators)
        self._effective: Dict[int, List[Vector]] = {}

    @property
    def size(self):
        return self.fan.size

    @property
    def rank(self):
        return self.fan.rank

    @property
    def v0(self):
        return self.completed.v0

    def with_completion(self, v0) -> "ResidueMirror":
        return ResidueMirror(self.fan, v0=v0, settings=self.settings, seed=self.seed)

    def with_seed(self, seed) -> "ResidueMirror":
        return ResidueMirror(self.fan, v0=self.v0, settings=self.settings, seed=seed)

    def effective(self, bound: int) -> List[Vector]:
        if bound not in self._effective:
            self._effective[bound] = enumerate_effective(self.mori, bound)
        return self._effective[bound]

    def degree(self, beta) -> int:
        return self.mori.degree(beta)

    def hessian(self, gamma: Optional[GammaWeights] = None) -> HessianExpansion:
        return hessian(self.fan.generators, gamma)

    def image(self, exponents) -> Vector:
        return tuple(
            sum(e * g[k] for e, g in zip(exponents, self.fan.generators)) for k in range(self.rank)
        )

    def check_interior_lift(self, m0):
        if len(m0) != self.size or any(e < 0 for e in m0):
            raise NotInIdealError(f"{tuple(m0)} is not a nonnegative exponent vector over {self.size} generators")
        if sum(m0) != self.rank:
            raise DegreeError(f"Monomial {tuple(m0)} has degree {sum(m0)}, expected {self.rank}")
        if not self.cone.is_interior(self.image(m0)):
            raise NotInIdealError(f"Monomial {tuple(m0)} maps to {self.image(m0)} which is not interior")

    def rm_coefficient(self, m0, beta) -> Fraction:
        """Coefficient of a^(-m0 + beta) in the image of the monomial with lift m0"""
        m0, beta = tuple(m0), tuple(beta)
        self.check_interior_lift(m0)
        if not self.mori.lattice.contains(beta):
            raise MirrorError(f"{beta} is not a relation among the generators")
        return self.jk.jk_residue((-1,) + tuple(m - b - 1 for m, b in zip(m0, beta)))

    def series_coefficient(self, polynomial: Polynomial, beta) -> Fraction:
        return sum(
            (c * self.rm_coefficient(exponents, beta) for exponents, c in polynomial),
            Fraction(0),
        )

    def _check_polynomial(self, polynomial: Polynomial):
        if polynomial.variables != self.size:
            raise DegreeError(f"Polynomial in {polynomial.variables} variables, expected {self.size}")
        if not polynomial.is_homogeneous(self.rank):
            raise DegreeError(f"Polynomial of degrees {polynomial.degrees}, expected {self.rank}")
        for exponents, _ in polynomial:
            self.check_interior_lift(exponents)

    def _table(self, base, betas, values, bound) -> SeriesTable:
        return SeriesTable(
            base_exponent=base,
            entries=dict(zip(betas, values)),
            bound=bound,
            ample=self.mori.ample,
            v0=self.v0,
            degrees={beta: self.degree(beta) for beta in betas},
        )

    def rm_series(self, polynomial: Polynomial, bound: int) -> SeriesTable:
        """Coefficients of the image of P(a_1 t^v_1, ...), the monomial of beta is a^beta"""
        self._check_polynomial(polynomial)
        betas = self.effective(bound)
        jobs = self.settings.jobs
        if jobs > 1 and len(betas) > 1:
            chunks = [betas[k::jobs] for k in range(jobs)]
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                results = list(executor.map(_coefficients, [(self, polynomial, c) for c in chunks]))
            computed = {}
            for chunk, values in zip(chunks, results):
                computed.update(zip(chunk, values))
            values = [computed[beta] for beta in betas]
        else:
            values = [self.series_coefficient(polynomial, beta) for beta in betas]
        logger.info(f"Computed {len(betas)} series coefficients up to degree {bound}")
        return self._table(tuple(0 for _ in range(self.size)), betas, values, bound)

    def rm_monomial_series(self, m0, bound: int) -> SeriesTable:
        m0 = tuple(m0)
        self.check_interior_lift(m0)
        betas = self.effective(bound)
        values = [self.rm_coefficient(m0, beta) for beta in betas]
        return self._table(tuple(-e for e in m0), betas, values, bound)

    def interior_points(self, height: int) -> List[Vector]:
        """Interior lattice points of the cone at the given height, in lexicographic order"""
        dimension = self.rank - 1
        lower = [height * min(g[k] for g in self.fan.generators) for k in range(dimension)]
        upper = [height * max(g[k] for g in self.fan.generators) for k in range(dimension)]
        box = itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lower, upper)))
        points = (tuple(p) + (height,) for p in box)
        return [p for p in points if self.cone.is_interior(p)]

    def nonnegative_lift(self, point: Vector) -> Optional[Tuple[int, ...]]:
        """Lexicographically first multiset of generators summing to the point"""
        for combination in itertools.combinations_with_replacement(range(self.size), point[-1]):
            exponents = [0] * self.size
            for i in combination:
                exponents[i] += 1
            if self.image(exponents) == tuple(point):
                return tuple(exponents)
        return None

    def delta_monomials(self, height: int) -> List[DeltaMonomial]:
        return [
            DeltaMonomial(point=p, degree=height, interior=True, lift=self.nonnegative_lift(p))
            for p in self.interior_points(height)
        ]

    def verify_ideal_vanishing(self, w: Sequence[int], monomial: DeltaMonomial, bound: int) -> bool:
        """The image of f_w t^l vanishes in every coefficient up to the bound"""
        if monomial.lift is None:
            raise MirrorError(f"Monomial {monomial.point} has no nonnegative lift")
        pairings = [dot(w, g) for g in self.fan.generators]
        for beta in self.effective(bound):
            total = Fraction(0)
            for i, pairing in enumerate(pairings):
                if pairing:
                    shifted = tuple(e + (k == i) for k, e in enumerate(monomial.lift))
                    total += pairing * self.rm_coefficient(shifted, beta)
            if total:
                logger.error(f"Ideal vanishing fails for w={tuple(w)}, l={monomial.point} at {beta}: {total}")
                return False
        return True

    def verify_hessian_identity(self, gamma: Optional[GammaWeights] = None, bound: int = 0) -> HessianReport:
        gamma = gamma or GammaWeights.ones(self.size)
        expected = Fraction(0)
        for cone in self.fan.max_cones:
            term = Fraction(self.fan.volume(cone))
            for i in cone:
                term *= gamma.values[i]
            expected += term
        table = self.rm_series(self.hessian(gamma).polynomial(), bound)
        zero = tuple(0 for _ in range(self.size))
        violations = {beta: value for beta, value in table.entries.items() if beta != zero and value}
        return HessianReport(expected=expected, observed=table.coefficient(zero), violations=violations)

    def ideal_element(self, polynomial: Polynomial, a: Sequence) -> Dict[Vector, Fraction]:
        """P(a_1 t^v_1, ..., a_n t^v_n) as a map from lattice point to coefficient"""
        result: Dict[Vector, Fraction] = {}
        for exponents, coefficient in polynomial:
            value = Fraction(coefficient)
            for x, e in zip(a, exponents):
                if e:
                    value *= Fraction(x) ** e
            point = self.image(exponents)
            result[point] = result.get(point, Fraction(0)) + value
        return result

    def artinian_residue(self, a: Sequence, g: Dict[Vector, Fraction]) -> Fraction:
        """Toric residue of g at the specialization a, normalized so the Hessian maps to Vol"""
        top = self.interior_points(self.rank)
        index = {p: k for k, p in enumerate(top)}
        rows = []
        for u in self.interior_points(self.rank - 1):
            for i in range(self.rank):
                row = [Fraction(0)] * len(top)
                for x, v in zip(a, self.fan.generators):
                    if v[i]:
                        row[index[tuple(p + q for p, q in zip(u, v))]] += v[i] * Fraction(x)
                rows.append(row)

        if rank(rows) != len(top) - 1:
            raise DegenerateSpecializationError(
                f"Specialization {tuple(a)} is not regular, try different parameter values"
            )
        (functional,) = nullspace(rows) if rows else ((Fraction(1),),)

        def pair(element):
            total = Fraction(0)
            for point, value in element.items():
                if point not in index:
                    raise NotInIdealError(f"Monomial t^{point} is not interior of degree {self.rank}")
                total += functional[index[point]] * value
            return total

        normalization = pair(self.hessian().specialize(a))
        if normalization == 0:
            raise DegenerateSpecializationError(
                f"Hessian vanishes in the quotient at {tuple(a)}, try different parameter values"
            )
        return pair(g) / normalization * self.fan.total_volume

    def consistency_bounds(self, bound: int, count: int = 3) -> List[int]:
        """The first few distinct positive degrees of effective classes"""
        degrees = sorted({self.degree(beta) for beta in self.effective(max(bound, 6))} - {0})
        return degrees[:count] or [max(bound, 1)]

    def verify_residue_series_consistency(
        self,
        polynomial: Polynomial,
        scale: Optional[Sequence] = None,
        epsilons: Sequence = (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32)),
        bounds: Optional[Sequence[int]] = None,
    ) -> ConsistencyReport:
        """Partial sums approach the toric residue at a_i = eps^L_i c_i"""
        scale = scale or [1] * self.size
        bounds = sorted(bounds or self.consistency_bounds(6))
        table = self.rm_series(polynomial, bounds[-1])
        rows = []
        for eps in epsilons:
            a = [Fraction(eps) ** h * Fraction(c) for h, c in zip(self.mori.ample, scale)]
            residue = self.artinian_residue(a, self.ideal_element(polynomial, a))
            gaps = [abs(residue - table.partial_sum(a, b)) for b in bounds]
            rows.append((Fraction(eps), residue, gaps))
        return ConsistencyReport(rows=rows, bounds=list(bounds))
