"""Jeffrey-Kirwan residues and the Brion evaluation map

The residue engine works on the relation space R of a complete simplicial fan. Every
generator index i gives a linear form x_i on R, read off as the i-th column of the kernel
basis. A Laurent monomial is reduced to basic fractions by repeatedly rewriting one
numerator form in a basis of denominator forms; basic fractions evaluate to 1/Vol of the
complementary cone when it is a cone of the fan, degenerate fractions to 0.
"""
import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

import sympy

from toric_residues.errors import DegreeError, InvariantViolation, JKError
from toric_residues.fan import Fan
from toric_residues.linalg import Vector, inverse, rank, transpose
from toric_residues.polynomial import LaurentMonomial, Polynomial

logger = logging.getLogger(__name__)

DEFAULT_MAX_TERMS = 1_000_000


@dataclass(frozen=True)
class SubspaceForms:
    kernel_basis: Tuple[Vector, ...]
    forms: Tuple[Vector, ...]

    @property
    def dimension(self):
        return len(self.kernel_basis)

    def combination(self, coefficients: Sequence) -> Tuple[Fraction, ...]:
        """The restriction of sum_i coefficients[i] x_i"""
        return tuple(
            sum((Fraction(c) * form[k] for c, form in zip(coefficients, self.forms)), Fraction(0))
            for k in range(self.dimension)
        )


def restricted_forms(fan: Fan) -> SubspaceForms:
    basis = fan.relation_lattice.kernel_basis
    forms = tuple(tuple(row[i] for row in basis) for i in range(fan.size))
    result = SubspaceForms(kernel_basis=basis, forms=forms)
    for k in range(fan.rank):
        pairing = [g[k] for g in fan.generators]
        if any(result.combination(pairing)):
            raise InvariantViolation(f"Linear relation for coordinate {k} does not vanish on the relation space")
    return result


class JeffreyKirwan:
    """Residue functional of a complete simplicial fan

    ``seed`` switches the tie-breaks in the decomposition to a seeded random choice.
    """

    def __init__(self, fan: Fan, max_terms: int = DEFAULT_MAX_TERMS, seed: Optional[int] = None):
        self.fan = fan
        self.forms = restricted_forms(fan)
        self.dimension = self.forms.dimension
        self.max_terms = max_terms
        self._random = random.Random(seed) if seed is not None else None
        self._spans: Dict[frozenset, bool] = {}
        self._bases: Dict[frozenset, Tuple[Tuple[int, ...], ...]] = {}
        self._inverses: Dict[Tuple[int, ...], tuple] = {}
        if self.dimension == 0:
            raise JKError("Residues need a relation space of positive dimension")

    def jk_basic(self, indices) -> Fraction:
        indices = frozenset(indices)
        if len(indices) != self.dimension:
            raise JKError(f"Basic fraction needs {self.dimension} indices, got {sorted(indices)}")
        complement = frozenset(range(self.fan.size)) - indices
        if self.fan.is_max_cone(complement):
            return Fraction(1, self.fan.volume(complement))
        return Fraction(0)

    def spans(self, support) -> bool:
        support = frozenset(support)
        if support not in self._spans:
            rows = [self.forms.forms[i] for i in sorted(support)]
            self._spans[support] = len(support) >= self.dimension and rank(rows) == self.dimension
        return self._spans[support]

    def _all_bases(self, support) -> Tuple[Tuple[int, ...], ...]:
        if support not in self._bases:
            self._bases[support] = tuple(
                subset
                for subset in itertools.combinations(sorted(support), self.dimension)
                if self._inverse(subset) is not None
            )
        return self._bases[support]

    def _inverse(self, subset):
        if subset not in self._inverses:
            self._inverses[subset] = inverse([self.forms.forms[i] for i in subset])
        return self._inverses[subset]

    def _choose_basis(self, support) -> Tuple[int, ...]:
        if self._random is None:
            for subset in itertools.combinations(sorted(support), self.dimension):
                if self._inverse(subset) is not None:
                    return subset
        return self._random.choice(self._all_bases(support))

    def _choose_numerator(self, numerator) -> int:
        candidates = [i for i, e in enumerate(numerator) if e > 0]
        if self._random is None:
            return candidates[0]
        return self._random.choice(candidates)

    def expansion(self, target: int, basis: Tuple[int, ...]) -> Tuple[Fraction, ...]:
        """Coefficients c with x_target = sum_b c_b x_b on the relation space"""
        inv = self._inverse(basis)
        form = self.forms.forms[target]
        return tuple(
            sum((form[k] * inv[k][b] for k in range(self.dimension)), Fraction(0))
            for b in range(self.dimension)
        )

    def jk_residue(self, monomial: Union[LaurentMonomial, Sequence[int]]) -> Fraction:
        exponents = monomial.exponents if isinstance(monomial, LaurentMonomial) else tuple(monomial)
        if len(exponents) != self.fan.size:
            raise JKError(f"Monomial {exponents} needs {self.fan.size} exponents")
        if sum(exponents) != -self.dimension:
            raise DegreeError(f"Monomial {exponents} has degree {sum(exponents)}, expected {-self.dimension}")

        numerator = tuple(max(e, 0) for e in exponents)
        denominator = tuple(max(-e, 0) for e in exponents)
        level = {(numerator, denominator): Fraction(1)}
        total = Fraction(0)
        while level:
            following: Dict[Tuple[tuple, tuple], Fraction] = {}
            for (num, den), coefficient in level.items():
                support = frozenset(i for i, e in enumerate(den) if e)
                if not self.spans(support):
                    continue
                if not any(num):
                    if all(e == 1 for e in den if e):
                        total += coefficient * self.jk_basic(support)
                    continue
                j = self._choose_numerator(num)
                basis = self._choose_basis(support)
                for b, c in zip(basis, self.expansion(j, basis)):
                    if not c:
                        continue
                    child_num = num[:j] + (num[j] - 1,) + num[j + 1:]
                    child_den = den[:b] + (den[b] - 1,) + den[b + 1:]
                    key = (child_num, child_den)
                    following[key] = following.get(key, Fraction(0)) + coefficient * c
            if len(following) > self.max_terms:
                raise JKError(f"Decomposition exceeded {self.max_terms} terms")
            level = {key: value for key, value in following.items() if value}
        return total

    def residue(self, numerator: Polynomial, shift: Sequence[int]) -> Fraction:
        """Residue of numerator * x^shift, summed over the terms of the numerator"""
        return sum(
            (
                coefficient * self.jk_residue(tuple(e + s for e, s in zip(exponents, shift)))
                for exponents, coefficient in numerator
            ),
            Fraction(0),
        )


def generic_points(dimension: int, count: int = 32) -> Iterator[Tuple[Fraction, ...]]:
    """Deterministic sequence of rational points with large unrelated coordinates"""
    for t in range(count):
        yield tuple(
            Fraction((-1) ** (i + t) * int(sympy.prime(41 + t * dimension + i)), int(sympy.prime(5 + 3 * t + i)))
            for i in range(dimension)
        )


class BrionEvaluator:
    """Evaluation map on top-degree classes of a complete simplicial fan"""

    def __init__(self, fan: Fan):
        fan.check_simplicial()
        self.fan = fan
        self.cones = []
        for cone in fan.max_cones:
            indices = tuple(sorted(cone))
            chart = inverse(transpose([fan.generators[i] for i in indices]))
            self.cones.append((indices, chart, fan.volume(cone)))

    def evaluate_at(self, polynomial: Polynomial, point) -> Optional[Fraction]:
        total = Fraction(0)
        for indices, chart, volume in self.cones:
            restriction = [sum((a * z for a, z in zip(row, point)), Fraction(0)) for row in chart]
            if any(value == 0 for value in restriction):
                return None
            values = [Fraction(0)] * self.fan.size
            denominator = Fraction(volume)
            for i, value in zip(indices, restriction):
                values[i] = value
                denominator *= value
            total += polynomial.evaluate(values) / denominator
        return total

    def evaluate(self, polynomial: Polynomial) -> Fraction:
        if polynomial.variables != self.fan.size:
            raise DegreeError(f"Class in {polynomial.variables} variables on a fan with {self.fan.size} rays")
        if not polynomial.is_homogeneous(self.fan.rank):
            raise DegreeError(f"Class of degrees {polynomial.degrees} on a fan of rank {self.fan.rank}")
        if not polynomial:
            return Fraction(0)

        values = []
        for point in generic_points(self.fan.rank):
            value = self.evaluate_at(polynomial, point)
            if value is None:
                logger.debug(f"Evaluation point {point} hits a pole, retrying")
                continue
            values.append(value)
            if len(values) == 2:
                break
        if len(values) < 2:
            raise InvariantViolation("No pole-free evaluation points found")
        if values[0] != values[1]:
            raise InvariantViolation(f"Evaluation is not constant: {values[0]} != {values[1]}")
        return values[0]


def evaluate_top_class(fan: Fan, polynomial: Polynomial) -> Fraction:
    return BrionEvaluator(fan).evaluate(polynomial)
