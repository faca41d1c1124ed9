"""Morrison-Plesser fans and classes

For a complete simplicial fan and a relation beta, every generator i with beta_i > 0 is
split into beta_i + 1 copies living in M + Z^{|beta+|}:

    v_{i,0} = (v_i, -f_{i,1} - ... - f_{i,beta_i})    v_{i,j} = (0, f_{i,j})

where the f_{i,j} are distinct standard basis vectors of the extra summand. Copy (i, 0)
keeps index i, the extra copies follow in order of i. Maximal cones take all copies of
the generators of a maximal cone and all but one copy of every other generator.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from toric_residues.errors import DegreeError, InvariantViolation, MirrorError
from toric_residues.fan import Fan
from toric_residues.jk import evaluate_top_class
from toric_residues.linalg import Vector
from toric_residues.polynomial import Polynomial, product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MPFanData:
    beta: Vector
    base: Fan
    copies: Tuple[Tuple[int, ...], ...]
    fan: Fan

    @property
    def extra_rank(self) -> int:
        return self.fan.rank - self.base.rank

    def copy_of(self, index) -> int:
        """The base generator an index of the split fan is a copy of"""
        for i, indices in enumerate(self.copies):
            if index in indices:
                return i
        raise MirrorError(f"Index {index} is not a generator of the split fan")


@dataclass(frozen=True)
class MPClass:
    """Product of powers of linear forms in the classes of the copies (i, 0)"""

    variables: int
    factors: Tuple[Tuple[Tuple[int, ...], int], ...]

    @property
    def degree(self):
        return sum(power for _, power in self.factors)

    def polynomial(self) -> Polynomial:
        return product(
            (Polynomial.linear(coefficients) ** power for coefficients, power in self.factors),
            self.variables,
        )


@dataclass(frozen=True)
class Agreement:
    """Two exact values that should coincide"""

    left: Fraction
    right: Fraction

    @property
    def passed(self) -> bool:
        return self.left == self.right

    def __bool__(self):
        return self.passed


def _positive(beta):
    return [max(b, 0) for b in beta]


def mp_fan(fan: Fan, beta: Sequence[int]) -> MPFanData:
    beta = tuple(int(b) for b in beta)
    if len(beta) != fan.size:
        raise MirrorError(f"Class {beta} needs {fan.size} entries")
    if not fan.relation_lattice.contains(beta):
        raise MirrorError(f"{beta} is not a relation among the generators")

    positive = _positive(beta)
    extra = sum(positive)
    offsets, copies, next_index, offset = [], [], fan.size, 0
    for i, count in enumerate(positive):
        offsets.append(offset)
        copies.append((i,) + tuple(range(next_index, next_index + count)))
        next_index += count
        offset += count

    def unit(k):
        return tuple(int(k == m) for m in range(extra))

    generators = [None] * (fan.size + extra)
    for i, v in enumerate(fan.generators):
        tail = [0] * extra
        for j in range(positive[i]):
            tail[offsets[i] + j] = -1
            generators[copies[i][j + 1]] = tuple(0 for _ in v) + unit(offsets[i] + j)
        generators[i] = tuple(v) + tuple(tail)

    cones = []
    for cone in fan.max_cones:
        inside = frozenset(index for i in cone for index in copies[i])
        outside = [i for i in range(fan.size) if i not in cone and positive[i]]
        for choice in itertools.product(*(range(positive[i] + 1) for i in outside)):
            split = set(inside)
            for i, j in zip(outside, choice):
                split |= set(copies[i]) - {copies[i][j]}
            cones.append(frozenset(split))

    split_fan = Fan(generators=tuple(generators), max_cones=tuple(cones))
    split_fan.check_simplicial()
    bad = split_fan.incomplete_walls()
    if bad:
        logger.error(f"Split fan for {beta} fails at walls {[sorted(w) for w in bad]}")
        raise InvariantViolation(f"Split fan for {beta} is not complete")
    logger.debug(f"Split fan for {beta}: rank {split_fan.rank}, {len(cones)} maximal cones")
    return MPFanData(beta=beta, base=fan, copies=tuple(copies), fan=split_fan)


def mp_class(data: MPFanData, parts: Optional[Sequence[Sequence[int]]] = None) -> MPClass:
    """chi^{beta-} times (-sum_{E_j} chi_{i,0})^{sum_{E_j} beta_i} for every part E_j"""
    variables = data.fan.size
    factors = []
    for i, b in enumerate(data.beta):
        if b < 0:
            factors.append((tuple(int(k == i) for k in range(variables)), -b))
    for part in parts or ():
        power = sum(data.beta[i] for i in part)
        if power < 0:
            raise MirrorError(f"Class {data.beta} has negative degree {power} on part {sorted(part)}")
        if power:
            factors.append((tuple(-int(k in part) for k in range(variables)), power))
    return MPClass(variables=variables, factors=tuple(factors))


def mp_evaluate(
    fan: Fan,
    polynomial: Polynomial,
    beta: Sequence[int],
    parts: Optional[Sequence[Sequence[int]]] = None,
) -> Fraction:
    """Evaluate P(chi_{1,0}, ..., chi_{n,0}) times the Morrison-Plesser class on the split fan"""
    if polynomial.variables != fan.size:
        raise DegreeError(f"Polynomial in {polynomial.variables} variables on a fan with {fan.size} rays")
    data = mp_fan(fan, beta)
    phi = mp_class(data, parts)
    if not polynomial.is_homogeneous() or polynomial.degree + phi.degree != data.fan.rank:
        raise DegreeError(
            f"Polynomial of degrees {polynomial.degrees} with a class of degree {phi.degree} "
            f"cannot be evaluated in rank {data.fan.rank}"
        )
    lifted = polynomial.pad(after=data.extra_rank)
    return evaluate_top_class(data.fan, lifted * phi.polynomial())


def mp_crosscheck(mirror, polynomial: Polynomial, beta: Sequence[int]) -> Agreement:
    """Series coefficient by residues against the evaluation on the split completed fan"""
    beta = tuple(beta)
    residue = mirror.series_coefficient(polynomial, beta)
    evaluation = mp_evaluate(mirror.completed.fan, polynomial.pad(before=1), (0,) + beta)
    if residue != evaluation:
        logger.error(f"Coefficient at {beta} is {residue} by residues and {evaluation} by evaluation")
    return Agreement(residue, evaluation)


def mp_table(
    fan: Fan,
    polynomial: Polynomial,
    betas: Sequence[Vector],
    parts: Optional[Sequence[Sequence[int]]] = None,
) -> Dict[Vector, Fraction]:
    return {tuple(beta): mp_evaluate(fan, polynomial, beta, parts) for beta in betas}
