from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

Exponents = Tuple[int, ...]


@dataclass(frozen=True)
class LaurentMonomial:
    exponents: Exponents

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def numerator(self) -> Exponents:
        return tuple(max(e, 0) for e in self.exponents)

    @property
    def denominator(self) -> Exponents:
        return tuple(max(-e, 0) for e in self.exponents)

    def __mul__(self, other):
        return LaurentMonomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial with exact rational coefficients over ``variables`` variables"""

    variables: int
    terms: Dict[Exponents, Fraction] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        cleaned = {}
        for exponents, coefficient in self.terms.items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != self.variables:
                raise ValueError(f"Exponent vector {exponents} needs length {self.variables}")
            coefficient = Fraction(coefficient)
            if coefficient:
                cleaned[exponents] = cleaned.get(exponents, Fraction(0)) + coefficient
        object.__setattr__(self, "terms", {e: c for e, c in sorted(cleaned.items()) if c})

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def constant(cls, variables, value=1):
        return cls(variables, {(0,) * variables: Fraction(value)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient=1):
        return cls(len(exponents), {tuple(exponents): Fraction(coefficient)})

    @classmethod
    def variable(cls, variables, index, coefficient=1):
        exponents = tuple(int(i == index) for i in range(variables))
        return cls(variables, {exponents: Fraction(coefficient)})

    @classmethod
    def linear(cls, coefficients: Sequence):
        variables = len(coefficients)
        return sum(
            (cls.variable(variables, i, c) for i, c in enumerate(coefficients) if c),
            cls.zero(variables),
        )

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        if other == 0:
            return self
        terms = dict(self.terms)
        for exponents, coefficient in other.terms.items():
            terms[exponents] = terms.get(exponents, Fraction(0)) + coefficient
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return Polynomial(self.variables, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(Fraction(other))
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if power < 0:
            raise ValueError("Negative powers are not polynomials")
        result = Polynomial.constant(self.variables)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted({sum(e) for e in self.terms}))

    @property
    def degree(self) -> int:
        return max(self.degrees, default=0)

    def is_homogeneous(self, degree=None) -> bool:
        degrees = self.degrees
        if not degrees:
            return True
        return len(degrees) == 1 and (degree is None or degrees[0] == degree)

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for exponents, coefficient in self.terms.items():
            term = coefficient
            for value, e in zip(values, exponents):
                if e:
                    term *= Fraction(value) ** e
            total += term
        return total

    def embed(self, variables: int, positions: Sequence[int]) -> "Polynomial":
        """Rename variable i to ``positions[i]`` in a ring with ``variables`` variables"""
        terms = {}
        for exponents, coefficient in self.terms.items():
            target = [0] * variables
            for i, e in enumerate(exponents):
                target[positions[i]] += e
            terms[tuple(target)] = coefficient
        return Polynomial(variables, terms)

    def pad(self, before: int = 0, after: int = 0) -> "Polynomial":
        return self.embed(before + self.variables + after, range(before, before + self.variables))


def product(factors: Iterable[Polynomial], variables: int) -> Polynomial:
    result = Polynomial.constant(variables)
    for factor in factors:
        result = result * factor
    return result
