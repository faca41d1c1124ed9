"""Exact integer and rational linear algebra

Integer kernels come from a diagonal normal form computed with unimodular row and column
operations on object-dtype numpy arrays, so entries never overflow. Rational solves and
determinants are delegated to sympy and converted back to ``Fraction``. Ranks and null spaces
of larger rational systems go through ``DomainMatrix`` over ``QQ``.
"""
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from toric_residues.errors import LatticeError

Vector = Tuple[int, ...]


def exgcd(a: int, b: int) -> np.ndarray:
    """Extended GCD

    Returns a 2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].
    If a divides b, M[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    m = np.array([[b, 0, 1], [a, 1, 0]], dtype=object)
    while m[1, 0] != 0:
        q = m[0, 0] // m[1, 0]
        m[0] -= q * m[1]
        m = m[::-1]

    g = m[0, 0]
    m = m[:, 1:] * [a_sign, b_sign]
    if g != 0:
        m[1] = [-b_sign * b // g, a_sign * a // g]
    return m


def normal_form(a: np.ndarray):
    """Diagonalize an integer matrix

    Returns (d, t_inv) with d diagonal and a = s @ d @ t for unimodular s and t, where
    t_inv is the inverse of t. Divisibility of the diagonal is not enforced.
    """
    d = a.copy().astype(object)
    t_inv = np.eye(d.shape[1], dtype=object)

    def clear_row(i):
        if (d[i, i + 1:] == 0).all():
            return False
        for j in range(i + 1, d.shape[1]):
            m = exgcd(d[i, i], d[i, j]).T
            d[:, [i, j]] = d[:, [i, j]] @ m
            t_inv[:, [i, j]] = t_inv[:, [i, j]] @ m
        return True

    def clear_col(i):
        if (d[i + 1:, i] == 0).all():
            return False
        for j in range(i + 1, d.shape[0]):
            m = exgcd(d[i, i], d[j, i])
            d[[i, j]] = m @ d[[i, j]]
        return True

    for i in range(min(*d.shape)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass

    return d, t_inv


def integer_kernel(rows: Sequence[Sequence[int]], columns: Optional[int] = None) -> Tuple[Vector, ...]:
    """Saturated lattice basis of {x integer : A x = 0}, one basis vector per row"""
    if not rows:
        if columns is None:
            raise LatticeError("The column count is needed for an empty matrix")
        return tuple(tuple(int(i == j) for j in range(columns)) for i in range(columns))
    if columns is None:
        columns = len(rows[0])

    d, t_inv = normal_form(np.array([list(r) for r in rows], dtype=object))
    diagonal = [d[i, i] if i < d.shape[0] else 0 for i in range(columns)]
    basis = []
    for i, entry in enumerate(diagonal):
        if entry == 0:
            basis.append(sign_normalized(tuple(int(x) for x in t_inv[:, i])))
    return tuple(basis)


def sign_normalized(vector: Sequence[int]) -> Vector:
    """Flip the vector so that its first nonzero entry is positive"""
    for entry in vector:
        if entry != 0:
            return tuple(vector) if entry > 0 else tuple(-x for x in vector)
    return tuple(vector)


def primitive(vector: Sequence[int]) -> Vector:
    g = reduce(gcd, (abs(int(x)) for x in vector), 0)
    if g in (0, 1):
        return tuple(int(x) for x in vector)
    return tuple(int(x) // g for x in vector)


def clear_denominators(vector: Sequence[Fraction]) -> Vector:
    """Smallest positive integer multiple of a rational vector"""
    denominator = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in vector), 1)
    return primitive([int(Fraction(x) * denominator) for x in vector])


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def _sympify(value):
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.Integer(value) if isinstance(value, int) else value


def as_matrix(rows: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[_sympify(x) for x in row] for row in rows])


def domain_matrix(rows: Sequence[Sequence]) -> DomainMatrix:
    entries = [[QQ(f.numerator, f.denominator) for f in map(to_fraction, row)] for row in rows]
    return DomainMatrix(entries, (len(entries), len(entries[0])), QQ)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    return int(domain_matrix(rows).rank())


def determinant(rows: Sequence[Sequence]) -> Fraction:
    if not rows:
        return Fraction(1)
    return to_fraction(as_matrix(rows).det(method="bareiss"))


def inverse(rows: Sequence[Sequence]) -> Optional[Tuple[Tuple[Fraction, ...], ...]]:
    """Exact inverse, or None for a singular matrix"""
    m = as_matrix(rows)
    if m.det(method="bareiss") == 0:
        return None
    inv = m.inv()
    return tuple(tuple(to_fraction(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """Solve the square system rows @ x = rhs, or None when it is singular"""
    inv = inverse(rows)
    if inv is None:
        return None
    return mat_vec(inv, rhs)


def mat_vec(rows: Sequence[Sequence], vector: Sequence) -> Tuple[Fraction, ...]:
    return tuple(sum((Fraction(a) * b for a, b in zip(row, vector)), Fraction(0)) for row in rows)


def nullspace(rows: Sequence[Sequence]) -> Tuple[Tuple[Fraction, ...], ...]:
    """Rational basis of the right null space"""
    basis = domain_matrix(rows).nullspace().to_Matrix()
    return tuple(tuple(to_fraction(x) for x in basis.row(k)) for k in range(basis.rows))


def transpose(rows: Sequence[Sequence]) -> Tuple[tuple, ...]:
    return tuple(zip(*rows))


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def solve_consistent(rows: Sequence[Sequence], rhs: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """One solution of a possibly non-square system, free parameters set to 0, or None"""
    try:
        solution, parameters = as_matrix(rows).gauss_jordan_solve(as_matrix([[x] for x in rhs]))
    except ValueError:
        return None
    solution = solution.subs({p: 0 for p in parameters})
    return tuple(to_fraction(solution[i, 0]) for i in range(solution.rows))
