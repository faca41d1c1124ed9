"""Problem files

A problem file is a YAML document describing a lattice polytope, a triangulation of its
lattice points, optional lifting values and nef-partition, and a polynomial::

    name: p1
    dimension: 1
    vertices: [[-1], [1]]
    triangulation: [[0, 1], [1, 2]]
    lifting: [1, 0, 1]
    nef_partition: [[1, 2]]
    bound: 4
    polynomial:
      - {coefficient: "1", exponents: [1, 0, 1]}

Triangulation indices refer to the lexicographically ordered lattice points unless the
file lists ``points`` explicitly. Nef-partition parts index the nonzero lattice points
from 1, polynomial exponents then run over the rays followed by the r extra generators.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import yaml

from toric_residues.cayley import CayleyData, NefPartition, build_cayley
from toric_residues.config import Settings
from toric_residues.errors import CoherenceError, ProblemFileError
from toric_residues.fan import (
    Fan,
    Triangulation,
    build_fan,
    find_lifting,
    validate_triangulation,
    verify_coherence,
)
from toric_residues.lattice import LatticePolytope
from toric_residues.mirror import ResidueMirror
from toric_residues.polynomial import Polynomial

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ["dimension", "vertices", "triangulation", "bound", "polynomial"]


def _integer_list(value, path, length=None):
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise ProblemFileError(f"Field {path} must be a list of integers", field=path)
    if length is not None and len(value) != length:
        raise ProblemFileError(f"Field {path} must have {length} entries, got {len(value)}", field=path)
    return tuple(value)


def _integer_lists(value, path, length=None):
    if not isinstance(value, list) or not value:
        raise ProblemFileError(f"Field {path} must be a nonempty list", field=path)
    return tuple(_integer_list(item, f"{path}[{k}]", length) for k, item in enumerate(value))


@dataclass(frozen=True)
class Term:
    coefficient: Fraction
    exponents: Tuple[int, ...]


@dataclass(frozen=True)
class ProblemFile:
    dimension: int
    vertices: Tuple[Tuple[int, ...], ...]
    triangulation: Tuple[Tuple[int, ...], ...]
    bound: int
    polynomial: Tuple[Term, ...]
    name: str = "problem"
    points: Optional[Tuple[Tuple[int, ...], ...]] = None
    lifting: Optional[Tuple[int, ...]] = None
    nef_partition: Optional[Tuple[Tuple[int, ...], ...]] = None
    v0: Optional[Tuple[int, ...]] = None

    @classmethod
    def from_dict(cls, document):
        if not isinstance(document, dict):
            raise ProblemFileError("A problem file must be a mapping", field="")
        for name in REQUIRED_FIELDS:
            if name not in document:
                raise ProblemFileError(f"Missing required field {name}", field=name)

        dimension = document["dimension"]
        if isinstance(dimension, bool) or not isinstance(dimension, int) or dimension < 1:
            raise ProblemFileError("Field dimension must be a positive integer", field="dimension")
        bound = document["bound"]
        if isinstance(bound, bool) or not isinstance(bound, int) or bound < 0:
            raise ProblemFileError("Field bound must be a nonnegative integer", field="bound")

        terms = document["polynomial"]
        if not isinstance(terms, list) or not terms:
            raise ProblemFileError("Field polynomial must be a nonempty list of terms", field="polynomial")
        polynomial = []
        for k, term in enumerate(terms):
            path = f"polynomial[{k}]"
            if not isinstance(term, dict) or "exponents" not in term:
                raise ProblemFileError(f"Term {path} needs exponents", field=path)
            try:
                coefficient = Fraction(str(term.get("coefficient", "1")))
            except (ValueError, ZeroDivisionError):
                raise ProblemFileError(f"Coefficient of {path} is not a rational number", field=f"{path}.coefficient")
            exponents = _integer_list(term["exponents"], f"{path}.exponents")
            if any(e < 0 for e in exponents):
                raise ProblemFileError(f"Exponents of {path} must be nonnegative", field=f"{path}.exponents")
            polynomial.append(Term(coefficient, exponents))
        if len({len(t.exponents) for t in polynomial}) != 1:
            raise ProblemFileError("All polynomial terms need the same number of exponents", field="polynomial")

        def optional(name, parse):
            value = document.get(name)
            return None if value is None else parse(value, name)

        name = document.get("name", "problem")
        return cls(
            name=str(name),
            dimension=dimension,
            vertices=_integer_lists(document["vertices"], "vertices", dimension),
            triangulation=_integer_lists(document["triangulation"], "triangulation", dimension + 1),
            bound=bound,
            polynomial=tuple(polynomial),
            points=optional("points", lambda v, p: _integer_lists(v, p, dimension)),
            lifting=optional("lifting", _integer_list),
            nef_partition=optional("nef_partition", _integer_lists),
            v0=optional("v0", _integer_list),
        )

    @classmethod
    def loads(cls, text):
        try:
            document = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
            raise ProblemFileError(f"Cannot parse problem file at {where}: {getattr(e, 'problem', e)}", field=where)
        return cls.from_dict(document)

    @classmethod
    def load(cls, path):
        try:
            with open(path, "rt", encoding="utf8") as f:
                text = f.read()
        except OSError as e:
            raise ProblemFileError(f"Cannot read problem file {path}: {e.strerror}", field="path")
        return cls.loads(text)


@dataclass
class Problem:
    file: ProblemFile
    settings: Settings
    polytope: LatticePolytope
    triangulation: Triangulation
    fan: Fan
    mirror: ResidueMirror
    polynomial: Polynomial
    bound: int
    cayley: Optional[CayleyData] = None
    passed_checks: List[str] = field(default_factory=list)

    @property
    def name(self):
        return self.file.name

    @property
    def is_complete_intersection(self):
        """Polynomial of base degree without extra generators: the complete intersection series"""
        if self.cayley is None:
            return False
        n = self.cayley.n
        return self.polynomial.is_homogeneous(self.cayley.base_fan.rank) and all(
            not any(exponents[n:]) for exponents, _ in self.polynomial
        )

    def base_polynomial(self) -> Polynomial:
        n = self.cayley.n
        return Polynomial(n, {exponents[:n]: c for exponents, c in self.polynomial})


def _certified_triangulation(polytope, triangulation, checks):
    if triangulation.lifting is not None:
        if not verify_coherence(polytope, triangulation, triangulation.lifting):
            raise CoherenceError(
                f"Lifting {triangulation.lifting} does not certify the triangulation",
                check="coherence",
                witnesses={"lifting": list(triangulation.lifting)},
            )
    else:
        lifting = find_lifting(polytope, triangulation)
        if lifting is None:
            raise CoherenceError("The triangulation is not coherent", check="coherence")
        triangulation = triangulation.with_lifting(lifting)
    checks.append("coherence")
    return triangulation


def compile_problem(problem: ProblemFile, settings: Optional[Settings] = None, v0=None, bound=None) -> Problem:
    """Build polytope, fan, completion and polynomial, raising the first failed check"""
    settings = settings or Settings()
    checks = ["problem-file"]
    polytope = LatticePolytope.from_points(problem.vertices)
    checks.append("polytope")

    points = problem.points if problem.points is not None else polytope.lattice_points
    if problem.lifting is not None and len(problem.lifting) != len(points):
        raise ProblemFileError(f"Field lifting needs {len(points)} values", field="lifting")
    for k, simplex in enumerate(problem.triangulation):
        if any(not 0 <= i < len(points) for i in simplex):
            raise ProblemFileError(f"Simplex {k} refers to a point outside 0..{len(points) - 1}", field=f"triangulation[{k}]")
    triangulation = Triangulation.create(points, problem.triangulation, problem.lifting)

    cayley = None
    if problem.nef_partition is not None:
        cayley = build_cayley(polytope, triangulation, NefPartition.from_lists(problem.nef_partition))
        checks.extend(["triangulation", "reflexive", "star", "nef-partition"])
        triangulation = _certified_triangulation(polytope, triangulation, checks)
        fan = cayley.fan
    else:
        validate_triangulation(polytope, triangulation)
        checks.append("triangulation")
        triangulation = _certified_triangulation(polytope, triangulation, checks)
        fan = build_fan(polytope, triangulation)

    v0 = v0 if v0 is not None else problem.v0
    if v0 is None and cayley is not None:
        v0 = cayley.v0
    mirror = ResidueMirror(fan, v0=v0, settings=settings, seed=None)
    checks.append("completion")

    size = fan.size
    for k, term in enumerate(problem.polynomial):
        if len(term.exponents) != size:
            raise ProblemFileError(f"Term {k} needs {size} exponents, one per generator", field=f"polynomial[{k}].exponents")
    polynomial = Polynomial(size, {t.exponents: t.coefficient for t in problem.polynomial})

    logger.info(f"Compiled problem {problem.name} with {size} generators")
    return Problem(
        file=problem,
        settings=settings,
        polytope=polytope,
        triangulation=triangulation,
        fan=fan,
        mirror=mirror,
        polynomial=polynomial,
        bound=problem.bound if bound is None else bound,
        cayley=cayley,
        passed_checks=checks,
    )
