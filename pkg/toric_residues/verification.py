"""Command implementations: validation, coefficient tables, the identity suite and mixed volumes

Every command returns a ReportDocument. Domain errors raised inside a single check are
recorded as a failure of that check; the remaining checks still run.
"""
import itertools
import logging
import random
from fractions import Fraction
from typing import List, Optional, Tuple

from toric_residues.cayley import (
    ci_crosscheck,
    ci_series_coefficient,
    evaluation_compatibility,
    kill_x0_identity,
    pushforward_identity,
    substitution_identity,
    wall_bijection,
)
from toric_residues.config import Settings
from toric_residues.errors import (
    CayleyError,
    DegenerateSpecializationError,
    ToricBaseException,
    ValidationException,
)
from toric_residues.fan import alternative_completions
from toric_residues.jk import BrionEvaluator, JeffreyKirwan
from toric_residues.mirror import ResidueMirror
from toric_residues.mixed_volume import (
    degeneracy,
    grading_closure,
    mixed_volume_table,
    scaled_volume,
    verify_mixed_volume_theorem,
)
from toric_residues.morrison_plesser import mp_crosscheck
from toric_residues.polynomial import Polynomial
from toric_residues.problem import Problem, ProblemFile, compile_problem
from toric_residues.report import CoefficientRecord, ReportDocument

logger = logging.getLogger(__name__)

CROSSCHECK_MAX_DEGREE = 4


def random_exponents(rng: random.Random, size: int, total: int, low: int = -2, high: int = 2) -> Tuple[int, ...]:
    """Random integer vector with the given coordinate sum"""
    exponents = [rng.randint(low, high) for _ in range(size)]
    while sum(exponents) != total:
        k = rng.randrange(size)
        exponents[k] += 1 if sum(exponents) < total else -1
    return tuple(exponents)


def random_monomial(rng: random.Random, size: int, degree: int) -> Tuple[int, ...]:
    exponents = [0] * size
    for k in rng.choices(range(size), k=degree):
        exponents[k] += 1
    return tuple(exponents)


def _error_witness(e: ToricBaseException):
    witness = {"error_type": e.__class__.__name__, "message": str(e)}
    if isinstance(e, ValidationException):
        witness["check"] = e.check
        witness.update(e.witnesses)
    return witness


def load_problem(path_or_document, settings=None, v0=None, bound=None) -> Problem:
    if isinstance(path_or_document, dict):
        problem_file = ProblemFile.from_dict(path_or_document)
    else:
        problem_file = ProblemFile.load(path_or_document)
    return compile_problem(problem_file, settings, v0=v0, bound=bound)


def validate(path_or_document, settings=None, v0=None, bound=None) -> Tuple[ReportDocument, Optional[Problem]]:
    """Structural checks, coherence and nef-partition checks, stopping at the first failure"""
    name = path_or_document.get("name", "problem") if isinstance(path_or_document, dict) else str(path_or_document)
    report = ReportDocument(problem=name, command="validate")
    try:
        problem = load_problem(path_or_document, settings, v0=v0, bound=bound)
    except ValidationException as e:
        logger.error(f"Check {e.check} failed: {e}")
        report.add(e.check, name, False, message=str(e), **e.witnesses)
        return report, None
    report.problem = problem.name
    for check in problem.passed_checks:
        report.add(check, problem.name, True)
    return report, problem


def series_records(problem: Problem) -> Tuple[str, List[CoefficientRecord]]:
    mirror = problem.mirror
    cayley = problem.cayley
    if problem.is_complete_intersection:
        polynomial = problem.base_polynomial()
        lattice = cayley.base_fan.relation_lattice
        records, seen = [], set()
        for beta in mirror.effective(problem.bound):
            beta_bar = cayley.project(beta)
            if beta_bar in seen:
                continue
            seen.add(beta_bar)
            value = ci_series_coefficient(cayley, polynomial, beta_bar)
            records.append(CoefficientRecord(beta_bar, lattice.coordinates(beta_bar), beta_bar, value))
        logger.info(f"Computed {len(records)} complete intersection coefficients")
        return "complete-intersection", records

    table = mirror.rm_series(problem.polynomial, problem.bound)
    records = []
    for beta, value in table.entries.items():
        shown = cayley.project(beta) if cayley is not None else beta
        records.append(CoefficientRecord(shown, mirror.mori.lattice.coordinates(beta), table.a_exponent(beta), value))
    return "residue-series", records


def series(problem: Problem) -> ReportDocument:
    report = ReportDocument(problem=problem.name, command="series")
    name, records = series_records(problem)
    report.tables[name] = records
    return report


def mixed_volumes(problem: Problem) -> ReportDocument:
    if problem.cayley is None:
        raise CayleyError("Mixed volumes need a nef-partition", check="nef-partition")
    report = ReportDocument(problem=problem.name, command="mixed-volume")
    table = mixed_volume_table(problem.cayley)
    report.mixed_volumes = table.entries
    theorem = verify_mixed_volume_theorem(problem.mirror, problem.cayley, problem.bound)
    for row in theorem.rows:
        report.add("mixed-volume-theorem", f"k={row.k}", row.passed, residue=row.residue, volume=row.volume)
    return report


class Verifier:
    """Runs the identity suite on a compiled problem"""

    def __init__(self, problem: Problem):
        self.problem = problem
        self.mirror: ResidueMirror = problem.mirror
        self.cayley = problem.cayley
        self.settings: Settings = problem.settings
        self.bound = problem.bound
        self.random = random.Random(self.settings.seed)
        self.report = ReportDocument(problem=problem.name, command="verify")
        self._hessian = self.mirror.hessian().polynomial()

    @property
    def samples(self):
        return self.settings.samples

    def add(self, name, instance, passed, **witnesses):
        if not passed:
            logger.error(f"Check {name} failed on {instance}: {witnesses}")
        self.report.add(name, instance, passed, **witnesses)

    def series_polynomial(self) -> Polynomial:
        if self.problem.is_complete_intersection:
            return self.problem.base_polynomial().pad(after=self.cayley.r) * self.cayley.extras()
        return self.problem.polynomial

    def checks(self):
        checks = [
            self.check_jk_seeds,
            self.check_evaluation_bridge,
            self.check_cone_vanishing,
            self.check_off_mori,
            self.check_hessian_membership,
            self.check_hessian_identity,
            self.check_ideal_vanishing,
            self.check_completion_independence,
            self.check_linearity,
            self.check_residue_series_consistency,
            self.check_morrison_plesser,
        ]
        if self.cayley is not None:
            checks += [
                self.check_pushforward,
                self.check_kill_x0,
                self.check_substitution,
                self.check_evaluation_compatibility,
                self.check_complete_intersection,
                self.check_wall_bijection,
                self.check_mixed_volume,
            ]
        return checks

    def run(self) -> ReportDocument:
        for check in self.checks():
            name = check.__name__[len("check_"):].replace("_", "-")
            try:
                check()
            except ToricBaseException as e:
                self.add(name, "error", False, **_error_witness(e))
        passed = sum(c.passed for c in self.report.checks)
        logger.info(f"{passed} of {len(self.report.checks)} checks passed for {self.problem.name}")
        return self.report

    # jk engine

    def _random_jk_monomials(self, jk: JeffreyKirwan, count):
        return [random_exponents(self.random, jk.fan.size, -jk.dimension) for _ in range(count)]

    def check_jk_seeds(self):
        jk = self.mirror.jk
        engines = [JeffreyKirwan(jk.fan, max_terms=jk.max_terms, seed=seed) for seed in (1, 2, 3)]
        for exponents in self._random_jk_monomials(jk, self.settings.seed_samples):
            values = [jk.jk_residue(exponents)] + [engine.jk_residue(exponents) for engine in engines]
            self.add("jk-seeds", exponents, len(set(values)) == 1, values=values)

    def check_evaluation_bridge(self):
        fan = self.mirror.completed.fan
        brion = BrionEvaluator(fan)
        for _ in range(self.samples):
            exponents = random_monomial(self.random, fan.size, fan.rank)
            residue = self.mirror.jk.jk_residue(tuple(e - 1 for e in exponents))
            evaluation = brion.evaluate(Polynomial.monomial(exponents))
            self.add("evaluation-bridge", exponents, residue == evaluation, residue=residue, evaluation=evaluation)

    def check_cone_vanishing(self):
        fan = self.mirror.completed.fan
        brion = BrionEvaluator(fan)
        found = 0
        for support in itertools.combinations(range(fan.size), 2):
            if fan.is_cone(support):
                continue
            exponents = [int(i in support) for i in range(fan.size)]
            exponents[support[0]] += fan.rank - 2
            exponents = tuple(exponents)
            residue = self.mirror.jk.jk_residue(tuple(e - 1 for e in exponents))
            evaluation = brion.evaluate(Polynomial.monomial(exponents))
            self.add("cone-vanishing", exponents, residue == 0 and evaluation == 0, residue=residue, evaluation=evaluation)
            found += 1
            if found >= self.samples:
                break

    def check_off_mori(self):
        polynomial = self.series_polynomial()
        for wall in self.mirror.mori.wall_relations:
            beta = tuple(-x for x in wall)
            for exponents, _ in polynomial:
                value = self.mirror.rm_coefficient(exponents, beta)
                self.add("off-mori", f"m={exponents}, beta={beta}", value == 0, value=value)

    # semigroup ring

    def check_hessian_membership(self):
        for term in self.mirror.hessian().terms:
            self.add("hessian-membership", term.t_exponent, self.mirror.cone.is_interior(term.t_exponent))

    def check_hessian_identity(self):
        report = self.mirror.verify_hessian_identity(bound=self.bound)
        self.add(
            "hessian-identity", f"B={self.bound}", report.passed,
            expected=report.expected, observed=report.observed, violations=report.violations,
        )

    def check_ideal_vanishing(self):
        rank = self.mirror.rank
        monomials = [m for m in self.mirror.delta_monomials(rank - 1) if m.lift is not None][:self.samples]
        for k in range(rank):
            w = tuple(int(i == k) for i in range(rank))
            for monomial in monomials:
                passed = self.mirror.verify_ideal_vanishing(w, monomial, self.bound)
                self.add("ideal-vanishing", f"w={w}, l={monomial.point}", passed)

    def check_completion_independence(self):
        polynomial = self.series_polynomial()
        table = self.mirror.rm_series(polynomial, self.bound)
        for v0 in alternative_completions(self.mirror.fan, self.mirror.v0):
            try:
                other = self.mirror.with_completion(v0)
            except ToricBaseException as e:
                logger.debug(f"Skipping completion {v0}: {e}")
                continue
            alternative = other.rm_series(polynomial, self.bound)
            self.add(
                "completion-independence", f"v0={self.mirror.v0} vs {v0}", table.same_coefficients(alternative),
                first=table.entries, second=alternative.entries,
            )
            return
        self.add(
            "completion-independence", f"v0={self.mirror.v0}", False,
            message="no second valid completion vector was found",
        )

    def check_linearity(self):
        polynomial = self.series_polynomial()
        combined = self.mirror.rm_series(polynomial + self._hessian, self.bound)
        separate = self.mirror.rm_series(polynomial, self.bound) + self.mirror.rm_series(self._hessian, self.bound)
        self.add("linearity", f"B={self.bound}", combined.same_coefficients(separate))

    def check_residue_series_consistency(self):
        polynomial = self.series_polynomial()
        size = self.mirror.size
        scales = [[1] * size, [Fraction(2 + i, 3 + i) for i in range(size)]]
        for scale in scales:
            try:
                report = self.mirror.verify_residue_series_consistency(polynomial, scale)
            except DegenerateSpecializationError as e:
                logger.debug(f"Scale {scale} is degenerate: {e}")
                continue
            self.add(
                "residue-series-consistency", f"c={tuple(scale)}", report.passed,
                bounds=report.bounds, rows=report.rows,
            )
            return
        self.add("residue-series-consistency", "all scales", False, message="every specialization was degenerate")

    def check_morrison_plesser(self):
        polynomial = self.series_polynomial()
        monomials = [e for e, _ in polynomial] + [e for e, _ in self._hessian if e not in polynomial.terms]
        betas = [b for b in self.mirror.effective(min(self.bound, CROSSCHECK_MAX_DEGREE))]
        pairs = list(itertools.product(monomials, betas))
        self.random.shuffle(pairs)
        for exponents, beta in pairs[:max(self.samples, 10)]:
            agreement = mp_crosscheck(self.mirror, Polynomial.monomial(exponents), beta)
            self.add(
                "morrison-plesser", f"m={exponents}, beta={beta}", agreement.passed,
                residue=agreement.left, evaluation=agreement.right,
            )

    # nef-partitions

    def _base_degree(self):
        return self.cayley.base_fan.rank - self.cayley.n

    def check_pushforward(self):
        for _ in range(self.samples):
            exponents = random_exponents(self.random, self.cayley.n, self._base_degree())
            agreement = pushforward_identity(self.mirror, self.cayley, exponents)
            self.add("pushforward", exponents, agreement.passed, base=agreement.left, cayley=agreement.right)

    def check_kill_x0(self):
        for power in (1, 2):
            for _ in range(max(self.samples // 2, 1)):
                exponents = random_exponents(self.random, self.cayley.n, self._base_degree() - power)
                self.add("kill-x0", f"l={power}, m={exponents}", kill_x0_identity(self.mirror, self.cayley, power, exponents))

    def check_substitution(self):
        for _ in range(self.samples):
            part = self.random.randrange(self.cayley.r)
            power = self.random.randint(0, 2)
            exponents = random_exponents(self.random, self.cayley.n, self._base_degree() - power)
            agreement = substitution_identity(self.mirror, self.cayley, exponents, part, power)
            self.add(
                "substitution", f"m={exponents}, j={part + 1}, k={power}", agreement.passed,
                cayley=agreement.left, base=agreement.right,
            )

    def check_evaluation_compatibility(self):
        for _ in range(self.samples):
            exponents = random_monomial(self.random, self.cayley.n, self.cayley.base_fan.rank)
            agreement = evaluation_compatibility(self.mirror, self.cayley, Polynomial.monomial(exponents))
            self.add("evaluation-compatibility", exponents, agreement.passed, base=agreement.left, cayley=agreement.right)

    def check_complete_intersection(self):
        polynomials = [Polynomial.monomial(random_monomial(self.random, self.cayley.n, self.cayley.base_fan.rank))]
        if self.problem.is_complete_intersection:
            polynomials.insert(0, self.problem.base_polynomial())
        betas = []
        for beta in self.mirror.effective(min(self.bound, CROSSCHECK_MAX_DEGREE)):
            if self.cayley.project(beta) not in betas:
                betas.append(self.cayley.project(beta))
        for polynomial in polynomials:
            for beta_bar in betas:
                agreement = ci_crosscheck(self.mirror, self.cayley, polynomial, beta_bar)
                self.add(
                    "complete-intersection", f"P={sorted(polynomial.terms)}, beta={beta_bar}", agreement.passed,
                    evaluation=agreement.left, residue=agreement.right,
                )

    def check_wall_bijection(self):
        self.add("wall-bijection", "walls", wall_bijection(self.cayley))

    def check_mixed_volume(self):
        table = mixed_volume_table(self.cayley)
        self.report.mixed_volumes = table.entries
        degree = self.cayley.base_fan.rank
        for node in itertools.product(range(2, degree + 3), repeat=self.cayley.r):
            expected = scaled_volume(self.cayley, node)
            observed = table.volume_polynomial(node)
            self.add("volume-polynomial", f"c={node}", expected == observed, expected=expected, observed=observed)
        self.add("mixed-volume-degeneracy", "table", not degeneracy(self.cayley, table))
        self.add("grading-closure", "hessian", grading_closure(self.cayley))
        theorem = verify_mixed_volume_theorem(self.mirror, self.cayley, self.bound)
        for row in theorem.rows:
            self.add("mixed-volume-theorem", f"k={row.k}", row.passed, residue=row.residue, volume=row.volume)


def verify(problem: Problem) -> ReportDocument:
    return Verifier(problem).run()
