import argparse
import logging
import sys

from toric_residues import verification
from toric_residues.config import Settings
from toric_residues.errors import ProblemFileError, ToricBaseException, ValidationException
from toric_residues.report import ReportDocument

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def integer_vector(value):
    try:
        return tuple(int(x) for x in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a comma separated integer vector")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toric-residues",
        description="Toric residues, residue mirror map series and mixed volumes",
    )
    parser.add_argument("command", choices=["validate", "series", "verify", "mixed-volume"])
    parser.add_argument("problem", help="Path to the YAML problem file")
    parser.add_argument("--bound", type=int, default=None, help="Degree bound, overrides the file")
    parser.add_argument("--v0", type=integer_vector, default=None, help="Completion vector, e.g. 0,-1")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized checks")
    parser.add_argument("--jobs", type=int, default=None, help="Worker processes for coefficient tables")
    parser.add_argument("--format", choices=["report", "table"], default="report")
    return parser


def run(args, settings: Settings) -> ReportDocument:
    report, problem = verification.validate(args.problem, settings, v0=args.v0, bound=args.bound)
    if problem is None or args.command == "validate":
        return report
    if args.command == "series":
        return verification.series(problem)
    if args.command == "verify":
        result = verification.verify(problem)
        result.checks = report.checks + result.checks
        return result
    return verification.mixed_volumes(problem)


def main(argv=None):
    args = build_parser().parse_args(argv)
    settings = Settings.from_env().override(seed=args.seed, jobs=args.jobs)
    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        report = run(args, settings)
    except ProblemFileError as e:
        logger.error(f"Problem file error: {e}")
        report = ReportDocument(problem=args.problem, command=args.command, error={"field": e.field, "message": str(e)})
        sys.stdout.write(report.dump(args.format))
        return EXIT_USAGE
    except ToricBaseException as e:
        logger.error(f"{e.__class__.__name__}: {e}")
        error = {"error_type": e.__class__.__name__, "message": str(e)}
        if isinstance(e, ValidationException):
            error["check"] = e.check
        report = ReportDocument(problem=args.problem, command=args.command, error=error)

    sys.stdout.write(report.dump(args.format))
    if any(c.name == "problem-file" and not c.passed for c in report.checks):
        return EXIT_USAGE
    return EXIT_OK if report.passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
