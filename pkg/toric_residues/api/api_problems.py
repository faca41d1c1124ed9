from flask import current_app
from flask_restx import Namespace, Resource, fields
from flask_restx import reqparse

from toric_residues import verification

api = Namespace("Problems", description="Problem validation, series and verification")

# Model definition
# ----------------------------------------------------------------------------------------------------------------------

term_model = api.model(
    "Term",
    {
        "coefficient": fields.String(description="Exact rational coefficient as 'p/q'", default="1"),
        "exponents": fields.List(fields.Integer, required=True, description="One exponent per generator"),
    },
)

problem_model = api.model(
    "Problem",
    {
        "name": fields.String(description="Name used in reports"),
        "dimension": fields.Integer(required=True, description="Dimension of the polytope"),
        "vertices": fields.List(fields.List(fields.Integer), required=True),
        "points": fields.List(
            fields.List(fields.Integer),
            description="Ordered lattice points, lexicographic order when missing",
        ),
        "triangulation": fields.List(
            fields.List(fields.Integer),
            required=True,
            description="Maximal simplices as indices into the ordered lattice points",
        ),
        "lifting": fields.List(fields.Integer, description="Heights certifying coherence"),
        "nef_partition": fields.List(
            fields.List(fields.Integer),
            description="Parts as 1-based indices into the nonzero lattice points",
        ),
        "v0": fields.List(fields.Integer, description="Completion vector"),
        "bound": fields.Integer(required=True, description="Degree bound of the series"),
        "polynomial": fields.List(fields.Nested(term_model), required=True),
    },
)

check_model = api.model(
    "Check",
    {
        "check": fields.String(),
        "instance": fields.String(),
        "status": fields.String(description="pass or fail"),
        "witnesses": fields.Raw(),
    },
)

report_model = api.model(
    "Report",
    {
        "problem": fields.String(),
        "command": fields.String(),
        "status": fields.String(description="pass or fail"),
        "checks": fields.List(fields.Nested(check_model, skip_none=True)),
        "tables": fields.Raw(description="Coefficient records keyed by table name"),
        "mixed_volumes": fields.Raw(),
        "error": fields.Raw(),
    },
)


def integer_list(value):
    return [int(x) for x in str(value).split(",")]


options_parser = reqparse.RequestParser()
options_parser.add_argument("bound", type=int, location="args", help="Degree bound, overrides the document")
options_parser.add_argument("seed", type=int, location="args", help="Seed for randomized checks")
options_parser.add_argument("v0", type=integer_list, location="args", help="Completion vector, e.g. 0,-1")


def _problem():
    args = options_parser.parse_args()
    settings = current_app.config["SETTINGS"].override(seed=args["seed"])
    v0 = tuple(args["v0"]) if args["v0"] else None
    return verification.load_problem(api.payload, settings, v0=v0, bound=args["bound"])


# Routes
# ----------------------------------------------------------------------------------------------------------------------


@api.route("/validate")
class ApiValidate(Resource):
    @api.expect(problem_model)
    @api.doc(parser=options_parser)
    @api.response(200, "Success", report_model)
    def post(self):
        """ Run the structural checks on a problem """
        args = options_parser.parse_args()
        settings = current_app.config["SETTINGS"]
        report, _ = verification.validate(api.payload, settings, bound=args["bound"])
        return report.to_dict()


@api.route("/series")
class ApiSeries(Resource):
    @api.expect(problem_model)
    @api.doc(parser=options_parser)
    @api.response(200, "Success", report_model)
    def post(self):
        """ Compute the coefficient table of a problem """
        return verification.series(_problem()).to_dict()


@api.route("/verify")
class ApiVerify(Resource):
    @api.expect(problem_model)
    @api.doc(parser=options_parser)
    @api.response(200, "Success", report_model)
    def post(self):
        """ Run the identity suite on a problem """
        return verification.verify(_problem()).to_dict()


@api.route("/mixed-volume")
class ApiMixedVolume(Resource):
    @api.expect(problem_model)
    @api.doc(parser=options_parser)
    @api.response(200, "Success", report_model)
    def post(self):
        """ Compute the mixed volumes of a nef-partition """
        return verification.mixed_volumes(_problem()).to_dict()
