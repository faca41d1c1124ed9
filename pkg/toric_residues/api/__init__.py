import os
import io
import re

from flask_restx import Api
from werkzeug.exceptions import HTTPException, BadRequest

from toric_residues.errors import (
    InvariantViolation,
    ProblemFileError,
    ToricBaseException,
)

current_file_path = os.path.dirname(__file__)
relative_path = "../__init__.py"
init_file = os.path.join(current_file_path, relative_path)

with io.open(init_file, "rt", encoding="utf8") as f:
    version = re.search(r"__version__ = \"(.*?)\"", f.read()).group(1)

api = Api(version=version)

from . import api_problems

api.add_namespace(api_problems.api, path=os.environ.get("API_EP_PROBLEMS", "/problems"))


@api.errorhandler(InvariantViolation)
def handle_invariant_violation(error):
    return {"error_type": str(error.__class__.__name__), "message": str(error)}, 500


@api.errorhandler(ProblemFileError)
def handle_problem_file_error(error):
    return {
        "error_type": str(error.__class__.__name__),
        "message": str(error),
        "field": error.field,
    }, 400


@api.errorhandler(ToricBaseException)
def handle_domain_error(error):
    body = {"error_type": str(error.__class__.__name__), "message": str(error)}
    if hasattr(error, "check"):
        body["check"] = error.check
    return body, 422


@api.errorhandler(HTTPException)
def http_error_handler(error):
    if hasattr(error, "response") and hasattr(error.response, "status"):
        status_code = error.response.status_code
    elif error.__class__ == BadRequest:
        status_code = 400
    else:
        status_code = getattr(error, "code", None) or 404
    return {
        "error_type": str(error.__class__.__name__),
        "message": f"{error}",
    }, status_code
