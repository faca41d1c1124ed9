class ToricBaseException(Exception):
    pass


class ValidationException(ToricBaseException):
    """An input failed a named check

    The check name is reported verbatim by the command line interface and the API.
    """

    check = "validation"

    def __init__(self, message, check=None, witnesses=None):
        super().__init__(message)
        if check is not None:
            self.check = check
        self.witnesses = witnesses or {}


class LatticeError(ValidationException):
    check = "lattice"


class TriangulationError(ValidationException):
    check = "triangulation"


class FanError(ValidationException):
    check = "fan"


class CoherenceError(ValidationException):
    check = "coherence"


class CayleyError(ValidationException):
    check = "nef-partition"


class ProblemFileError(ValidationException):
    check = "problem-file"

    def __init__(self, message, field=None):
        super().__init__(message, witnesses={"field": field} if field else None)
        self.field = field


class JKError(ToricBaseException):
    pass


class DegreeError(ToricBaseException):
    pass


class MirrorError(ToricBaseException):
    pass


class NotInIdealError(MirrorError):
    pass


class DegenerateSpecializationError(MirrorError):
    pass


class InvariantViolation(ToricBaseException):
    pass
