"""Exception hierarchy shared by all modules."""


class PairgateError(ValueError):
    """Base class for physics-level failures.

    ``reason`` is a short machine-readable string that the CLI echoes in
    its ``error`` field.
    """

    def __init__(self, reason, detail=None):
        self.reason = reason
        self.detail = detail
        msg = reason if detail is None else f"{reason}: {detail}"
        super().__init__(msg)


class ForbiddenError(PairgateError):
    """The requested configuration admits no pair creation."""


class InconsistentSolutionError(PairgateError):
    """Kinematics and exponent formulas disagree beyond roundoff."""


class NoFieldError(PairgateError):
    def __init__(self):
        super().__init__("no field")
