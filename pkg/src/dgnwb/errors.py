"""Exception hierarchy; CLI exit codes are attached to the classes."""


class InputError(Exception):
    """User-supplied data is malformed or violates a documented precondition."""

    exit_code = 2


class ResourceLimitError(InputError):
    """A requested computation exceeds a configured size cap."""


class FieldTooSmallError(InputError):
    """The working field does not split a module or algebra.

    `required_degree` is a degree over the prime field that would suffice.
    """

    exit_code = 2

    def __init__(self, message, required_degree=None):
        super().__init__(message)
        self.required_degree = required_degree


class VerificationError(Exception):
    """A verification ran to completion and the claimed property failed."""

    exit_code = 1


class InternalCheckError(Exception):
    """An internal consistency assertion failed; indicates a bug, not bad input."""

    exit_code = 3
