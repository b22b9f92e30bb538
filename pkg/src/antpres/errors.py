"""Exception types shared across the package."""


class AntpresError(Exception):
    """Base class for package-specific errors."""


class ParameterError(AntpresError, ValueError):
    """An argument violates an operation's precondition."""


class LatticeError(AntpresError, ValueError):
    """A matrix does not define a usable lattice (e.g. it is singular)."""


class PrecisionError(AntpresError, ValueError):
    """A boundary computation was requested below its exact precision.

    Truncated line classes determine cylinder-set membership exactly only
    from a computable depth onward, so running below that depth is an
    error, never a silent approximation.  ``required`` is the least
    precision at which the requested computation is exact.
    """

    def __init__(self, message, required):
        super().__init__(f"{message} (requires precision >= {required})")
        self.required = required


class ParseError(AntpresError, ValueError):
    """A presentation file failed to parse.

    ``line`` (1-based) and ``field`` locate the offending input.
    """

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        suffix = f" [{', '.join(where)}]" if where else ""
        super().__init__(message + suffix)
        self.line = line
        self.field = field


class ValidationError(AntpresError, ValueError):
    """Semantic validation failed where valid presentation data was required."""

    def __init__(self, report):
        super().__init__(
            "presentation data failed validation:\n" + report.render())
        self.report = report


class UnsupportedScopeError(AntpresError, ValueError):
    """The requested parameters are outside the supported search scope."""


class FalsificationError(AntpresError, RuntimeError):
    """A computation contradicted a predicted structural fact.

    Carries a serialized witness so the contradiction can be inspected
    and reported instead of being downgraded to a warning.
    """

    def __init__(self, message, witness):
        super().__init__(f"{message}\nwitness:\n{witness}")
        self.witness = witness
