"""Error types raised by the checker.

Every error carries a short ``kind`` string.  The CLI prints it, and
``assert_fail`` directives in surface files match against it.
"""


class CattError(Exception):
    kind = "error"

    def __init__(self, message, **info):
        super().__init__(message)
        self.message = message
        self.info = info

    def __str__(self):
        return f"{self.kind}: {self.message}"


class IllScoped(CattError):
    kind = "ill-scoped"


class DuplicateName(CattError):
    kind = "duplicate-name"


class TypeMismatch(CattError):
    kind = "type-mismatch"


class NotPs(CattError):
    kind = "not-ps"

    def __init__(self, position, reason):
        super().__init__(f"entry {position}: {reason}", position=position, reason=reason)
        self.position = position
        self.reason = reason


class SideConditionViolated(CattError):
    """A free-variable side condition of an operation or coherence failed.

    ``missing`` holds variables required by the boundary but absent from the
    type, ``extra`` the ones the type mentions beyond the boundary.
    """

    kind = "side-condition"

    def __init__(self, message, which=None, missing=(), extra=()):
        super().__init__(message, which=which, missing=tuple(missing), extra=tuple(extra))
        self.which = which
        self.missing = tuple(missing)
        self.extra = tuple(extra)


class SubstitutionError(CattError):
    kind = "substitution"


class DimensionError(CattError):
    kind = "dimension"


class NotComposable(CattError):
    kind = "not-composable"


class NotGlobular(CattError):
    kind = "not-globular"


class ShapeMismatch(CattError):
    kind = "shape-mismatch"


class ConditionViolated(CattError):
    """A cone or transfor side condition (sigma/tau Cond) failed."""

    kind = "cond-violation"

    def __init__(self, message, clause=None, missing=(), extra=()):
        super().__init__(message, clause=clause, missing=tuple(missing), extra=tuple(extra))
        self.clause = clause
        self.missing = tuple(missing)
        self.extra = tuple(extra)


class SegmentImbalance(CattError):
    kind = "segment-imbalance"


class PrematureClose(CattError):
    kind = "premature-close"


class StarViolation(CattError):
    kind = "star-violation"

    def __init__(self, message, missing=(), extra=()):
        super().__init__(message, missing=tuple(missing), extra=tuple(extra))
        self.missing = tuple(missing)
        self.extra = tuple(extra)


class AlphaPosition(CattError):
    kind = "alpha-position"


class WrongZone(CattError):
    kind = "wrong-zone"


class ExtensionError(CattError):
    kind = "extension"


class NotInvertible(CattError):
    kind = "not-invertible"


class ParseError(CattError):
    kind = "parse"

    def __init__(self, message, line=0, column=0):
        super().__init__(f"line {line}, column {column}: {message}", line=line, column=column)
        self.line = line
        self.column = column


class AssertionFailed(CattError):
    kind = "assert"


def var_delta(ctx, got, want):
    """Names of variables in ``want`` but not ``got`` and vice versa."""
    names = ctx.names
    missing = sorted(want - got)
    extra = sorted(got - want)
    return [names[i] for i in missing], [names[i] for i in extra]
