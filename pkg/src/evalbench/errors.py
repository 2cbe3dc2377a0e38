"""Exception types shared across the package."""

import enum


class EvalBenchError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteValueError(EvalBenchError):
    """A constant or binding value was NaN or infinite."""


class LeafKindError(EvalBenchError):
    """An interior-node constructor was called with a leaf kind."""


class ArityMismatchError(EvalBenchError):
    """Child count violates the operator's arity rule."""

    def __init__(self, kind, got: int, expected: str):
        self.kind = kind
        self.got = got
        self.expected = expected
        super().__init__(f"{kind.name} takes {expected} children, got {got}")


class UnknownFunctionError(EvalBenchError):
    """Unary function name outside the supported table."""


class UnknownFunctionIdError(EvalBenchError):
    """Black-box function id outside the 1..8 range."""

    def __init__(self, fid):
        self.fid = fid
        super().__init__(f"no black-box function with id {fid!r} (expected 1..8)")


class UnboundVariableError(EvalBenchError):
    """A variable index had no value in the bindings."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"variable index {index} is not bound")


class DomainFaultError(EvalBenchError):
    """An arithmetic operation left its mathematical domain."""

    def __init__(self, op: str, operands: tuple):
        self.op = op
        self.operands = operands
        args = ", ".join(repr(v) for v in operands)
        super().__init__(f"domain fault in {op}({args})")


class MethodSourceMismatchError(EvalBenchError):
    """The evaluation source's shape does not match the requested method."""


class ParseErrorKind(enum.Enum):
    UNEXPECTED_TOKEN = "unexpected token"
    UNKNOWN_IDENTIFIER = "unknown identifier"
    UNBALANCED_PAREN = "unbalanced parenthesis"
    BAD_NUMBER = "bad number"
    TRAILING_INPUT = "trailing input"


class ParseError(EvalBenchError):
    """Lexing or parsing failed.

    ``position`` is the 0-based offset of the first offending character:
    truncating the input there always leaves a lexable prefix.
    """

    def __init__(self, kind: ParseErrorKind, position: int, message: str):
        self.kind = kind
        self.position = position
        self.message = message
        super().__init__(f"{message} (position {position})")


class ValidationFailureError(EvalBenchError):
    """Cross-method validation found a disagreement beyond tolerance."""

    def __init__(self, report, message: str):
        self.report = report
        super().__init__(message)


class ClockUnavailableError(EvalBenchError):
    """No process-CPU clock is available on this platform."""
