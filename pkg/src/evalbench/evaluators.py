"""Evaluation strategies over a shared bindings model.

Three strategies live here: black-box routines whose formulas are fixed in
the source and compiled at import, a binary-tree walker, and an n-ary-tree
walker that folds sums and products over all children. A uniform
``evaluate`` dispatcher (which also covers direct string evaluation) serves
the CLI and the benchmark harness.

Each walker exists twice: a counting variant behind the public
``eval_binary``/``eval_nary`` entry points, and a plain value variant for
timed loops -- the counter increment would perturb exactly the per-node
cost the benchmark measures, so the timed path must not carry it.
"""

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import (
    ArityMismatchError,
    DomainFaultError,
    MethodSourceMismatchError,
    UnknownFunctionIdError,
)
from .parser import DEFAULT_SYMBOLS, SymbolTable, interpret_string, tokenize
from .tree import UNARY_FUNCTIONS, Bindings, ExprNode, OpKind, as_bindings


class EvalMethod(enum.Enum):
    BLACKBOX = "blackbox"
    BINARY_TREE = "binary"
    NARY_TREE = "nary"
    STRING_PARSE = "string"


@dataclass(frozen=True, slots=True)
class EvalOutcome:
    """Result of one evaluation.

    ``visits`` counts units of work: tree nodes entered for the tree
    methods, tokens consumed for direct string evaluation, and 0 for
    black-box calls (the routine's interior is opaque by definition).
    """

    value: float
    visits: int


# --- black-box functions ---------------------------------------------------
# Eight fixed routines of (x, y), expected on the unit square. Callers pick
# one by id but have no run-time control over its body.

def _f1(x, y):
    return x


def _f2(x, y):
    return x + y


def _f3(x, y):
    return x ** y


def _f4(x, y):
    return (x + y) * x ** y


def _f5(x, y):
    return math.sin(x)


def _f6(x, y):
    return math.sin((x + y) * x ** y)


def _f7(x, y):
    return x + y + 1.0


def _f8(x, y):
    return 2.0 * x * y * (x + y + 1.0)


BLACKBOX_FUNCTIONS: dict[int, Callable[[float, float], float]] = {
    1: _f1, 2: _f2, 3: _f3, 4: _f4, 5: _f5, 6: _f6, 7: _f7, 8: _f8,
}


def blackbox_lookup(fid: int) -> Callable[[float, float], float]:
    """The compiled routine computing test function ``fid`` (1..8)."""
    try:
        return BLACKBOX_FUNCTIONS[fid]
    except (KeyError, TypeError):
        raise UnknownFunctionIdError(fid) from None


# --- tree walkers ----------------------------------------------------------

_CONSTANT = OpKind.CONSTANT
_VARIABLE = OpKind.VARIABLE
_SUM = OpKind.SUM
_PRODUCT = OpKind.PRODUCT
_DIFFERENCE = OpKind.DIFFERENCE
_QUOTIENT = OpKind.QUOTIENT
_POWER = OpKind.POWER
_NEGATE = OpKind.NEGATE


def binary_value(node: ExprNode, bindings: Bindings) -> float:
    """Evaluate a binary-form tree; no visit counting (timed path)."""
    kind = node.kind
    if kind is _CONSTANT:
        return node.value
    if kind is _VARIABLE:
        return bindings[node.var_index]
    children = node.children
    if kind is _SUM:
        try:
            left, right = children
        except ValueError:
            raise ArityMismatchError(kind, len(children), "exactly 2 (binary form)") from None
        return binary_value(left, bindings) + binary_value(right, bindings)
    if kind is _PRODUCT:
        try:
            left, right = children
        except ValueError:
            raise ArityMismatchError(kind, len(children), "exactly 2 (binary form)") from None
        return binary_value(left, bindings) * binary_value(right, bindings)
    if kind is _DIFFERENCE:
        return binary_value(children[0], bindings) - binary_value(children[1], bindings)
    if kind is _QUOTIENT:
        num = binary_value(children[0], bindings)
        den = binary_value(children[1], bindings)
        try:
            return num / den
        except ZeroDivisionError:
            raise DomainFaultError("quotient", (num, den)) from None
    if kind is _POWER:
        base = binary_value(children[0], bindings)
        exponent = binary_value(children[1], bindings)
        try:
            return math.pow(base, exponent)
        except (ValueError, OverflowError):
            raise DomainFaultError("power", (base, exponent)) from None
    if kind is _NEGATE:
        return -binary_value(children[0], bindings)
    arg = binary_value(children[0], bindings)
    try:
        return UNARY_FUNCTIONS[node.fn_name](arg)
    except (ValueError, OverflowError):
        raise DomainFaultError(node.fn_name, (arg,)) from None


def nary_value(node: ExprNode, bindings: Bindings) -> float:
    """Evaluate any valid tree; sums and products fold over all children."""
    kind = node.kind
    if kind is _CONSTANT:
        return node.value
    if kind is _VARIABLE:
        return bindings[node.var_index]
    children = node.children
    if kind is _SUM:
        ret = 0.0
        for child in children:
            ret += nary_value(child, bindings)
        return ret
    if kind is _PRODUCT:
        ret = 1.0
        for child in children:
            ret *= nary_value(child, bindings)
        return ret
    if kind is _DIFFERENCE:
        return nary_value(children[0], bindings) - nary_value(children[1], bindings)
    if kind is _QUOTIENT:
        num = nary_value(children[0], bindings)
        den = nary_value(children[1], bindings)
        try:
            return num / den
        except ZeroDivisionError:
            raise DomainFaultError("quotient", (num, den)) from None
    if kind is _POWER:
        base = nary_value(children[0], bindings)
        exponent = nary_value(children[1], bindings)
        try:
            return math.pow(base, exponent)
        except (ValueError, OverflowError):
            raise DomainFaultError("power", (base, exponent)) from None
    if kind is _NEGATE:
        return -nary_value(children[0], bindings)
    arg = nary_value(children[0], bindings)
    try:
        return UNARY_FUNCTIONS[node.fn_name](arg)
    except (ValueError, OverflowError):
        raise DomainFaultError(node.fn_name, (arg,)) from None


def _binary_counted(node: ExprNode, bindings: Bindings, counter: list[int]) -> float:
    counter[0] += 1
    kind = node.kind
    if kind is _CONSTANT:
        return node.value
    if kind is _VARIABLE:
        return bindings[node.var_index]
    children = node.children
    if kind is _SUM:
        try:
            left, right = children
        except ValueError:
            raise ArityMismatchError(kind, len(children), "exactly 2 (binary form)") from None
        return _binary_counted(left, bindings, counter) + _binary_counted(right, bindings, counter)
    if kind is _PRODUCT:
        try:
            left, right = children
        except ValueError:
            raise ArityMismatchError(kind, len(children), "exactly 2 (binary form)") from None
        return _binary_counted(left, bindings, counter) * _binary_counted(right, bindings, counter)
    if kind is _DIFFERENCE:
        return _binary_counted(children[0], bindings, counter) - _binary_counted(children[1], bindings, counter)
    if kind is _QUOTIENT:
        num = _binary_counted(children[0], bindings, counter)
        den = _binary_counted(children[1], bindings, counter)
        try:
            return num / den
        except ZeroDivisionError:
            raise DomainFaultError("quotient", (num, den)) from None
    if kind is _POWER:
        base = _binary_counted(children[0], bindings, counter)
        exponent = _binary_counted(children[1], bindings, counter)
        try:
            return math.pow(base, exponent)
        except (ValueError, OverflowError):
            raise DomainFaultError("power", (base, exponent)) from None
    if kind is _NEGATE:
        return -_binary_counted(children[0], bindings, counter)
    arg = _binary_counted(children[0], bindings, counter)
    try:
        return UNARY_FUNCTIONS[node.fn_name](arg)
    except (ValueError, OverflowError):
        raise DomainFaultError(node.fn_name, (arg,)) from None


def _nary_counted(node: ExprNode, bindings: Bindings, counter: list[int]) -> float:
    counter[0] += 1
    kind = node.kind
    if kind is _CONSTANT:
        return node.value
    if kind is _VARIABLE:
        return bindings[node.var_index]
    children = node.children
    if kind is _SUM:
        ret = 0.0
        for child in children:
            ret += _nary_counted(child, bindings, counter)
        return ret
    if kind is _PRODUCT:
        ret = 1.0
        for child in children:
            ret *= _nary_counted(child, bindings, counter)
        return ret
    if kind is _DIFFERENCE:
        return _nary_counted(children[0], bindings, counter) - _nary_counted(children[1], bindings, counter)
    if kind is _QUOTIENT:
        num = _nary_counted(children[0], bindings, counter)
        den = _nary_counted(children[1], bindings, counter)
        try:
            return num / den
        except ZeroDivisionError:
            raise DomainFaultError("quotient", (num, den)) from None
    if kind is _POWER:
        base = _nary_counted(children[0], bindings, counter)
        exponent = _nary_counted(children[1], bindings, counter)
        try:
            return math.pow(base, exponent)
        except (ValueError, OverflowError):
            raise DomainFaultError("power", (base, exponent)) from None
    if kind is _NEGATE:
        return -_nary_counted(children[0], bindings, counter)
    arg = _nary_counted(children[0], bindings, counter)
    try:
        return UNARY_FUNCTIONS[node.fn_name](arg)
    except (ValueError, OverflowError):
        raise DomainFaultError(node.fn_name, (arg,)) from None


def eval_binary(tree: ExprNode, bindings, *, nan_on_fault: bool = False) -> EvalOutcome:
    """Evaluate a binary-form tree, counting nodes visited.

    With ``nan_on_fault`` a domain fault yields NaN instead of raising, so
    batch loops are never interrupted by error handling.
    """
    b = as_bindings(bindings)
    counter = [0]
    try:
        value = _binary_counted(tree, b, counter)
    except DomainFaultError:
        if not nan_on_fault:
            raise
        value = math.nan
    return EvalOutcome(value, counter[0])


def eval_nary(tree: ExprNode, bindings, *, nan_on_fault: bool = False) -> EvalOutcome:
    """Evaluate any valid tree with the n-ary fold, counting nodes visited."""
    b = as_bindings(bindings)
    counter = [0]
    try:
        value = _nary_counted(tree, b, counter)
    except DomainFaultError:
        if not nan_on_fault:
            raise
        value = math.nan
    return EvalOutcome(value, counter[0])


def evaluate(
    method: EvalMethod,
    source,
    bindings,
    *,
    symbols: SymbolTable | None = None,
    nan_on_fault: bool = False,
) -> EvalOutcome:
    """Uniform dispatch: route ``source`` to the strategy named by ``method``.

    The source shape must match the method: an int id for BLACKBOX, an
    ExprNode for the tree methods, an expression string for STRING_PARSE
    (``symbols`` applies only there; defaults to the x,y table).
    """
    b = as_bindings(bindings)
    if method is EvalMethod.BLACKBOX:
        if not isinstance(source, int) or isinstance(source, bool):
            raise MethodSourceMismatchError(f"BLACKBOX needs an int id, got {type(source).__name__}")
        fn = blackbox_lookup(source)
        return EvalOutcome(fn(b[0], b[1]), 0)
    if method is EvalMethod.BINARY_TREE:
        if not isinstance(source, ExprNode):
            raise MethodSourceMismatchError(f"BINARY_TREE needs an ExprNode, got {type(source).__name__}")
        return eval_binary(source, b, nan_on_fault=nan_on_fault)
    if method is EvalMethod.NARY_TREE:
        if not isinstance(source, ExprNode):
            raise MethodSourceMismatchError(f"NARY_TREE needs an ExprNode, got {type(source).__name__}")
        return eval_nary(source, b, nan_on_fault=nan_on_fault)
    if method is EvalMethod.STRING_PARSE:
        if not isinstance(source, str):
            raise MethodSourceMismatchError(f"STRING_PARSE needs a string, got {type(source).__name__}")
        try:
            value, tokens = interpret_string(source, symbols or DEFAULT_SYMBOLS, b)
        except DomainFaultError:
            if not nan_on_fault:
                raise
            return EvalOutcome(math.nan, len(tokenize(source)))
        return EvalOutcome(value, tokens)
    raise MethodSourceMismatchError(f"unknown method {method!r}")
