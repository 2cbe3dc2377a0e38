"""Expression-tree data model shared by every evaluation strategy.

A tree node carries an operator kind, an optional constant value, an
optional variable index and an ordered child tuple. Nodes are immutable
after construction; the ``make_*`` constructors validate the arity rules
once, so everything downstream may rely on them.
"""

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    ArityMismatchError,
    LeafKindError,
    NonFiniteValueError,
    UnboundVariableError,
    UnknownFunctionError,
)

#: Supported unary functions, by name. Fixed table; parser and evaluators
#: share it so a parsable function is always evaluatable.
UNARY_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
}


class OpKind(enum.Enum):
    """Node kind: two leaf kinds, six binary/n-ary operators, one fn call."""

    CONSTANT = "const"
    VARIABLE = "var"
    SUM = "sum"
    PRODUCT = "product"
    DIFFERENCE = "difference"
    QUOTIENT = "quotient"
    POWER = "power"
    NEGATE = "negate"
    UNARY_FN = "fn"


#: Associative kinds whose chains may be collapsed into n-ary nodes.
ASSOCIATIVE_KINDS = (OpKind.SUM, OpKind.PRODUCT)

# (min, max) child counts for interior kinds; None means unbounded.
_ARITY = {
    OpKind.SUM: (2, None),
    OpKind.PRODUCT: (2, None),
    OpKind.DIFFERENCE: (2, 2),
    OpKind.QUOTIENT: (2, 2),
    OpKind.POWER: (2, 2),
    OpKind.NEGATE: (1, 1),
    OpKind.UNARY_FN: (1, 1),
}


@dataclass(frozen=True, slots=True)
class ExprNode:
    """One immutable tree node. Build through the ``make_*`` constructors."""

    kind: OpKind
    value: float | None = None
    var_index: int | None = None
    fn_name: str | None = None
    children: tuple["ExprNode", ...] = ()


def make_constant(v: float) -> ExprNode:
    """Constant leaf holding the finite value ``v``."""
    v = float(v)
    if not math.isfinite(v):
        raise NonFiniteValueError(f"constant must be finite, got {v!r}")
    return ExprNode(OpKind.CONSTANT, value=v)


def make_variable(i: int) -> ExprNode:
    """Variable leaf for index ``i`` (0 is conventionally x, 1 is y)."""
    if not isinstance(i, int) or isinstance(i, bool) or i < 0:
        raise ValueError(f"variable index must be a non-negative integer, got {i!r}")
    return ExprNode(OpKind.VARIABLE, var_index=i)


def make_op(kind: OpKind, children: Iterable[ExprNode], fn_name: str | None = None) -> ExprNode:
    """Interior node of ``kind`` owning ``children`` in order.

    Arity rules: sum and product take two or more children, difference /
    quotient / power exactly two, negate and unary functions exactly one.
    ``fn_name`` is required for (and only for) UNARY_FN.
    """
    rule = _ARITY.get(kind)
    if rule is None:
        raise LeafKindError(f"{kind.name} is a leaf kind; use make_constant/make_variable")
    kids = tuple(children)
    for child in kids:
        if not isinstance(child, ExprNode):
            raise TypeError(f"children must be ExprNode, got {type(child).__name__}")
    lo, hi = rule
    if len(kids) < lo or (hi is not None and len(kids) > hi):
        expected = f">= {lo}" if hi is None else (f"exactly {lo}" if lo == hi else f"{lo}..{hi}")
        raise ArityMismatchError(kind, len(kids), expected)
    if kind is OpKind.UNARY_FN:
        if fn_name is None:
            raise UnknownFunctionError("UNARY_FN requires a function name")
        if fn_name not in UNARY_FUNCTIONS:
            raise UnknownFunctionError(
                f"unsupported function {fn_name!r}; supported: {', '.join(sorted(UNARY_FUNCTIONS))}"
            )
    elif fn_name is not None:
        raise UnknownFunctionError(f"{kind.name} does not take a function name")
    return ExprNode(kind, fn_name=fn_name, children=kids)


class Bindings:
    """Dense variable values: position ``i`` is the value of variable ``i``.

    Entries are validated finite once at construction. Out-of-range lookup
    raises UnboundVariableError -- never a silent zero.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Iterable[float] = ()):
        vals = tuple(float(v) for v in values)
        for i, v in enumerate(vals):
            if not math.isfinite(v):
                raise NonFiniteValueError(f"binding {i} must be finite, got {v!r}")
        self._values = vals

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self) -> Iterator[float]:
        return iter(self._values)

    def __getitem__(self, index: int) -> float:
        try:
            return self._values[index]
        except IndexError:
            raise UnboundVariableError(index) from None

    def __eq__(self, other) -> bool:
        if isinstance(other, Bindings):
            return self._values == other._values
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._values)

    def __repr__(self) -> str:
        return f"Bindings({list(self._values)!r})"


def as_bindings(values) -> Bindings:
    """Coerce a plain sequence into Bindings; pass Bindings through."""
    if isinstance(values, Bindings):
        return values
    return Bindings(values)


def is_binary_form(tree: ExprNode) -> bool:
    """True iff every sum and product node has exactly two children."""
    stack = [tree]
    while stack:
        node = stack.pop()
        if node.kind in ASSOCIATIVE_KINDS and len(node.children) != 2:
            return False
        stack.extend(node.children)
    return True


def count_nodes(tree: ExprNode) -> int:
    """Total node count, leaves included."""
    total = 0
    stack = [tree]
    while stack:
        node = stack.pop()
        total += 1
        stack.extend(node.children)
    return total


def variable_indices(tree: ExprNode) -> set[int]:
    """Set of variable indices referenced anywhere in the tree."""
    found = set()
    stack = [tree]
    while stack:
        node = stack.pop()
        if node.kind is OpKind.VARIABLE:
            found.add(node.var_index)
        stack.extend(node.children)
    return found


def _node_label(node: ExprNode) -> str:
    if node.kind is OpKind.CONSTANT:
        return f"const {node.value!r}"
    if node.kind is OpKind.VARIABLE:
        return f"var[{node.var_index}]"
    if node.kind is OpKind.UNARY_FN:
        head = f"fn[{node.fn_name}]"
    else:
        head = node.kind.value
    n = len(node.children)
    return f"{head} ({n} {'child' if n == 1 else 'children'})"


def format_tree(tree: ExprNode) -> str:
    """Indented rendering, one node per line: kind, value/index, child count."""
    lines: list[str] = []

    def walk(node: ExprNode, depth: int) -> None:
        lines.append("  " * depth + _node_label(node))
        for child in node.children:
            walk(child, depth + 1)

    walk(tree, 0)
    return "\n".join(lines)


def to_sexpr(tree: ExprNode) -> str:
    """Machine-readable nested-list form, e.g. ``(sum (var 0) (const 1.0))``."""
    if tree.kind is OpKind.CONSTANT:
        return f"(const {tree.value!r})"
    if tree.kind is OpKind.VARIABLE:
        return f"(var {tree.var_index})"
    inner = " ".join(to_sexpr(c) for c in tree.children)
    if tree.kind is OpKind.UNARY_FN:
        return f"(fn {tree.fn_name} {inner})"
    return f"({tree.kind.value} {inner})"
