import math
import struct

import pytest
from hypothesis import assume, given

from evalbench import (
    ArityMismatchError,
    Bindings,
    DomainFaultError,
    EvalMethod,
    MethodSourceMismatchError,
    OpKind,
    UnboundVariableError,
    UnknownFunctionIdError,
    blackbox_lookup,
    count_nodes,
    eval_binary,
    eval_nary,
    evaluate,
    flatten,
    generate_inputs,
    make_constant,
    make_op,
    make_variable,
    parse_to_tree,
)
from evalbench.benchmark import EXPRESSIONS
from strategies import bindings, handbuilt_binary_tree, handbuilt_nary_tree, has_like_chain, trees


def test_blackbox_lookup_values():
    assert blackbox_lookup(4)(1.0, 1.0) == 2.0
    assert blackbox_lookup(1)(0.3, 0.9) == 0.3
    assert blackbox_lookup(2)(0.2, 0.3) == 0.5


@pytest.mark.parametrize("bad", [0, 9, -1, "1", None])
def test_blackbox_lookup_unknown_id(bad):
    with pytest.raises(UnknownFunctionIdError):
        blackbox_lookup(bad)


def test_eval_binary_handbuilt_tree():
    outcome = eval_binary(handbuilt_binary_tree(), Bindings((0.5, 0.25)))
    assert outcome.value == 1.75
    assert outcome.visits == 5


def test_eval_binary_sin_at_zero():
    tree = make_op(OpKind.UNARY_FN, (make_variable(0),), fn_name="sin")
    assert eval_binary(tree, Bindings((0.0,))).value == 0.0


def test_eval_binary_pow_zero_zero():
    tree = make_op(OpKind.POWER, (make_variable(0), make_variable(1)))
    assert eval_binary(tree, Bindings((0.0, 0.0))).value == 1.0


def test_eval_binary_rejects_nary_node():
    with pytest.raises(ArityMismatchError):
        eval_binary(handbuilt_nary_tree(), Bindings((0.5, 0.25)))


def test_eval_nary_handbuilt_tree():
    outcome = eval_nary(handbuilt_nary_tree(), Bindings((0.5, 0.25)))
    assert outcome.value == 1.75
    assert outcome.visits == 4


def test_eval_nary_accepts_binary_form_too():
    outcome = eval_nary(handbuilt_binary_tree(), Bindings((0.5, 0.25)))
    assert outcome.value == 1.75
    assert outcome.visits == 5


def test_eval_nary_product_chain():
    x, y = make_variable(0), make_variable(1)
    inner = make_op(OpKind.SUM, (make_variable(0), make_variable(1), make_constant(1.0)))
    tree = make_op(OpKind.PRODUCT, (make_constant(2.0), x, y, inner))
    assert eval_nary(tree, Bindings((1.0, 1.0))).value == 6.0


def test_eval_nary_matches_blackbox_oracle():
    tree = flatten(parse_to_tree("sin((x+y)*x^y)"))
    got = eval_nary(tree, Bindings((0.5, 0.5))).value
    want = blackbox_lookup(6)(0.5, 0.5)
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_unbound_variable():
    tree = make_op(OpKind.SUM, (make_variable(0), make_variable(2)))
    with pytest.raises(UnboundVariableError) as exc:
        eval_binary(tree, Bindings((1.0, 2.0)))
    assert exc.value.index == 2


@pytest.mark.parametrize(
    "tree, op",
    [
        (make_op(OpKind.QUOTIENT, (make_constant(1.0), make_constant(0.0))), "quotient"),
        (make_op(OpKind.POWER, (make_constant(-1.0), make_constant(0.5))), "power"),
        (make_op(OpKind.UNARY_FN, (make_constant(-1.0),), fn_name="sqrt"), "sqrt"),
        (make_op(OpKind.UNARY_FN, (make_constant(0.0),), fn_name="log"), "log"),
        (make_op(OpKind.UNARY_FN, (make_constant(-3.0),), fn_name="log"), "log"),
    ],
)
def test_domain_faults(tree, op):
    for ev in (eval_binary, eval_nary):
        with pytest.raises(DomainFaultError) as exc:
            ev(tree, Bindings())
        assert exc.value.op == op


def test_nan_on_fault_mode():
    tree = make_op(OpKind.UNARY_FN, (make_constant(-1.0),), fn_name="log")
    assert math.isnan(eval_binary(tree, Bindings(), nan_on_fault=True).value)
    assert math.isnan(eval_nary(tree, Bindings(), nan_on_fault=True).value)
    out = evaluate(EvalMethod.STRING_PARSE, "log(0-1)", Bindings(), nan_on_fault=True)
    assert math.isnan(out.value)


def test_oracle_equivalence_all_functions():
    # Both tree encodings of every suite function must match its black-box
    # routine at 1000 shared points.
    points = generate_inputs(1000, seed=42)
    for fid, text in EXPRESSIONS.items():
        fn = blackbox_lookup(fid)
        binary_tree = parse_to_tree(text)
        nary_tree = flatten(binary_tree)
        for x, y in points:
            want = fn(x, y)
            b = Bindings((x, y))
            for got in (eval_binary(binary_tree, b).value, eval_nary(nary_tree, b).value):
                assert abs(got - want) / max(1.0, abs(want)) <= 1e-12


@given(tree=trees(binary_only=True), b=bindings)
def test_flatten_consistency(tree, b):
    try:
        want = eval_binary(tree, b).value
    except DomainFaultError:
        assume(False)
    assume(math.isfinite(want))
    got = eval_nary(flatten(tree), b).value
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want), abs(got))


@given(tree=trees(binary_only=True), b=bindings)
def test_visit_count_dominance(tree, b):
    try:
        binary_visits = eval_binary(tree, b).visits
        nary_visits = eval_nary(flatten(tree), b).visits
    except DomainFaultError:
        assume(False)
    assert nary_visits <= binary_visits
    if has_like_chain(tree):
        assert nary_visits < binary_visits


@given(tree=trees(), b=bindings)
def test_purity_bit_identical(tree, b):
    try:
        first = eval_nary(tree, b).value
    except DomainFaultError:
        assume(False)
    second = eval_nary(tree, b).value
    assert struct.pack("<d", first) == struct.pack("<d", second)


@given(tree=trees(), b=bindings)
def test_visits_equal_node_count(tree, b):
    try:
        outcome = eval_nary(tree, b)
    except DomainFaultError:
        assume(False)
    assert outcome.visits == count_nodes(tree)


def test_evaluate_dispatch():
    b = Bindings((0.5, 0.25))
    assert evaluate(EvalMethod.NARY_TREE, handbuilt_nary_tree(), b).value == 1.75
    assert evaluate(EvalMethod.BLACKBOX, 2, Bindings((0.2, 0.3))).value == 0.5
    assert evaluate(EvalMethod.BINARY_TREE, handbuilt_binary_tree(), b).value == 1.75
    assert evaluate(EvalMethod.STRING_PARSE, "x+y+1", b).value == 1.75


def test_evaluate_visit_conventions():
    b = Bindings((0.5, 0.25))
    assert evaluate(EvalMethod.BLACKBOX, 7, b).visits == 0
    assert evaluate(EvalMethod.BINARY_TREE, handbuilt_binary_tree(), b).visits == 5
    assert evaluate(EvalMethod.NARY_TREE, handbuilt_nary_tree(), b).visits == 4
    # string parsing reports tokens consumed; always nonzero
    assert evaluate(EvalMethod.STRING_PARSE, "x+y+1", b).visits == 6


@pytest.mark.parametrize(
    "method, source",
    [
        (EvalMethod.BINARY_TREE, "x+y"),
        (EvalMethod.NARY_TREE, 3),
        (EvalMethod.BLACKBOX, "1"),
        (EvalMethod.BLACKBOX, True),
        (EvalMethod.STRING_PARSE, 1),
    ],
)
def test_evaluate_source_mismatch(method, source):
    with pytest.raises(MethodSourceMismatchError):
        evaluate(method, source, Bindings((1.0, 1.0)))
