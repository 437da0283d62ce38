import pytest

from sbgen.cluster import build_test_cluster
from sbgen.engines import StoppingCondition, run_algorithm
from sbgen.executor import execute
from sbgen.minidyn.syntax import Const
from sbgen.oracle import (
    KILLED, SURVIVED, TIMEOUT, KillMatrix, assertable, base_assertions, exception_assertions,
    generate_mutants, generate_oracle, minimize_assertions, mutant_fuse, mutation_score, observe,
    verify_kills,
)
from sbgen.executor.values import Instance, MSet
from sbgen.testmodel import (
    Binding, ConstructorStatement, FunctionStatement, PrimitiveStatement, TestCase, Var, render,
)

from conftest import build, load


def call_case(cl, name, *args, ret="Int"):
    f = cl.by_qualname(name)
    stmts, binds = [], {}
    for p, a in zip(f.params, args):
        v = Var("Int")
        stmts.append(PrimitiveStatement(v, "Int", a))
        binds[p.name] = Binding(v, "positional")
    stmts.append(FunctionStatement(Var(ret), f, binds))
    return TestCase(stmts)


@pytest.fixture(scope="module")
def divide():
    ast, m = load("examples/divide_queue")
    return ast, m, build_test_cluster(m)


def test_assertable_values():
    assert assertable([1, (2.0, "x"), {"k": b"v"}, MSet([1, 2]), None])
    assert not assertable([1, Instance(None)])


def test_float_result_gets_approximate_assertion(divide):
    _, m, cl = divide
    case = call_case(cl, "divide", 1, 2, ret="Float")
    (a,) = base_assertions(case, m)
    assert (a.kind, a.expected) == ("float", 0.5)
    case.assertions = [a]
    assert "assert float_0 == approx(0.5)" in render(case)


def test_opaque_object_gets_not_none(divide):
    _, m, cl = divide
    case = TestCase([FunctionStatement(Var("Queue"), cl.by_qualname("queue"), {})])
    (a,) = base_assertions(case, m)
    # the queue's only public attribute is an empty list, which is assertable
    assert (a.kind, a.attr, a.expected) == ("attribute", "items", [])


def test_not_none_fallback():
    ast, m = build("class Box:\n    def __init__(self):\n        self._v = 1\n\n\ndef make() -> Box:\n    return Box()\n")
    cl = build_test_cluster(m)
    case = TestCase([FunctionStatement(Var("Box"), cl.by_qualname("make"), {})])
    (a,) = base_assertions(case, m)
    assert a.kind == "not-none"
    case.assertions = [a]
    assert "assert box_0 is not None" in render(case)


def test_declared_exception_is_expected(divide):
    _, m, cl = divide
    case = call_case(cl, "divide", 1, -1, ret="Float")
    result, _ = execute(case, m)
    assert exception_assertions(case, result, cl.by_qualname("divide").declared_exceptions) == "raises"
    assert case.expected_exception == (2, "ValueError")
    assert "with raises(ValueError):" in render(case)


def test_undeclared_exception_marks_expected_failure(divide):
    _, m, cl = divide
    case = call_case(cl, "divide", 1, 0, ret="Float")
    result, _ = execute(case, m)
    assert exception_assertions(case, result, cl.by_qualname("divide").declared_exceptions) == "xfail"
    assert case.xfail and render(case).startswith("@xfail")


def test_non_raising_case_has_no_exception_marker(divide):
    _, m, cl = divide
    case = call_case(cl, "divide", 4, 2, ret="Float")
    assert exception_assertions(case, execute(case, m)[0], {"ValueError"}) is None


def test_counter_value_is_filtered_as_flaky():
    ast, m = build("def ticket() -> Int:\n    return random_int(0, 1000000000)\n")
    case = TestCase([FunctionStatement(Var("Int"), build_test_cluster(m).by_qualname("ticket"), {})])
    assert base_assertions(case, m) == []
    # a single run would have asserted on the drawn value
    assert [a.kind for a in base_assertions(case, m, seeds=(0,))] == ["value"]


def test_mutant_enumeration():
    ast, _ = build("def f(a: Int, b: Int) -> Bool:\n    return a < b\n")
    ror = sorted(m.description for m in generate_mutants(ast) if m.operator == "ROR")
    assert ror == sorted(f"< -> {op}" for op in ("<=", ">", ">=", "==", "!="))
    ast, _ = build("def f() -> Int:\n    x = 42\n    return x\n")
    consts = [m for m in generate_mutants(ast) if m.operator == "CRP"]
    assert sorted(_consts(m.ast)[0].value for m in consts) == [0, 41, 43]


def _consts(ast):
    from sbgen.minidyn.syntax import iter_nodes
    return [n for n in iter_nodes(ast) if isinstance(n, Const) and n.kind == "int"]


def test_mutants_differ_by_one_edit_and_compile():
    ast, _ = load("bank/account")
    mutants = generate_mutants(ast)
    assert len({m.id for m in mutants}) == len(mutants) > 20
    assert all(m.ast != ast and m.compiled.code_objects for m in mutants)
    assert {m.operator for m in mutants} >= {"AOR", "ROR", "CRP", "RVR"}


def test_module_without_sites_has_no_mutants():
    ast, _ = build("def f(x: Int):\n    y = x\n")
    assert generate_mutants(ast) == []


TWO_BY_TWO = '''
def f(x: Int) -> Int:
    return x + x


def g(x: Int) -> Int:
    return x - x


def h(x: Int) -> Int:
    return x
'''


def two_by_two():
    ast, m = build(TWO_BY_TWO)
    cl = build_test_cluster(m)
    x = Var("Int")
    case = TestCase([PrimitiveStatement(x, "Int", 3)] + [
        FunctionStatement(Var("Int"), cl.by_qualname(n), {"x": Binding(x, "positional")}) for n in "fgh"])
    case.assertions = base_assertions(case, m)
    mutants = [mu for mu in generate_mutants(ast) if mu.operator == "AOR"]
    return case, mutants


def test_minimization_keeps_assertions_that_kill_distinct_mutants():
    case, mutants = two_by_two()
    assert len(case.assertions) == 3 and len(mutants) == 2
    matrix = minimize_assertions([case], mutants, [mutant_fuse(100)])
    # the assertion on h is unaffected by both mutants and goes
    assert sorted(a.position for a in case.assertions) == [1, 2]
    assert matrix.outcomes == [[KILLED, KILLED]]
    assert mutation_score(matrix) == 1.0


def test_no_mutants_keeps_everything():
    case, _ = two_by_two()
    matrix = minimize_assertions([case], [], [mutant_fuse(100)])
    assert len(case.assertions) == 3
    assert mutation_score(matrix) is None


def test_timeouts_never_kill():
    src = "def count(n: Int) -> Int:\n    i = 0\n    while i < n:\n        i = i + 1\n    return i\n"
    ast, m = build(src)
    cl = build_test_cluster(m)
    case = call_case(cl, "count", 5)
    case.assertions = base_assertions(case, m)
    mutants = generate_mutants(ast)
    matrix = minimize_assertions([case], mutants, [mutant_fuse(execute(case, m)[0].instructions)])
    hang = [j for j, mu in enumerate(mutants) if mu.description == "+ -> -"]
    assert matrix.outcomes[0][hang[0]] == TIMEOUT
    assert mutants[hang[0]].id not in matrix.killed()


def test_kill_matrix_csv_and_score():
    matrix = KillMatrix(generate_mutants(build(TWO_BY_TWO)[0])[:3], [[KILLED, SURVIVED, TIMEOUT]])
    lines = matrix.to_csv().splitlines()
    assert lines[0] == "test,mutant,operator,line,description,outcome"
    assert len(lines) == 4
    assert mutation_score(matrix) == pytest.approx(1 / 3)


def test_generated_oracle_replays():
    ast, m = load("examples/divide_queue")
    cl = build_test_cluster(m)
    res = run_algorithm("dynamosa", m, cl, seed=1, stop=StoppingCondition(10))
    oracle = generate_oracle(res.tests + res.failing, ast, m)
    assert oracle.cases and oracle.mutants
    assert verify_kills(oracle, ast) == []
    assert oracle.score == len(oracle.matrix.killed()) / len(oracle.mutants)


def test_pymonet_style_scenario():
    ast, m = load("pymonet/task")
    cl = build_test_cluster(m)
    fork, step, task = Var("Int"), Var("Int"), Var("Task")
    case = TestCase([
        PrimitiveStatement(fork, "Int", 3),
        PrimitiveStatement(step, "Int", 4),
        ConstructorStatement(task, cl.by_qualname("Task"), {"fork": Binding(fork, "positional")}),
    ])
    from sbgen.testmodel import MethodStatement
    case.statements += [
        MethodStatement(Var("Int"), cl.by_qualname("Task.map"), {"step": Binding(step, "positional")}, task),
        MethodStatement(Var("Int"), cl.by_qualname("Task.bind"), {"other": Binding(step, "positional")}, task),
    ]
    oracle = generate_oracle([case], ast, m)
    from sbgen.executor import branch_coverage
    cov = branch_coverage([execute(case, m)[1]], m)
    assert cov < 1.0
    assert oracle.score == 1.0
    assert verify_kills(oracle, ast) == []


def test_observations_snapshot_values(divide):
    _, m, cl = divide
    case = TestCase([FunctionStatement(Var("Queue"), cl.by_qualname("queue"), {})])
    _, obs = observe(case, m)
    assert obs[0].executed and obs[0].attrs == {"items": []}
