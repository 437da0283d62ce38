from sbgen.cluster import build_test_cluster
from sbgen.executor import execute
from sbgen.executor.testfile import run_tests
from sbgen.testmodel import (
    Binding, CollectionStatement, ConstructorStatement, FunctionStatement, MethodStatement,
    PrimitiveStatement, TestCase, Var, clone_with_rename, render, validate_test_case,
)

from conftest import load


def queue_case(cl):
    item, q = Var("Int"), Var("Queue")
    return TestCase([
        ConstructorStatement(q, cl.by_qualname("Queue"), {}),
        PrimitiveStatement(item, "Int", 5),
        MethodStatement(Var(None), cl.by_qualname("Queue.put"), {"item": Binding(item, "positional")}, q),
        MethodStatement(Var("Int"), cl.by_qualname("Queue.size"), {}, q),
    ])


def test_render_and_replay():
    ast, m = load("examples/divide_queue")
    cl = build_test_cluster(m)
    case = queue_case(cl)
    text = render(case)
    assert "queue_0 = Queue()" in text
    assert "queue_0.put(int_0)" in text
    assert run_tests(ast, text)["test_case_0"].status == "pass"


def test_clone_is_deep_and_equivalent():
    _, m = load("examples/divide_queue")
    case = queue_case(build_test_cluster(m))
    copy = clone_with_rename(case)
    assert render(copy) == render(case)
    assert all(a is not b for a, b in zip(copy.statements, case.statements))
    assert {s.ret for s in copy.statements}.isdisjoint({s.ret for s in case.statements})
    assert execute(copy, m)[0].outcomes[-1].value == 1


def test_validation_catches_forward_references_and_receivers():
    _, m = load("examples/divide_queue")
    cl = build_test_cluster(m)
    case = queue_case(cl)
    assert validate_test_case(case) == []
    swapped = TestCase([case.statements[1], case.statements[0]] + case.statements[2:])
    assert validate_test_case(swapped) == []
    backwards = TestCase(list(reversed(case.statements)))
    assert {v.kind for v in validate_test_case(backwards)} == {"forward-ref"}
    n = Var("Int")
    wrong = TestCase([PrimitiveStatement(n, "Int", 1),
                      MethodStatement(Var("Int"), cl.by_qualname("Queue.size"), {}, n)])
    assert "receiver" in {v.kind for v in validate_test_case(wrong)}
    assert "size" in {v.kind for v in validate_test_case(case, L=2)}


def test_required_parameters_and_dstar_maps():
    _, m = load("options/config")
    cl = build_test_cluster(m)
    configure = cl.by_qualname("configure")
    name, key, flag, flags = Var("Str"), Var("Str"), Var("Bool"), Var("Map")
    ok = TestCase([
        PrimitiveStatement(name, "Str", "n"),
        PrimitiveStatement(key, "Str", "verbose"),
        PrimitiveStatement(flag, "Bool", True),
        CollectionStatement(flags, "Map", [(key, flag)]),
        FunctionStatement(Var("Map"), configure, {"name": Binding(name, "positional"),
                                                  "flags": Binding(flags, "dstar")}),
    ])
    assert validate_test_case(ok) == []
    assert execute(ok, m)[0].outcomes[-1].value == {"name": "n", "count": 0, "level": 2}
    missing = TestCase(ok.statements[:4] + [FunctionStatement(Var("Map"), configure, {})])
    assert [v.kind for v in validate_test_case(missing)] == ["binding"]
