import pytest

from sbgen.cluster import (
    ConstantPool, LiteralGenerator, UnknownType, build_test_cluster, generators_for_type, modifiers_for_type,
)

from conftest import load


def test_accessible_callables_skip_private_names():
    _, m = load("pymonet/task")
    cl = build_test_cluster(m)
    names = {c.qualname for c in cl.accessible}
    assert names == {"Task", "Task.map", "Task.bind"}


def test_module_without_public_callables():
    _, m = load("flutes/timing")
    assert build_test_cluster(m).accessible == ()


def test_declared_exceptions_from_doc_and_body():
    _, m = load("examples/divide_queue")
    cl = build_test_cluster(m)
    assert "ValueError" in cl.by_qualname("divide").declared_exceptions
    assert "IndexError" in cl.by_qualname("Queue.get").declared_exceptions


def test_hints_drive_parameter_types_and_generators():
    _, m = load("examples/divide_queue")
    hinted = build_test_cluster(m, True)
    bare = build_test_cluster(m, False)
    assert [p.annotation for p in hinted.by_qualname("divide").params] == ["Int", "Int"]
    assert [p.annotation for p in bare.by_qualname("divide").params] == [None, None]
    assert hinted.by_qualname("queue").returns == "Queue"
    assert bare.by_qualname("queue").returns is None
    # the factory only counts as a generator when its return annotation is used
    assert {c.qualname for c in generators_for_type(hinted, "Queue")} == {"Queue", "queue"}
    assert {c.qualname for c in generators_for_type(bare, "Queue")} == {"Queue"}


def test_builtin_generators_and_unknown_types():
    _, m = load("examples/divide_queue")
    cl = build_test_cluster(m)
    assert generators_for_type(cl, "Int") == [LiteralGenerator("Int")]
    with pytest.raises(UnknownType):
        generators_for_type(cl, "Nope")
    assert {c.qualname for c in modifiers_for_type(cl, "Queue")} >= {"Queue.put", "Queue.get", "Queue.size"}


def test_star_parameters():
    _, m = load("options/config")
    cl = build_test_cluster(m)
    kinds = [p.kind for p in cl.by_qualname("configure").params]
    assert kinds == ["positional-or-keyword", "star", "dstar"]
    greet = cl.by_qualname("greet")
    assert [p.optional for p in greet.params] == [False, True, True]


def test_constant_pool_seeds_literals():
    _, m = load("examples/control_dependency")
    cl = build_test_cluster(m)
    assert 42 in cl.constants and 23 in cl.constants
    assert "sum" in cl.constants.values("Str")


def test_constant_pool_dynamic_fifo():
    pool = ConstantPool(capacity=2)
    pool.add_static(1)
    pool.add_dynamic([1, 2, 3, True, 4])
    # static entries are not duplicated, booleans are ignored, the oldest dynamic entry leaves
    assert pool.values("Int") == [1, 3, 4]
    copy = pool.copy()
    assert copy.values("Int") == [1]
