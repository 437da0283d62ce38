import random

import pytest

from sbgen.minidyn.cdg import ENTRY_LABEL, control_dependence, immediate_postdominators

from conftest import build, load
from oracles import brute_force_deps, diamond, loop, nested_loops, postdominator_sets, random_cfg


def test_diamond_dependences():
    cfg = diamond()
    cdg = control_dependence(cfg)
    # both arms hang off the branch at node 1; the join runs unconditionally
    assert cdg.deps[2] == {(1, (1, 0))}
    assert cdg.deps[3] == {(1, (1, 1))}
    assert cdg.deps[4] == {(0, ENTRY_LABEL)}
    assert cdg.is_root(1) and not cdg.is_root(2)


def test_loop_header_depends_on_itself():
    cfg = loop()
    cdg = control_dependence(cfg)
    assert (1, (1, 0)) in cdg.deps[1]
    assert cdg.deps[2] == {(1, (1, 0))}


@pytest.mark.parametrize("shape", [diamond, loop, nested_loops])
def test_canonical_shapes_match_oracle(shape):
    cfg = shape()
    assert control_dependence(cfg).deps == brute_force_deps(cfg)


def test_postdominator_tree_matches_sets():
    rng = random.Random(7)
    for _ in range(200):
        cfg = random_cfg(rng, rng.randint(3, 12))
        sets = postdominator_sets(cfg)
        ipdom = immediate_postdominators(cfg)
        assert set(ipdom) == set(sets)
        for n, d in ipdom.items():
            if n == cfg.exit:
                assert d is None
                continue
            if n == cfg.entry:
                # the oracle links entry to exit, so only the exit post-dominates it there
                continue
            strict = sets[n] - {n}
            # the immediate post-dominator is the strict one closest to n
            assert d in strict and all(s in sets[d] for s in strict)


def test_random_cfgs_match_oracle():
    rng = random.Random(11)
    for _ in range(300):
        cfg = random_cfg(rng, rng.randint(3, 12))
        assert control_dependence(cfg).deps == brute_force_deps(cfg)


def test_compiled_nested_conditions():
    _, m = load("examples/control_dependency")
    code = m.code_by_name("check")
    cdg = m.cdg(code.id)
    outer, inner = [p.id for p in m.predicates if p.code_id == code.id]
    assert cdg.predicate_is_root(outer)
    assert not cdg.predicate_is_root(inner)
    assert cdg.branch_dependencies(inner) == {m.branch_pair(outer)[0]}


def test_compiled_loop_predicate_depends_on_own_true_branch():
    _, m = build("def f(n: Int) -> Int:\n    while n > 0:\n        n = n - 1\n    return n\n")
    (p,) = m.predicates
    cdg = m.cdg(p.code_id)
    assert cdg.predicate_is_root(p.id)
    assert m.branch_pair(p.id)[0] in cdg.branch_dependencies(p.id)
