"""Genetic operators over test cases and test suites.

All operators keep their outputs valid: every variable use refers to an
earlier statement, bindings respect parameter kinds, and sizes stay within
L and N.  Operators mutate test cases in place and return them; callers clone
first when the parent must survive.
"""
from __future__ import annotations

import math
import random
import string
from dataclasses import dataclass
from typing import Optional

from .cluster import (
    BUILTIN_TYPES, COLLECTION_TYPES, PRIMITIVE_TYPES, CallableInfo, LiteralGenerator,
    ParamInfo, TestCluster, generators_for_type, modifiers_for_type,
)
from .executor.values import INT_MAX, INT_MIN
from .testmodel import (
    Binding, CallStatement, CollectionStatement, ConstructorStatement,
    FunctionStatement, MethodStatement, PrimitiveStatement, Statement, TestCase,
    TestSuite, Var, validate_test_case,
)

_PRINTABLE = string.ascii_letters + string.digits + string.punctuation + " "
HASHABLE_TYPES = PRIMITIVE_TYPES


class GenerationFailed(Exception):
    """No statement could be generated for the requested type or call."""


class RepairFailed(Exception):
    """A transplanted statement could not be made valid."""


@dataclass
class SearchConfig:
    L: int = 50
    N: int = 50
    sigma_testcase: float = 0.5
    sigma_statement: float = 0.5
    sigma_str: float = 0.5
    delta_int: int = 20
    delta_float: float = 20.0
    delta_digits: int = 7
    crossover_probability: float = 0.75
    disregard_hint_probability: float = 0.05
    omit_optional_probability: float = 0.7
    none_probability: float = 0.05
    seeded_primitive_probability: float = 0.2
    primitive_reuse_probability: float = 0.5
    object_reuse_probability: float = 0.9
    randomize_primitive_probability: float = 0.2
    max_int: int = 2048
    max_string_length: int = 20
    max_collection_size: int = 4
    max_depth: int = 5

    def __post_init__(self):
        probs = (self.sigma_testcase, self.sigma_statement, self.sigma_str,
                 self.crossover_probability, self.disregard_hint_probability,
                 self.omit_optional_probability, self.none_probability,
                 self.seeded_primitive_probability, self.primitive_reuse_probability,
                 self.object_reuse_probability, self.randomize_primitive_probability)
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.delta_int <= 0 or self.delta_float <= 0 or self.delta_digits <= 0:
            raise ValueError("mutation deltas must be positive")
        if self.L < 1 or self.N < 1:
            raise ValueError("size bounds must be positive")


# --- primitive values ----------------------------------------------------------


def clamp_int(v: int) -> int:
    return max(INT_MIN, min(INT_MAX, v))


def random_primitive(kind: str, rng: random.Random, cfg: SearchConfig, cluster: TestCluster):
    """A fresh value for a primitive kind, sometimes taken from the constant pool."""
    if kind in cluster.constants.KINDS and rng.random() < cfg.seeded_primitive_probability:
        pool = cluster.constants.values(kind)
        if pool:
            return rng.choice(pool)
    if kind == "Int":
        return rng.randint(-cfg.max_int, cfg.max_int)
    if kind == "Float":
        return round(rng.uniform(-cfg.max_int, cfg.max_int), rng.randint(0, cfg.delta_digits))
    if kind == "Bool":
        return rng.random() < 0.5
    if kind == "Str":
        n = rng.randint(0, cfg.max_string_length)
        return "".join(rng.choice(_PRINTABLE) for _ in range(n))
    if kind == "Bytes":
        n = rng.randint(0, cfg.max_string_length)
        return bytes(rng.randrange(256) for _ in range(n))
    raise GenerationFailed(f"no literal for {kind}")


def _mutate_sequence(items: list, rng: random.Random, sigma: float, new_item) -> list:
    """Per-element delete and replace with probability 1/len, then geometric inserts.

    ``new_item(old)`` supplies a replacement (``old`` is None for inserts) or
    returns None when nothing is available.
    """
    out = list(items)
    if out:
        p = 1.0 / len(out)
        op = rng.randrange(3)
        if op == 0:
            out = [x for x in out if rng.random() >= p]
        elif op == 1:
            for i, old in enumerate(out):
                if rng.random() < p:
                    nv = new_item(old)
                    if nv is not None:
                        out[i] = nv
        else:
            _geometric_insert(out, rng, sigma, new_item)
    else:
        _geometric_insert(out, rng, sigma, new_item)
    return out


def _geometric_insert(out: list, rng: random.Random, sigma: float, new_item) -> None:
    k = 1
    while rng.random() <= sigma ** k:
        nv = new_item(None)
        if nv is None:
            break
        out.insert(rng.randint(0, len(out)), nv)
        k += 1


def mutate_primitive(s: PrimitiveStatement, rng: random.Random, cfg: SearchConfig,
                     cluster: TestCluster) -> None:
    if s.kind != "Bool" and rng.random() < cfg.randomize_primitive_probability:
        s.value = random_primitive(s.kind, rng, cfg, cluster)
        return
    if s.kind == "Int":
        alpha = rng.gauss(0.0, 1.0)
        s.value = clamp_int(s.value + int(alpha * cfg.delta_int))
    elif s.kind == "Float":
        choice = rng.randrange(3)
        if choice == 0:
            v = s.value + rng.gauss(0.0, 1.0) * cfg.delta_float
        elif choice == 1:
            v = s.value + rng.gauss(0.0, 1.0)
        else:
            v = round(s.value, rng.randint(0, cfg.delta_digits))
        s.value = float(v) if math.isfinite(v) else s.value
    elif s.kind == "Bool":
        s.value = not s.value
    elif s.kind == "Str":
        chars = _mutate_sequence(list(s.value), rng, cfg.sigma_str, lambda _: rng.choice(_PRINTABLE))
        s.value = "".join(chars)
    elif s.kind == "Bytes":
        bs = _mutate_sequence(list(s.value), rng, cfg.sigma_str, lambda _: rng.randrange(256))
        s.value = bytes(bs)


# --- statement generation --------------------------------------------------------


class StatementBuilder:
    """Insert statements into ``case`` before a moving position."""

    def __init__(self, case: TestCase, rng: random.Random, cfg: SearchConfig, cluster: TestCluster):
        self.case = case
        self.rng = rng
        self.cfg = cfg
        self.cluster = cluster

    def insert(self, s: Statement, pos: int) -> int:
        self.case.statements.insert(pos, s)
        return pos + 1

    def available(self, pos: int, t: Optional[str]) -> list[Var]:
        return [s.ret for s in self.case.statements[:pos] if s.ret.type == t and t is not None]

    def param_type(self, p: ParamInfo) -> str:
        if p.annotation is not None and self.rng.random() >= self.cfg.disregard_hint_probability:
            self.cluster.stats["type_guided"] += 1
            return p.annotation
        self.cluster.stats["random_type"] += 1
        return self.rng.choice(self.cluster.types)

    def reuse_probability(self, t: str) -> float:
        if t in PRIMITIVE_TYPES or t in COLLECTION_TYPES:
            return self.cfg.primitive_reuse_probability
        return self.cfg.object_reuse_probability

    def get_or_create(self, t: str, pos: int, depth: int) -> tuple[Optional[Var], int]:
        cands = self.available(pos, t)
        if cands and self.rng.random() < self.reuse_probability(t):
            return self.rng.choice(cands), pos
        return self.create(t, pos, depth)

    def create(self, t: str, pos: int, depth: int) -> tuple[Optional[Var], int]:
        if depth > self.cfg.max_depth:
            raise GenerationFailed("recursion too deep")
        if t == "NoneType":
            return None, pos
        if t in PRIMITIVE_TYPES:
            v = Var(t)
            return v, self.insert(PrimitiveStatement(v, t, random_primitive(t, self.rng, self.cfg, self.cluster)), pos)
        if t in COLLECTION_TYPES:
            return self.collection(t, pos, depth)
        try:
            gens = generators_for_type(self.cluster, t)
        except KeyError:
            raise GenerationFailed(f"unknown type {t}") from None
        gens = [g for g in gens if not isinstance(g, LiteralGenerator)]
        if not gens:
            raise GenerationFailed(f"no generator for {t}")
        return self.call(self.rng.choice(gens), pos, depth + 1)

    def collection(self, kind: str, pos: int, depth: int, elem: Optional[str] = None,
                   str_keys: bool = False) -> tuple[Var, int]:
        n = self.rng.randint(0, self.cfg.max_collection_size)
        if elem is None:
            elem = self.rng.choice(PRIMITIVE_TYPES)
        if kind == "Map":
            key_t = "Str" if str_keys else self.rng.choice(HASHABLE_TYPES)
            items = []
            for _ in range(n):
                k, pos = self.get_or_create(key_t, pos, depth + 1)
                v, pos = self.get_or_create(elem, pos, depth + 1)
                if k is None or v is None:
                    raise GenerationFailed("map entries must be variables")
                items.append((k, v))
            var = Var("Map")
            return var, self.insert(CollectionStatement(var, "Map", items), pos)
        if kind == "Set" and elem not in HASHABLE_TYPES:
            elem = self.rng.choice(HASHABLE_TYPES)
        items = []
        for _ in range(n):
            v, pos = self.get_or_create(elem, pos, depth + 1)
            if v is None:
                raise GenerationFailed("collection elements must be variables")
            items.append(v)
        var = Var(kind)
        return var, self.insert(CollectionStatement(var, kind, items), pos)

    def bind(self, p: ParamInfo, pos: int, depth: int, keyword: bool) -> tuple[Optional[Binding], int]:
        rng, cfg = self.rng, self.cfg
        if p.optional and rng.random() < cfg.omit_optional_probability:
            return None, pos
        if p.kind == "star":
            cands = self.available(pos, "List")
            if cands and rng.random() < cfg.primitive_reuse_probability:
                return Binding(rng.choice(cands), "star"), pos
            elem = self.param_type(p) if p.annotation is not None else None
            var, pos = self.collection("List", pos, depth, elem if elem in PRIMITIVE_TYPES else None)
            return Binding(var, "star"), pos
        if p.kind == "dstar":
            elem = self.param_type(p) if p.annotation is not None else None
            var, pos = self.collection("Map", pos, depth, elem if elem in PRIMITIVE_TYPES else None,
                                       str_keys=True)
            return Binding(var, "dstar"), pos
        mode = "keyword" if keyword else "positional"
        if rng.random() < cfg.none_probability:
            return Binding(None, mode), pos
        t = self.param_type(p)
        var, pos = self.get_or_create(t, pos, depth + 1)
        return Binding(var, mode), pos

    def call(self, c: CallableInfo, pos: int, depth: int, receiver: Optional[Var] = None) -> tuple[Var, int]:
        if depth > self.cfg.max_depth:
            raise GenerationFailed("recursion too deep")
        if c.kind == "method" and receiver is None:
            receiver, pos = self.get_or_create(c.owner, pos, depth + 1)
            if receiver is None:
                raise GenerationFailed("no receiver")
        bindings: dict = {}
        keyword = False
        for p in c.params:
            b, pos = self.bind(p, pos, depth, keyword)
            if b is None:
                if p.kind == "positional-or-keyword":
                    keyword = True
                continue
            bindings[p.name] = b
        ret = Var(c.result_type)
        if c.kind == "method":
            s = MethodStatement(ret, c, bindings, receiver)
        elif c.kind == "constructor":
            s = ConstructorStatement(ret, c, bindings)
        else:
            s = FunctionStatement(ret, c, bindings)
        return ret, self.insert(s, pos)


def _rollback(case: TestCase, snapshot: list) -> None:
    case.statements[:] = snapshot


def insert_random_call(t: TestCase, rng: random.Random, cfg: SearchConfig, cluster: TestCluster,
                       max_pos: Optional[int] = None) -> bool:
    """Insert one call: a new module call, or a method call on an existing value."""
    if not cluster.accessible:
        return False
    limit = len(t.statements) if max_pos is None else min(max_pos, len(t.statements))
    b = StatementBuilder(t, rng, cfg, cluster)
    snapshot = list(t.statements)
    receivers = [(i, s.ret) for i, s in enumerate(t.statements[:limit])
                 if s.ret.type in cluster.classes and cluster.methods_of(s.ret.type)]
    try:
        if receivers and rng.random() >= 0.5:
            i, var = rng.choice(receivers)
            method = rng.choice(cluster.methods_of(var.type))
            pos = rng.randint(i + 1, limit)
            b.call(method, pos, 0, receiver=var)
        else:
            c = rng.choice(cluster.accessible)
            b.call(c, rng.randint(0, limit), 0)
    except GenerationFailed:
        _rollback(t, snapshot)
        return False
    if len(t.statements) > cfg.L:
        _rollback(t, snapshot)
        return False
    return True


def insert_statement(t: TestCase, rng: random.Random, cfg: SearchConfig, cluster: TestCluster,
                     max_pos: Optional[int] = None) -> bool:
    """Geometric insertion: the k-th new call is added with probability σ^k."""
    changed = False
    k = 1
    while rng.random() <= cfg.sigma_statement ** k and len(t.statements) < cfg.L:
        if insert_random_call(t, rng, cfg, cluster, max_pos):
            changed = True
            if max_pos is not None:
                max_pos += 1
        k += 1
    return changed


def sample_test_case(rng: random.Random, cfg: SearchConfig, cluster: TestCluster) -> TestCase:
    """Draw r uniformly from [1, L] and insert calls until the case has r statements."""
    t = TestCase()
    r = rng.randint(1, cfg.L)
    attempts = 0
    while len(t.statements) < r and attempts < 10 * r + 10:
        insert_random_call(t, rng, cfg, cluster)
        attempts += 1
    if not t.statements:
        raise GenerationFailed("could not generate any statement")
    return t


# --- removal --------------------------------------------------------------------


def _dstar_ok(case: TestCase, v: Var, before: int) -> bool:
    for s in case.statements[:before]:
        if s.ret is v:
            return isinstance(s, CollectionStatement) and s.kind == "Map" and \
                all(k.type == "Str" for k, _ in s.elements)
    return False


def _uses_as_dstar(s: Statement, v: Var) -> bool:
    return isinstance(s, CallStatement) and any(
        b.var is v and b.mode == "dstar" for b in s.bindings.values())


def remove_statement(t: TestCase, i: int, rng: random.Random) -> TestCase:
    """Delete statement i, rebinding later uses to same-typed values or deleting them."""
    dead = t.statements[i].ret
    del t.statements[i]
    j = i
    while j < len(t.statements):
        s = t.statements[j]
        if dead in s.uses():
            cands = [x.ret for x in t.statements[:j] if x.ret.type == dead.type and dead.type is not None]
            if _uses_as_dstar(s, dead):
                cands = [c for c in cands if _dstar_ok(t, c, j)]
            if cands:
                s.replace(dead, rng.choice(cands))
            else:
                remove_statement(t, j, rng)
                continue
        j += 1
    return t


def _remove_mutation(t: TestCase, rng: random.Random, limit: int) -> bool:
    if not t.statements:
        return False
    p = 1.0 / len(t.statements)
    changed = False
    for s in list(reversed(t.statements[:limit])):
        if rng.random() < p and s in t.statements:
            remove_statement(t, t.statements.index(s), rng)
            changed = True
    return changed


# --- change ---------------------------------------------------------------------


def _normalize_modes(s: CallStatement) -> None:
    keyword = False
    for p in s.callable.params:
        if p.kind != "positional-or-keyword":
            continue
        b = s.bindings.get(p.name)
        if b is None:
            keyword = True
        else:
            b.mode = "keyword" if keyword else "positional"


def _ordered(s: CallStatement) -> None:
    order = {p.name: k for k, p in enumerate(s.callable.params)}
    s.bindings = dict(sorted(s.bindings.items(), key=lambda kv: order[kv[0]]))


def _param_candidates(t: TestCase, i: int, p: ParamInfo, cluster: TestCluster) -> list[Var]:
    before = [s.ret for s in t.statements[:i]]
    if p.kind == "star":
        return [v for v in before if v.type == "List"]
    if p.kind == "dstar":
        return [v for v in before if v.type == "Map" and _dstar_ok(t, v, i)]
    if p.annotation is not None:
        return [v for v in before if v.type == p.annotation]
    return [v for v in before if v.type is not None and v.type != "NoneType"]


def _change_call(t: TestCase, i: int, s: CallStatement, rng: random.Random, cfg: SearchConfig,
                 cluster: TestCluster) -> bool:
    params = list(s.callable.params)
    n = len(params) + (1 if isinstance(s, MethodStatement) else 0)
    changed = False
    if n:
        p_change = 1.0 / n
        if isinstance(s, MethodStatement) and rng.random() < p_change:
            cands = [x.ret for x in t.statements[:i] if x.ret.type == s.receiver.type and x.ret is not s.receiver]
            if cands:
                s.receiver = rng.choice(cands)
                changed = True
        for p in params:
            if rng.random() >= p_change:
                continue
            cands = _param_candidates(t, i, p, cluster)
            mode = {"star": "star", "dstar": "dstar"}.get(p.kind, "positional")
            if p.optional and rng.random() < cfg.omit_optional_probability:
                if p.name in s.bindings:
                    del s.bindings[p.name]
                    changed = True
                elif cands:
                    s.bindings[p.name] = Binding(rng.choice(cands), mode)
                    changed = True
                continue
            if p.kind != "positional-or-keyword":
                if cands:
                    s.bindings[p.name] = Binding(rng.choice(cands), mode)
                    changed = True
                continue
            old = s.bindings.get(p.name)
            if cands and rng.random() >= cfg.none_probability:
                new = rng.choice(cands)
            else:
                new = None
            if old is None or old.var is not new:
                s.bindings[p.name] = Binding(new, mode)
                changed = True
        _ordered(s)
        _normalize_modes(s)
    if not changed:
        changed = _replace_call(t, i, s, rng, cfg, cluster)
    return changed


def _replace_call(t: TestCase, i: int, s: CallStatement, rng: random.Random, cfg: SearchConfig,
                  cluster: TestCluster) -> bool:
    """Swap the call for another callable with the same result type, using only earlier values."""
    rtype = s.ret.type
    cands: list[CallableInfo] = []
    if rtype is not None and rtype != "NoneType" and rtype not in BUILTIN_TYPES:
        cands = [g for g in generators_for_type(cluster, rtype) if isinstance(g, CallableInfo)]
    elif isinstance(s, MethodStatement):
        cands = [m for m in modifiers_for_type(cluster, s.receiver.type)
                 if m.kind == "method" and m.owner == s.receiver.type and m.result_type == rtype]
    cands = [c for c in cands if c is not s.callable]
    rng.shuffle(cands)
    for c in cands:
        receiver = None
        if c.kind == "method":
            recv = [x.ret for x in t.statements[:i] if x.ret.type == c.owner]
            if not recv:
                continue
            receiver = rng.choice(recv)
        bindings: dict = {}
        ok = True
        for p in c.params:
            pc = _param_candidates(t, i, p, cluster)
            if pc:
                mode = {"star": "star", "dstar": "dstar"}.get(p.kind, "positional")
                bindings[p.name] = Binding(rng.choice(pc), mode)
            elif not p.optional:
                ok = False
                break
        if not ok:
            continue
        ret = s.ret
        ret.type = c.result_type
        if c.kind == "method":
            new = MethodStatement(ret, c, bindings, receiver)
        elif c.kind == "constructor":
            new = ConstructorStatement(ret, c, bindings)
        else:
            new = FunctionStatement(ret, c, bindings)
        _normalize_modes(new)
        t.statements[i] = new
        return True
    return False


def _change_collection(t: TestCase, i: int, s: CollectionStatement, rng: random.Random,
                       cfg: SearchConfig) -> bool:
    before = [x.ret for x in t.statements[:i] if x.ret.type not in (None, "NoneType")]
    hashable = [v for v in before if v.type in HASHABLE_TYPES]
    if s.kind == "Tuple":
        if not s.elements:
            return False
        p = 1.0 / len(s.elements)
        changed = False
        for k, old in enumerate(s.elements):
            if rng.random() < p:
                same = [v for v in before if v.type == old.type and v is not old] or \
                    [v for v in before if v is not old]
                if same:
                    s.elements[k] = rng.choice(same)
                    changed = True
        return changed
    if s.kind == "Map":
        def new_entry(old):
            if old is None:
                if not hashable or not before:
                    return None
                return (rng.choice(hashable), rng.choice(before))
            k, v = old
            if rng.random() < 0.5:
                keys = [x for x in hashable if x is not k and (not _map_str_keys(t, s, i) or x.type == "Str")]
                return (rng.choice(keys), v) if keys else None
            vals = [x for x in before if x is not v]
            return (k, rng.choice(vals)) if vals else None
        new = _mutate_sequence(list(s.elements), rng, cfg.sigma_str, new_entry)
        if _map_str_keys(t, s, i):
            new = [e for e in new if e[0].type == "Str"]
    else:
        pool = hashable if s.kind == "Set" else before

        def new_elem(old):
            cands = [v for v in pool if v is not old]
            if old is not None:
                cands = [v for v in cands if v.type == old.type] or cands
            return rng.choice(cands) if cands else None
        new = _mutate_sequence(list(s.elements), rng, cfg.sigma_str, new_elem)
    if len(new) == len(s.elements) and all(a is b for a, b in zip(new, s.elements)):
        return False
    s.elements = new
    return True


def _map_str_keys(t: TestCase, s: CollectionStatement, i: int) -> bool:
    """True if a later statement unpacks this map as keyword arguments."""
    return any(_uses_as_dstar(x, s.ret) for x in t.statements[i + 1:])


def change_statement(t: TestCase, i: int, rng: random.Random, cfg: SearchConfig,
                     cluster: TestCluster) -> TestCase:
    """Apply the kind-specific change rule to statement i."""
    _change_one(t, i, rng, cfg, cluster)
    return t


def _change_one(t: TestCase, i: int, rng: random.Random, cfg: SearchConfig, cluster: TestCluster) -> bool:
    s = t.statements[i]
    if isinstance(s, PrimitiveStatement):
        old = s.value
        mutate_primitive(s, rng, cfg, cluster)
        return s.value != old or type(s.value) is not type(old)
    if isinstance(s, CollectionStatement):
        return _change_collection(t, i, s, rng, cfg)
    if isinstance(s, CallStatement):
        return _change_call(t, i, s, rng, cfg, cluster)
    return False


def _change_mutation(t: TestCase, rng: random.Random, cfg: SearchConfig, cluster: TestCluster,
                     limit: int) -> bool:
    if not t.statements:
        return False
    p = 1.0 / len(t.statements)
    changed = False
    for i in range(min(limit, len(t.statements))):
        if rng.random() < p:
            changed |= _change_one(t, i, rng, cfg, cluster)
    return changed


# --- test-case and test-suite operators -------------------------------------------


MUTATIONS = ("remove", "change", "insert")


def choose_mutation(rng: random.Random) -> str:
    return MUTATIONS[rng.randrange(3)]


def mutate_case(t: TestCase, rng: random.Random, cfg: SearchConfig, cluster: TestCluster,
                last_result=None) -> TestCase:
    """Apply one of remove, change or insert, chosen uniformly.

    If the last execution stopped at statement i, statements after i are
    dropped when the case is at the length limit, and only statements up to
    i are mutated.
    """
    limit = len(t.statements)
    stop = None if last_result is None else last_result.stopped_at
    if stop is not None and stop < len(t.statements):
        if len(t.statements) >= cfg.L:
            del t.statements[stop + 1:]
        limit = stop + 1
    op = choose_mutation(rng)
    if op == "remove":
        changed = _remove_mutation(t, rng, limit)
    elif op == "change":
        changed = _change_mutation(t, rng, cfg, cluster, limit)
    else:
        changed = insert_statement(t, rng, cfg, cluster, max_pos=limit)
    if changed:
        t.last = None
        t.assertions = []
    return t


def mutate_suite(T: TestSuite, rng: random.Random, cfg: SearchConfig, cluster: TestCluster) -> TestSuite:
    """Mutate each case with probability 1/|T|, drop empty cases, then add new ones geometrically."""
    if T.cases:
        p = 1.0 / len(T.cases)
        for c in T.cases:
            if rng.random() < p:
                mutate_case(c, rng, cfg, cluster, c.last[0] if c.last else None)
        T.cases = [c for c in T.cases if c.statements]
    k = 1
    while rng.random() <= cfg.sigma_testcase ** k and len(T.cases) < cfg.N:
        try:
            T.cases.append(sample_test_case(rng, cfg, cluster))
        except GenerationFailed:
            break
        k += 1
    return T


def crossover_suites(p1: TestSuite, p2: TestSuite, rng: random.Random,
                     alpha: Optional[float] = None) -> tuple[TestSuite, TestSuite]:
    """Single-point relative crossover; the cases themselves are cloned."""
    if alpha is None:
        alpha = rng.random()
    a = math.floor(alpha * len(p1.cases))
    b = math.floor(alpha * len(p2.cases))
    o1 = TestSuite([c.clone() for c in p1.cases[:a] + p2.cases[b:]])
    o2 = TestSuite([c.clone() for c in p2.cases[:b] + p1.cases[a:]])
    return o1, o2


def _splice(head: TestCase, tail: list, rng: random.Random, cfg: SearchConfig,
            cluster: TestCluster) -> TestCase:
    """Append clones of ``tail`` to a clone of ``head``, repairing dangling references."""
    out = head.clone()
    b = StatementBuilder(out, rng, cfg, cluster)
    mapping: dict = {}
    for s in tail:
        new = s.clone(mapping)
        missing = [v for v in dict.fromkeys(new.uses()) if all(x.ret is not v for x in out.statements)]
        for v in missing:
            cands = b.available(len(out.statements), v.type)
            if _uses_as_dstar(new, v):
                cands = [c for c in cands if _dstar_ok(out, c, len(out.statements))]
            if cands and rng.random() < b.reuse_probability(v.type):
                repl = rng.choice(cands)
            else:
                if v.type is None:
                    raise RepairFailed("unknown type")
                try:
                    if _uses_as_dstar(new, v):
                        repl, _ = b.collection("Map", len(out.statements), 0, str_keys=True)
                    else:
                        repl, _ = b.create(v.type, len(out.statements), 0)
                except GenerationFailed as e:
                    raise RepairFailed(str(e)) from None
                if repl is None:
                    raise RepairFailed("cannot bind None")
            new.replace(v, repl)
        out.statements.append(new)
    if len(out.statements) > cfg.L:
        raise RepairFailed("offspring too long")
    return out


def crossover_cases(p1: TestCase, p2: TestCase, rng: random.Random, cluster: TestCluster,
                    cfg: Optional[SearchConfig] = None, alpha: Optional[float] = None) -> tuple[TestCase, TestCase]:
    """Exchange the tails of both parents at the same relative point."""
    cfg = cfg or SearchConfig()
    if alpha is None:
        alpha = rng.random()
    a = math.floor(alpha * len(p1.statements))
    b = math.floor(alpha * len(p2.statements))
    out = []
    for head, hlen, tail, parent in ((p1, a, p2.statements[b:], p1), (p2, b, p1.statements[a:], p2)):
        h = TestCase(head.statements[:hlen])
        try:
            child = _splice(h, tail, rng, cfg, cluster)
            if validate_test_case(child, cfg.L):
                raise RepairFailed("invalid offspring")
        except RepairFailed:
            child = parent.clone()
        out.append(child)
    return out[0], out[1]
