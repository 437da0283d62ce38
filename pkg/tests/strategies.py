"""Value generators shared by the property tests and the acceptance suite."""
import math
import random

from hypothesis import strategies as st

from sbgen.executor.values import MSet

OPS = ("==", "!=", "<", "<=", ">", ">=", "in", "not in", "is", "is not")

scalars = st.one_of(
    st.none(), st.booleans(), st.integers(-50, 50), st.integers(),
    st.floats(allow_nan=True, allow_infinity=True), st.text(max_size=6), st.binary(max_size=6),
)
hashables = st.one_of(st.none(), st.booleans(), st.integers(-20, 20), st.text(max_size=3))
values = st.one_of(
    scalars,
    st.lists(scalars, max_size=4),
    st.lists(scalars, max_size=4).map(tuple),
    st.lists(hashables, max_size=4).map(MSet),
    st.dictionaries(hashables, scalars, max_size=3),
)


def random_value(rng: random.Random, depth: int = 0):
    """Plain-``random`` counterpart of ``values`` for large batches."""
    k = rng.randrange(12 if depth == 0 else 8)
    if k == 0:
        return None
    if k == 1:
        return rng.random() < 0.5
    if k == 2:
        return rng.randint(-5, 5)
    if k == 3:
        return rng.randint(-10**6, 10**6)
    if k == 4:
        return rng.choice([rng.uniform(-100, 100), 0.0, -0.0, math.inf, -math.inf, math.nan, 1e308, 5e-324])
    if k == 5:
        return "".join(rng.choice("abc") for _ in range(rng.randrange(5)))
    if k == 6:
        return bytes(rng.randrange(3) for _ in range(rng.randrange(5)))
    if k == 7:
        return rng.randint(-5, 5) + 0.5
    n = rng.randrange(4)
    if k == 8:
        return [random_value(rng, 1) for _ in range(n)]
    if k == 9:
        return tuple(random_value(rng, 1) for _ in range(n))
    if k == 10:
        return MSet(rng.choice([None, True, rng.randint(-3, 3), "a", "b"]) for _ in range(n))
    return {rng.choice(["a", "b", 1, 2]): random_value(rng, 1) for _ in range(n)}
