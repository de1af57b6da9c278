import itertools

from hypothesis import strategies as st

from vthamilton.generators import gen_circulant
from vthamilton.graph import is_connected, make_graph


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return make_graph(n, [e for e, keep in zip(pairs, chosen) if keep])


@st.composite
def connected_circulants(draw, max_n=15):
    n = draw(st.sampled_from(range(5, max_n + 1, 2)))
    steps = draw(st.sets(st.integers(1, n // 2), min_size=1))
    g = gen_circulant(n, steps)
    if not is_connected(g):
        g = gen_circulant(n, steps | {1})
    return g
