import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from hypothesis import strategies as st  # noqa: E402

from infoshare.instances import gen_friends_enemies  # noqa: E402
from infoshare.model import Network  # noqa: E402


@st.composite
def fe_instances(draw, n_min=1, n_max=7):
    """Symmetric {-inf, 1} instances."""
    n = draw(st.integers(n_min, n_max))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return gen_friends_enemies(n, [p for p, m in zip(pairs, mask) if m])


@st.composite
def networks(draw, n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Network(n, frozenset(p for p, m in zip(pairs, mask) if m))


@st.composite
def fe_with_network(draw, n_min=1, n_max=6):
    inst = draw(fe_instances(n_min, n_max))
    return inst, draw(networks(inst.n))


@st.composite
def general_instances(draw, n_min=1, n_max=5, values=(float("-inf"), -2, -1, 0, 1, 2, 5)):
    """Arbitrary (possibly asymmetric) utility tables over a small value set."""
    from infoshare.model import Instance

    n = draw(st.integers(n_min, n_max))
    symmetric = draw(st.booleans())
    u = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a = draw(st.sampled_from(values))
            b = a if symmetric else draw(st.sampled_from(values))
            u[i][j], u[j][i] = a, b
    return Instance(n, u, symmetric)
