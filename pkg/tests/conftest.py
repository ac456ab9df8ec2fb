import numpy as np
import pytest

import gumbelpath as gp


@pytest.fixture
def diamond():
    """Four nodes, two paths; weights make path (1,2,4) carry score 2."""
    dag = gp.build_dag(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
    return dag, np.array([1.0, 0.0, 1.0, 0.0])


@pytest.fixture
def flat_diamond():
    dag = gp.build_dag(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
    return dag, np.zeros(4)


@pytest.fixture
def chain3():
    dag = gp.build_dag(3, [(1, 2), (2, 3)])
    return dag, np.array([0.5, 0.25])


def random_case(seed: int, num_nodes: int | None = None, p: float | None = None):
    """Deterministic random graph + weights, used all over the suite."""
    rng = np.random.default_rng(seed)
    n = num_nodes if num_nodes is not None else int(rng.integers(5, 13))
    prob = p if p is not None else float(rng.uniform(0.3, 0.7))
    dag = gp.random_dag(n, prob, seed)
    w = np.random.default_rng(seed + 10_000).normal(size=dag.num_edges)
    return dag, w


@pytest.fixture
def random_case_factory():
    return random_case
