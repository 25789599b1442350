import numpy as np
import pytest

from difflms.graph import Graph, build_graph

# every labeled connected graph on 1..3 nodes
SMALL_CONNECTED = [
    (1, []),
    (2, [(0, 1)]),
    (3, [(0, 1), (0, 2)]),
    (3, [(0, 1), (1, 2)]),
    (3, [(0, 2), (1, 2)]),
    (3, [(0, 1), (0, 2), (1, 2)]),
]


@pytest.fixture
def path3() -> Graph:
    return build_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def k4() -> Graph:
    return build_graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


def random_connected_graph(index: int, max_nodes: int = 25) -> Graph:
    """Deterministic stream of varied connected test graphs."""
    from difflms.graph import random_geometric_graph

    n = index % max_nodes + 1
    radius = 0.45 + 0.08 * (index % 8)
    return random_geometric_graph(n, radius, rng_seed=1000 + index)


def sample_arrays(graph_n: int, m: int, n_iterations: int, seed: int,
                  omega0: np.ndarray, input_profile, noise_profile):
    """Draw the (T, N, M) regressors and (T, N) observations one trajectory uses."""
    from difflms.signal_model import draw_samples, node_stream

    x = np.empty((n_iterations, graph_n, m), dtype=complex)
    d = np.empty((n_iterations, graph_n), dtype=complex)
    for k in range(graph_n):
        xk, dk = draw_samples(k, omega0, input_profile, noise_profile,
                              node_stream(seed, k), n_iterations)
        x[:, k, :] = xk
        d[:, k] = dk
    return x, d
