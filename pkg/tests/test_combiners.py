import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from difflms.combiners import (CombinationMatrix, build_rule, identity,
                               laplacian, metropolis, relative_degree,
                               to_csv_text, uniform, validate)
from difflms.graph import build_graph

from conftest import random_connected_graph

RULE_BUILDERS = {
    "metropolis": metropolis,
    "uniform": uniform,
    "relative_degree": relative_degree,
    "laplacian": laplacian,
}

SINGLE = build_graph(1, [])
K3 = build_graph(3, [(0, 1), (0, 2), (1, 2)])


class TestMetropolis:
    def test_path3_values(self, path3):
        w = metropolis(path3).weights
        # neighborhood sizes: 2, 3, 2
        assert w[0, 1] == pytest.approx(1 / 3)
        assert w[0, 0] == pytest.approx(2 / 3)
        assert w[1, 0] == w[1, 2] == pytest.approx(1 / 3)
        assert w[1, 1] == pytest.approx(1 / 3)
        assert w[0, 2] == w[2, 0] == 0.0

    def test_single_node(self):
        assert np.array_equal(metropolis(SINGLE).weights, [[1.0]])

    def test_k3_uniform_by_symmetry(self):
        assert np.allclose(metropolis(K3).weights, 1 / 3)

    def test_doubly_stochastic_and_symmetric(self, path3):
        w = metropolis(path3).weights
        assert np.allclose(w, w.T)
        assert np.allclose(w.sum(axis=0), 1.0, atol=1e-12)


class TestUniform:
    def test_path3_center_row(self, path3):
        assert np.allclose(uniform(path3).weights[1], [1 / 3, 1 / 3, 1 / 3])

    def test_single_node(self):
        assert np.array_equal(uniform(SINGLE).weights, [[1.0]])

    def test_star_center(self):
        star = build_graph(4, [(0, 1), (0, 2), (0, 3)])
        assert np.allclose(uniform(star).weights[0], 0.25)


class TestRelativeDegree:
    def test_path3_end_row(self, path3):
        # neighborhood sizes along the path: (2, 3, 2); row 0 mixes nodes 0 and 1
        assert np.allclose(relative_degree(path3).weights[0], [2 / 5, 3 / 5, 0.0])

    def test_single_node(self):
        assert np.array_equal(relative_degree(SINGLE).weights, [[1.0]])

    def test_k3_equal_degrees(self):
        assert np.allclose(relative_degree(K3).weights, 1 / 3)


class TestLaplacian:
    def test_single_node(self):
        assert np.array_equal(laplacian(SINGLE).weights, [[1.0]])

    def test_path3_kappa1(self, path3):
        expected = [[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]]
        assert np.allclose(laplacian(path3, kappa=1.0).weights, expected)

    def test_k2_kappa1(self):
        k2 = build_graph(2, [(0, 1)])
        assert np.allclose(laplacian(k2, kappa=1.0).weights, [[0.0, 1.0], [1.0, 0.0]])

    def test_kappa_validated(self, path3):
        with pytest.raises(ValueError):
            laplacian(path3, kappa=0.0)
        with pytest.raises(ValueError):
            laplacian(path3, kappa=1.5)


class TestIdentity:
    @pytest.mark.parametrize("n", [1, 3])
    def test_identity(self, n):
        assert np.array_equal(identity(n).weights, np.eye(n))


class TestValidate:
    def test_all_rules_ok(self, path3):
        for name, builder in RULE_BUILDERS.items():
            assert validate(builder(path3), path3) is None, name

    def test_support_violation(self, path3):
        w = metropolis(path3).weights.copy()
        w[0, 2] = 0.1
        w[0, 0] -= 0.1
        bad = validate(CombinationMatrix(w, "metropolis"), path3)
        assert bad is not None and bad.kind == "support" and (bad.row, bad.col) == (0, 2)

    def test_row_sum_violation(self, path3):
        w = metropolis(path3).weights.copy()
        w[1, 1] -= 0.1
        bad = validate(CombinationMatrix(w, "metropolis"), path3)
        assert bad is not None and bad.kind == "row_sum" and bad.row == 1
        assert bad.value == pytest.approx(0.9)

    def test_negative_violation(self, path3):
        w = metropolis(path3).weights.copy()
        w[2, 1] = -w[2, 1]
        bad = validate(CombinationMatrix(w, "metropolis"), path3)
        assert bad is not None and bad.kind == "negative"

    def test_shape_violation(self, path3):
        bad = validate(CombinationMatrix(np.eye(2), "identity"), path3)
        assert bad is not None and bad.kind == "shape"


@settings(max_examples=40, deadline=None)
@given(index=st.integers(min_value=0, max_value=10_000))
def test_rules_valid_on_random_graphs(index):
    g = random_connected_graph(index, max_nodes=25)
    for name, builder in RULE_BUILDERS.items():
        m = builder(g)
        assert validate(m, g) is None, f"{name} invalid on graph {index}"
        assert np.all(m.weights >= 0)
    w = metropolis(g).weights
    assert np.allclose(w, w.T)
    assert np.max(np.abs(w.sum(axis=0) - 1.0)) <= 1e-12


def test_complete_graph_permutation_invariant():
    # on K_N every rule must be invariant under node relabeling
    n = 5
    kn = build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    perm = np.array([3, 0, 4, 1, 2])
    p = np.eye(n)[perm]
    for builder in RULE_BUILDERS.values():
        w = builder(kn).weights
        assert np.allclose(p @ w @ p.T, w)


def test_build_rule_dispatch_and_unknown(path3):
    assert build_rule("metropolis", path3).rule_name == "metropolis"
    assert build_rule("identity", path3).rule_name == "identity"
    with pytest.raises(ValueError, match="valid rules"):
        build_rule("magic", path3)


def test_csv_export_round_trips(path3):
    m = metropolis(path3)
    text = to_csv_text(m)
    rows = [[float(v) for v in line.split(",")] for line in text.strip().splitlines()]
    assert np.array_equal(np.array(rows), m.weights)  # 17 digits round-trips exactly
