"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines stream.
The three benchmark scenarios (20 nodes, filter length 5, Metropolis weights,
100 paired runs) execute once in a shared fixture; the CLI determinism check
re-runs them end to end.
"""
import numpy as np
import pytest

import scalar_oracle
from difflms.algorithms import run_trajectory
from difflms.cli import main
from difflms.combiners import (identity, laplacian, metropolis,
                               relative_degree, uniform, validate)
from difflms.experiment import benchmark_scenarios, run_experiment, scenario_name
from difflms.graph import build_graph, random_geometric_graph
from difflms.metrics import cost_report, steady_state_mse_db
from difflms.signal_model import random_parameter, variance_profiles

from conftest import SMALL_CONNECTED, random_connected_graph, sample_arrays

RATIO_LIMIT = 0.75
FLOOR_MARGIN_DB = 1.0


def report(criterion: str, passed: bool, detail: str) -> None:
    print(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    assert passed, f"{criterion}: {detail}"


@pytest.fixture(scope="module")
def scenario_results():
    return {scenario_name(cfg): run_experiment(cfg) for cfg in benchmark_scenarios()}


def _iteration_ratio(result):
    it_atc = result.iterations_to_threshold["atc"]
    it_si = result.iterations_to_threshold["silms"]
    assert it_atc is not None and it_si is not None, "threshold never reached"
    return it_si, it_atc, it_si / it_atc


def test_1_convergence_speed_equal_variances(scenario_results):
    result = scenario_results["equal_mu0p01"]
    it_si, it_atc, ratio = _iteration_ratio(result)
    report("criterion 1 (convergence speedup, equal variances)",
           ratio <= RATIO_LIMIT,
           f"silms {it_si} vs atc {it_atc} iterations to -20 dB MSD "
           f"(ratio {ratio:.3f} <= {RATIO_LIMIT})")


def test_2_convergence_speed_varying_variances(scenario_results):
    details = []
    ok = True
    for name in ("varying_mu0p01", "varying_mu0p05"):
        it_si, it_atc, ratio = _iteration_ratio(scenario_results[name])
        ok &= ratio <= RATIO_LIMIT
        details.append(f"{name}: {it_si}/{it_atc} ratio {ratio:.3f}")
    report("criterion 2 (speedup consistent across scenarios)", ok,
           "; ".join(details) + f" (limit {RATIO_LIMIT})")


def test_3_steady_state_not_degraded(scenario_results):
    details = []
    ok = True
    for name, result in scenario_results.items():
        floor_si = steady_state_mse_db(result.curves["silms"])
        floor_atc = steady_state_mse_db(result.curves["atc"])
        ok &= floor_si <= floor_atc + FLOOR_MARGIN_DB
        details.append(f"{name}: silms {floor_si:.2f} dB vs atc {floor_atc:.2f} dB")
    report("criterion 3 (steady-state MSE within 1 dB)", ok, "; ".join(details))


def test_4_oracle_equivalence():
    n_iter = 10
    worst = 0.0
    for n_nodes, edges in SMALL_CONNECTED:
        g = build_graph(n_nodes, edges)
        c = metropolis(g)
        omega0 = random_parameter(1, rng_seed=31)
        ip, npr = variance_profiles(n_nodes, "varying", rng_seed=13)
        seed = 500 + n_nodes
        x, d = sample_arrays(n_nodes, 1, n_iter, seed, omega0, ip, npr)
        for algorithm in ("atc", "cta", "silms"):
            t = run_trajectory(algorithm, g, c, c, 0.08, omega0, ip, npr,
                               n_iter, rng_seed=seed)
            ref = scalar_oracle.trajectory(
                algorithm, n_nodes, [list(m) for m in g.members],
                c.weights.tolist(), c.weights.tolist(), [0.08] * n_nodes,
                [[complex(x[t_, k, 0]) for k in range(n_nodes)] for t_ in range(n_iter)],
                [[complex(d[t_, k]) for k in range(n_nodes)] for t_ in range(n_iter)])
            ref_arr = np.array(ref)[:, :, None]
            scale = max(1.0, float(np.max(np.abs(ref_arr))))
            worst = max(worst, float(np.max(np.abs(t.states - ref_arr))) / scale)
    report("criterion 4 (direct-transcription oracle, N<=3, M=1)",
           worst <= 1e-12,
           f"max relative deviation {worst:.2e} over "
           f"{len(SMALL_CONNECTED)} graphs x 3 algorithms x {n_iter} iterations")


def test_5_serial_reduces_to_atc_bitwise():
    n_cases = 50
    mismatches = 0
    for i in range(n_cases):
        n = i % 10 + 1
        g = random_geometric_graph(n, 0.6 + 0.05 * (i % 5), rng_seed=2000 + i)
        a = metropolis(g)
        omega0 = random_parameter(4, rng_seed=i)
        ip, npr = variance_profiles(n, "varying", rng_seed=i)
        atc = run_trajectory("atc", g, a, None, 0.05, omega0, ip, npr, 5,
                             rng_seed=3000 + i)
        si = run_trajectory("silms", g, identity(n), a, 0.05, omega0, ip, npr, 5,
                            rng_seed=3000 + i)
        same = (np.array_equal(atc.states, si.states)
                and np.array_equal(atc.mse, si.mse)
                and np.array_equal(atc.msd, si.msd))
        mismatches += not same
    report("criterion 5 (identity pre-combiner == ATC, bitwise)",
           mismatches == 0, f"{n_cases - mismatches}/{n_cases} cases bit-identical")


def test_6_combiner_validity():
    n_graphs = 100
    failures = []
    col_sum_worst = 0.0
    for i in range(n_graphs):
        g = random_connected_graph(i, max_nodes=25)
        for name, matrix in (("metropolis", metropolis(g)),
                             ("uniform", uniform(g)),
                             ("relative_degree", relative_degree(g)),
                             ("laplacian", laplacian(g))):
            if validate(matrix, g) is not None:
                failures.append((i, name))
        col_sums = metropolis(g).weights.sum(axis=0)
        col_sum_worst = max(col_sum_worst, float(np.max(np.abs(col_sums - 1.0))))
    report("criterion 6 (combiner validity on random graphs)",
           not failures and col_sum_worst <= 1e-12,
           f"4 rules x {n_graphs} graphs valid; metropolis max column-sum "
           f"error {col_sum_worst:.2e}")


def test_7_cost_accounting():
    k3 = build_graph(3, [(0, 1), (0, 2), (1, 2)])
    base = cost_report("silms", k3, 5)
    doubled = cost_report("silms", k3, 10)
    atc = cost_report("atc", k3, 5)
    ok = (base.extra_multiplications == 45
          and base.extra_additions == 45
          and base.extra_transmissions == 6
          and doubled.extra_multiplications == 90
          and doubled.extra_additions == 90
          and doubled.extra_transmissions == 6
          and atc == cost_report("cta", k3, 5) == cost_report("nocoop", k3, 5)
          and atc.extra_multiplications == atc.extra_transmissions == 0)
    report("criterion 7 (cost accounting)", ok,
           f"K3/M=5 extras: {base.extra_multiplications} mult, "
           f"{base.extra_additions} add, {base.extra_transmissions} sends; "
           f"linear in M; baselines zero")


def test_8_cli_scenarios_deterministic(tmp_path):
    out1 = tmp_path / "first"
    out2 = tmp_path / "second"
    assert main(["scenarios", "--out", str(out1)]) == 0
    assert main(["scenarios", "--out", str(out2)]) == 0
    compared = 0
    diffs = []
    for path1 in sorted(out1.rglob("*")):
        if path1.is_dir() or path1.suffix == ".png":
            continue
        path2 = out2 / path1.relative_to(out1)
        compared += 1
        if path1.read_bytes() != path2.read_bytes():
            diffs.append(str(path1.relative_to(out1)))
    report("criterion 8 (scenario CLI byte-determinism)",
           compared > 0 and not diffs,
           f"{compared} files byte-identical across two runs"
           + (f"; diffs: {diffs}" if diffs else ""))
