"""Estimates, error metrics, the certified bound, and result CSV files."""

import numpy as np
import pytest

from graphcoreset import (
    CostVector,
    ExperimentResult,
    Graph,
    GraphFunction,
    avg_shortest_path_estimate,
    avg_shortest_path_true,
    bound_check,
    cost_report,
    error_metric,
    estimate_mean,
    eta_diagnostic,
    generate_random_graph,
    lazy_walk_matrix,
    normalized_columns,
    random_sampling,
    results_from_csv,
    results_to_csv,
    source_average_distances,
    synthesize_smooth_function,
)
from graphcoreset.selection import SelectionConfig, select_coreset


class FakeCoreset:
    def __init__(self, indices, weights):
        self.indices = indices
        self.weights = weights


def complete_graph(n: int) -> Graph:
    iu, iv = np.triu_indices(n, k=1)
    return Graph(n, np.column_stack([iu, iv]), np.ones(len(iu)))


# ---------------------------------------------------------------------------
# estimates


def test_estimate_mean_dot_oracle():
    f = GraphFunction(np.array([2.0, -1.0, 4.0, 0.5]))
    cs = FakeCoreset([2, 0], [0.25, 0.5])
    assert estimate_mean(f, cs) == 0.25 * 4.0 + 0.5 * 2.0
    assert estimate_mean(f, FakeCoreset([], [])) == 0.0
    with pytest.raises(ValueError):
        estimate_mean(f, FakeCoreset([0, 1], [1.0]))


def test_estimate_mean_full_support_recovers_mean():
    values = np.random.default_rng(0).standard_normal(16)
    f = GraphFunction(values)
    cs = FakeCoreset(list(range(16)), np.full(16, 1.0 / 16.0))
    assert estimate_mean(f, cs) == pytest.approx(f.mean(), abs=1e-14)


def test_error_metric_and_order_invariance():
    f = GraphFunction(np.arange(8, dtype=float))
    a = FakeCoreset([1, 5, 6], [0.2, 0.3, 0.5])
    b = FakeCoreset([6, 1, 5], [0.5, 0.2, 0.3])
    err_a, abs_a = error_metric(f, a)
    err_b, abs_b = error_metric(f, b)
    assert abs(abs_a - abs_b) < 1e-12
    assert err_a == pytest.approx(abs_a ** 2, abs=1e-15)
    assert abs_a == pytest.approx(abs(f.mean() - estimate_mean(f, a)), abs=1e-15)


# ---------------------------------------------------------------------------
# shortest-path statistics


def test_avg_distance_path3(path3):
    # per-vertex averages (1, 2/3, 1); global mean 8/9
    avgs = source_average_distances(path3, np.arange(3))
    assert np.allclose(avgs, [1.0, 2.0 / 3.0, 1.0], atol=1e-15)
    assert avg_shortest_path_true(path3) == pytest.approx(8.0 / 9.0, abs=1e-14)


def test_avg_distance_complete_graph():
    g = complete_graph(7)
    assert avg_shortest_path_true(g) == pytest.approx(6.0 / 7.0, abs=1e-14)


def test_avg_distance_estimate_uses_weights(path3):
    cs = FakeCoreset([1], [1.0])
    assert avg_shortest_path_estimate(path3, cs) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert avg_shortest_path_estimate(path3, FakeCoreset([], [])) == 0.0


def test_source_average_distances_floyd_warshall_oracle():
    g = generate_random_graph(50, 0.08, seed=3, on_trivial="retry")
    weights = np.random.default_rng(2).choice([0.5, 1.0, 2.0], size=g.m)
    wg = Graph(g.n, g.edges, weights)
    n = wg.n
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for (u, v), w in zip(wg.edges, wg.weights):
        dist[u, v] = dist[v, u] = w
    for m in range(n):
        dist = np.minimum(dist, dist[:, m:m + 1] + dist[m:m + 1, :])
    assert np.allclose(source_average_distances(wg, np.arange(n)),
                       dist.mean(axis=1), atol=1e-9)


def test_disconnected_pair_is_reported():
    g = Graph(4, np.array([[0, 1], [2, 3]]), np.ones(2))
    with pytest.raises(ValueError, match="no path between"):
        source_average_distances(g, np.arange(4))


# ---------------------------------------------------------------------------
# certified bound and slack diagnostic


def test_bound_zero_function(two_triangles):
    walk = lazy_walk_matrix(two_triangles)
    cols = normalized_columns(walk, 1)
    f = synthesize_smooth_function(walk, 0.3, coefficients=np.zeros(3))
    lhs, rhs, holds = bound_check(f, 0.3, 1, FakeCoreset([0], [1.0]), cols)
    assert lhs == 0.0 and rhs == 0.0 and holds


def test_bound_formula_and_validation(two_triangles):
    walk = lazy_walk_matrix(two_triangles)
    ell = 2
    cols = normalized_columns(walk, ell)
    f = synthesize_smooth_function(walk, 0.4, seed=1)
    out = select_coreset(cols, CostVector.zeros(6), SelectionConfig(budget=3, ell=ell))
    lhs, rhs, holds = bound_check(f, 0.4, ell, out, cols)
    # recompute the certificate by hand
    row = np.zeros(6)
    row[np.array(out.indices)] = out.weights
    mixed = cols.matrix @ row
    norm = float(np.linalg.norm(f.coefficients))
    expect = norm / 0.4 ** ell * float(np.linalg.norm(mixed - 1.0 / 6.0))
    assert rhs == pytest.approx(expect, abs=1e-12)
    assert lhs == pytest.approx(abs(f.mean() - estimate_mean(f, out)), abs=1e-15)
    with pytest.raises(ValueError):
        bound_check(f, 0.4, ell + 1, out, cols)  # power mismatch
    with pytest.raises(ValueError):
        bound_check(f, 1.0, ell, out, cols)


def test_bound_holds_for_real_selections():
    for seed in range(5):
        g = generate_random_graph(60, 0.1, seed=seed, on_trivial="retry")
        walk = lazy_walk_matrix(g)
        cols = normalized_columns(walk, 2)
        f = synthesize_smooth_function(walk, 0.5, seed=seed + 10)
        out = select_coreset(cols, CostVector.zeros(g.n),
                             SelectionConfig(budget=8, ell=2))
        lhs, rhs, holds = bound_check(f, 0.5, 2, out, cols)
        assert holds and lhs <= rhs + 1e-9


def test_eta_complete_graph_closed_form():
    """K_n columns all share alignment sqrt((n-1)/n), so eta = 1/sqrt(n)."""
    cols = normalized_columns(lazy_walk_matrix(complete_graph(4)), 1)
    assert eta_diagnostic(cols, 1.0) == pytest.approx(0.5, abs=1e-12)
    small_kappa = eta_diagnostic(cols, 1e-6)
    assert small_kappa == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        eta_diagnostic(cols, 0.0)
    with pytest.raises(ValueError):
        eta_diagnostic(cols, 1.1)


def test_eta_brute_force(two_triangles):
    cols = normalized_columns(lazy_walk_matrix(two_triangles), 2)
    best = max(cols.column(i) @ cols.target for i in range(6))
    kappa = 0.8
    expect = np.sqrt(1.0 - (kappa * best) ** 2)
    assert eta_diagnostic(cols, kappa) == pytest.approx(expect, abs=1e-12)


def test_cost_report():
    costs = CostVector(np.array([1.0, 2.0, 4.0, 8.0]))
    report = cost_report(FakeCoreset([0, 1], [0.5, 0.5]),
                         FakeCoreset([2, 3], [0.5, 0.5]), costs)
    assert report.c_cso == 3.0
    assert report.c_cos == 12.0


# ---------------------------------------------------------------------------
# result CSV


def test_results_csv_round_trip(tmp_path):
    rows = [
        ExperimentResult("scgiga", 5, 1.25e-3, 0.03536, 2.5, bound_rhs=0.125),
        ExperimentResult("random", 5, 4e-2, 0.2, 0.0, bound_rhs=None, runtime_ms=99.0),
    ]
    path = str(tmp_path / "r.csv")
    results_to_csv(rows, path)
    text = open(path).read().splitlines()
    assert text[0] == "method,K,err,abs_err,cost,bound_rhs,runtime_ms"
    assert text[2].endswith(",,")  # blank bound and runtime for the random row
    back = results_from_csv(path)
    assert [r.method for r in back] == ["scgiga", "random"]
    assert back[0].err == rows[0].err
    assert back[0].bound_rhs == 0.125
    assert back[1].bound_rhs is None
    assert back[1].runtime_ms == 0.0  # runtimes never persist
