"""Experiment harness: the comparison studies behind the library.

Each experiment family gets a frozen config dataclass and a runner that
returns median-aggregated ExperimentResult rows (plus a cost report when the
run is cost-aware). Runners are deterministic given their config: every
random draw flows through seeds derived from the config's seed list, so a
rerun reproduces the same rows bit for bit. The CLI feeds configs from JSON
files; tests call the runners directly.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .baselines import (
    betweenness_coreset,
    kmeans_coreset,
    random_sampling,
    spectral_clustering_coreset,
)
from .evaluate import (
    CostReport,
    ExperimentResult,
    cost_report,
    error_metric,
    results_to_csv,
    source_average_distances,
)
from .graphs import (
    CostVector,
    Graph,
    PointCloud,
    build_knn_kernel_graph,
    generate_gaussian_mixture,
    generate_powerlaw_tree,
    generate_random_graph,
    generate_sbm,
    load_edge_list,
    sample_costs_uniform,
)
from .selection import SelectionConfig, select_coreset_grid
from .spectral import GraphFunction, lazy_walk_matrix, normalized_columns, top_eigenvectors
from ._util import atomic_write_text, thread_count


def _map_seeds(work, seeds):
    """Run work(seed) for each seed, optionally threaded, order preserved."""
    workers = min(thread_count(), len(seeds))
    if workers <= 1:
        return [work(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, seeds))


def _median_rows(per_seed: list[dict], methods, k_grid, costs_by_method=None) -> list[ExperimentResult]:
    """Aggregate per-seed error dicts {(method, K): err} into median rows."""
    rows = []
    for method in methods:
        for K in k_grid:
            errs = np.array([seed_row[(method, K)] for seed_row in per_seed])
            err = float(np.median(errs))
            cost = 0.0
            if costs_by_method and method in costs_by_method:
                cost = float(np.median([c[K] for c in costs_by_method[method]]))
            rows.append(ExperimentResult(method=method, K=K, err=err,
                                         abs_err=float(np.sqrt(err)), coreset_cost=cost))
    return rows


# ---------------------------------------------------------------------------
# cluster-indicator: Gaussian mixture, kNN kernel graph, indicator mean


@dataclass(frozen=True)
class ClusterIndicatorConfig:
    n: int = 10000
    component_means: tuple = ((1.0, -3.0), (-3.0, 2.0), (3.0, 0.0))
    component_fractions: tuple = (0.2, 0.3, 0.5)
    covariance_scale: float = 1.0
    k_neighbors: int = 10
    bandwidth: float = 1.0
    kappa: float = 0.8
    ell: int = 1
    indicator_component: int = 0
    k_grid: tuple = (2, 4, 6, 8, 10, 12, 14)
    seeds: tuple = tuple(range(10))
    cost_seed_offset: int = 500


def run_cluster_indicator(config: ClusterIndicatorConfig) -> tuple[list[ExperimentResult], CostReport]:
    """Indicator-mean estimation on the mixture's kNN graph.

    scgiga runs cost-free at kappa=1; scgiga-cost reruns the same selection
    with kappa<1 against uniform random costs. kmeans clusters the raw
    point cloud; spectral and random work on the graph.
    """
    k_max = max(config.k_grid)
    methods = ("scgiga", "scgiga-cost", "random", "kmeans", "spectral")

    def one_seed(seed: int):
        cloud = generate_gaussian_mixture(
            config.component_means, config.component_fractions,
            config.covariance_scale, config.n, seed=seed)
        graph = build_knn_kernel_graph(cloud, config.k_neighbors, config.bandwidth)
        walk = lazy_walk_matrix(graph)
        columns = normalized_columns(walk, config.ell)
        costs = sample_costs_uniform(config.n, seed=seed + config.cost_seed_offset)
        f = GraphFunction((np.asarray(cloud.labels) == config.indicator_component).astype(float))
        free = select_coreset_grid(columns, costs,
                                   SelectionConfig(budget=k_max, kappa=1.0, ell=config.ell),
                                   config.k_grid)
        aware = select_coreset_grid(columns, costs,
                                    SelectionConfig(budget=k_max, kappa=config.kappa, ell=config.ell),
                                    config.k_grid)
        basis = top_eigenvectors(walk, k_max)
        row, cost_row = {}, {"scgiga": {}, "scgiga-cost": {}}
        for K in config.k_grid:
            row[("scgiga", K)] = error_metric(f, free[K])[0]
            row[("scgiga-cost", K)] = error_metric(f, aware[K])[0]
            row[("random", K)] = error_metric(f, random_sampling(config.n, K, seed * 1000 + K))[0]
            row[("kmeans", K)] = error_metric(f, kmeans_coreset(cloud, K, seed * 131 + K))[0]
            row[("spectral", K)] = error_metric(
                f, spectral_clustering_coreset(graph, K, seed * 55 + K, basis=basis))[0]
            cost_row["scgiga"][K] = free[K].total_cost
            cost_row["scgiga-cost"][K] = aware[K].total_cost
        report = cost_report(aware[k_max], free[k_max], costs)
        return row, cost_row, report

    outcomes = _map_seeds(one_seed, config.seeds)
    per_seed = [o[0] for o in outcomes]
    costs_by_method = {m: [o[1][m] for o in outcomes] for m in ("scgiga", "scgiga-cost")}
    reports = [o[2] for o in outcomes]
    rows = _median_rows(per_seed, methods, config.k_grid, costs_by_method)
    combined = CostReport(c_cso=float(np.median([r.c_cso for r in reports])),
                          c_cos=float(np.median([r.c_cos for r in reports])))
    return rows, combined


# ---------------------------------------------------------------------------
# sbm-indicator: planted three-block graph, small-block indicator


@dataclass(frozen=True)
class SbmIndicatorConfig:
    n: int = 1000
    block_fractions: tuple = (0.1, 0.5, 0.4)
    p_in: float = 0.15
    p_out: float = 0.045
    ell: int = 12
    kappa: float = 1.0
    indicator_block: int = 0
    k_grid: tuple = (4, 8, 12, 16, 20, 24, 28)
    seeds: tuple = tuple(range(10))

    def block_sizes(self) -> list[int]:
        sizes = [int(round(f * self.n)) for f in self.block_fractions[:-1]]
        sizes.append(self.n - sum(sizes))
        return sizes


def run_sbm_indicator(config: SbmIndicatorConfig) -> tuple[list[ExperimentResult], None]:
    """Small-block indicator mean on the SBM, against all three baselines.

    Cluster baselines on a bare graph go through the walk's spectral
    embedding; kmeans clusters the same top-K eigenvector coordinates the
    spectral baseline uses, they differ only in their seeding draws.
    """
    k_max = max(config.k_grid)
    methods = ("scgiga", "random", "kmeans", "spectral")

    def one_seed(seed: int):
        graph = generate_sbm(config.block_sizes(), config.p_in, config.p_out, seed=seed)
        walk = lazy_walk_matrix(graph)
        columns = normalized_columns(walk, config.ell)
        basis = top_eigenvectors(walk, k_max)
        f = GraphFunction((np.asarray(graph.labels) == config.indicator_block).astype(float))
        grid = select_coreset_grid(columns, CostVector.zeros(config.n),
                                   SelectionConfig(budget=k_max, kappa=config.kappa, ell=config.ell),
                                   config.k_grid)
        row = {}
        for K in config.k_grid:
            embedding = PointCloud(np.ascontiguousarray(basis[:, :K]))
            row[("scgiga", K)] = error_metric(f, grid[K])[0]
            row[("random", K)] = error_metric(f, random_sampling(config.n, K, seed * 1000 + K))[0]
            row[("kmeans", K)] = error_metric(f, kmeans_coreset(embedding, K, seed * 131 + K))[0]
            row[("spectral", K)] = error_metric(
                f, spectral_clustering_coreset(graph, K, seed * 55 + K, basis=basis))[0]
        return row

    per_seed = _map_seeds(one_seed, config.seeds)
    return _median_rows(per_seed, methods, config.k_grid), None


# ---------------------------------------------------------------------------
# shortest-path: average-distance estimation from k reference vertices


@dataclass(frozen=True)
class ShortestPathConfig:
    family: str = "powerlaw-tree"  # or "random-graph"
    n: int = 300
    tree_exponent: float = 3.0
    edge_probability: float = 0.03
    ell: int = 32
    kappa: float = 1.0
    k_grid: tuple = (5, 10, 20)
    seeds: tuple = tuple(range(10))


def _shortest_path_graph(config: ShortestPathConfig, seed: int) -> Graph:
    if config.family == "powerlaw-tree":
        return generate_powerlaw_tree(config.n, config.tree_exponent, seed=seed)
    if config.family == "random-graph":
        return generate_random_graph(config.n, config.edge_probability, seed=seed,
                                     on_trivial="retry")
    raise ValueError(f"unknown shortest-path family: {config.family!r}")


def run_shortest_path(config: ShortestPathConfig) -> tuple[list[ExperimentResult], None]:
    """Average-distance estimates from k sources vs the n-source truth."""
    k_max = max(config.k_grid)
    methods = ("scgiga", "random", "betweenness")

    def one_seed(seed: int):
        graph = _shortest_path_graph(config, seed)
        distances = source_average_distances(graph, np.arange(graph.n))
        truth = float(distances.mean())
        columns = normalized_columns(lazy_walk_matrix(graph), config.ell)
        grid = select_coreset_grid(columns, CostVector.zeros(graph.n),
                                   SelectionConfig(budget=k_max, kappa=config.kappa, ell=config.ell),
                                   config.k_grid)
        ranked = betweenness_coreset(graph, k_max)

        def estimate(indices, weights):
            idx = np.asarray(indices, dtype=np.int64)
            return float(np.asarray(weights) @ distances[idx])

        row = {}
        for K in config.k_grid:
            cs = grid[K]
            row[("scgiga", K)] = (estimate(cs.indices, cs.weights) - truth) ** 2
            rnd = random_sampling(graph.n, K, seed * 1000 + K)
            row[("random", K)] = (estimate(rnd.indices, rnd.weights) - truth) ** 2
            top = ranked.indices[:K]
            row[("betweenness", K)] = (estimate(top, np.full(K, 1.0 / K)) - truth) ** 2
        return row

    per_seed = _map_seeds(one_seed, config.seeds)
    return _median_rows(per_seed, methods, config.k_grid), None


# ---------------------------------------------------------------------------
# ego-centrality: edge-list network, average-distance comparison


@dataclass(frozen=True)
class EgoCentralityConfig:
    data_path: str = "data/facebook_combined.txt"
    ell: int = 2
    kappa: float = 0.8
    cost_seed: int = 77
    k_grid: tuple = (5, 10, 15, 20, 25, 30)
    seeds: tuple = (0, 1, 2)


def ego_data_path(config: EgoCentralityConfig) -> str:
    """Resolve the edge-list path; GRAPHCORESET_FACEBOOK overrides the config."""
    return os.environ.get("GRAPHCORESET_FACEBOOK", config.data_path)


def run_ego_centrality(config: EgoCentralityConfig) -> tuple[list[ExperimentResult], CostReport]:
    """Average-distance estimation on a real social network.

    Requires the SNAP facebook_combined edge list on disk (the library ships
    no datasets); raises FileNotFoundError when it is missing.
    """
    path = ego_data_path(config)
    if not os.path.exists(path):
        raise FileNotFoundError(
            f"ego-centrality needs the facebook_combined edge list at {path} "
            "(set GRAPHCORESET_FACEBOOK or the config's data_path)")
    graph = load_edge_list(path)
    k_max = max(config.k_grid)
    methods = ("scgiga", "scgiga-cost", "random", "betweenness")
    distances = source_average_distances(graph, np.arange(graph.n))
    truth = float(distances.mean())
    columns = normalized_columns(lazy_walk_matrix(graph), config.ell)
    costs = sample_costs_uniform(graph.n, seed=config.cost_seed)
    free = select_coreset_grid(columns, costs,
                               SelectionConfig(budget=k_max, kappa=1.0, ell=config.ell),
                               config.k_grid)
    aware = select_coreset_grid(columns, costs,
                                SelectionConfig(budget=k_max, kappa=config.kappa, ell=config.ell),
                                config.k_grid)
    ranked = betweenness_coreset(graph, k_max)

    def estimate(indices, weights):
        idx = np.asarray(indices, dtype=np.int64)
        return float(np.asarray(weights) @ distances[idx])

    rows = []
    for K in config.k_grid:
        for method, cs in (("scgiga", free[K]), ("scgiga-cost", aware[K])):
            err = (estimate(cs.indices, cs.weights) - truth) ** 2
            rows.append(ExperimentResult(method=method, K=K, err=err,
                                         abs_err=float(np.sqrt(err)),
                                         coreset_cost=cs.total_cost))
        rnd_errs = []
        for seed in config.seeds:
            rnd = random_sampling(graph.n, K, seed * 1000 + K)
            rnd_errs.append((estimate(rnd.indices, rnd.weights) - truth) ** 2)
        err = float(np.median(rnd_errs))
        rows.append(ExperimentResult(method="random", K=K, err=err, abs_err=float(np.sqrt(err))))
        top = ranked.indices[:K]
        err = (estimate(top, np.full(K, 1.0 / K)) - truth) ** 2
        rows.append(ExperimentResult(method="betweenness", K=K, err=err, abs_err=float(np.sqrt(err))))
    report = cost_report(aware[k_max], free[k_max], costs)
    return rows, report


# ---------------------------------------------------------------------------
# ell-sweep: walk-power sensitivity on the SBM setup


@dataclass(frozen=True)
class EllSweepConfig:
    ells: tuple = (1, 2, 3, 4)
    base: SbmIndicatorConfig = SbmIndicatorConfig()


def run_ell_sweep(config: EllSweepConfig) -> tuple[list[ExperimentResult], None]:
    """Error curves of the greedy selection across walk powers."""
    rows = []
    for ell in config.ells:
        sub = replace(config.base, ell=ell)
        k_max = max(sub.k_grid)

        def one_seed(seed: int, sub=sub, k_max=k_max):
            graph = generate_sbm(sub.block_sizes(), sub.p_in, sub.p_out, seed=seed)
            columns = normalized_columns(lazy_walk_matrix(graph), sub.ell)
            f = GraphFunction((np.asarray(graph.labels) == sub.indicator_block).astype(float))
            grid = select_coreset_grid(columns, CostVector.zeros(sub.n),
                                       SelectionConfig(budget=k_max, kappa=sub.kappa, ell=sub.ell),
                                       sub.k_grid)
            return {(f"scgiga-ell{sub.ell}", K): error_metric(f, grid[K])[0] for K in sub.k_grid}

        per_seed = _map_seeds(one_seed, sub.seeds)
        rows.extend(_median_rows(per_seed, (f"scgiga-ell{ell}",), sub.k_grid))
    return rows, None


# ---------------------------------------------------------------------------
# registry and output writing


EXPERIMENTS = {
    "cluster-indicator": (ClusterIndicatorConfig, run_cluster_indicator),
    "sbm-indicator": (SbmIndicatorConfig, run_sbm_indicator),
    "shortest-path": (ShortestPathConfig, run_shortest_path),
    "ego-centrality": (EgoCentralityConfig, run_ego_centrality),
    "ell-sweep": (EllSweepConfig, run_ell_sweep),
}


def experiment_names() -> list[str]:
    return sorted(EXPERIMENTS)


def config_from_mapping(name: str, overrides: dict):
    """Build an experiment config from a flat key-value mapping.

    Unknown keys are rejected; list values are frozen to tuples so configs
    stay hashable. The ell-sweep's nested base config accepts the SBM keys
    directly (flat files stay flat).
    """
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}, expected one of {experiment_names()}")
    config_cls = EXPERIMENTS[name][0]
    if name == "ell-sweep":
        base_keys = {f.name for f in fields(SbmIndicatorConfig)}
        base_kwargs = {k: _freeze(v) for k, v in overrides.items() if k in base_keys}
        own = {k: _freeze(v) for k, v in overrides.items() if k not in base_keys}
        unknown = set(own) - {f.name for f in fields(EllSweepConfig)}
        if unknown:
            raise ValueError(f"unknown config keys for ell-sweep: {sorted(unknown)}")
        return EllSweepConfig(base=SbmIndicatorConfig(**base_kwargs), **own)
    known = {f.name for f in fields(config_cls)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"unknown config keys for {name}: {sorted(unknown)}")
    return config_cls(**{k: _freeze(v) for k, v in overrides.items()})


def _freeze(value):
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


def write_experiment_outputs(out_dir: str, rows: list[ExperimentResult],
                             report: CostReport | None) -> list[str]:
    """Emit per-method CSVs, the combined comparison CSV, and the cost line.

    Returns the written paths (relative to out_dir joins already applied),
    deterministic order.
    """
    os.makedirs(out_dir, exist_ok=True)
    ordered = sorted(rows, key=lambda r: (r.method, r.K))
    written = []
    combined = os.path.join(out_dir, "comparison.csv")
    results_to_csv(ordered, combined)
    written.append(combined)
    for method in sorted({r.method for r in ordered}):
        path = os.path.join(out_dir, f"method_{method}.csv")
        results_to_csv([r for r in ordered if r.method == method], path)
        written.append(path)
    if report is not None:
        path = os.path.join(out_dir, "cost_report.csv")
        atomic_write_text(path, "c_cso,c_cos\n%.17g,%.17g\n" % (report.c_cso, report.c_cos))
        written.append(path)
    return written
