"""Cost-aware selection on a mixture graph.

Builds a three-cluster point cloud, connects it with a Gaussian-kernel kNN
graph, prices every vertex, and compares the cost-blind selection (kappa = 1)
against the cost-aware one (kappa = 0.8). The slack lets the greedy step
substitute a nearly-as-good cheap vertex for an expensive argmax, which
typically cuts the bill severalfold while the residual gives up very little.
"""

from graphcoreset import (
    SelectionConfig,
    build_knn_kernel_graph,
    generate_gaussian_mixture,
    lazy_walk_matrix,
    normalized_columns,
    sample_costs_uniform,
    select_coreset,
)


def main():
    cloud = generate_gaussian_mixture(
        [[1.0, -3.0], [-3.0, 2.0], [3.0, 0.0]], [0.2, 0.3, 0.5],
        covariance_scale=1.0, n=1200, seed=0)
    graph = build_knn_kernel_graph(cloud, k_neighbors=10, bandwidth=1.0)
    columns = normalized_columns(lazy_walk_matrix(graph), ell=1)
    costs = sample_costs_uniform(graph.n, seed=500)

    print(f"mixture graph: n={graph.n}, m={graph.m}, budget 14")
    print(f"{'kappa':>6} {'support':>8} {'total cost':>11} {'final J':>10}")
    results = {}
    for kappa in (1.0, 0.8):
        out = select_coreset(columns, costs,
                             SelectionConfig(budget=14, kappa=kappa))
        results[kappa] = out
        print(f"{kappa:>6.1f} {len(out.indices):>8d} {out.total_cost:>11.3f} "
              f"{out.trajectory[-1].residual:>10.3e}")
    saving = results[1.0].total_cost / results[0.8].total_cost
    print()
    print(f"Same support size, {saving:.1f}x cheaper: every greedy round may")
    print("swap the best-aligned vertex for the cheapest one scoring within")
    print("80% of it, and on this graph near-ties are everywhere.")


if __name__ == "__main__":
    main()
