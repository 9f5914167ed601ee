"""Cost-aware greedy selection of weighted vertex coresets.

The optimizer keeps a unit-norm iterate y = sum_i w_i q_i built from the
normalized walk-power columns q_i and pushes it toward the uniform target
t = 1/sqrt(n) along spherical geodesics. Each round scores every vertex by
how well its column's geodesic direction lines up with the direction toward
the target, forms the slack set of vertices within a kappa fraction of the
best score, and takes the cheapest member. kappa = 1 collapses the slack set
to the argmax, so costs cannot influence that path at all.

On exit the unit-sphere coefficients are rescaled: beta carries the uniform
vector's 1/sqrt(n) mass and each selected vertex gets the estimator weight
beta * w_i / column_norm_i, so sums of the raw walk-power columns weighted by
those estimates approximate the all-ones vector divided by n.
"""

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._util import dump_json
from .graphs import CostVector
from .spectral import NormalizedColumns

_TINY = 1e-14


@dataclass
class SelectionConfig:
    """Knobs for one selection run.

    budget caps the number of distinct selected vertices. Re-selecting an
    already-chosen vertex refines its weight without consuming budget, so a
    run interleaves support growth with free reweighting rounds and stops
    when the greedy step demands a vertex it has no budget left to place.
    seed is reserved for randomized tie-breaking and is currently unused:
    ties break to the lowest vertex index.
    """

    budget: int
    kappa: float = 1.0
    ell: int = 1
    residual_tolerance: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if not (0.0 < self.kappa <= 1.0):
            raise ValueError("kappa must lie in (0, 1]")
        if self.ell < 1:
            raise ValueError("ell must be a positive integer")
        if self.residual_tolerance < 0:
            raise ValueError("residual_tolerance must be non-negative")


@dataclass
class IterationRecord:
    """One greedy round: chosen vertex, its score, step, residual after."""

    k: int
    vertex: int
    alignment: float
    delta: float
    residual: float
    slack_set_size: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "vertex": self.vertex,
            "alignment": self.alignment,
            "delta": self.delta,
            "J": self.residual,
            "slack_set_size": self.slack_set_size,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IterationRecord":
        return cls(
            int(data["k"]), int(data["vertex"]), float(data["alignment"]),
            float(data["delta"]), float(data["J"]), int(data["slack_set_size"]),
        )


@dataclass
class IterationState:
    """Observer payload with full per-round state (test and harness hook)."""

    k: int
    vertex: int
    score: float
    best_score: float
    delta: float
    slack_set: np.ndarray
    coefficients: np.ndarray
    iterate: np.ndarray
    alignment: float
    selected: tuple


@dataclass
class Coreset:
    """Selected vertices with estimator weights and the selection trace.

    indices are in first-selection order; weights align with indices and are
    the final estimator weights (beta already applied). coefficients is the
    full-length unit-sphere weight vector; it is not serialized.
    """

    indices: list
    weights: np.ndarray
    beta: float
    total_cost: float
    trajectory: list
    coefficients: np.ndarray | None = None
    status: str = "ok"
    method: str = "scgiga"

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "indices": [int(i) for i in self.indices],
            "weights": [float(w) for w in self.weights],
            "beta": float(self.beta),
            "total_cost": float(self.total_cost),
            "trajectory": [r.to_dict() for r in self.trajectory],
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Coreset":
        return cls(
            indices=[int(i) for i in data["indices"]],
            weights=np.array(data["weights"], dtype=np.float64),
            beta=float(data["beta"]),
            total_cost=float(data["total_cost"]),
            trajectory=[IterationRecord.from_dict(r) for r in data.get("trajectory", [])],
            status=data.get("status", "ok"),
            method=data.get("method", "scgiga"),
        )

    def save_json(self, path: str) -> None:
        dump_json(self.to_dict(), path)

    @classmethod
    def load_json(cls, path: str) -> "Coreset":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))


def beta_star(p_w_norm: float, alignment: float, n: int) -> float:
    """Optimal non-negative scale onto the span of the iterate.

    Minimizes ||beta * P(w) - uniform|| over beta >= 0 for an iterate with
    norm p_w_norm and cosine `alignment` against the unit uniform direction.
    """
    if p_w_norm <= 0:
        raise ValueError("iterate norm must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    return (1.0 / math.sqrt(n)) / p_w_norm * max(0.0, alignment)


def residual(columns: NormalizedColumns, coefficients: np.ndarray) -> float:
    """Residual J = 1 - <P(w), target>^2 for a unit-norm combination."""
    combined = columns.combine(np.asarray(coefficients, dtype=np.float64))
    norm = float(np.linalg.norm(combined))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"combination is not unit norm (got {norm})")
    alignment = float(combined @ columns.target)
    return max(0.0, 1.0 - alignment * alignment)


def cost_penalty_bound(costs: CostVector, k: int, kappa: float, min_column_norm: float, n: int) -> float:
    """Largest cost-penalty weight that keeps a kappa-optimal alignment.

    Equals (1 - kappa) / (C_max^k * min_column_norm * sqrt(n)) where C_max^k
    is the sum of the k largest costs. All-zero costs make the bound vacuous;
    returns +inf and warns in that case.
    """
    if not (0.0 < kappa <= 1.0):
        raise ValueError("kappa must lie in (0, 1]")
    if not (1 <= k <= costs.n):
        raise ValueError("k must be in 1..n")
    if min_column_norm <= 0:
        raise ValueError("min_column_norm must be positive")
    top = np.sort(costs.costs)[-k:]
    c_max = float(top.sum())
    if c_max == 0.0:
        warnings.warn("all costs are zero; cost penalty bound is unconstrained")
        return math.inf
    return (1.0 - kappa) / (c_max * min_column_norm * math.sqrt(n))


def select_coreset(
    columns: NormalizedColumns,
    costs: CostVector,
    config: SelectionConfig,
    observer=None,
) -> Coreset:
    """Run the greedy geodesic selection loop.

    Each round takes the best single geodesic step, which may re-select an
    already-chosen vertex; only new vertices consume budget. The run ends
    with status "ok" when the step demands a new vertex beyond the budget,
    "converged" when the residual reaches the tolerance or stops moving at
    float resolution, and "stalled" when no vertex offers a positive
    direction. A hard iteration cap (unreachable in practice) guarantees
    termination with status "capped". observer, when given, is called after
    each round with an IterationState snapshot.
    """
    n = columns.n
    if n == 0:
        raise ValueError("empty column set")
    cost = costs.costs
    if len(cost) != n:
        raise ValueError("cost vector length must match vertex count")

    target = columns.target
    base = columns.alignments(target)  # <q_v, t>, fixed all run
    coeffs = np.zeros(n)
    iterate = np.zeros(n)
    align = 0.0
    selected: list[int] = []
    seen = np.zeros(n, dtype=bool)
    trajectory: list[IterationRecord] = []
    status = "capped"
    res_after = 1.0

    for k in range(64 * config.budget + 64):
        if k == 0:
            proj = None
            scores = base.copy()
        else:
            proj = np.clip(columns.alignments(iterate), -1.0, 1.0)
            res = max(1.0 - align * align, 0.0)
            denom = math.sqrt(res) * np.sqrt(np.maximum(1.0 - proj * proj, 0.0))
            usable = denom > _TINY
            scores = np.full(n, -np.inf)
            scores[usable] = (base[usable] - align * proj[usable]) / denom[usable]

        v_best = int(np.argmax(scores))
        s_best = float(scores[v_best])
        if not np.isfinite(s_best) or s_best <= 0.0:
            status = "stalled"
            break
        slack = np.flatnonzero(scores >= config.kappa * s_best)
        if config.kappa >= 1.0:
            # the argmax is forced; costs cannot reroute this path
            v_k = v_best
        else:
            v_k = int(slack[np.argmin(cost[slack])])
        if not seen[v_k] and len(selected) >= config.budget:
            status = "ok"
            break
        score_k = float(scores[v_k])
        column = columns.column(v_k)

        if k == 0:
            delta = 1.0
            coeffs[v_k] = 1.0
            iterate = column
        else:
            b = float(base[v_k])
            c = float(proj[v_k])
            gain = b - align * c
            anchor = align - b * c
            span = gain + anchor
            if abs(span) < _TINY:
                status = "converged"
                break
            delta = min(max(gain / span, 0.0), 1.0)
            blended = (1.0 - delta) * iterate + delta * column
            norm = float(np.linalg.norm(blended))
            if norm < _TINY:
                status = "converged"
                break
            iterate = blended / norm
            coeffs *= 1.0 - delta
            coeffs[v_k] += delta
            coeffs /= norm

        align = float(np.clip(iterate @ target, -1.0, 1.0))
        if not seen[v_k]:
            seen[v_k] = True
            selected.append(v_k)
        res_before = res_after
        res_after = max(1.0 - align * align, 0.0)
        trajectory.append(IterationRecord(k, v_k, score_k, delta, res_after, len(slack)))
        if observer is not None:
            observer(IterationState(
                k=k, vertex=v_k, score=score_k, best_score=s_best, delta=delta,
                slack_set=slack.copy(), coefficients=coeffs.copy(),
                iterate=iterate.copy(), alignment=align, selected=tuple(selected),
            ))
        if res_after <= config.residual_tolerance:
            status = "converged"
            break
        if res_before - res_after <= 1e-12 * res_before:
            # the best available step no longer moves the residual at float
            # resolution; later steps are no better, so this is convergence
            status = "converged"
            break

    if selected:
        beta = beta_star(1.0, align, n)
        idx = np.array(selected, dtype=np.int64)
        weights = beta * coeffs[idx] / columns.column_norms[idx]
        total_cost = float(cost[idx].sum())
    else:
        beta = 0.0
        weights = np.empty(0)
        total_cost = 0.0
    return Coreset(
        indices=selected, weights=weights, beta=beta, total_cost=total_cost,
        trajectory=trajectory, coefficients=coeffs, status=status,
    )


def select_coreset_grid(
    columns: NormalizedColumns,
    costs: CostVector,
    config: SelectionConfig,
    budgets,
) -> dict:
    """Coresets for several budgets from one run.

    The greedy choices do not depend on the budget until the budget blocks a
    placement, so one run at the largest budget reproduces every smaller
    budget's output exactly: a budget-b run ends in the state reached just
    before the (b+1)-th distinct vertex would be placed. Budgets past an
    early stop repeat the final state, which matches what independent runs
    would return.
    """
    budgets = sorted(set(int(b) for b in budgets))
    if budgets[0] < 1:
        raise ValueError("budgets must be positive")
    wanted = set(budgets)
    snapshots: dict[int, Coreset] = {}
    records: list[IterationRecord] = []
    prev: list = [None]  # [state] after the most recent round

    def snap(state: IterationState) -> Coreset:
        res = max(1.0 - state.alignment * state.alignment, 0.0)
        beta = beta_star(1.0, state.alignment, columns.n)
        idx = np.array(state.selected, dtype=np.int64)
        weights = beta * state.coefficients[idx] / columns.column_norms[idx]
        status = "converged" if res <= config.residual_tolerance else "ok"
        return Coreset(
            indices=list(state.selected), weights=weights, beta=beta,
            total_cost=float(costs.costs[idx].sum()),
            trajectory=records[: state.k + 1], coefficients=state.coefficients,
            status=status,
        )

    def observe(state: IterationState) -> None:
        res_after = max(1.0 - state.alignment * state.alignment, 0.0)
        records.append(IterationRecord(
            state.k, state.vertex, state.score, state.delta,
            res_after, len(state.slack_set),
        ))
        last = prev[0]
        if last is not None and len(state.selected) > len(last.selected):
            # this round placed a new vertex; a run whose budget equals the
            # previous support would have stopped right before it
            grown_from = len(last.selected)
            if grown_from in wanted and grown_from not in snapshots:
                snapshots[grown_from] = snap(last)
        prev[0] = state

    full_config = SelectionConfig(
        budget=budgets[-1], kappa=config.kappa, ell=config.ell,
        residual_tolerance=config.residual_tolerance, seed=config.seed,
    )
    final = select_coreset(columns, costs, full_config, observer=observe)
    for budget in budgets:
        if budget not in snapshots:
            # the run ended (budget edge, convergence, or stall) before the
            # support could outgrow this budget; a fresh run at the budget
            # would stop at the same point, so the full result applies
            snapshots[budget] = final
    return snapshots
