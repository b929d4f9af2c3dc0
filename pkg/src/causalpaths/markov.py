"""Higher-order Markov chain models over causal path ensembles.

A model of order ``k`` treats each path as a sequence of transitions in
which the next node depends on the ``k`` previously traversed nodes.
Transition probabilities are maximum-likelihood estimates, i.e. relative
frequencies of the length-``k`` sub-path windows. A multi-layer model of
order ``K`` combines layers ``1..K``: transition ``i`` of a path uses
layer ``min(i, K)``, so the first ``K - 1`` steps fall back to the lower
orders for which enough history exists.

The smallest order whose likelihood a higher order does not significantly
improve is selected with a chi-squared likelihood-ratio test; an optimal
order above 1 signals that chronology breaks the transitivity assumed by
a static aggregate picture of the contacts.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from scipy.special import gammaincc

from .errors import InternalInvariantError, ValidationError
from .paths import CausalPathEnsemble, subpath_counts

DEFAULT_ALPHA = 0.01
DEFAULT_MAX_ORDER = 3


@dataclass
class KOrderModel:
    """Transition counts and MLE probabilities over k-tuple states."""

    k: int
    counts: dict[tuple, dict]
    transitions: dict[tuple, dict]

    @property
    def states(self) -> set[tuple]:
        return set(self.counts)


@dataclass
class KOrderNetwork:
    """Graph whose nodes are observed k-tuples, linked on (k-1)-overlap."""

    k: int
    nodes: set[tuple]
    links: dict[tuple[tuple, tuple], int]


@dataclass
class MultiOrderModel:
    """Layered model of maximum order ``K`` with its fit diagnostics."""

    K: int
    layers: dict[int, KOrderModel]
    log_likelihood: float
    dof: int


@dataclass(frozen=True)
class LayerReport:
    """Per-order entry of an order-selection run.

    ``p_value_vs_next`` is the likelihood-ratio test p-value against the
    next order (None for the last order examined). ``dof_floored`` records
    that the nominal chi-squared degrees of freedom came out below 1 and
    were clamped.
    """

    k: int
    log_likelihood: float
    dof: int
    p_value_vs_next: float | None = None
    lrt_statistic: float | None = None
    delta_dof: int | None = None
    dof_floored: bool = False


@dataclass(frozen=True)
class OrderSelection:
    k_opt: int
    alpha: float
    layers: tuple[LayerReport, ...]


def fit_order(ens: CausalPathEnsemble, k: int) -> KOrderModel:
    """Fit the order-``k`` model from length-``k`` sub-path frequencies.

    The state of a window ``(v_0, ..., v_k)`` is its first ``k`` nodes and
    the transition target is ``v_k``. For ``k = 1`` the counts equal the
    edge frequencies of the weighted static aggregate network.
    """
    if k < 1:
        raise ValidationError("model order k must be >= 1")
    if ens.max_length < k:
        raise ValidationError(
            f"no path of length >= {k} in the ensemble; "
            f"maximum fittable order is {ens.max_length}"
        )
    counts: dict[tuple, dict] = {}
    for window, c in subpath_counts(ens, k).items():
        state, nxt = window[:k], window[k]
        counts.setdefault(state, {})
        counts[state][nxt] = counts[state].get(nxt, 0) + c
    transitions = {
        state: {nxt: c / total for nxt, c in targets.items()}
        for state, targets in counts.items()
        for total in (sum(targets.values()),)
    }
    return KOrderModel(k=k, counts=counts, transitions=transitions)


def korder_network(model: KOrderModel) -> KOrderNetwork:
    """Project a fitted model onto its k-tuple overlap graph."""
    nodes: set[tuple] = set()
    links: dict[tuple[tuple, tuple], int] = {}
    for state, targets in model.counts.items():
        for nxt, c in targets.items():
            if c <= 0:
                continue
            shifted = state[1:] + (nxt,)
            nodes.add(state)
            nodes.add(shifted)
            links[(state, shifted)] = links.get((state, shifted), 0) + c
    return KOrderNetwork(k=model.k, nodes=nodes, links=links)


def _fit_layers(ens: CausalPathEnsemble, K: int) -> dict[int, KOrderModel]:
    return {k: fit_order(ens, k) for k in range(1, K + 1)}


def _log_likelihood(ens: CausalPathEnsemble, layers: dict[int, KOrderModel],
                    K: int) -> float:
    logp: dict[int, dict[tuple, float]] = {}
    for k, model in layers.items():
        flat: dict[tuple, float] = {}
        for state, targets in model.transitions.items():
            for nxt, p in targets.items():
                flat[state + (nxt,)] = math.log(p)
        logp[k] = flat
    ll = 0.0
    for path, mult in ens.maximal_paths.items():
        acc = 0.0
        for i in range(1, len(path)):
            k = min(i, K)
            window = path[i - k:i + 1]
            term = logp[k].get(window)
            if term is None:
                raise InternalInvariantError(
                    f"transition {window} missing from the order-{k} layer "
                    "fitted on the same ensemble"
                )
            acc += term
        ll += mult * acc
    return ll


def multilayer_log_likelihood(ens: CausalPathEnsemble, K: int) -> float:
    """Log-likelihood of the multi-layer model of maximum order ``K``.

    Each maximal path contributes its multiplicity times the log of its
    transition product; paths shorter than ``K`` only involve the layers
    their length supports.
    """
    if K < 1:
        raise ValidationError("model order K must be >= 1")
    if K > ens.max_length:
        raise ValidationError(
            f"no path of length >= {K}; maximum fittable order is "
            f"{ens.max_length}"
        )
    return _log_likelihood(ens, _fit_layers(ens, K), K)


def ensemble_aggregate(ens: CausalPathEnsemble) -> dict:
    """Directed binarized aggregate adjacency observed in the ensemble.

    Returns a successor map covering every node that appears in a path.
    """
    adj: dict = {}
    for (u, v), c in subpath_counts(ens, 1).items():
        if c <= 0:
            continue
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set())
    return adj


def walk_counts(adjacency: Mapping, K: int) -> list[int]:
    """Total number of walks of length 0..K in a binarized digraph.

    Entry ``k`` equals the sum of all entries of the k-th power of the
    adjacency matrix (entry 0 is the node count). Computed with exact
    integer arithmetic, so large dense graphs cannot overflow.
    """
    nodes = set(adjacency)
    for succs in adjacency.values():
        nodes.update(succs)
    out = [len(nodes)]
    walks: dict = {v: 1 for v in nodes}
    for _ in range(K):
        walks = {
            v: sum(walks[w] for w in adjacency.get(v, ()))
            for v in nodes
        }
        out.append(sum(walks.values()))
    return out


def degrees_of_freedom(adjacency: Mapping, K: int) -> int:
    """Degrees of freedom of the multi-layer model of order ``K``.

    Sums, over layers ``1..K``, the growth in the number of node sequences
    realizable as walks of the layer's length in the binarized aggregate
    network. The sum telescopes and may be negative on sparse graphs such
    as chains; callers clamp where a chi-squared test needs a positive
    value.
    """
    if K < 1:
        raise ValidationError("order K must be >= 1")
    s = walk_counts(adjacency, K)
    return sum(s[k] - s[k - 1] for k in range(1, K + 1))


def chi_squared_sf(x: float, dof: int) -> float:
    """Survival function of the chi-squared distribution.

    Evaluated through the regularized incomplete gamma function.
    """
    if x < 0:
        raise ValidationError("chi-squared statistic must be >= 0")
    if dof < 1:
        raise ValidationError("degrees of freedom must be >= 1")
    return float(gammaincc(dof / 2.0, x / 2.0))


def select_optimal_order(
    ens: CausalPathEnsemble,
    alpha: float = DEFAULT_ALPHA,
    max_order: int = DEFAULT_MAX_ORDER,
) -> OrderSelection:
    """Select the optimal maximum order by nested likelihood-ratio tests.

    Starting from order 1, the order is raised while the next order's
    likelihood improvement is significant at level ``alpha`` under a
    chi-squared test with the difference in degrees of freedom. The search
    is silently capped at the longest observed path length. When the
    nominal degrees-of-freedom difference is below 1 it is clamped to 1
    and the event is recorded on the layer report.
    """
    if not 0 < alpha < 1:
        raise ValidationError("alpha must lie in (0, 1)")
    if max_order < 1:
        raise ValidationError("max_order must be >= 1")
    lmax = ens.max_length
    if lmax < 1:
        raise ValidationError("empty path ensemble")
    cap = min(max_order, lmax)
    layers: dict[int, KOrderModel] = {}
    lls: dict[int, float] = {}

    def ll(K: int) -> float:
        if K not in lls:
            for k in range(1, K + 1):
                if k not in layers:
                    layers[k] = fit_order(ens, k)
            lls[K] = _log_likelihood(ens, layers, K)
        return lls[K]

    s = walk_counts(ensemble_aggregate(ens), cap)
    dof = {k: s[k] - s[0] for k in range(1, cap + 1)}
    reports: list[LayerReport] = []
    k_opt = 1
    for K in range(1, cap):
        stat = max(0.0, -2.0 * (ll(K) - ll(K + 1)))
        raw_ddof = s[K + 1] - s[K]
        floored = raw_ddof < 1
        ddof = max(1, raw_ddof)
        p = chi_squared_sf(stat, ddof)
        reports.append(LayerReport(
            k=K, log_likelihood=ll(K), dof=dof[K], p_value_vs_next=p,
            lrt_statistic=stat, delta_dof=ddof, dof_floored=floored,
        ))
        if p < alpha:
            k_opt = K + 1
        else:
            break
    examined = len(reports) + 1
    reports.append(LayerReport(
        k=examined, log_likelihood=ll(examined), dof=dof[examined],
    ))
    return OrderSelection(k_opt=k_opt, alpha=alpha, layers=tuple(reports))
