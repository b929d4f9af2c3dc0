"""Causal (time-respecting) path extraction under a waiting-time bound.

Every undirected contact ``(u, v, t)`` is expanded into the two directed
link instances ``u -> v`` and ``v -> u`` at time ``t``. Two instances chain
when the first one's target is the second one's source and the time gap
lies in ``(0, delta]``; chaining instances form a DAG because time
increases strictly along every chain. Maximal causal paths are the
root-to-leaf paths of that DAG: they can be extended at neither end
without violating the waiting-time bound.
"""

from __future__ import annotations

import warnings
from bisect import bisect_left, bisect_right
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO

from .errors import PathExplosionError, ValidationError
from .ingest import TemporalNetwork

DEFAULT_PATH_LIMIT = 100_000_000


@dataclass(frozen=True)
class DirectedLinkInstance:
    """A directed occurrence of a contact at time ``t``."""

    source: int
    target: int
    t: int


class CausalDag:
    """DAG of directed link instances chained within a waiting time ``delta``.

    Vertices are directed link instances; vertex ``i`` has an edge to
    vertex ``j`` exactly when ``target(i) == source(j)`` and
    ``0 < t(j) - t(i) <= delta``. Edges are never materialized: successor
    and predecessor sets are resolved by binary search on per-node
    activity times.
    """

    def __init__(self, net: TemporalNetwork, delta: float):
        if delta <= 0:
            raise ValidationError("delta must be positive")
        if delta < net.epsilon:
            warnings.warn(
                f"delta={delta} below the data resolution {net.epsilon}; "
                "no paths longer than one link are possible",
                stacklevel=3,
            )
        self.delta = delta
        # instance 2k is u->v for event k, instance 2k+1 is its reverse,
        # so the partner of instance i is always i ^ 1
        src: list[int] = []
        tgt: list[int] = []
        times: list[int] = []
        out_idx: dict[int, list[int]] = {}
        out_times: dict[int, list[int]] = {}
        for ev in net.events:
            for a, b in ((ev.u, ev.v), (ev.v, ev.u)):
                i = len(src)
                src.append(a)
                tgt.append(b)
                times.append(ev.t)
                out_idx.setdefault(a, []).append(i)
                out_times.setdefault(a, []).append(ev.t)
        self._src = src
        self._tgt = tgt
        self._t = times
        self._out_idx = out_idx
        self._out_times = out_times
        self._vertices: tuple[DirectedLinkInstance, ...] | None = None

    @property
    def n_vertices(self) -> int:
        return len(self._src)

    @property
    def vertices(self) -> tuple[DirectedLinkInstance, ...]:
        if self._vertices is None:
            self._vertices = tuple(
                DirectedLinkInstance(s, g, t)
                for s, g, t in zip(self._src, self._tgt, self._t)
            )
        return self._vertices

    def _succ_range(self, node: int, t: int) -> tuple[list[int], int, int]:
        """Outgoing instances of ``node`` with time in ``(t, t + delta]``."""
        times = self._out_times.get(node)
        if times is None:
            return [], 0, 0
        lo = bisect_right(times, t)
        hi = bisect_right(times, t + self.delta)
        return self._out_idx[node], lo, hi

    def successors(self, i: int) -> list[int]:
        idx, lo, hi = self._succ_range(self._tgt[i], self._t[i])
        return idx[lo:hi]

    def predecessors(self, i: int) -> list[int]:
        # instances targeting node u are the partners of those leaving u
        node, t = self._src[i], self._t[i]
        times = self._out_times.get(node)
        if times is None:
            return []
        lo = bisect_left(times, t - self.delta)
        hi = bisect_left(times, t)
        return [j ^ 1 for j in self._out_idx[node][lo:hi]]

    def is_root(self, i: int) -> bool:
        node, t = self._src[i], self._t[i]
        times = self._out_times.get(node, [])
        lo = bisect_left(times, t - self.delta)
        return not (lo < len(times) and times[lo] < t)

    def is_leaf(self, i: int) -> bool:
        _, lo, hi = self._succ_range(self._tgt[i], self._t[i])
        return lo == hi

    @property
    def roots(self) -> list[int]:
        return [i for i in range(self.n_vertices) if self.is_root(i)]

    @property
    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n_vertices):
            for j in self.successors(i):
                yield (i, j)

    def count_maximal_paths(self) -> int:
        """Exact number of root-to-leaf paths, without enumerating them.

        Continuations of a partial path depend only on the head node and
        the time of its last link, so the count follows from a dynamic
        program over ``(node, time)`` states in reverse time order.
        """
        tgt, t = self._tgt, self._t
        states = sorted({(tgt[i], t[i]) for i in range(self.n_vertices)},
                        key=lambda s: -s[1])
        down: dict[tuple[int, int], int] = {}
        for node, time in states:
            idx, lo, hi = self._succ_range(node, time)
            if lo == hi:
                down[(node, time)] = 1
            else:
                down[(node, time)] = sum(
                    down[(tgt[j], t[j])] for j in idx[lo:hi]
                )
        return sum(down[(tgt[i], t[i])] for i in range(self.n_vertices)
                   if self.is_root(i))


@dataclass
class CausalPathEnsemble:
    """Multiset of maximal causal paths observed at a given ``delta``.

    ``maximal_paths`` maps a node sequence (tuple of length ``l + 1`` for a
    path of ``l`` links) to the number of distinct root-to-leaf DAG paths
    realizing it. Sub-path window counts are derived lazily and cached.
    """

    delta: float
    maximal_paths: dict[tuple, int]
    _subpath_cache: dict[int, dict[tuple, int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def total_multiplicity(self) -> int:
        return sum(self.maximal_paths.values())

    @property
    def max_length(self) -> int:
        """Largest observed path length in links (0 if empty)."""
        if not self.maximal_paths:
            return 0
        return max(len(p) for p in self.maximal_paths) - 1

    def nodes(self) -> set:
        out = set()
        for p in self.maximal_paths:
            out.update(p)
        return out


def build_causal_dag(net: TemporalNetwork, delta: float) -> CausalDag:
    """Build the causal link DAG of ``net`` for waiting-time bound ``delta``."""
    return CausalDag(net, delta)


def extract_maximal_paths(
    dag: CausalDag, limit: int | None = DEFAULT_PATH_LIMIT
) -> CausalPathEnsemble:
    """Enumerate all root-to-leaf paths of the DAG as node sequences.

    A root that is also a leaf yields a path of one link. Node sequences
    reachable through several timestamp realizations accumulate their
    multiplicity. If the exact path count exceeds ``limit``, a
    :class:`PathExplosionError` carrying that count is raised before any
    enumeration work is done.
    """
    total = dag.count_maximal_paths()
    if limit is not None and total > limit:
        raise PathExplosionError(total, limit, dag.delta)
    src, tgt, t = dag._src, dag._tgt, dag._t
    delta = dag.delta
    counts: dict[tuple, int] = {}
    for r in range(dag.n_vertices):
        if not dag.is_root(r):
            continue
        idx, lo, hi = dag._succ_range(tgt[r], t[r])
        seq = [src[r], tgt[r]]
        if lo == hi:
            key = tuple(seq)
            counts[key] = counts.get(key, 0) + 1
            continue
        # iterative DFS; frame d chooses node d+2 of the sequence
        frames: list[tuple[list[int], int, int]] = [(idx, lo, hi)]
        cursor = [lo]
        last_t = [t[r]]
        while frames:
            f_idx, _, f_hi = frames[-1]
            pos = cursor[-1]
            if pos == f_hi:
                frames.pop()
                cursor.pop()
                last_t.pop()
                continue
            cursor[-1] = pos + 1
            j = f_idx[pos]
            assert 0 < t[j] - last_t[-1] <= delta
            del seq[len(frames) + 1:]
            seq.append(tgt[j])
            j_idx, j_lo, j_hi = dag._succ_range(tgt[j], t[j])
            if j_lo == j_hi:
                key = tuple(seq)
                counts[key] = counts.get(key, 0) + 1
            else:
                frames.append((j_idx, j_lo, j_hi))
                cursor.append(j_lo)
                last_t.append(t[j])
    ensemble = CausalPathEnsemble(delta=dag.delta, maximal_paths=counts)
    assert ensemble.total_multiplicity == total
    return ensemble


def subpath_counts(ens: CausalPathEnsemble, k: int) -> dict[tuple, int]:
    """Count contiguous windows of ``k`` links across all maximal paths.

    Window keys are node tuples of length ``k + 1``; ``k = 0`` counts node
    visits. Every window is weighted by the multiplicity of its path, so a
    path of length ``l`` contributes ``max(0, l - k + 1)`` windows.
    """
    if k < 0:
        raise ValidationError("window length k must be >= 0")
    cached = ens._subpath_cache.get(k)
    if cached is not None:
        return cached
    counts: dict[tuple, int] = {}
    width = k + 1
    for path, mult in ens.maximal_paths.items():
        for i in range(len(path) - k):
            w = path[i:i + width]
            counts[w] = counts.get(w, 0) + mult
    ens._subpath_cache[k] = counts
    return counts


def length_distribution(ens: CausalPathEnsemble) -> dict[int, float]:
    """Probability of observing a maximal path of each length."""
    total = ens.total_multiplicity
    if total == 0:
        raise ValidationError("empty path ensemble")
    by_len: dict[int, int] = {}
    for path, mult in ens.maximal_paths.items():
        l = len(path) - 1
        by_len[l] = by_len.get(l, 0) + mult
    return {l: c / total for l, c in sorted(by_len.items())}


@dataclass(frozen=True)
class SweepResult:
    """Outcome of a delta sweep.

    ``rows`` holds ``(delta, length, count, probability)`` sorted by delta
    then length; ``failures`` holds ``(delta, path_count)`` for sweep
    points that exceeded the path limit.
    """

    rows: tuple[tuple[float, int, int, float], ...]
    failures: tuple[tuple[float, int], ...]


def _sweep_deltas(mu: float, delta_min: float, delta_max: float) -> list[float]:
    if mu <= 0:
        raise ValidationError("sweep step mu must be positive")
    if delta_min > delta_max:
        raise ValidationError("delta_min must not exceed delta_max")
    deltas = []
    i = 0
    while True:
        d = delta_min + i * mu
        if d > delta_max:
            break
        deltas.append(d)
        i += 1
    return deltas


_WORKER_STATE: dict = {}


def _sweep_init(net: TemporalNetwork, limit: int | None) -> None:
    _WORKER_STATE["net"] = net
    _WORKER_STATE["limit"] = limit


def _sweep_point(delta: float):
    return _eval_point(_WORKER_STATE["net"], delta, _WORKER_STATE["limit"])


def _eval_point(net: TemporalNetwork, delta: float, limit: int | None):
    dag = build_causal_dag(net, delta)
    try:
        ens = extract_maximal_paths(dag, limit=limit)
    except PathExplosionError as exc:
        return ("explosion", delta, exc.count)
    total = ens.total_multiplicity
    by_len: dict[int, int] = {}
    for path, mult in ens.maximal_paths.items():
        l = len(path) - 1
        by_len[l] = by_len.get(l, 0) + mult
    rows = [(delta, l, c, c / total) for l, c in sorted(by_len.items())]
    return ("ok", delta, rows)


def delta_sweep(
    net: TemporalNetwork,
    mu: float,
    delta_min: float,
    delta_max: float,
    limit: int | None = DEFAULT_PATH_LIMIT,
    workers: int = 1,
    skip_errors: bool = False,
) -> SweepResult:
    """Evaluate the path-length distribution at ``delta_min + i * mu``.

    Sweep points are independent; with ``workers > 1`` they are evaluated
    in a process pool, with output identical to the sequential run. A
    point that exceeds ``limit`` raises a :class:`PathExplosionError`
    tagged with its delta, or is collected under ``failures`` when
    ``skip_errors`` is set.
    """
    deltas = _sweep_deltas(mu, delta_min, delta_max)
    if workers > 1 and len(deltas) > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_sweep_init, initargs=(net, limit)
        ) as pool:
            outcomes = list(pool.map(_sweep_point, deltas))
    else:
        outcomes = [_eval_point(net, d, limit) for d in deltas]
    rows: list[tuple[float, int, int, float]] = []
    failures: list[tuple[float, int]] = []
    for kind, delta, payload in outcomes:
        if kind == "ok":
            rows.extend(payload)
        elif skip_errors:
            failures.append((delta, payload))
        else:
            raise PathExplosionError(payload, limit or 0, delta)
    return SweepResult(rows=tuple(rows), failures=tuple(failures))


def write_sweep_csv(
    result: SweepResult, fp: IO[str], comments: Sequence[str] = ()
) -> None:
    """Write sweep rows as CSV; failed sweep points become comment lines."""
    for c in comments:
        fp.write(f"# {c}\n")
    fp.write("delta,length,count,probability\n")
    failures = dict(result.failures)
    emitted: set[float] = set()
    all_deltas = sorted({r[0] for r in result.rows} | set(failures))
    rows_by_delta: dict[float, list] = {}
    for row in result.rows:
        rows_by_delta.setdefault(row[0], []).append(row)
    for d in all_deltas:
        if d in failures and d not in emitted:
            fp.write(f"# resource-limit delta={_num(d)} maximal_paths={failures[d]}\n")
            emitted.add(d)
        for delta, length, count, prob in rows_by_delta.get(d, ()):
            fp.write(f"{_num(delta)},{length},{count},{prob!r}\n")


def _num(x: float) -> str:
    """Render floats that carry integer values without a trailing '.0'."""
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return repr(x)


def write_ensemble(
    ens: CausalPathEnsemble, fp: IO[str], labels: Sequence[str] | None = None
) -> None:
    """Dump paths as ``node1,node2,...<TAB>multiplicity`` lines."""
    def name(node):
        return labels[node] if labels is not None else str(node)

    for path in sorted(ens.maximal_paths):
        fp.write(",".join(name(v) for v in path))
        fp.write(f"\t{ens.maximal_paths[path]}\n")


def read_ensemble(fp: IO[str], delta: float = 0.0) -> CausalPathEnsemble:
    """Parse the dump format written by :func:`write_ensemble`."""
    counts: dict[tuple, int] = {}
    for line in fp:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        seq_part, _, mult_part = line.partition("\t")
        path = tuple(seq_part.split(","))
        counts[path] = counts.get(path, 0) + int(mult_part)
    return CausalPathEnsemble(delta=delta, maximal_paths=counts)
