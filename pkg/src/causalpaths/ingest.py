"""Parsing and global statistics for time-stamped contact data.

Input data are plain-text edge lists with one contact per line, either as
instantaneous events (``t u v``, extra columns ignored) or as intervals
(``u v t omega``) that get expanded into instantaneous events on a regular
grid of step ``sigma``. Node identifiers are arbitrary strings; they are
mapped to dense integer indices at parse time and the mapping is kept on
the network for output.
"""

from __future__ import annotations

import statistics
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

from .errors import ParseError, ValidationError

DEFAULT_RESOLUTION = 20  # seconds; typical proximity-sensor sampling period


@dataclass(frozen=True)
class ContactEvent:
    """One instantaneous undirected contact between nodes ``u`` and ``v``.

    ``u`` and ``v`` are dense node indices with ``u != v``; ``t`` is the
    timestamp in seconds. On grid-sampled data ``t`` is a multiple of the
    elementary step after interval expansion.
    """

    u: int
    v: int
    t: int


@dataclass(frozen=True)
class GapStatistics:
    """Min / mean / max time gap between consecutive distinct timestamps."""

    delta_min: int
    delta_avg: float
    delta_max: int


@dataclass(frozen=True)
class TemporalNetwork:
    """An immutable set of nodes plus chronologically ordered contact events.

    ``labels`` maps node index -> original identifier. ``events`` is sorted
    by timestamp (ties allowed) and free of duplicates; each undirected
    contact is stored once, with endpoints ordered so that
    ``labels[u] < labels[v]``.
    """

    labels: tuple[str, ...]
    events: tuple[ContactEvent, ...]
    epsilon: int = DEFAULT_RESOLUTION
    sigma: int = DEFAULT_RESOLUTION
    _label_index: dict[str, int] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self):
        self._label_index.update({lab: i for i, lab in enumerate(self.labels)})

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_events(self) -> int:
        return len(self.events)

    @property
    def horizon(self) -> int:
        """Largest event timestamp (0 for an empty network)."""
        return self.events[-1].t if self.events else 0

    def index(self, label: str) -> int:
        return self._label_index[label]

    def distinct_timestamps(self) -> list[int]:
        """Sorted distinct event timestamps."""
        out: list[int] = []
        for ev in self.events:  # events are sorted, so dedup in one pass
            if not out or ev.t != out[-1]:
                out.append(ev.t)
        return out

    @classmethod
    def from_events(
        cls,
        triples: Iterable[tuple[str, str, int]],
        epsilon: int = DEFAULT_RESOLUTION,
        sigma: int | None = None,
    ) -> "TemporalNetwork":
        """Build a network from ``(u, v, t)`` triples with string labels."""
        raw = [(str(u), str(v), int(t)) for u, v, t in triples]
        for u, v, t in raw:
            if u == v:
                raise ValidationError(f"self-loop contact on node {u!r}")
            if t < 0:
                raise ValidationError(f"negative timestamp {t}")
        return _assemble(raw, epsilon, sigma)


def _assemble(
    raw: list[tuple[str, str, int]], epsilon: int, sigma: int | None
) -> TemporalNetwork:
    """Index labels, canonicalize pairs, dedup and sort raw triples."""
    if sigma is None:
        sigma = epsilon
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    if sigma < epsilon:
        raise ValidationError("sigma must be >= epsilon")
    index: dict[str, int] = {}
    labels: list[str] = []
    seen: set[tuple[int, int, int]] = set()
    events: list[ContactEvent] = []
    for u, v, t in raw:
        for lab in (u, v):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
        # (u,v,t) and (v,u,t) are the same contact; store the pair in
        # lexicographic label order so serialization round-trips exactly.
        a, b = (u, v) if u < v else (v, u)
        key = (index[a], index[b], t)
        if key in seen:
            continue
        seen.add(key)
        events.append(ContactEvent(*key))
    events.sort(key=lambda ev: ev.t)
    return TemporalNetwork(
        labels=tuple(labels), events=tuple(events), epsilon=epsilon, sigma=sigma
    )


def expand_interval(u, v, t: int, omega: int, sigma: int) -> list[ContactEvent]:
    """Expand an interval contact of duration ``omega`` starting at ``t``.

    Returns the ``floor(omega / sigma) + 1`` instantaneous events at
    ``t, t + sigma, ..., t + floor(omega / sigma) * sigma``.
    """
    if sigma <= 0:
        raise ValidationError("sigma must be positive")
    if omega < 0:
        raise ValidationError("negative duration")
    if t < 0:
        raise ValidationError("negative timestamp")
    return [ContactEvent(u, v, t + i * sigma) for i in range(omega // sigma + 1)]


def _split(line: str) -> list[str]:
    # separator auto-detection: comma wins if present, else any whitespace
    if "," in line:
        return [f.strip() for f in line.split(",")]
    return line.split()


def parse_contacts(
    lines: Iterable[str],
    format: str = "triple",
    epsilon: int = DEFAULT_RESOLUTION,
    sigma: int | None = None,
) -> TemporalNetwork:
    """Parse an edge-list stream into a :class:`TemporalNetwork`.

    ``format="triple"`` reads ``t u v`` lines (extra columns ignored);
    ``format="interval"`` reads ``u v t omega`` lines which are expanded
    with :func:`expand_interval` at step ``sigma`` (default ``epsilon``).
    Lines starting with ``#`` and blank lines are skipped. Timestamps are
    not normalized here; see :func:`normalize_time`.
    """
    if format not in ("triple", "interval"):
        raise ValidationError(f"unknown format {format!r}")
    if sigma is None:
        sigma = epsilon
    raw: list[tuple[str, str, int]] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = _split(line)
        if format == "triple":
            if len(fields) < 3:
                raise ParseError(f"expected 't u v', got {line!r}", lineno)
            t_str, u, v = fields[0], fields[1], fields[2]
            try:
                t = int(t_str)
            except ValueError:
                raise ParseError(f"bad timestamp {t_str!r}", lineno) from None
            if t < 0:
                raise ValidationError(f"line {lineno}: negative timestamp {t}")
            if u == v:
                raise ValidationError(f"line {lineno}: self-loop contact on {u!r}")
            raw.append((u, v, t))
        else:
            if len(fields) < 4:
                raise ParseError(f"expected 'u v t omega', got {line!r}", lineno)
            u, v, t_str, w_str = fields[0], fields[1], fields[2], fields[3]
            try:
                t, omega = int(t_str), int(w_str)
            except ValueError:
                raise ParseError(
                    f"bad timestamp/duration {t_str!r} {w_str!r}", lineno
                ) from None
            if t < 0 or omega < 0:
                raise ValidationError(
                    f"line {lineno}: negative timestamp or duration"
                )
            if u == v:
                raise ValidationError(f"line {lineno}: self-loop contact on {u!r}")
            raw.extend((u, v, ev.t) for ev in expand_interval(u, v, t, omega, sigma))
    return _assemble(raw, epsilon, sigma)


def load_contacts(
    path: str | Path,
    format: str = "triple",
    epsilon: int = DEFAULT_RESOLUTION,
    sigma: int | None = None,
) -> TemporalNetwork:
    """Parse a contact file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_contacts(fh, format=format, epsilon=epsilon, sigma=sigma)


def write_contacts(net: TemporalNetwork, fp: IO[str]) -> None:
    """Serialize as ``t u v`` lines; inverse of triple-format parsing."""
    for ev in net.events:
        fp.write(f"{ev.t} {net.labels[ev.u]} {net.labels[ev.v]}\n")


def normalize_time(net: TemporalNetwork) -> TemporalNetwork:
    """Shift all timestamps so that the earliest event is at t = 0."""
    if not net.events:
        raise ValidationError("cannot normalize an empty network")
    t0 = net.events[0].t
    if t0 == 0:
        return net
    shifted = tuple(ContactEvent(ev.u, ev.v, ev.t - t0) for ev in net.events)
    return TemporalNetwork(
        labels=net.labels, events=shifted, epsilon=net.epsilon, sigma=net.sigma
    )


def gap_statistics(net: TemporalNetwork) -> GapStatistics:
    """Gap statistics over consecutive *distinct* event timestamps.

    Simultaneous events contribute a single timestamp, so zero gaps never
    occur and the minimum gap is bounded below by the data resolution.
    """
    ts = net.distinct_timestamps()
    if len(ts) < 2:
        raise ValidationError("need at least 2 distinct timestamps for gap statistics")
    gaps = [b - a for a, b in zip(ts, ts[1:])]
    return GapStatistics(
        delta_min=min(gaps), delta_avg=statistics.fmean(gaps), delta_max=max(gaps)
    )


def edge_activity(
    net: TemporalNetwork, bin_width: int
) -> list[tuple[int, int]]:
    """Count distinct active edges per time bin ``[k*b, (k+1)*b)``.

    Bins start at 0 and run through the bin containing the last event;
    bins without any activity are included with count 0.
    """
    if bin_width <= 0:
        raise ValidationError("bin width must be positive")
    if not net.events:
        return []
    per_bin: dict[int, set[tuple[int, int]]] = {}
    for ev in net.events:
        per_bin.setdefault(ev.t // bin_width, set()).add((ev.u, ev.v))
    last = net.horizon // bin_width
    return [(k * bin_width, len(per_bin.get(k, ()))) for k in range(last + 1)]


def write_gap_statistics_csv(
    stats: GapStatistics, fp: IO[str], comments: Sequence[str] = ()
) -> None:
    for c in comments:
        fp.write(f"# {c}\n")
    fp.write("delta_min,delta_avg,delta_max\n")
    fp.write(f"{stats.delta_min},{stats.delta_avg},{stats.delta_max}\n")


def write_edge_activity_csv(
    rows: Iterable[tuple[int, int]], fp: IO[str], comments: Sequence[str] = ()
) -> None:
    for c in comments:
        fp.write(f"# {c}\n")
    fp.write("bin_start,count\n")
    for start, count in rows:
        fp.write(f"{start},{count}\n")
