"""Command-line front end producing machine-readable reports and figures.

Subcommands::

    stats    parse the input, write global statistics and edge activity
    paths    sweep the waiting-time bound and write the length distribution
    markov   select the optimal Markov order at chosen waiting times
    access   unfold accessibility matrices, fidelity and thresholds
    all      run the four analyses into one output directory

Every run writes CSV/JSON outputs (each carrying the tool version and the
full resolved configuration) and, unless ``--no-plot`` is given, a PNG
figure next to each delimited report. Exit codes: 0 success, 2 input
error, 3 resource limit exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import __version__
from .accessibility import connectivity_thresholds, temporal_unfold, write_timeline_csv
from .errors import (
    CausalPathsError,
    InternalInvariantError,
    ParseError,
    PathExplosionError,
    ValidationError,
)
from .ingest import (
    GapStatistics,
    TemporalNetwork,
    edge_activity,
    gap_statistics,
    load_contacts,
    normalize_time,
    write_edge_activity_csv,
)
from .markov import select_optimal_order
from .paths import (
    DEFAULT_PATH_LIMIT,
    build_causal_dag,
    delta_sweep,
    extract_maximal_paths,
    write_sweep_csv,
)

THRESHOLD_PERCENTS = (25, 50, 75, 90)


@dataclass
class RunConfig:
    """Fully resolved options of one CLI invocation."""

    command: str
    input: str
    format: str = "triple"
    epsilon: int = 20
    delta: str | None = None
    delta_step: float = 60.0
    alpha: float = 0.01
    max_order: int = 3
    bin_width: int = 3600
    path_limit: int = DEFAULT_PATH_LIMIT
    out: str = "."
    plot: bool = True
    workers: int = 1

    def echo(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _coerce_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"not a boolean: {text!r}")


# name -> caster applied to config-file values
_CASTERS = {
    "input": str,
    "format": str,
    "epsilon": int,
    "delta": str,
    "delta_step": float,
    "alpha": float,
    "max_order": int,
    "bin_width": int,
    "path_limit": int,
    "out": str,
    "plot": _coerce_bool,
    "workers": int,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalpaths",
        description="Causal path, Markov order and accessibility analysis "
        "of temporal contact networks",
    )
    parser.add_argument("--version", action="version",
                        version=f"causalpaths {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)
    for name, help_text in (
        ("stats", "global statistics and edge activity"),
        ("paths", "path-length distribution over a delta sweep"),
        ("markov", "optimal Markov order per delta"),
        ("access", "accessibility matrices, fidelity and thresholds"),
        ("all", "run every analysis"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="contact edge-list file")
        p.add_argument("--format", choices=("triple", "interval"),
                       help="input layout: 't u v' or 'u v t omega'")
        p.add_argument("--epsilon", type=int,
                       help="temporal resolution in seconds (default 20)")
        p.add_argument("--delta", help="waiting-time bound: a number, a "
                       "comma list, or a range 'lo:hi'; entries may be "
                       "min/avg/max to use the measured gap statistics")
        p.add_argument("--delta-step", type=float, dest="delta_step",
                       help="sweep step in seconds (default 60)")
        p.add_argument("--alpha", type=float,
                       help="significance level for order selection")
        p.add_argument("--max-order", type=int, dest="max_order",
                       help="largest Markov order to consider")
        p.add_argument("--bin-width", type=int, dest="bin_width",
                       help="edge-activity bin width in seconds")
        p.add_argument("--path-limit", type=int, dest="path_limit",
                       help="abort extraction beyond this many paths")
        p.add_argument("--out", help="output directory (default .)")
        p.add_argument("--config", help="key=value file with defaults")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering")
        p.add_argument("--workers", type=int,
                       help="parallel processes for the delta sweep")
    return parser


def _read_config_file(path: str) -> dict:
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {line!r}", lineno)
            key = key.strip().replace("-", "_")
            if key not in _CASTERS:
                raise ValidationError(f"unknown config key {key!r}")
            values[key] = _CASTERS[key](value.strip())
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = _read_config_file(args.config) if args.config else {}
    cfg = RunConfig(command=args.command, input="")
    for name in _CASTERS:
        if name == "plot":
            # --no-plot is the only CLI switch; absence means "not given"
            cli_value = False if args.no_plot else None
        else:
            cli_value = getattr(args, name, None)
        if cli_value is not None:
            setattr(cfg, name, cli_value)
        elif name in file_values:
            setattr(cfg, name, file_values[name])
    if not cfg.input:
        raise ValidationError("no input file given (use --input or a config file)")
    return cfg


def _scalar_delta(token: str, stats: GapStatistics) -> float:
    token = token.strip().lower()
    named = {"min": stats.delta_min, "avg": stats.delta_avg, "max": stats.delta_max}
    if token in named:
        return float(named[token])
    try:
        return float(token)
    except ValueError:
        raise ValidationError(f"bad delta value {token!r}") from None


def resolve_deltas(
    spec: str | None, stats: GapStatistics, default: str
) -> tuple[str, list[float]]:
    """Expand a delta option into ('list', values) or ('range', [lo, hi])."""
    text = spec if spec else default
    if ":" in text:
        lo_s, _, hi_s = text.partition(":")
        lo, hi = _scalar_delta(lo_s, stats), _scalar_delta(hi_s, stats)
        if lo > hi:
            raise ValidationError(f"empty delta range {text!r}")
        return "range", [lo, hi]
    return "list", [_scalar_delta(tok, stats) for tok in text.split(",")]


def _meta(cfg: RunConfig) -> dict:
    return {"tool": "causalpaths", "version": __version__, "config": cfg.echo()}


def _csv_comments(cfg: RunConfig) -> list[str]:
    echo = " ".join(f"{k}={v}" for k, v in sorted(cfg.echo().items()))
    return [f"causalpaths {__version__}", f"config: {echo}"]


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _prepare(cfg: RunConfig) -> tuple[TemporalNetwork, Path]:
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    net = load_contacts(cfg.input, format=cfg.format, epsilon=cfg.epsilon)
    return normalize_time(net), outdir


def cmd_stats(cfg: RunConfig, net: TemporalNetwork, outdir: Path) -> None:
    stats = gap_statistics(net)
    activity = edge_activity(net, cfg.bin_width)
    payload = {
        "meta": _meta(cfg),
        "nodes": net.n_nodes,
        "links": net.n_events,
        "T": net.horizon,
        "delta_min": stats.delta_min,
        "delta_avg": stats.delta_avg,
        "delta_max": stats.delta_max,
    }
    _write_json(outdir / "stats.json", payload)
    with open(outdir / "activity.csv", "w", encoding="utf-8") as fh:
        write_edge_activity_csv(activity, fh, comments=_csv_comments(cfg))
    if cfg.plot:
        from . import plots

        plots.plot_edge_activity(activity, outdir / "activity.png")


def cmd_paths(cfg: RunConfig, net: TemporalNetwork, outdir: Path) -> None:
    stats = gap_statistics(net)
    kind, values = resolve_deltas(cfg.delta, stats, default="min:max")
    if kind == "range":
        lo, hi = values
    else:
        lo = hi = values[0]
        if len(values) > 1:
            raise ValidationError(
                "the paths command expects a single delta or a 'lo:hi' range"
            )
    result = delta_sweep(
        net, mu=cfg.delta_step, delta_min=lo, delta_max=hi,
        limit=cfg.path_limit, workers=cfg.workers, skip_errors=True,
    )
    with open(outdir / "paths_sweep.csv", "w", encoding="utf-8") as fh:
        write_sweep_csv(result, fh, comments=_csv_comments(cfg))
    if cfg.plot:
        from . import plots

        plots.plot_length_probabilities(result.rows, outdir / "paths_sweep.png")


def cmd_markov(cfg: RunConfig, net: TemporalNetwork, outdir: Path) -> None:
    stats = gap_statistics(net)
    kind, values = resolve_deltas(cfg.delta, stats, default="min,avg,max")
    if kind == "range":
        from .paths import _sweep_deltas

        values = _sweep_deltas(cfg.delta_step, values[0], values[1])
    runs = []
    for delta in values:
        dag = build_causal_dag(net, delta)
        ens = extract_maximal_paths(dag, limit=cfg.path_limit)
        selection = select_optimal_order(
            ens, alpha=cfg.alpha, max_order=cfg.max_order
        )
        runs.append({
            "delta": delta,
            "K_opt": selection.k_opt,
            "layers": [
                {
                    "k": layer.k,
                    "log_likelihood": layer.log_likelihood,
                    "dof": layer.dof,
                    "p_value_vs_next": layer.p_value_vs_next,
                    "lrt_statistic": layer.lrt_statistic,
                    "delta_dof": layer.delta_dof,
                    "dof_floored": layer.dof_floored,
                }
                for layer in selection.layers
            ],
        })
    _write_json(outdir / "korder.json", {"meta": _meta(cfg), "runs": runs})


def cmd_access(cfg: RunConfig, net: TemporalNetwork, outdir: Path) -> None:
    result = temporal_unfold(net)
    reached = connectivity_thresholds(
        result.timeline, net.horizon, [p / 100 for p in THRESHOLD_PERCENTS]
    )
    payload = {
        "meta": _meta(cfg),
        "static_density": result.static_density,
        "temporal_density": result.temporal_density,
        "gamma": result.gamma,
        "diameter_reached": result.diameter_reached,
        "thresholds": {
            str(p): reached[p / 100] for p in THRESHOLD_PERCENTS
        },
    }
    with open(outdir / "access_timeline.csv", "w", encoding="utf-8") as fh:
        write_timeline_csv(result.timeline, fh, comments=_csv_comments(cfg))
    _write_json(outdir / "access_summary.json", payload)
    if cfg.plot:
        from . import plots

        plots.plot_density_timeline(result.timeline, outdir / "access_timeline.png")


_COMMANDS = {
    "stats": cmd_stats,
    "paths": cmd_paths,
    "markov": cmd_markov,
    "access": cmd_access,
}


def run(cfg: RunConfig) -> None:
    net, outdir = _prepare(cfg)
    if cfg.command == "all":
        for handler in _COMMANDS.values():
            handler(cfg, net, outdir)
    else:
        _COMMANDS[cfg.command](cfg, net, outdir)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        run(cfg)
    except PathExplosionError as exc:
        print(f"causalpaths: resource limit: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValidationError, OSError) as exc:
        print(f"causalpaths: input error: {exc}", file=sys.stderr)
        return 2
    except (InternalInvariantError, AssertionError) as exc:
        print(f"causalpaths: internal error: {exc}", file=sys.stderr)
        return 4
    except CausalPathsError as exc:
        print(f"causalpaths: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
