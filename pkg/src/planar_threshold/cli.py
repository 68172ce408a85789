"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from .circuit import detection_events, run_trial
from .config import ConfigError, RunConfig, parse_distances, parse_p_values
from .decoder import build_matching_graph
from .lattice import Kind, build_planar_code
from .montecarlo import default_threads, results_to_csv, results_to_json, run_grid
from .noise import NoiseParams, trial_rng
from .scaling import NoCrossingError, estimate_threshold
from .selftest import run_selftest

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_SELFTEST = 0, 1, 2, 3

log = logging.getLogger("planar_threshold")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError("arguments", message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="planar-threshold",
        description="Circuit-level planar surface code threshold simulation with MWPM decoding.",
    )
    # Defaults are None so that only flags actually given override the config file.
    ap.add_argument("--config", help="JSON file with RunConfig fields")
    ap.add_argument("--mode", choices=("sweep", "threshold", "selftest"))
    ap.add_argument("--distances", help="comma-separated code distances, e.g. 8,10,12,14")
    ap.add_argument("--p", dest="p_values", help="start:stop:step (inclusive) or comma list")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--rounds", type=int, help="noisy rounds per trial (default 2d)")
    ap.add_argument("--seed", type=int, help="master seed (required for sweep/threshold)")
    ap.add_argument("--threads", type=int, help="worker processes (default: all cores)")
    ap.add_argument("--output", help="results file (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--report", help="threshold report JSON (default: <output>.threshold.json or stdout)")
    ap.add_argument("--decoder", choices=("pymatching", "blossom"))
    ap.add_argument("--spatial-weight", type=float, dest="spatial_weight")
    ap.add_argument("--time-weight", type=float, dest="time_weight")
    ap.add_argument("--dump-layout", dest="dump_layout", help="write lattice layouts as JSON")
    ap.add_argument("--dump-graphs", dest="dump_graphs", help="write matching graphs as JSON lines")
    ap.add_argument("--dump-events", dest="dump_events", help="write detection events as JSON lines")
    ap.add_argument("--dump-trials", type=int, dest="dump_trials", help="trials per grid point to dump (default 10)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def parse_config(argv: list[str] | None = None) -> tuple[RunConfig, bool]:
    """Validated config and the verbose flag."""
    args = build_parser().parse_args(argv)
    data: dict = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{args.config} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
    flags = vars(args)
    for key, value in flags.items():
        if key in ("config", "verbose") or value is None:
            continue
        if key == "distances":
            value = parse_distances(value)
        elif key == "p_values":
            value = parse_p_values(value)
        data[key] = value
    return RunConfig.from_dict(data), args.verbose


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent if str(target.parent) else ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_layouts(cfg: RunConfig) -> None:
    payload = {str(d): build_planar_code(d).to_dict() for d in cfg.distances}
    write_atomic(cfg.dump_layout, json.dumps(payload, indent=1) + "\n")


def _dump_trials(cfg: RunConfig) -> None:
    """Replay the first trials of each grid point through the reference path."""
    event_lines, graph_lines = [], []
    for d in cfg.distances:
        layout = build_planar_code(d)
        rounds = 2 * d if cfg.rounds is None else cfg.rounds
        for p in cfg.p_values:
            for i in range(min(cfg.dump_trials, cfg.trials)):
                h = run_trial(layout, NoiseParams(p), rounds, rng=trial_rng(cfg.seed, i))
                events = detection_events(layout, h)
                tag = {"distance": d, "p": p, "trial": i}
                for e in events:
                    event_lines.append({**tag, "kind": e.kind.value, "stabilizer": e.stabilizer, "round": e.round})
                for kind in (Kind.STAR, Kind.PLAQUETTE):
                    g = build_matching_graph(
                        layout, [e for e in events if e.kind is kind], kind, cfg.spatial_weight, cfg.time_weight
                    )
                    graph_lines.append({**tag, **g.to_dict()})
    if cfg.dump_events:
        write_atomic(cfg.dump_events, "".join(json.dumps(x) + "\n" for x in event_lines))
    if cfg.dump_graphs:
        write_atomic(cfg.dump_graphs, "".join(json.dumps(x) + "\n" for x in graph_lines))


def _report_path(cfg: RunConfig) -> str | None:
    if cfg.report:
        return cfg.report
    if cfg.output:
        return str(Path(cfg.output).with_suffix("")) + ".threshold.json"
    return None


def run(cfg: RunConfig) -> int:
    if cfg.mode == "selftest":
        return EXIT_OK if run_selftest() else EXIT_SELFTEST

    path = None
    try:
        if cfg.dump_layout:
            path = cfg.dump_layout
            _dump_layouts(cfg)
        if cfg.dump_graphs or cfg.dump_events:
            path = cfg.dump_graphs or cfg.dump_events
            _dump_trials(cfg)

        results = run_grid(
            cfg.distances,
            cfg.p_values,
            cfg.trials,
            cfg.seed,
            rounds=cfg.rounds,
            threads=cfg.threads or default_threads(),
            decoder=cfg.decoder,
            spatial_weight=cfg.spatial_weight,
            time_weight=cfg.time_weight,
        )
        text = results_to_csv(results) if cfg.format == "csv" else results_to_json(results)
        if cfg.output:
            path = cfg.output
            write_atomic(cfg.output, text)
        else:
            sys.stdout.write(text)

        print(f"{len(results)} batch results (seed {cfg.seed})", file=sys.stderr)
        for r in results:
            print(
                f"  d={r.distance:<3d} p={r.p:<8g} rate={r.rate:.5f}  95% CI [{r.ci_low:.5f}, {r.ci_high:.5f}]",
                file=sys.stderr,
            )

        if cfg.mode == "threshold":
            try:
                est = estimate_threshold(results)
            except NoCrossingError as exc:
                print(f"error: threshold fit failed: {exc}", file=sys.stderr)
                return EXIT_RUNTIME
            report = {"seed": cfg.seed, "config": cfg.to_dict(), **est.to_dict()}
            text = json.dumps(report, indent=2) + "\n"
            rpath = _report_path(cfg)
            if rpath:
                path = rpath
                write_atomic(rpath, text)
            else:
                sys.stdout.write(text)
            print(f"p_th = {est.p_th:.5f} +/- {est.stderr:.5f} (nu = {est.nu:.3f})", file=sys.stderr)
    except OSError as exc:
        print(f"error: cannot write {path or exc.filename}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        cfg, verbose = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
