"""Trial batches over (distance, p) grids.

Trials are cut into fixed-size chunks before dispatch.  Each trial draws its
faults from its own ``(seed, trial index)`` stream, and chunk results are
reduced in chunk order, so counts do not depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from .circuit import detection_event_array, run_trial, sample_trial_faults, simulate_batch, stack_faults
from .decoder import decode, logical_failure, logical_failures_batch, space_time_matcher
from .lattice import build_planar_code
from .noise import NoiseParams, trial_rng

logger = logging.getLogger(__name__)

CHUNK_SIZE = 250
DECODERS = ("pymatching", "blossom")
CSV_FIELDS = (
    "distance",
    "p",
    "rounds",
    "trials",
    "failures_x",
    "failures_z",
    "failures_any",
    "rate",
    "ci_low",
    "ci_high",
    "seed",
)


@dataclass(frozen=True)
class BatchResult:
    distance: int
    p: float
    rounds: int
    trials: int
    failures_x: int
    failures_z: int
    failures_any: int
    rate: float
    ci_low: float
    ci_high: float
    seed: int

    def row(self) -> dict:
        return asdict(self)


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(int(failures), int(trials)).proportion_ci(confidence_level=confidence, method="wilson")
    return float(max(0.0, ci.low)), float(min(1.0, ci.high))


def summarize(
    distance: int, p: float, rounds: int, trials: int, fx: int, fz: int, fany: int, seed: int
) -> BatchResult:
    lo, hi = wilson_interval(fany, trials)
    return BatchResult(
        distance=distance,
        p=p,
        rounds=rounds,
        trials=trials,
        failures_x=int(fx),
        failures_z=int(fz),
        failures_any=int(fany),
        rate=fany / trials,
        ci_low=lo,
        ci_high=hi,
        seed=seed,
    )


@dataclass(frozen=True)
class _Chunk:
    distance: int
    p: float
    rounds: int
    seed: int
    start: int
    stop: int
    decoder: str
    spatial_weight: float
    time_weight: float


def run_chunk(job: _Chunk) -> tuple[int, int, int]:
    """Failure counts ``(x, z, any)`` for trials ``start..stop-1`` of one grid point."""
    layout = build_planar_code(job.distance)
    trials = range(job.start, job.stop)
    if job.decoder == "blossom":
        params = NoiseParams(job.p)
        fx = fz = fany = 0
        for i in trials:
            history = run_trial(layout, params, job.rounds, rng=trial_rng(job.seed, i))
            corrections = decode(layout, history, job.spatial_weight, job.time_weight)
            xf, zf = logical_failure(layout, history.final_frame, corrections)
            fx += xf
            fz += zf
            fany += xf or zf
        return fx, fz, fany
    if job.decoder != "pymatching":
        raise ValueError(f"unknown decoder {job.decoder!r}")
    faults = stack_faults([sample_trial_faults(layout, job.p, job.rounds, trial_rng(job.seed, i)) for i in trials])
    history, final_x, final_z = simulate_batch(layout, faults)
    events = detection_event_array(history)
    matcher = space_time_matcher(layout, job.rounds + 1, float(job.spatial_weight), float(job.time_weight))
    corr_z, corr_x = matcher.decode_batch(events)
    xf, zf = logical_failures_batch(layout, final_x, final_z, corr_z, corr_x)
    return int(xf.sum()), int(zf.sum()), int((xf | zf).sum())


def _chunks(distance, p, trials, rounds, seed, decoder, spatial_weight, time_weight) -> list[_Chunk]:
    return [
        _Chunk(distance, p, rounds, seed, s, min(s + CHUNK_SIZE, trials), decoder, spatial_weight, time_weight)
        for s in range(0, trials, CHUNK_SIZE)
    ]


def run_grid(
    distances: Sequence[int],
    p_values: Sequence[float],
    trials: int,
    seed: int,
    rounds: int | None = None,
    threads: int = 1,
    decoder: str = "pymatching",
    spatial_weight: float = 1.0,
    time_weight: float = 1.0,
) -> list[BatchResult]:
    """One :class:`BatchResult` per ``(distance, p)``, distance-major order.

    ``rounds=None`` means ``2 * distance`` noisy rounds.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}; choose from {DECODERS}")
    points = []
    jobs: list[_Chunk] = []
    for d in distances:
        r = 2 * d if rounds is None else rounds
        if r < 1:
            raise ValueError(f"rounds must be >= 1, got {r}")
        for p in p_values:
            NoiseParams(p)
            cs = _chunks(d, p, trials, r, seed, decoder, spatial_weight, time_weight)
            points.append((d, p, r, len(jobs), len(jobs) + len(cs)))
            jobs.extend(cs)

    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(run_chunk, jobs))
    else:
        counts = [run_chunk(j) for j in jobs]

    out = []
    for d, p, r, lo, hi in points:
        fx, fz, fany = (sum(c[k] for c in counts[lo:hi]) for k in range(3))
        res = summarize(d, p, r, trials, fx, fz, fany, seed)
        logger.info("d=%d p=%g rounds=%d rate=%.5f [%.5f, %.5f]", d, p, r, res.rate, res.ci_low, res.ci_high)
        out.append(res)
    return out


def run_batch(
    distance: int,
    p: float,
    trials: int,
    rounds: int | None = None,
    seed: int = 0,
    threads: int = 1,
    decoder: str = "pymatching",
    spatial_weight: float = 1.0,
    time_weight: float = 1.0,
) -> BatchResult:
    return run_grid(
        [distance], [p], trials, seed, rounds, threads, decoder, spatial_weight, time_weight
    )[0]


def default_threads() -> int:
    return os.cpu_count() or 1


# Serialisation -------------------------------------------------------------


def results_to_csv(results: Iterable[BatchResult]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.row())
    return buf.getvalue()


def results_to_json(results: Iterable[BatchResult]) -> str:
    return json.dumps([r.row() for r in results], indent=2) + "\n"


def results_from_csv(text: str) -> list[BatchResult]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(
            BatchResult(
                distance=int(row["distance"]),
                p=float(row["p"]),
                rounds=int(row["rounds"]),
                trials=int(row["trials"]),
                failures_x=int(row["failures_x"]),
                failures_z=int(row["failures_z"]),
                failures_any=int(row["failures_any"]),
                rate=float(row["rate"]),
                ci_low=float(row["ci_low"]),
                ci_high=float(row["ci_high"]),
                seed=int(row["seed"]),
            )
        )
    return out
