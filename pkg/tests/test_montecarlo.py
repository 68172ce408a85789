import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from planar_threshold import montecarlo
from planar_threshold.montecarlo import (
    CSV_FIELDS,
    results_from_csv,
    results_to_csv,
    results_to_json,
    run_batch,
    run_grid,
    summarize,
    wilson_interval,
)


def wilson_closed_form(k, n, z=1.959963984540054):
    ph = k / n
    centre = (ph + z * z / (2 * n)) / (1 + z * z / n)
    half = z / (1 + z * z / n) * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n))
    return centre - half, centre + half


@given(st.integers(1, 5000), st.data())
def test_wilson_matches_closed_form(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = wilson_interval(k, n)
    elo, ehi = wilson_closed_form(k, n)
    assert lo == pytest.approx(max(0.0, elo), abs=1e-9)
    assert hi == pytest.approx(min(1.0, ehi), abs=1e-9)
    assert 0.0 <= lo <= k / n <= hi <= 1.0


@pytest.mark.parametrize("rate,n", [(0.01, 1000), (0.2, 200), (0.45, 5000)])
def test_wilson_coverage(rate, n):
    rng = np.random.default_rng(17)
    ks = rng.binomial(n, rate, size=2000)
    covered = np.mean([lo <= rate <= hi for lo, hi in (wilson_interval(k, n) for k in ks)])
    assert covered >= 0.93


def test_summary_invariants():
    r = summarize(3, 0.01, 6, 400, 10, 7, 15, 99)
    assert r.rate == 15 / 400
    assert r.failures_any <= r.trials
    assert r.ci_low <= r.rate <= r.ci_high
    assert set(r.row()) == set(CSV_FIELDS)


def test_zero_noise_gives_zero_rate():
    for decoder in ("pymatching", "blossom"):
        r = run_batch(3, 0.0, 300, seed=1, decoder=decoder)
        assert r.failures_any == r.failures_x == r.failures_z == 0
        assert r.rounds == 6


def test_identical_inputs_identical_results():
    a = run_grid([3, 4], [0.01, 0.02], 300, seed=5)
    b = run_grid([3, 4], [0.01, 0.02], 300, seed=5)
    assert a == b
    assert [(r.distance, r.p) for r in a] == [(3, 0.01), (3, 0.02), (4, 0.01), (4, 0.02)]
    assert a != run_grid([3, 4], [0.01, 0.02], 300, seed=6)


def test_threads_do_not_change_results():
    a = run_grid([3], [0.015], 600, seed=8, threads=1)
    b = run_grid([3], [0.015], 600, seed=8, threads=2)
    assert a == b


def test_chunk_size_does_not_change_results(monkeypatch):
    a = run_grid([3], [0.02], 320, seed=4)
    monkeypatch.setattr(montecarlo, "CHUNK_SIZE", 37)
    assert run_grid([3], [0.02], 320, seed=4) == a


def test_engines_agree_statistically():
    # Both engines are exact MWPM with the same tie rule; remaining differences
    # come from exact double ties only.
    a = run_batch(3, 0.01, 400, seed=3, decoder="blossom")
    b = run_batch(3, 0.01, 400, seed=3, decoder="pymatching")
    assert abs(a.failures_any - b.failures_any) <= 4 * math.sqrt(a.failures_any + b.failures_any) + 1


def test_rate_grows_with_p():
    lo, hi = run_grid([4], [0.003, 0.02], 800, seed=2)
    assert lo.rate < hi.rate


def test_csv_roundtrip():
    res = run_grid([2, 3], [0.0, 0.05], 50, seed=1)
    text = results_to_csv(res)
    assert text.splitlines()[0] == ",".join(CSV_FIELDS)
    assert len(text.splitlines()) == 5
    assert results_from_csv(text) == res
    assert '"distance": 2' in results_to_json(res)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        run_grid([3], [0.01], 0, seed=1)
    with pytest.raises(ValueError):
        run_grid([3], [1.5], 10, seed=1)
    with pytest.raises(ValueError):
        run_grid([3], [0.01], 10, seed=1, decoder="greedy")
    with pytest.raises(ValueError):
        run_grid([3], [0.01], 10, seed=1, rounds=0)
