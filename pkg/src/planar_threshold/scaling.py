"""Threshold from finite-size crossings of logical-error-rate curves.

The main estimator fits every distance at once to

    rate = A + B*x + C*x**2,    x = (p - p_th) * d**(1/nu)

with free ``A, B, C, p_th, nu``, weighting each point by its binomial
standard error.  Averaging the pairwise crossings of adjacent-distance
curves serves as a model-free cross-check and seeds the fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit

from .montecarlo import BatchResult


class NoCrossingError(ValueError):
    """No pair of distance curves crosses inside the scanned p range."""


@dataclass
class ThresholdEstimate:
    p_th: float
    nu: float
    stderr: float
    nu_stderr: float
    A: float
    B: float
    C: float
    chi2: float
    dof: int
    crossing_mean: float
    crossings: list[dict] = field(default_factory=list)
    residuals: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "p_th": self.p_th,
            "nu": self.nu,
            "stderr": self.stderr,
            "nu_stderr": self.nu_stderr,
            "fit": {"A": self.A, "B": self.B, "C": self.C, "chi2": self.chi2, "dof": self.dof},
            "crossing_mean": self.crossing_mean,
            "crossings": self.crossings,
            "residuals": self.residuals,
        }


def scaling_form(p, d, p_th, nu, A, B, C):
    x = (p - p_th) * np.power(d, 1.0 / nu)
    return A + B * x + C * x * x


def _curves(results: Sequence[BatchResult]) -> dict[int, dict[float, BatchResult]]:
    out: dict[int, dict[float, BatchResult]] = {}
    for r in results:
        out.setdefault(r.distance, {})[r.p] = r
    return out


def pairwise_crossings(results: Sequence[BatchResult]) -> list[dict]:
    """Linear-interpolated crossing of each adjacent pair of distance curves.

    A crossing is where the larger distance goes from the lower to the higher
    rate as ``p`` increases.  Pairs without one are skipped.
    """
    curves = _curves(results)
    ds = sorted(curves)
    found = []
    for d1, d2 in zip(ds, ds[1:]):
        ps = sorted(set(curves[d1]) & set(curves[d2]))
        diff = [curves[d2][p].rate - curves[d1][p].rate for p in ps]
        for i in range(len(ps) - 1):
            a, b = diff[i], diff[i + 1]
            if a <= 0 < b or a < 0 <= b:
                t = a / (a - b)
                found.append({"d1": d1, "d2": d2, "p": ps[i] + t * (ps[i + 1] - ps[i])})
                break
    return found


def estimate_threshold(results: Sequence[BatchResult], nu_guess: float = 1.0) -> ThresholdEstimate:
    curves = _curves(results)
    if len(curves) < 2:
        raise ValueError("need at least two distances")
    if min(len(c) for c in curves.values()) < 3:
        raise ValueError("need at least three p values per distance")
    crossings = pairwise_crossings(results)
    if not crossings:
        raise NoCrossingError("no crossing between distance curves; widen the p range")
    crossing_mean = float(np.mean([c["p"] for c in crossings]))

    p = np.array([r.p for r in results], dtype=float)
    d = np.array([r.distance for r in results], dtype=float)
    y = np.array([r.rate for r in results], dtype=float)
    n = np.array([r.trials for r in results], dtype=float)
    # Floor keeps zero-failure points from acquiring infinite weight.
    sigma = np.sqrt(np.maximum(y * (1 - y), 1.0 / n) / n)

    def model(X, p_th, nu, A, B, C):
        return scaling_form(X[0], X[1], p_th, nu, A, B, C)

    A0 = float(np.interp(crossing_mean, *zip(*sorted((r.p, r.rate) for r in curves[min(curves)].values()))))
    slope = np.polyfit(p, y, 1)[0]
    guess = [crossing_mean, nu_guess, A0, slope / np.mean(d ** (1 / nu_guess)), 0.0]
    popt, pcov = curve_fit(model, np.vstack([p, d]), y, p0=guess, sigma=sigma, absolute_sigma=True, maxfev=20000)
    p_th, nu, A, B, C = (float(v) for v in popt)
    err = np.sqrt(np.diag(pcov))
    fitted = model(np.vstack([p, d]), *popt)
    resid = (y - fitted) / sigma
    lo, hi = float(p.min()), float(p.max())
    if not lo <= p_th <= hi:
        raise NoCrossingError(f"fitted threshold {p_th:.5g} lies outside the scanned range [{lo}, {hi}]")
    return ThresholdEstimate(
        p_th=p_th,
        nu=nu,
        stderr=float(err[0]),
        nu_stderr=float(err[1]),
        A=A,
        B=B,
        C=C,
        chi2=float(np.sum(resid**2)),
        dof=int(len(y) - 5),
        crossing_mean=crossing_mean,
        crossings=crossings,
        residuals=[
            {"distance": int(di), "p": float(pi), "rate": float(yi), "fit": float(fi), "pull": float(ri)}
            for di, pi, yi, fi, ri in zip(d, p, y, fitted, resid)
        ],
    )
