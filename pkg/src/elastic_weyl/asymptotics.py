"""Comparing counting-function data against one- and two-term predictions.

The boundary term of a counting function is a noisy o(.)-remainder away from
its closed form, and pointwise residuals oscillate with number-theoretic
noise; only averages over growing windows settle down.  The estimator here
therefore averages the normalised first residual over dyadic windows and
reports the top-window mean, with the spread across windows as a crude
uncertainty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "AsymptoticModel",
    "ResidualSeries",
    "CoefficientEstimate",
    "InsufficientSpanError",
    "two_term_prediction",
    "residual_table",
    "estimate_second_coefficient",
]


class InsufficientSpanError(ValueError):
    """Samples do not span enough dyadic windows for a stable estimate."""


@dataclass(frozen=True)
class AsymptoticModel:
    """N(L) ~ leading * L^(d/2) + second * L^((d-1)/2)."""

    leading: float
    second: float
    dimension: int

    def __post_init__(self):
        if not self.leading > 0:
            raise ValueError("leading coefficient must be positive")


@dataclass(frozen=True)
class ResidualSeries:
    """Per-sample residuals against a two-term model.

    residual1 = (N - leading * L^(d/2)) / L^((d-1)/2)   (should approach
    the second coefficient); residual2 = residual1 - second (should decay).
    """

    lambdas: np.ndarray
    counts: np.ndarray
    residual1: np.ndarray
    residual2: np.ndarray


@dataclass(frozen=True)
class CoefficientEstimate:
    """Windowed estimate of the second coefficient from counting data."""

    estimate: float
    uncertainty: float
    window_means: tuple

    def __float__(self):
        return self.estimate


def two_term_prediction(model: AsymptoticModel, lam) -> float:
    """leading * L^(d/2) + second * L^((d-1)/2); array-friendly."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0):
        raise ValueError("spectral values must be nonnegative")
    d = model.dimension
    out = model.leading * lam ** (d / 2.0) + model.second * lam ** ((d - 1) / 2.0)
    return float(out) if out.ndim == 0 else out


def _split_samples(samples):
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be (lambda, count) pairs")
    lams, counts = arr[:, 0], arr[:, 1]
    if np.any(np.diff(lams) <= 0):
        raise ValueError("sample spectral values must be strictly increasing")
    return lams, counts


def residual_table(samples, model: AsymptoticModel) -> ResidualSeries:
    """Residuals of the data against the model, sample by sample."""
    if len(samples) == 0:
        empty = np.array([])
        return ResidualSeries(empty, empty, empty, empty)
    lams, counts = _split_samples(samples)
    d = model.dimension
    r1 = (counts - model.leading * lams ** (d / 2.0)) / lams ** ((d - 1) / 2.0)
    return ResidualSeries(lams, counts, r1, r1 - model.second)


def estimate_second_coefficient(samples, leading: float, d: int,
                                min_samples: int = 100) -> CoefficientEstimate:
    """Top-dyadic-window mean of the first residual.

    Windows are (Lmax/2^(j+1), Lmax/2^j]; the estimate is the mean over the
    top window, and the uncertainty is half the spread of the means of all
    windows holding at least five samples.  Requires ``min_samples`` samples
    spanning at least two such windows.
    """
    lams, counts = _split_samples(samples)
    if lams.size < min_samples:
        raise InsufficientSpanError(
            f"need at least {min_samples} samples, got {lams.size}"
        )
    r1 = (counts - leading * lams ** (d / 2.0)) / lams ** ((d - 1) / 2.0)
    top = lams.max()
    means = []
    hi = top
    while True:
        lo = hi / 2.0
        mask = (lams > lo) & (lams <= hi)
        if not mask.any():
            break
        if mask.sum() >= 5 or hi == top:
            means.append(float(r1[mask].mean()))
        hi = lo
        if lo < lams.min():
            break
    if len(means) < 2:
        raise InsufficientSpanError(
            "samples span fewer than two dyadic windows"
        )
    return CoefficientEstimate(
        estimate=means[0],
        uncertainty=0.5 * (max(means) - min(means)),
        window_means=tuple(means),
    )
