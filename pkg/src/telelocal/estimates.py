"""Streaming mean / standard error accumulation for Monte Carlo estimators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A Monte Carlo mean with its standard error and sample count."""

    value: float
    stderr: float
    samples: int


class StreamingMoments:
    """Accumulates first and second moments over chunks of samples.

    ``add`` takes arrays of shape (chunk, *cell_shape); the estimate is per
    cell. With fewer than two samples the standard error is reported as inf.
    """

    def __init__(self, cell_shape: tuple[int, ...] = ()):
        self.cell_shape = cell_shape
        self._sum = np.zeros(cell_shape)
        self._sumsq = np.zeros(cell_shape)
        self._count = 0

    def add(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float)
        if values.shape[1:] != self.cell_shape:
            raise ValueError(f"chunk cells of shape {values.shape[1:]}, expected {self.cell_shape}")
        self._sum += values.sum(axis=0)
        self._sumsq += np.square(values).sum(axis=0)
        self._count += values.shape[0]

    @property
    def count(self) -> int:
        return self._count

    def mean(self) -> np.ndarray:
        if self._count == 0:
            raise ValueError("no samples accumulated")
        return self._sum / self._count

    def stderr(self) -> np.ndarray:
        if self._count < 2:
            return np.full(self.cell_shape, np.inf)
        mean = self.mean()
        var = (self._sumsq - self._count * np.square(mean)) / (self._count - 1)
        return np.sqrt(np.clip(var, 0.0, None) / self._count)

    def scalar_estimate(self) -> MonteCarloEstimate:
        if self.cell_shape != ():
            raise ValueError("scalar_estimate requires scalar cells")
        return MonteCarloEstimate(float(self.mean()), float(self.stderr()), self._count)
