"""Unit tests for streaming Monte Carlo moment accumulation."""

import numpy as np
import numpy.testing as npt
import pytest

from telelocal.estimates import MonteCarloEstimate, StreamingMoments


def test_scalar_moments_match_numpy_across_chunks():
    rng = np.random.default_rng(7)
    data = rng.random(1001)
    acc = StreamingMoments()
    acc.add(data[:400])
    acc.add(data[400:900])
    acc.add(data[900:])
    assert acc.count == 1001
    npt.assert_allclose(acc.mean(), data.mean(), rtol=1e-12)
    npt.assert_allclose(acc.stderr(), data.std(ddof=1) / np.sqrt(data.size), rtol=1e-9)
    est = acc.scalar_estimate()
    assert isinstance(est, MonteCarloEstimate)
    assert est.samples == 1001
    npt.assert_allclose(est.value, data.mean(), rtol=1e-12)


def test_cell_shaped_moments():
    rng = np.random.default_rng(8)
    data = rng.random((500, 2, 2))
    acc = StreamingMoments((2, 2))
    acc.add(data[:123])
    acc.add(data[123:])
    npt.assert_allclose(acc.mean(), data.mean(axis=0), rtol=1e-12)
    npt.assert_allclose(acc.stderr(), data.std(axis=0, ddof=1) / np.sqrt(500), rtol=1e-9)
    with pytest.raises(ValueError):
        acc.scalar_estimate()


def test_shape_mismatch_rejected():
    acc = StreamingMoments((2,))
    with pytest.raises(ValueError):
        acc.add(np.zeros((10, 3)))


def test_degenerate_counts():
    acc = StreamingMoments()
    with pytest.raises(ValueError):
        acc.mean()
    acc.add(np.array([1.0]))
    assert np.isinf(acc.stderr())
    acc.add(np.array([1.0]))
    # constant data: variance clips to zero instead of going negative
    assert acc.stderr() == 0.0
    assert acc.mean() == 1.0
