import logging

import numpy as np
from scipy import stats

from ..exceptions import ArgumentError
from ..models.analysis import PValue, Smoothing
from . import streams

logger = logging.getLogger(__name__)

MC_CHUNK = 10_000


def _check_unit_interval(p) -> np.ndarray:
    values = np.asarray(p, dtype=float).reshape(-1)
    if values.size < 1:
        raise ArgumentError('KS test needs at least one value')
    if not np.isfinite(values).all() or (values < 0).any() or (values > 1).any():
        raise ArgumentError('KS test values must lie in [0, 1]')
    return values


def _ks_rows(samples: np.ndarray) -> np.ndarray:
    """Two-sided KS distance to Uniform[0,1] for every row of ``samples``"""
    ordered = np.sort(samples, axis=-1)
    n = ordered.shape[-1]
    steps = np.arange(1, n + 1) / n
    above = (steps - ordered).max(axis=-1)
    below = (ordered - (steps - 1.0 / n)).max(axis=-1)
    return np.maximum(above, below)


def ks_statistic_uniform(p) -> float:
    """sup |F_n(t) - t| over [0, 1]"""
    return float(stats.kstest(_check_unit_interval(p), 'uniform').statistic)


def ks_uniformity_test(
    p, n_mc: int = 100_000, seed: int = 0, smoothing: Smoothing = Smoothing.ADD_ONE
) -> PValue:
    """Monte-Carlo KS test of uniformity

    Null statistics come from ``n_mc`` uniform samples of the same length,
    drawn in fixed-size chunks; chunk ``c`` uses stream ``(seed, c)``.
    """
    values = _check_unit_interval(p)
    if n_mc < 1:
        raise ArgumentError(f'n_mc must be >= 1, got {n_mc}')
    observed = ks_statistic_uniform(values)

    exceed = 0
    for chunk, start in enumerate(range(0, n_mc, MC_CHUNK)):
        size = min(MC_CHUNK, n_mc - start)
        draws = streams.stream(seed, streams.KS, chunk).random((size, values.size))
        exceed += int(np.count_nonzero(_ks_rows(draws) >= observed))

    result = PValue.from_count(exceed, n_mc, smoothing, statistic=observed)
    logger.debug(f'KS D={observed:.4f} on {values.size} values, p={result.value:.4g}')
    return result
