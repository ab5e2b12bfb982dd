import logging
import math

import numpy as np
from scipy import stats

from ..exceptions import ArgumentError, DegenerateInputError
from ..models.analysis import PValue, WilcoxonResult

logger = logging.getLogger(__name__)

MIN_VALUES = 6
EXACT_MAX_N = 25


def _signed_ranks(values, mu0: float):
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size < MIN_VALUES:
        raise ArgumentError(
            f'Wilcoxon test needs at least {MIN_VALUES} values, got {values.size}'
        )
    if not np.isfinite(values).all():
        raise ArgumentError('Wilcoxon test values must be finite')
    diffs = values - mu0
    diffs = diffs[diffs != 0]
    if diffs.size == 0:
        raise DegenerateInputError(f'All values equal mu0={mu0}')
    ranks = stats.rankdata(np.abs(diffs))  # mid-ranks for ties
    return diffs, ranks


def wilcoxon_z(values, mu0: float = 50.0) -> float:
    diffs, ranks = _signed_ranks(values, mu0)
    return _z_score(diffs, ranks)


def _z_score(diffs: np.ndarray, ranks: np.ndarray) -> float:
    n = diffs.size
    w_plus = float(ranks[diffs > 0].sum())
    mean_w = n * (n + 1) / 4.0
    std_w = math.sqrt(n * (n + 1) * (2 * n + 1) / 24.0)
    return (w_plus - mean_w) / std_w


def _exact_p(ranks: np.ndarray, w_plus: float) -> float:
    """Two-sided p from the exact null distribution of W+ (doubled ranks stay integral)"""
    doubled = np.rint(ranks * 2).astype(int)
    total = int(doubled.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled:
        counts[r:] = counts[r:] + counts[: total + 1 - r].copy()
    probabilities = counts / counts.sum()
    observed = int(round(w_plus * 2))
    lower = probabilities[: observed + 1].sum()
    upper = probabilities[observed:].sum()
    return float(min(1.0, 2.0 * min(lower, upper)))


def wilcoxon_signed_rank(
    values, mu0: float = 50.0, method: str = 'normal'
) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test of values against ``mu0``

    The normal approximation uses no continuity or tie correction; zero
    differences are dropped and ties are mid-ranked.
    """
    diffs, ranks = _signed_ranks(values, mu0)
    n = diffs.size
    w_plus = float(ranks[diffs > 0].sum())
    z = _z_score(diffs, ranks)

    if method == 'normal':
        p = float(2.0 * stats.norm.sf(abs(z)))
    elif method == 'exact':
        if n > EXACT_MAX_N:
            raise ArgumentError(f'Exact mode supports n <= {EXACT_MAX_N}, got {n}')
        p = _exact_p(ranks, w_plus)
    else:
        raise ArgumentError(f'Unknown Wilcoxon method {method!r}')

    logger.info(f'Wilcoxon W+={w_plus:g}, z={z:.4f}, p={p:.4e} (n={n}, {method})')
    return WilcoxonResult(
        w_plus=w_plus,
        z=z,
        n=n,
        mu0=mu0,
        method=method,
        p=PValue(value=min(p, 1.0), n_permutations=0, statistic=w_plus),
    )
