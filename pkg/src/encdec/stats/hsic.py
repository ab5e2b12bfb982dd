import logging
from typing import Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..exceptions import ArgumentError
from ..models.analysis import (
    GAUSSIAN_KERNEL,
    KernelKind,
    KernelSpec,
    PValue,
    Smoothing,
)
from . import streams

logger = logging.getLogger(__name__)

FALLBACK_BANDWIDTH = 1.0


def _as_points(x) -> np.ndarray:
    points = np.asarray(x, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if points.ndim != 2:
        raise ArgumentError('Expected a sequence of scalars or of points')
    if not np.isfinite(points).all():
        raise ArgumentError('Input contains non-finite values')
    return points


def median_heuristic(x) -> float:
    """Median pairwise Euclidean distance, 1.0 when the input is constant"""
    points = _as_points(x)
    if len(points) < 2:
        raise ArgumentError(f'Median heuristic needs at least 2 points, got {len(points)}')
    median = float(np.median(pdist(points, metric='euclidean')))
    return median if median > 0 else FALLBACK_BANDWIDTH


def gram_matrix(x, kernel: KernelSpec = GAUSSIAN_KERNEL) -> Tuple[np.ndarray, float]:
    """Gram matrix of ``x`` and the bandwidth used (0.0 for the delta kernel)"""
    points = _as_points(x)
    if kernel.kind is KernelKind.DELTA:
        same = (points[:, None, :] == points[None, :, :]).all(axis=2)
        return same.astype(float), 0.0

    bandwidth = kernel.bandwidth or median_heuristic(points)
    squared = squareform(pdist(points, metric='sqeuclidean'))
    return np.exp(-squared / (2.0 * bandwidth**2)), bandwidth


def _center(gram: np.ndarray) -> np.ndarray:
    return (
        gram
        - gram.mean(axis=0, keepdims=True)
        - gram.mean(axis=1, keepdims=True)
        + gram.mean()
    )


def _check_pair(x, y) -> int:
    n, m = len(x), len(y)
    if n != m:
        raise ArgumentError(f'Length mismatch: {n} vs {m}')
    if n < 3:
        raise ArgumentError(f'HSIC needs at least 3 samples, got {n}')
    return n


def hsic_statistic(
    x, y, kx: KernelSpec = GAUSSIAN_KERNEL, ky: KernelSpec = GAUSSIAN_KERNEL
) -> float:
    """Biased HSIC estimate (1/n^2) trace(K H L H)"""
    n = _check_pair(x, y)
    k, _ = gram_matrix(x, kx)
    l, _ = gram_matrix(y, ky)
    value = float(np.sum(_center(k) * _center(l))) / n**2
    return max(value, 0.0)


def _one_hot(labels: np.ndarray) -> np.ndarray:
    _, codes = np.unique(labels, axis=0, return_inverse=True)
    codes = codes.reshape(-1)
    return np.eye(codes.max() + 1)[codes]


def hsic_perm_test(
    x,
    y,
    kx: KernelSpec = GAUSSIAN_KERNEL,
    ky: KernelSpec = GAUSSIAN_KERNEL,
    n_perm: int = 1000,
    seed: int = 0,
    smoothing: Smoothing = Smoothing.ADD_ONE,
) -> PValue:
    """Permutation test of independence between ``x`` and ``y``

    ``y`` is permuted; Gram matrices and bandwidths stay fixed from the
    unpermuted data. Permutation ``i`` draws from stream ``(seed, i)``.
    """
    n = _check_pair(x, y)
    if n_perm < 1:
        raise ArgumentError(f'n_perm must be >= 1, got {n_perm}')

    k, _ = gram_matrix(x, kx)
    k_centered = _center(k)
    observed = hsic_statistic(x, y, kx, ky)

    if ky.kind is KernelKind.DELTA:
        # delta Gram is U U^T for the one-hot label matrix U
        onehot = _one_hot(_as_points(y))

        def score(order: np.ndarray) -> float:
            u = onehot[order]
            return float(np.sum((k_centered @ u) * u))

    else:
        l_centered = _center(gram_matrix(y, ky)[0])

        def score(order: np.ndarray) -> float:
            return float(np.sum(k_centered * l_centered[np.ix_(order, order)]))

    reference = score(np.arange(n))
    exceed = 0
    for i in range(n_perm):
        order = streams.stream(seed, streams.HSIC, i).permutation(n)
        if score(order) >= reference:
            exceed += 1

    p = PValue.from_count(exceed, n_perm, smoothing, statistic=observed)
    logger.debug(f'HSIC={observed:.6g} over n={n}, p={p.value:.4g}')
    return p
