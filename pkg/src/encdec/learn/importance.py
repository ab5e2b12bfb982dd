import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from sklearn.linear_model import LinearRegression

from ..exceptions import ArgumentError
from ..models.analysis import ForestConfig, PermutationScheme, PValue, Smoothing
from ..models.data import Dataset
from ..stats import streams
from .forest import CrossValidation, Fold, cross_validate

logger = logging.getLogger(__name__)


class ImportanceResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    subject: str
    pe_star: float
    feature_names: List[str]
    p_values: List[PValue]
    mean_permuted_pe: List[float]


def split_column(
    X: np.ndarray, j: int, scheme: PermutationScheme
) -> Tuple[np.ndarray, np.ndarray]:
    """Column j as ``base + residual``; permutations scramble the residual only

    The conditional scheme regresses the column on the remaining features
    (OLS), so a permuted column keeps its linear relation to them and only
    its remaining association with the condition is broken.
    """
    column = X[:, j]
    others = np.delete(X, j, axis=1)
    if scheme is PermutationScheme.GLOBAL or others.shape[1] == 0:
        return np.zeros_like(column), column
    fitted = LinearRegression().fit(others, column).predict(others)
    return fitted, column - fitted


def _fold_correct_under_permutation(
    fold: Fold,
    X: np.ndarray,
    y: np.ndarray,
    j: int,
    permutations: np.ndarray,
    baseline_votes: np.ndarray,
    base: np.ndarray,
    residual: np.ndarray,
) -> np.ndarray:
    """Correct predictions of one fold's held-out trials, per permutation"""
    n_perm = len(permutations)
    forest = fold.forest
    if forest is None:
        return np.zeros(n_perm, dtype=np.int64)

    test = fold.test
    truth = y[test]
    users = [tree for tree in forest.trees if j in tree.used_features]
    if not users:
        correct = int(np.sum(forest.decide(baseline_votes) == truth))
        return np.full(n_perm, correct, dtype=np.int64)

    held_out = X[test]
    batch = np.repeat(held_out[None, :, :], n_perm, axis=0)
    batch[:, :, j] = base[test][None, :] + residual[permutations[:, test]]
    flat = batch.reshape(-1, X.shape[1])

    untouched = baseline_votes - sum(tree.predict(held_out) for tree in users)
    votes = np.tile(untouched, n_perm)
    for tree in users:
        votes = votes + tree.predict(flat)
    predicted = forest.decide(votes).reshape(n_perm, len(test))
    return (predicted == truth[None, :]).sum(axis=1)


def permutation_importance(
    data: Dataset,
    config: ForestConfig,
    n_perm: int = 1000,
    seed: int = 0,
    smoothing: Smoothing = Smoothing.ADD_ONE,
    cv: Optional[CrossValidation] = None,
) -> ImportanceResult:
    """Per-feature permutation p-values against the intact accuracy PE*

    Fold forests are fitted once. For feature j and permutation k the
    scrambled part of the column (see ``split_column``) is permuted with
    stream (seed, j, k) and every trial is re-predicted by the forest that
    held it out. Ties with PE* count as exceeding it.
    """
    if n_perm < 1:
        raise ArgumentError(f'n_perm must be >= 1, got {n_perm}')
    cv = cv or cross_validate(data, config, seed)
    X, y = data.features, data.condition
    n = data.n

    baseline = [
        fold.forest.votes(X[fold.test]) if fold.forest is not None else None
        for fold in cv.folds
    ]

    p_values = []
    mean_pe = []
    for j, name in enumerate(data.feature_names):
        base, residual = split_column(X, j, config.permutation)
        permutations = np.stack(
            [
                streams.stream(seed, streams.IMPORTANCE, j, k).permutation(n)
                for k in range(n_perm)
            ]
        )
        correct = np.zeros(n_perm, dtype=np.int64)
        for fold, votes in zip(cv.folds, baseline):
            correct += _fold_correct_under_permutation(
                fold, X, y, j, permutations, votes, base, residual
            )
        exceed = int(np.count_nonzero(correct >= cv.correct))
        p_values.append(
            PValue.from_count(exceed, n_perm, smoothing, statistic=cv.pe_star)
        )
        mean_pe.append(float(100.0 * correct.mean() / n))
        logger.debug(f'{data.subject}/{name}: p={p_values[-1].value:.4g}')

    logger.info(
        f'{data.subject}: PE*={cv.pe_star:.2f}%, {config.permutation.value} '
        f'importance p-values {[round(p.value, 4) for p in p_values]}'
    )
    return ImportanceResult(
        subject=data.subject,
        pe_star=cv.pe_star,
        feature_names=list(data.feature_names),
        p_values=p_values,
        mean_permuted_pe=mean_pe,
    )
