"""Per-subject relevance analyses and their group-level aggregation"""

import logging
from typing import Dict, List, Mapping, Optional, Sequence, Union

from joblib import Parallel, delayed

from ..exceptions import ArgumentError, DegenerateInputError
from ..learn.importance import ImportanceResult, permutation_importance
from ..models.analysis import (
    DELTA_KERNEL,
    GAUSSIAN_KERNEL,
    AnalysisSide,
    FeaturePartition,
    ForestConfig,
    GroupDecision,
    RelevanceDecision,
    RelevanceMatrix,
    Smoothing,
    WilcoxonResult,
)
from ..models.data import Dataset
from ..stats import streams
from ..stats.hsic import hsic_perm_test
from ..stats.ks import ks_uniformity_test
from ..stats.wilcoxon import MIN_VALUES, wilcoxon_signed_rank

logger = logging.getLogger(__name__)

Decisions = Union[Sequence[GroupDecision], Mapping[str, RelevanceDecision]]


def check_cohort(cohort: Sequence[Dataset]) -> List[str]:
    """Feature names shared by every subject of the cohort"""
    if not cohort:
        raise ArgumentError('The cohort is empty')
    features = list(cohort[0].feature_names)
    subjects = set()
    for data in cohort:
        if list(data.feature_names) != features:
            raise ArgumentError(
                f'Subject {data.subject} has features {data.feature_names}, '
                f'expected {features} (from {cohort[0].subject})'
            )
        if data.subject in subjects:
            raise ArgumentError(f'Duplicate subject id {data.subject!r}')
        subjects.add(data.subject)
    return features


def _encoding_row(
    data: Dataset, index: int, seed: int, n_perm: int, smoothing: Smoothing
) -> List[float]:
    row = []
    for j in range(data.d):
        p = hsic_perm_test(
            data.features[:, j],
            data.condition,
            kx=GAUSSIAN_KERNEL,
            ky=DELTA_KERNEL,
            n_perm=n_perm,
            seed=streams.derive_seed(seed, streams.ENCODING, index, j),
            smoothing=smoothing,
        )
        row.append(p.value)
    logger.info(f'Encoding {data.subject}: {[round(v, 4) for v in row]}')
    return row


def encoding_relevance(
    cohort: Sequence[Dataset],
    seed: int,
    n_perm: int = 1000,
    smoothing: Smoothing = Smoothing.ADD_ONE,
    n_jobs: int = 1,
) -> RelevanceMatrix:
    """HSIC permutation p-values for every subject and feature"""
    features = check_cohort(cohort)
    rows = Parallel(n_jobs=n_jobs)(
        delayed(_encoding_row)(data, i, seed, n_perm, smoothing)
        for i, data in enumerate(cohort)
    )
    return RelevanceMatrix(
        side=AnalysisSide.ENCODING,
        subjects=[data.subject for data in cohort],
        features=features,
        values=rows,
        n_permutations=n_perm,
        smoothing=smoothing,
    )


def _decoding_result(
    data: Dataset,
    index: int,
    config: ForestConfig,
    seed: int,
    n_perm: int,
    smoothing: Smoothing,
) -> ImportanceResult:
    return permutation_importance(
        data,
        config,
        n_perm=n_perm,
        seed=streams.derive_seed(seed, streams.DECODING, index),
        smoothing=smoothing,
    )


def decoding_relevance(
    cohort: Sequence[Dataset],
    config: ForestConfig,
    seed: int,
    n_perm: int = 1000,
    smoothing: Smoothing = Smoothing.ADD_ONE,
    n_jobs: int = 1,
) -> RelevanceMatrix:
    """Permutation-importance p-values per subject, with PE* recorded"""
    features = check_cohort(cohort)
    results = Parallel(n_jobs=n_jobs)(
        delayed(_decoding_result)(data, i, config, seed, n_perm, smoothing)
        for i, data in enumerate(cohort)
    )
    return RelevanceMatrix(
        side=AnalysisSide.DECODING,
        subjects=[data.subject for data in cohort],
        features=features,
        values=[[p.value for p in result.p_values] for result in results],
        n_permutations=n_perm,
        smoothing=smoothing,
        pe_star=[result.pe_star for result in results],
    )


def group_aggregate(
    matrix: RelevanceMatrix,
    alpha: float = 0.05,
    beta: float = 0.10,
    n_mc: int = 100_000,
    seed: int = 0,
) -> List[GroupDecision]:
    """KS uniformity test per feature column, thresholded into decisions"""
    if not alpha < beta:
        raise ArgumentError(f'alpha ({alpha}) must be smaller than beta ({beta})')
    decisions = []
    for j, feature in enumerate(matrix.features):
        ks_p = ks_uniformity_test(
            matrix.column(feature),
            n_mc=n_mc,
            seed=streams.derive_seed(seed, streams.AGGREGATE, j),
        )
        decision = RelevanceDecision.decide(ks_p.value, alpha, beta)
        decisions.append(
            GroupDecision(
                feature=feature,
                ks_statistic=ks_p.statistic,
                ks_p=ks_p,
                decision=decision,
            )
        )
        logger.info(
            f'{matrix.side.value} {feature}: KSp={ks_p.value:.4g} -> {decision.value}'
        )
    return decisions


def _as_mapping(decisions: Decisions) -> Dict[str, RelevanceDecision]:
    if isinstance(decisions, Mapping):
        return {str(k): RelevanceDecision(v) for k, v in decisions.items()}
    return {d.feature: d.decision for d in decisions}


def partition(enc: Decisions, dec: Decisions) -> FeaturePartition:
    """Quadrants by (encoding, decoding) relevance; any indeterminate side sets aside"""
    enc_map, dec_map = _as_mapping(enc), _as_mapping(dec)
    if set(enc_map) != set(dec_map):
        raise ArgumentError(
            f'Encoding features {sorted(enc_map)} differ from decoding features '
            f'{sorted(dec_map)}'
        )

    quadrants: Dict[str, List[str]] = {
        'enc_dec': [],
        'enc_only': [],
        'dec_only': [],
        'neither': [],
        'indeterminate': [],
    }
    rel = RelevanceDecision.RELEVANT
    for feature in enc_map:
        e, d = enc_map[feature], dec_map[feature]
        if RelevanceDecision.INDETERMINATE in (e, d):
            key = 'indeterminate'
        elif e is rel:
            key = 'enc_dec' if d is rel else 'enc_only'
        else:
            key = 'dec_only' if d is rel else 'neither'
        quadrants[key].append(feature)

    return FeaturePartition(
        features=list(enc_map),
        encoding=enc_map,
        decoding={f: dec_map[f] for f in enc_map},
        **quadrants,
    )


def chance_test(
    pe_star: Sequence[float], chance_level: float = 50.0
) -> Optional[WilcoxonResult]:
    """Group-level Wilcoxon test of PE* against chance; None when it cannot run"""
    if len(pe_star) < MIN_VALUES:
        logger.warning(
            f'Only {len(pe_star)} subjects; chance-level test needs {MIN_VALUES}'
        )
        return None
    try:
        return wilcoxon_signed_rank(pe_star, mu0=chance_level)
    except DegenerateInputError:
        logger.warning(f'Every PE* equals chance level {chance_level}')
        return None


def gate_decoding(
    decisions: List[GroupDecision], result: Optional[WilcoxonResult], alpha: float
) -> List[GroupDecision]:
    """Downgrade decoding decisions to indeterminate unless PE* beats chance"""
    if result is None or result.p.value >= alpha or result.z <= 0:
        logger.warning('Decoding accuracy not above chance; decoding decisions gated')
        return [
            d.model_copy(update={'decision': RelevanceDecision.INDETERMINATE})
            for d in decisions
        ]
    return decisions


def aggregation_seed(seed: int, side: AnalysisSide) -> int:
    """Seed of the KS Monte Carlo for one side of a run with base ``seed``"""
    index = 0 if AnalysisSide(side) is AnalysisSide.ENCODING else 1
    return streams.derive_seed(seed, streams.AGGREGATE, index)
