"""Structural-equation sampling

Seeding: base seed -> per-subject seed (``subject_seed``) -> per-node stream
keyed by the node *name*, so the declaration order of nodes never changes
the sampled values.
"""

import logging
from typing import Dict, List, Mapping, Optional

import numpy as np
from joblib import Parallel, delayed
from pydantic import ValidationError

from ..exceptions import ArgumentError
from ..models.analysis import Paradigm
from ..models.data import (
    BernoulliRoot,
    Dataset,
    LinearGaussian,
    LogisticSink,
    Mechanism,
    Quadratic,
    Sem,
)
from ..models.graph import Dag
from ..stats import streams

logger = logging.getLogger(__name__)

DEFAULT_WEIGHT_RANGE = (0.6, 1.0)
DEFAULT_SD = 1.0


def _draw_weights(node: str, parents, seed: int) -> Dict[str, float]:
    rng = streams.stream(seed, streams.WEIGHTS, streams.name_key(node))
    low, high = DEFAULT_WEIGHT_RANGE
    weights = {}
    for parent in sorted(parents):
        sign = 1.0 if rng.random() < 0.5 else -1.0
        weights[parent] = sign * float(rng.uniform(low, high))
    return weights


def default_mechanisms(
    dag: Dag,
    condition: str,
    paradigm: Paradigm = Paradigm.STIMULUS,
    seed: int = 0,
) -> Dict[str, Mechanism]:
    """Linear-Gaussian mechanisms with weights +-U[0.6, 1.0] and unit noise

    The condition becomes a Bernoulli(0.5) root (stimulus) or a logistic sink
    (response).
    """
    dag.require(condition)
    mechanisms: Dict[str, Mechanism] = {}
    for node in dag.nodes:
        parents = dag.parents(node)
        if node == condition and paradigm is Paradigm.STIMULUS:
            if parents:
                raise ArgumentError(f'Stimulus {condition} must be a root node')
            mechanisms[node] = BernoulliRoot(p=0.5)
        elif node == condition:
            mechanisms[node] = LogisticSink(weights=_draw_weights(node, parents, seed))
        else:
            mechanisms[node] = LinearGaussian(
                weights=_draw_weights(node, parents, seed), sd=DEFAULT_SD
            )
    return mechanisms


def build_sem(
    dag: Dag,
    condition: str,
    paradigm: Paradigm = Paradigm.STIMULUS,
    mechanisms: Optional[Mapping[str, Mechanism]] = None,
    seed: int = 0,
) -> Sem:
    """Sem with explicit mechanisms where given and defaults elsewhere"""
    merged = default_mechanisms(dag, condition, paradigm, seed)
    merged.update(mechanisms or {})
    return Sem(dag=dag, mechanisms=merged, condition=condition, paradigm=paradigm)


def _evaluate(
    mechanism: Mechanism,
    values: Mapping[str, np.ndarray],
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    if isinstance(mechanism, BernoulliRoot):
        return (rng.random(n) < mechanism.p).astype(float)

    signal = np.zeros(n)
    for parent in sorted(mechanism.weights):
        weight = mechanism.weights[parent]
        if isinstance(mechanism, Quadratic):
            signal = signal + weight * values[parent] ** 2
        else:
            signal = signal + weight * values[parent]

    if isinstance(mechanism, LogisticSink):
        probability = 1.0 / (1.0 + np.exp(-(signal + mechanism.bias)))
        return (rng.random(n) < probability).astype(float)
    if isinstance(mechanism, (LinearGaussian, Quadratic)):
        return signal + rng.normal(0.0, mechanism.sd, n)
    raise ArgumentError(f'Unsupported mechanism {mechanism!r}')


def sample(sem: Sem, n: int, seed: int, subject: str = 'subject') -> Dataset:
    """Draw ``n`` iid trials; hidden nodes are simulated but not returned"""
    if n < 2:
        raise ArgumentError(f'Need at least 2 samples, got {n}')
    features = sem.features
    if not features:
        raise ArgumentError('The model has no observed feature nodes')

    values: Dict[str, np.ndarray] = {}
    for node in sem.dag.topological_order():
        rng = streams.stream(seed, streams.NODE, streams.name_key(node))
        values[node] = _evaluate(sem.mechanisms[node], values, n, rng)

    try:
        return Dataset(
            subject=subject,
            condition=values[sem.condition].astype(np.int64),
            features=np.column_stack([values[f] for f in features]),
            feature_names=features,
        )
    except ValidationError as e:
        raise ArgumentError(f'Sampled data for {subject} is unusable: {e}') from e


def subject_seed(seed: int, index: int) -> int:
    return streams.derive_seed(seed, streams.SUBJECT, index)


def subject_ids(n_subjects: int) -> List[str]:
    width = max(2, len(str(n_subjects)))
    return [f'subject_{i + 1:0{width}d}' for i in range(n_subjects)]


def subject_cohort(
    sem: Sem, n_subjects: int, n_per_subject: int, seed: int, n_jobs: int = 1
) -> List[Dataset]:
    """Independent datasets, one per subject, each from its own derived seed"""
    if n_subjects < 1:
        raise ArgumentError(f'Need at least one subject, got {n_subjects}')
    logger.info(
        f'Sampling {n_subjects} subjects x {n_per_subject} trials (seed={seed})'
    )
    names = subject_ids(n_subjects)
    return Parallel(n_jobs=n_jobs)(
        delayed(sample)(sem, n_per_subject, subject_seed(seed, i), subject=names[i])
        for i in range(n_subjects)
    )
