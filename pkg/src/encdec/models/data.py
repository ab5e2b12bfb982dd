from typing import Annotated, Dict, List, Literal, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .analysis import Paradigm
from .graph import Dag


class LinearGaussian(BaseModel):
    """x := sum(w * parent) + N(0, sd^2)"""

    model_config = ConfigDict(frozen=True)

    kind: Literal['linear'] = 'linear'
    weights: Dict[str, float] = Field(default_factory=dict)
    sd: float = Field(1.0, gt=0)


class Quadratic(BaseModel):
    """x := sum(w * parent^2) + N(0, sd^2)"""

    model_config = ConfigDict(frozen=True)

    kind: Literal['quadratic'] = 'quadratic'
    weights: Dict[str, float] = Field(default_factory=dict)
    sd: float = Field(1.0, gt=0)


class BernoulliRoot(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal['bernoulli'] = 'bernoulli'
    p: float = Field(0.5, gt=0, lt=1)

    @property
    def weights(self) -> Dict[str, float]:
        return {}


class LogisticSink(BaseModel):
    """x ~ Bernoulli(sigmoid(sum(w * parent) + bias))"""

    model_config = ConfigDict(frozen=True)

    kind: Literal['logistic'] = 'logistic'
    weights: Dict[str, float] = Field(default_factory=dict)
    bias: float = 0.0


Mechanism = Annotated[
    Union[LinearGaussian, Quadratic, BernoulliRoot, LogisticSink],
    Field(discriminator='kind'),
]


class Sem(BaseModel):
    """A Dag with one generating mechanism per node"""

    model_config = ConfigDict(frozen=True)

    dag: Dag
    mechanisms: Dict[str, Mechanism]
    condition: str
    paradigm: Paradigm = Paradigm.STIMULUS

    @model_validator(mode='after')
    def validate_mechanisms(self) -> 'Sem':
        nodes = set(self.dag.nodes)
        missing = [n for n in self.dag.nodes if n not in self.mechanisms]
        extra = sorted(set(self.mechanisms) - nodes)
        if missing or extra:
            raise ValueError(
                f'Every node needs exactly one mechanism (missing {missing}, unknown {extra})'
            )
        for node in self.dag.nodes:
            parents = set(self.dag.parents(node))
            keyed = set(self.mechanisms[node].weights)
            if keyed != parents:
                raise ValueError(
                    f'Mechanism of {node} is keyed by {sorted(keyed)} '
                    f'but its parents are {sorted(parents)}'
                )

        if self.condition not in nodes:
            raise ValueError(f'Condition {self.condition!r} is not a node')
        if self.condition in self.dag.hidden:
            raise ValueError(f'Condition {self.condition!r} cannot be hidden')
        mechanism = self.mechanisms[self.condition]
        if self.paradigm is Paradigm.STIMULUS and not isinstance(
            mechanism, BernoulliRoot
        ):
            raise ValueError('A stimulus condition must be a Bernoulli root')
        if self.paradigm is Paradigm.RESPONSE:
            if not isinstance(mechanism, LogisticSink):
                raise ValueError('A response condition must be a logistic sink')
            if self.dag.children(self.condition):
                raise ValueError(
                    f'A response condition must be a sink, {self.condition} has children'
                )
        return self

    @property
    def features(self) -> List[str]:
        """Observed non-condition nodes in declaration order"""
        return [n for n in self.dag.observed if n != self.condition]


class Dataset(BaseModel):
    """One subject's trials: a binary condition column and d real features"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    subject: str = 'subject'
    condition: np.ndarray
    features: np.ndarray
    feature_names: List[str]
    labels: Tuple[str, str] = ('0', '1')

    @field_validator('condition', mode='before')
    @classmethod
    def coerce_condition(cls, v):
        values = np.asarray(v)
        if values.ndim != 1:
            raise ValueError('Condition must be one-dimensional')
        if not np.isin(values, (0, 1)).all():
            raise ValueError('Condition must be coded 0/1')
        values = values.astype(np.int64)
        values.flags.writeable = False
        return values

    @field_validator('features', mode='before')
    @classmethod
    def coerce_features(cls, v):
        values = np.asarray(v, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2:
            raise ValueError('Features must form an n x d matrix')
        if not np.isfinite(values).all():
            raise ValueError('Features contain missing or non-finite values')
        values = np.ascontiguousarray(values)
        values.flags.writeable = False
        return values

    @model_validator(mode='after')
    def validate_shape(self) -> 'Dataset':
        n = len(self.condition)
        if n < 2:
            raise ValueError(f'A dataset needs at least 2 trials, got {n}')
        if self.features.shape[0] != n:
            raise ValueError(
                f'{self.features.shape[0]} feature rows for {n} condition labels'
            )
        if self.features.shape[1] != len(self.feature_names):
            raise ValueError(
                f'{self.features.shape[1]} feature columns for '
                f'{len(self.feature_names)} names'
            )
        if len(set(self.feature_names)) != len(self.feature_names):
            raise ValueError('Duplicate feature names')
        if len(np.unique(self.condition)) < 2:
            raise ValueError(f'Subject {self.subject}: both condition classes required')
        return self

    @property
    def n(self) -> int:
        return len(self.condition)

    @property
    def d(self) -> int:
        return len(self.feature_names)

    @property
    def tie_class(self) -> int:
        """Code of the lexicographically smaller label; classifier ties go to it"""
        return 0 if self.labels[0] <= self.labels[1] else 1

    def column(self, name: str) -> np.ndarray:
        return self.features[:, self.feature_names.index(name)]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.features, columns=self.feature_names)
        frame.insert(0, 'condition', [self.labels[c] for c in self.condition])
        return frame
