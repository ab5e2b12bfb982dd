from enum import Enum
from math import isqrt
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exceptions import ArgumentError

SCHEMA_VERSION = '1.0'


class Smoothing(str, Enum):
    ADD_ONE = 'add_one'
    RAW = 'raw'


class PermutationScheme(str, Enum):
    """How permutation importance scrambles a feature column"""

    GLOBAL = 'global'  # permute the raw column
    CONDITIONAL = 'conditional'  # permute its residual given the other features


class KernelKind(str, Enum):
    GAUSSIAN_MEDIAN = 'gaussian_median'
    DELTA = 'delta'


class Paradigm(str, Enum):
    STIMULUS = 'stimulus'
    RESPONSE = 'response'

    @property
    def symbol(self) -> str:
        return 'S' if self is Paradigm.STIMULUS else 'R'


class AnalysisSide(str, Enum):
    ENCODING = 'encoding'
    DECODING = 'decoding'


class RelevanceDecision(str, Enum):
    RELEVANT = 'relevant'
    IRRELEVANT = 'irrelevant'
    INDETERMINATE = 'indeterminate'

    @classmethod
    def decide(cls, p: float, alpha: float, beta: float) -> 'RelevanceDecision':
        """Relevant below alpha, irrelevant above beta, indeterminate in between"""
        if not alpha < beta:
            raise ArgumentError(f'alpha ({alpha}) must be smaller than beta ({beta})')
        if p < alpha:
            return cls.RELEVANT
        if p > beta:
            return cls.IRRELEVANT
        return cls.INDETERMINATE


class PValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0, le=1.0)
    n_permutations: int = Field(0, ge=0)  # 0 for analytic p-values
    smoothing: Smoothing = Smoothing.ADD_ONE
    statistic: Optional[float] = None

    @model_validator(mode='after')
    def validate_floor(self) -> 'PValue':
        if (
            self.smoothing is Smoothing.ADD_ONE
            and self.n_permutations > 0
            and self.value * (self.n_permutations + 1) < 1 - 1e-9
        ):
            raise ValueError(
                f'Add-one p-value {self.value} below 1/({self.n_permutations}+1)'
            )
        return self

    @classmethod
    def from_count(
        cls,
        exceed: int,
        n_permutations: int,
        smoothing: Smoothing = Smoothing.ADD_ONE,
        statistic: Optional[float] = None,
    ) -> 'PValue':
        """p-value from the number of null draws at least as extreme as observed"""
        if smoothing is Smoothing.ADD_ONE:
            value = (exceed + 1) / (n_permutations + 1)
        else:
            value = exceed / n_permutations
        return cls(
            value=value,
            n_permutations=n_permutations,
            smoothing=smoothing,
            statistic=statistic,
        )

    def __float__(self) -> float:
        return self.value


class KernelSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: KernelKind = KernelKind.GAUSSIAN_MEDIAN
    bandwidth: Optional[float] = Field(None, gt=0)


GAUSSIAN_KERNEL = KernelSpec(kind=KernelKind.GAUSSIAN_MEDIAN)
DELTA_KERNEL = KernelSpec(kind=KernelKind.DELTA)


class ForestConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_trees: int = Field(100, ge=1)
    mtry: Optional[int] = Field(None, ge=1)  # None: floor(sqrt(d))
    cv_folds: Optional[int] = Field(None, ge=2)  # None: leave-one-out
    permutation: PermutationScheme = PermutationScheme.CONDITIONAL
    n_jobs: int = 1

    def resolve_mtry(self, n_features: int) -> int:
        if n_features < 1:
            raise ArgumentError('A forest needs at least one feature')
        mtry = self.mtry if self.mtry is not None else max(1, isqrt(n_features))
        if mtry > n_features:
            raise ArgumentError(f'mtry={mtry} exceeds the {n_features} features')
        return mtry


class RelevanceMatrix(BaseModel):
    """Subjects x features p-values for one analysis side"""

    model_config = ConfigDict(frozen=True)

    side: AnalysisSide
    subjects: List[str] = Field(..., min_length=1)
    features: List[str] = Field(..., min_length=1)
    values: List[List[float]]
    n_permutations: int = Field(0, ge=0)
    smoothing: Smoothing = Smoothing.ADD_ONE
    pe_star: Optional[List[float]] = None

    @model_validator(mode='after')
    def validate_shape(self) -> 'RelevanceMatrix':
        if len(self.values) != len(self.subjects):
            raise ValueError(
                f'{len(self.values)} rows for {len(self.subjects)} subjects'
            )
        for subject, row in zip(self.subjects, self.values):
            if len(row) != len(self.features):
                raise ValueError(
                    f'Subject {subject}: {len(row)} values for {len(self.features)} features'
                )
            for value in row:
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f'Subject {subject}: p-value {value} outside [0, 1]')
        if self.pe_star is not None and len(self.pe_star) != len(self.subjects):
            raise ValueError('One PE* value per subject is required')
        return self

    @property
    def shape(self) -> tuple:
        return len(self.subjects), len(self.features)

    def column(self, feature: str) -> np.ndarray:
        j = self.features.index(feature)
        return np.array([row[j] for row in self.values], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.values, index=self.subjects, columns=self.features)
        frame.index.name = 'subject'
        return frame


class GroupDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    feature: str
    ks_statistic: float
    ks_p: PValue
    decision: RelevanceDecision


class WilcoxonResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    w_plus: float
    z: float
    n: int  # after dropping zero differences
    mu0: float
    method: str = 'normal'
    p: PValue


class FeaturePartition(BaseModel):
    """Disjoint split of the feature set by encoding and decoding relevance"""

    model_config = ConfigDict(frozen=True)

    features: List[str]
    enc_dec: List[str] = Field(default_factory=list)
    enc_only: List[str] = Field(default_factory=list)
    dec_only: List[str] = Field(default_factory=list)
    neither: List[str] = Field(default_factory=list)
    indeterminate: List[str] = Field(default_factory=list)
    encoding: Dict[str, RelevanceDecision] = Field(default_factory=dict)
    decoding: Dict[str, RelevanceDecision] = Field(default_factory=dict)

    @model_validator(mode='after')
    def validate_partition(self) -> 'FeaturePartition':
        members = (
            self.enc_dec + self.enc_only + self.dec_only + self.neither + self.indeterminate
        )
        if len(members) != len(set(members)):
            raise ValueError('Partition sets overlap')
        if set(members) != set(self.features):
            raise ValueError('Partition sets do not cover the feature set')
        return self

    @property
    def x_enc(self) -> List[str]:
        """Features decided relevant in encoding, in feature order"""
        if not self.encoding:
            relevant = set(self.enc_dec + self.enc_only)
            return [f for f in self.features if f in relevant]
        return [
            f
            for f in self.features
            if self.encoding.get(f) is RelevanceDecision.RELEVANT
        ]


class RuleStatement(BaseModel):
    model_config = ConfigDict(frozen=True)

    feature: str
    model: str  # encoding, decoding or combined
    rule: Optional[str] = None  # None for indeterminate notes
    conclusion: str
    text: str
    inconclusive: bool = False


class CombinedInference(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str
    features: List[str] = Field(default_factory=list)
    text: str
    rule: Optional[str] = None


class CausalReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    paradigm: Paradigm
    condition_symbol: str
    model_types: Dict[str, str] = Field(default_factory=dict)
    partition: FeaturePartition
    statements: List[RuleStatement] = Field(default_factory=list)
    combined: List[CombinedInference] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    encoding: Optional[RelevanceMatrix] = None
    decoding: Optional[RelevanceMatrix] = None
    encoding_decisions: List[GroupDecision] = Field(default_factory=list)
    decoding_decisions: List[GroupDecision] = Field(default_factory=list)
    chance_test: Optional[WilcoxonResult] = None
    provenance: Dict[str, Any] = Field(default_factory=dict)

    @field_validator('condition_symbol')
    @classmethod
    def validate_symbol(cls, v: str) -> str:
        if v not in ('S', 'R'):
            raise ValueError(f'Unknown condition symbol {v!r}')
        return v

    @model_validator(mode='after')
    def validate_combined_rules(self) -> 'CausalReport':
        determined = set(self.partition.features) - set(self.partition.indeterminate)
        for feature in self.partition.features:
            combined = [
                s
                for s in self.statements
                if s.feature == feature and s.model == 'combined' and s.rule
            ]
            expected = 1 if feature in determined else 0
            if len(combined) != expected:
                raise ValueError(
                    f'Feature {feature} has {len(combined)} combined-rule statements'
                )
        return self

    def statements_for(self, feature: str) -> List[RuleStatement]:
        return [s for s in self.statements if s.feature == feature]

    def combined_rule(self, feature: str) -> Optional[str]:
        for statement in self.statements_for(feature):
            if statement.model == 'combined' and statement.rule:
                return statement.rule
        return None
