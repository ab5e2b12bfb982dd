"""
encdec Models Package

Pydantic models shared across the graph, sampling, statistics and
interpretation layers.
"""

from .analysis import (
    DELTA_KERNEL,
    GAUSSIAN_KERNEL,
    SCHEMA_VERSION,
    AnalysisSide,
    CausalReport,
    CombinedInference,
    FeaturePartition,
    ForestConfig,
    GroupDecision,
    KernelKind,
    KernelSpec,
    Paradigm,
    PermutationScheme,
    PValue,
    RelevanceDecision,
    RelevanceMatrix,
    RuleStatement,
    Smoothing,
    WilcoxonResult,
)
from .data import (
    BernoulliRoot,
    Dataset,
    LinearGaussian,
    LogisticSink,
    Mechanism,
    Quadratic,
    Sem,
)
from .graph import Dag, EffectClass, Independence, OracleRelevance

__all__ = [
    # Graph
    'Dag',
    'EffectClass',
    'Independence',
    'OracleRelevance',
    # Data generation
    'Mechanism',
    'LinearGaussian',
    'Quadratic',
    'BernoulliRoot',
    'LogisticSink',
    'Sem',
    'Dataset',
    # Statistics
    'PValue',
    'Smoothing',
    'PermutationScheme',
    'KernelKind',
    'KernelSpec',
    'GAUSSIAN_KERNEL',
    'DELTA_KERNEL',
    'ForestConfig',
    'WilcoxonResult',
    # Analysis
    'Paradigm',
    'AnalysisSide',
    'RelevanceDecision',
    'RelevanceMatrix',
    'GroupDecision',
    'FeaturePartition',
    'RuleStatement',
    'CombinedInference',
    'CausalReport',
    'SCHEMA_VERSION',
]
