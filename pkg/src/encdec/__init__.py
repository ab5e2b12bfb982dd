"""
encdec: causal interpretation of encoding and decoding models

Decides, per feature and across a cohort of subjects, whether a brain-state
feature is relevant in an encoding model P(X|C) and in a decoding model
P(C|X), and turns the pair of decisions into causal statements.

This package provides:
- d-separation, effect classification and a ground-truth relevance oracle
- a structural-equation sampler for synthetic cohorts with known graphs
- HSIC, Monte Carlo KS and Wilcoxon tests with seeded random streams
- a from-scratch random forest with permutation importance
- a LangGraph workflow from cohort validation to the causal report

Main Components:
- models: Pydantic models for graphs, datasets and analysis results
- graph: d-separation and effect classification
- synth: SEM sampling
- stats: kernel, uniformity and signed-rank tests
- learn: decision trees, forests and permutation importance
- rules: the interpretation rule table
- workflows: relevance stages and the analysis workflow
- storage: CSV, fixture and report files
- services: the service layer behind the CLI

Usage:
    from encdec.workflows import run_analysis
    from encdec.services import AnalysisService
    from encdec.models import Dag, Paradigm
"""

__version__ = '1.0.0'
__description__ = 'Causal interpretation of encoding and decoding models'

# Package-level imports for convenience
from .config.settings import RunConfig
from .exceptions import (
    ArgumentError,
    DegenerateInputError,
    EncDecError,
    InputFormatError,
    SchemaMismatchError,
    StageError,
)
from .models import CausalReport, Dag, Dataset, FeaturePartition, Paradigm, Sem
from .services.analysis_service import AnalysisService
from .workflows.analysis_workflow import arun_analysis, run_analysis

VERSION = tuple(map(int, __version__.split('.')))

__all__ = [
    # Version info
    '__version__',
    '__description__',
    'VERSION',
    # Core models
    'Dag',
    'Sem',
    'Dataset',
    'Paradigm',
    'FeaturePartition',
    'CausalReport',
    'RunConfig',
    # Entry points
    'run_analysis',
    'arun_analysis',
    'AnalysisService',
    # Errors
    'EncDecError',
    'ArgumentError',
    'DegenerateInputError',
    'InputFormatError',
    'SchemaMismatchError',
    'StageError',
]
