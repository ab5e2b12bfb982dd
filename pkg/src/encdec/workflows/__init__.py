"""
encdec Workflows Package

Per-subject relevance stages and the LangGraph workflow that chains them
from cohort validation through causal interpretation.
"""

from .analysis_workflow import (
    # Main workflow components
    create_analysis_workflow,
    run_analysis,
    arun_analysis,
    # Workflow state and status
    AnalysisState,
    WorkflowStatus,
    # Utility functions
    should_continue,
)
from .relevance import (
    aggregation_seed,
    chance_test,
    check_cohort,
    decoding_relevance,
    encoding_relevance,
    gate_decoding,
    group_aggregate,
    partition,
)

__all__ = [
    # Main workflow
    'create_analysis_workflow',
    'run_analysis',
    'arun_analysis',
    # State management
    'AnalysisState',
    'WorkflowStatus',
    # Stages
    'check_cohort',
    'encoding_relevance',
    'decoding_relevance',
    'group_aggregate',
    'partition',
    'chance_test',
    'gate_decoding',
    'aggregation_seed',
    # Utilities
    'should_continue',
]
