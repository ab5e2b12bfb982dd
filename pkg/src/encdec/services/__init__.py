"""
encdec Services Package

Service layer tying file ingestion, the analysis workflow and report
writing together for the command-line front end.
"""

from .analysis_service import (
    AnalysisOutcome,
    AnalysisService,
    DsepVerdict,
    ReplayOutcome,
    SimulationOutcome,
    oracle_table,
)

__all__ = [
    'AnalysisService',
    'AnalysisOutcome',
    'SimulationOutcome',
    'DsepVerdict',
    'ReplayOutcome',
    'oracle_table',
]
