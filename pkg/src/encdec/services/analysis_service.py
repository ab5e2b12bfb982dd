import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError

from ..config.settings import RunConfig, load_run_config
from ..exceptions import ArgumentError
from ..graph.dsep import is_d_separated
from ..graph.effects import classify_cause, classify_effect, oracle_relevance
from ..models.analysis import (
    AnalysisSide,
    CausalReport,
    GroupDecision,
    Paradigm,
    RelevanceMatrix,
    WilcoxonResult,
)
from ..models.graph import Independence
from ..rules.interpretation import expected_rule
from ..stats.wilcoxon import wilcoxon_signed_rank
from ..storage.fixtures import read_dag, read_fixture, read_sem
from ..storage.reports import write_report
from ..storage.tables import read_cohort, read_pvalue_matrix, read_values, write_cohort
from ..synth.sampler import subject_cohort
from ..workflows.analysis_workflow import run_analysis
from ..workflows.relevance import aggregation_seed, group_aggregate

logger = logging.getLogger(__name__)


class AnalysisOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    report: CausalReport
    json_path: Path
    text_path: Path


class SimulationOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    files: List[Path]
    oracle: List[Dict[str, Any]]


class DsepVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    separated: bool
    statement: Independence

    @property
    def verdict(self) -> str:
        return 'd-separated' if self.separated else 'd-connected'

    @property
    def implication(self) -> str:
        statement = str(self.statement)
        if self.separated:
            return statement
        return statement.replace('_||_', 'not _||_', 1)


class ReplayOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    matrix: RelevanceMatrix
    decisions: List[GroupDecision]


class AnalysisService:
    """Service class behind the command-line subcommands"""

    def __init__(self, defaults: Optional[Dict[str, Any]] = None):
        self.defaults = dict(defaults or {})

    def load_config(self, path: Optional[Path] = None, **overrides: Any) -> RunConfig:
        """Config file over service defaults, with explicit overrides applied last"""
        config = load_run_config(path, defaults=self.defaults)
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if not overrides:
            return config
        try:
            return RunConfig(**{**config.model_dump(), **overrides})
        except ValidationError as e:
            raise ArgumentError(f'Invalid override: {e.errors()[0]["msg"]}') from e

    def analyze(
        self, config: RunConfig, csv_paths: Sequence[Path]
    ) -> AnalysisOutcome:
        """Read subject files, run the full analysis and write both report files"""
        files = read_cohort(csv_paths)
        labels = files[0].labels
        provenance = {
            'files': [str(f.path) for f in files],
            'labels': {labels[0]: 0, labels[1]: 1},
        }
        report = run_analysis(
            [f.dataset for f in files],
            config.paradigm,
            config,
            provenance=provenance,
        )
        json_path, text_path = write_report(report, config.output_dir, config.report_name)
        return AnalysisOutcome(report=report, json_path=json_path, text_path=text_path)

    def oracle(
        self,
        fixture_path: Path,
        condition: Optional[str] = None,
        features: Optional[Sequence[str]] = None,
    ) -> List[Dict[str, Any]]:
        """Ground-truth relevance, effect class and expected combined rule per feature"""
        fixture = read_fixture(fixture_path)
        dag = fixture.dag
        condition = condition or fixture.condition
        if condition is None:
            raise ArgumentError(f'{fixture_path}: no condition node given')
        dag.require(condition)
        if features is None:
            features = [n for n in dag.observed if n != condition]
        observed = [condition, *features]

        rows = []
        for entry in oracle_relevance(dag, condition, features):
            if fixture.paradigm is Paradigm.STIMULUS:
                relation = classify_effect(dag, condition, entry.feature, observed)
            else:
                relation = classify_cause(dag, condition, entry.feature, observed)
            rows.append(
                {
                    'feature': entry.feature,
                    'encoding': 'relevant' if entry.enc_relevant else 'irrelevant',
                    'decoding': 'relevant' if entry.dec_relevant else 'irrelevant',
                    'relation': relation.value,
                    'rule': expected_rule(
                        fixture.paradigm, entry.enc_relevant, entry.dec_relevant
                    ),
                }
            )
        return rows

    def simulate(
        self,
        fixture_path: Path,
        n_subjects: int,
        n: int,
        seed: int,
        out_dir: Path,
        n_jobs: int = 1,
    ) -> SimulationOutcome:
        """Sample a cohort from a SEM fixture and write one CSV per subject"""
        sem = read_sem(fixture_path)
        cohort = subject_cohort(sem, n_subjects, n, seed, n_jobs=n_jobs)
        files = write_cohort(cohort, out_dir)
        return SimulationOutcome(
            files=files,
            oracle=self.oracle(fixture_path, sem.condition, sem.features),
        )

    def dsep(
        self, dag_path: Path, a: str, b: str, z: Sequence[str] = ()
    ) -> DsepVerdict:
        dag = read_dag(dag_path)
        separated = is_d_separated(dag, a, b, z)
        given = tuple(n for n in dag.nodes if n in set(z))
        return DsepVerdict(separated=separated, statement=Independence(a=a, b=b, given=given))

    def replay(
        self, matrix_path: Path, side: AnalysisSide, config: RunConfig
    ) -> ReplayOutcome:
        """Group-level decisions for an existing p-value matrix"""
        matrix = read_pvalue_matrix(matrix_path, side)
        decisions = group_aggregate(
            matrix,
            config.alpha,
            config.beta,
            config.n_mc_ks,
            seed=aggregation_seed(config.seed, matrix.side),
        )
        return ReplayOutcome(matrix=matrix, decisions=decisions)

    def wilcoxon(
        self, source: str, mu0: float = 50.0, method: str = 'normal'
    ) -> Tuple[List[float], WilcoxonResult]:
        values = read_values(source)
        return values, wilcoxon_signed_rank(values, mu0=mu0, method=method)


def oracle_table(rows: List[Dict[str, Any]]) -> str:
    if not rows:
        return '(no features)'
    return pd.DataFrame(rows).set_index('feature').to_string()
