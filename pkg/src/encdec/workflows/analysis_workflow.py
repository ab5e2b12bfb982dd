import logging
import operator
from enum import Enum
from functools import wraps
from typing import Annotated, Any, Callable, Dict, List, Optional, Sequence, TypedDict

from langgraph.graph import END, START, StateGraph

from ..config.settings import RunConfig
from ..exceptions import StageError
from ..models.analysis import (
    AnalysisSide,
    CausalReport,
    FeaturePartition,
    GroupDecision,
    Paradigm,
    RelevanceMatrix,
    WilcoxonResult,
)
from ..models.data import Dataset
from ..rules.interpretation import combined_inference, interpret
from ..stats import streams
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

logger = logging.getLogger(__name__)


class WorkflowStatus(str, Enum):
    PENDING = 'pending'
    IN_PROGRESS = 'in_progress'
    COMPLETED = 'completed'
    FAILED = 'failed'


class AnalysisState(TypedDict):
    """State for the encoding/decoding analysis workflow"""

    cohort: Sequence[Dataset]
    paradigm: Paradigm
    config: RunConfig
    seed: int
    provenance: Dict[str, Any]
    trail: Annotated[List[str], operator.add]
    workflow_status: WorkflowStatus
    next_action: str
    error: Optional[StageError]
    features: List[str]
    encoding: Optional[RelevanceMatrix]
    decoding: Optional[RelevanceMatrix]
    encoding_decisions: List[GroupDecision]
    decoding_decisions: List[GroupDecision]
    chance: Optional[WilcoxonResult]
    partition: Optional[FeaturePartition]
    report: Optional[CausalReport]


def stage(name: str, next_action: str) -> Callable:
    """Run a node as a named stage; a failure flags the state and ends the graph"""

    def decorate(node: Callable[[AnalysisState], Dict[str, Any]]):
        @wraps(node)
        def run(state: AnalysisState) -> Dict[str, Any]:
            logger.info(f'Stage {name} started')
            try:
                update = node(state)
            except Exception as e:
                logger.error(f'Stage {name} failed: {e}')
                error = e if isinstance(e, StageError) else StageError(name, e)
                if error is not e:
                    error.__cause__ = e
                return {
                    'error': error,
                    'workflow_status': WorkflowStatus.FAILED,
                    'next_action': 'end',
                    'trail': [f'{name}:failed'],
                }
            return {**update, 'next_action': next_action, 'trail': [name]}

        return run

    return decorate


@stage('ingestion', next_action='encoding_relevance')
def validate_cohort_node(state: AnalysisState) -> Dict[str, Any]:
    features = check_cohort(state['cohort'])
    logger.info(f'{len(state["cohort"])} subjects, features {features}')
    return {'features': features, 'workflow_status': WorkflowStatus.IN_PROGRESS}


@stage('encoding', next_action='decoding_relevance')
def encoding_node(state: AnalysisState) -> Dict[str, Any]:
    config = state['config']
    matrix = encoding_relevance(
        state['cohort'],
        seed=streams.derive_seed(state['seed'], streams.ENCODING),
        n_perm=config.n_perm_hsic,
        smoothing=config.smoothing,
        n_jobs=config.n_jobs,
    )
    return {'encoding': matrix}


@stage('decoding', next_action='group_aggregate')
def decoding_node(state: AnalysisState) -> Dict[str, Any]:
    config = state['config']
    matrix = decoding_relevance(
        state['cohort'],
        config.forest,
        seed=streams.derive_seed(state['seed'], streams.DECODING),
        n_perm=config.n_perm_importance,
        smoothing=config.smoothing,
        n_jobs=config.n_jobs,
    )
    return {'decoding': matrix}


@stage('aggregation', next_action='partition')
def aggregate_node(state: AnalysisState) -> Dict[str, Any]:
    config = state['config']
    enc = group_aggregate(
        state['encoding'],
        config.alpha,
        config.beta,
        config.n_mc_ks,
        seed=aggregation_seed(state['seed'], AnalysisSide.ENCODING),
    )
    dec = group_aggregate(
        state['decoding'],
        config.alpha,
        config.beta,
        config.n_mc_ks,
        seed=aggregation_seed(state['seed'], AnalysisSide.DECODING),
    )

    chance = chance_test(state['decoding'].pe_star, config.chance_level)
    if config.decoding_gate:
        dec = gate_decoding(dec, chance, config.alpha)
    return {'encoding_decisions': enc, 'decoding_decisions': dec, 'chance': chance}


@stage('partition', next_action='interpret')
def partition_node(state: AnalysisState) -> Dict[str, Any]:
    return {
        'partition': partition(state['encoding_decisions'], state['decoding_decisions'])
    }


@stage('interpretation', next_action='complete')
def interpret_node(state: AnalysisState) -> Dict[str, Any]:
    config = state['config']
    part = state['partition']
    chance = state['chance']
    above_chance = chance is not None and chance.p.value < config.alpha and chance.z > 0

    report = interpret(state['paradigm'], part)
    combined, warnings = combined_inference(state['paradigm'], part, above_chance)
    provenance = {
        'config': config.echo(),
        'seed': state['seed'],
        'subjects': [data.subject for data in state['cohort']],
        **state['provenance'],
    }
    report = report.model_copy(
        update={
            'combined': combined,
            'warnings': report.warnings + warnings,
            'encoding': state['encoding'],
            'decoding': state['decoding'],
            'encoding_decisions': state['encoding_decisions'],
            'decoding_decisions': state['decoding_decisions'],
            'chance_test': chance,
            'provenance': provenance,
        }
    )
    return {'report': report, 'workflow_status': WorkflowStatus.COMPLETED}


STAGES = (
    'validate_cohort',
    'encoding_relevance',
    'decoding_relevance',
    'group_aggregate',
    'partition',
    'interpret',
)


def should_continue(state: AnalysisState) -> str:
    """Determine the next step in the workflow"""
    if state.get('workflow_status') == WorkflowStatus.FAILED:
        return 'end'

    next_action = state.get('next_action')
    if next_action in STAGES:
        return next_action
    return 'end'


def create_analysis_workflow() -> StateGraph:
    """Create and return the analysis workflow graph"""

    workflow = StateGraph(AnalysisState)

    workflow.add_node('validate_cohort', validate_cohort_node)
    workflow.add_node('encoding_relevance', encoding_node)
    workflow.add_node('decoding_relevance', decoding_node)
    workflow.add_node('group_aggregate', aggregate_node)
    workflow.add_node('partition', partition_node)
    workflow.add_node('interpret', interpret_node)

    workflow.add_edge(START, 'validate_cohort')
    for current, following in zip(STAGES, STAGES[1:] + ('end',)):
        routes = {'end': END}
        if following != 'end':
            routes[following] = following
        workflow.add_conditional_edges(current, should_continue, routes)

    return workflow


def _initial_state(
    cohort: Sequence[Dataset],
    paradigm: Paradigm,
    config: RunConfig,
    seed: int,
    provenance: Optional[Dict[str, Any]],
) -> AnalysisState:
    return {
        'cohort': list(cohort),
        'paradigm': Paradigm(paradigm),
        'config': config,
        'seed': seed,
        'provenance': dict(provenance or {}),
        'trail': [],
        'workflow_status': WorkflowStatus.PENDING,
        'next_action': 'validate_cohort',
        'error': None,
        'features': [],
        'encoding': None,
        'decoding': None,
        'encoding_decisions': [],
        'decoding_decisions': [],
        'chance': None,
        'partition': None,
        'report': None,
    }


def _finish(final_state: AnalysisState) -> CausalReport:
    logger.info(f'Analysis trail: {" -> ".join(final_state["trail"])}')
    if final_state.get('error') is not None:
        raise final_state['error']
    return final_state['report']


def run_analysis(
    cohort: Sequence[Dataset],
    paradigm: Paradigm,
    config: RunConfig,
    seed: Optional[int] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> CausalReport:
    """Run encoding, decoding, aggregation and interpretation end to end

    Raises StageError naming the failing stage; the original error is its cause.
    """
    seed = config.seed if seed is None else seed
    app = create_analysis_workflow().compile()
    return _finish(app.invoke(_initial_state(cohort, paradigm, config, seed, provenance)))


async def arun_analysis(
    cohort: Sequence[Dataset],
    paradigm: Paradigm,
    config: RunConfig,
    seed: Optional[int] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> CausalReport:
    seed = config.seed if seed is None else seed
    app = create_analysis_workflow().compile()
    final_state = await app.ainvoke(
        _initial_state(cohort, paradigm, config, seed, provenance)
    )
    return _finish(final_state)
