import logging
from typing import Collection, List, Sequence

import networkx as nx

from ..exceptions import ArgumentError
from ..models.graph import Dag, EffectClass, OracleRelevance
from .dsep import is_d_separated

logger = logging.getLogger(__name__)


def directed_paths(dag: Dag, a: str, b: str) -> List[List[str]]:
    """All simple directed paths a -> ... -> b"""
    dag.require(a, b)
    if a == b:
        raise ArgumentError(f'Path query needs two distinct nodes, got {a!r}')
    return [list(path) for path in nx.all_simple_paths(dag.graph, a, b)]


def classify_effect(
    dag: Dag, c: str, x: str, observed: Collection[str]
) -> EffectClass:
    """Classify ``x`` as a direct, indirect or non-effect of ``c`` wrt ``observed``

    Hidden nodes are treated only as "not observed": a directed path whose
    intermediates are all unobserved makes the effect direct.
    """
    observed = frozenset(observed)
    dag.require(*observed)
    if c not in observed or x not in observed:
        raise ArgumentError(f'Both {c!r} and {x!r} must be in the observed set')
    if c == x:
        raise ArgumentError(f'Effect query needs two distinct nodes, got {c!r}')

    graph = dag.graph
    if x not in nx.descendants(graph, c):
        return EffectClass.NON_EFFECT

    through = [n for n in dag.nodes if n not in observed or n in (c, x)]
    if nx.has_path(graph.subgraph(through), c, x):
        return EffectClass.DIRECT_EFFECT
    return EffectClass.INDIRECT_EFFECT


def classify_cause(
    dag: Dag, r: str, x: str, observed: Collection[str]
) -> EffectClass:
    """Classify ``x`` as a direct, indirect or non-cause of ``r`` wrt ``observed``"""
    return classify_effect(dag, x, r, observed).as_cause()


def oracle_relevance(
    dag: Dag, condition: str, features: Sequence[str]
) -> List[OracleRelevance]:
    """Encoding and decoding relevance of each feature implied by the graph

    Encoding relevance is marginal d-connection with the condition; decoding
    relevance is d-connection given all other features.
    """
    features = list(dict.fromkeys(features))
    dag.require(condition, *features)
    if condition in features:
        raise ArgumentError(f'Condition {condition!r} listed among the features')
    hidden = [n for n in (condition, *features) if n in dag.hidden]
    if hidden:
        raise ArgumentError(f'Hidden nodes cannot be analysed: {hidden}')

    table = []
    for feature in features:
        others = [f for f in features if f != feature]
        table.append(
            OracleRelevance(
                feature=feature,
                enc_relevant=not is_d_separated(dag, condition, feature),
                dec_relevant=not is_d_separated(dag, condition, feature, others),
            )
        )
    return table
