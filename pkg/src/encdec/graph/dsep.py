"""d-separation queries on a Dag

``is_d_separated`` walks the graph with the reachability ("Bayes ball")
procedure: a trail may pass a non-collider only when it is unobserved, and a
collider only when the collider is an ancestor of (or in) the conditioning
set. ``is_d_separated_bruteforce`` applies the path-blocking definition
literally to every undirected simple path and is kept as a reference.
"""

import logging
from itertools import combinations
from typing import Collection, FrozenSet, Iterable, List, Sequence, Set, Tuple

import networkx as nx

from ..exceptions import ArgumentError
from ..models.graph import Dag, Independence

logger = logging.getLogger(__name__)

_UP = 'up'  # entered the node from one of its children
_DOWN = 'down'  # entered the node from one of its parents


def _check_query(dag: Dag, a: str, b: str, z: Collection[str]) -> FrozenSet[str]:
    dag.require(a, b, *z)
    if a == b:
        raise ArgumentError(f'd-separation query needs two distinct nodes, got {a!r}')
    z = frozenset(z)
    if a in z or b in z:
        raise ArgumentError(
            f'Query endpoints must not be conditioned on: {a!r}, {b!r} given {sorted(z)}'
        )
    return z


def _active_reachable(dag: Dag, source: str, z: FrozenSet[str]) -> Set[str]:
    graph = dag.graph
    conditioned_or_ancestor = set(z)
    for node in z:
        conditioned_or_ancestor |= nx.ancestors(graph, node)

    reachable: Set[str] = set()
    visited: Set[Tuple[str, str]] = set()
    frontier: List[Tuple[str, str]] = [(source, _UP)]
    while frontier:
        node, direction = frontier.pop()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in z:
            reachable.add(node)

        if direction == _UP and node not in z:
            frontier.extend((parent, _UP) for parent in graph.predecessors(node))
            frontier.extend((child, _DOWN) for child in graph.successors(node))
        elif direction == _DOWN:
            if node not in z:
                frontier.extend((child, _DOWN) for child in graph.successors(node))
            if node in conditioned_or_ancestor:
                frontier.extend((parent, _UP) for parent in graph.predecessors(node))
    return reachable


def is_d_separated(dag: Dag, a: str, b: str, z: Collection[str] = ()) -> bool:
    """True iff every path between ``a`` and ``b`` is blocked by ``z``"""
    z = _check_query(dag, a, b, z)
    return b not in _active_reachable(dag, a, z)


def is_d_separated_sets(
    dag: Dag, a_set: Collection[str], b_set: Collection[str], z: Collection[str] = ()
) -> bool:
    a_set, b_set, z = frozenset(a_set), frozenset(b_set), frozenset(z)
    if not a_set or not b_set:
        raise ArgumentError('Both node sets of a d-separation query must be nonempty')
    if a_set & b_set or a_set & z or b_set & z:
        raise ArgumentError('Node sets of a d-separation query must be disjoint')
    dag.require(*a_set, *b_set, *z)

    for a in _ordered(dag, a_set):
        reachable = _active_reachable(dag, a, z)
        if any(b in reachable for b in b_set):
            return False
    return True


def is_d_separated_bruteforce(
    dag: Dag, a: str, b: str, z: Collection[str] = ()
) -> bool:
    z = _check_query(dag, a, b, z)
    graph = dag.graph
    skeleton = graph.to_undirected(as_view=True)
    for path in nx.all_simple_paths(skeleton, a, b):
        if not _path_blocked(dag, path, z):
            return False
    return True


def _path_blocked(dag: Dag, path: Sequence[str], z: FrozenSet[str]) -> bool:
    graph = dag.graph
    for previous, middle, following in zip(path, path[1:], path[2:]):
        collider = graph.has_edge(previous, middle) and graph.has_edge(
            following, middle
        )
        if collider:
            if middle not in z and not (dag.descendants(middle) & z):
                return True
        elif middle in z:
            return True
    return False


def implied_independencies(dag: Dag, observed: Iterable[str]) -> List[Independence]:
    """All (a, b, Z) with Z drawn from ``observed`` such that a and b are d-separated"""
    observed = list(dict.fromkeys(observed))
    dag.require(*observed)

    statements = []
    for i, a in enumerate(observed):
        for b in observed[i + 1 :]:
            rest = [n for n in observed if n not in (a, b)]
            for size in range(len(rest) + 1):
                for given in combinations(rest, size):
                    if is_d_separated(dag, a, b, given):
                        statements.append(Independence(a=a, b=b, given=given))
    logger.debug(f'{len(statements)} independencies implied over {observed}')
    return statements


def _ordered(dag: Dag, names: Collection[str]) -> List[str]:
    return [n for n in dag.nodes if n in names]
