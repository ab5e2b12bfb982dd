from enum import Enum
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from ..exceptions import ArgumentError


class EffectClass(str, Enum):
    DIRECT_EFFECT = 'direct_effect'
    INDIRECT_EFFECT = 'indirect_effect'
    NON_EFFECT = 'non_effect'
    DIRECT_CAUSE = 'direct_cause'
    INDIRECT_CAUSE = 'indirect_cause'
    NON_CAUSE = 'non_cause'

    def as_cause(self) -> 'EffectClass':
        """Dual naming used when the query runs from feature to condition"""
        return {
            EffectClass.DIRECT_EFFECT: EffectClass.DIRECT_CAUSE,
            EffectClass.INDIRECT_EFFECT: EffectClass.INDIRECT_CAUSE,
            EffectClass.NON_EFFECT: EffectClass.NON_CAUSE,
        }.get(self, self)


class Dag(BaseModel):
    """Labeled directed acyclic graph with optional hidden nodes

    Node order is insertion order and drives every deterministic listing.
    """

    model_config = ConfigDict(frozen=True)

    nodes: Tuple[str, ...] = Field(..., min_length=1)
    edges: Tuple[Tuple[str, str], ...] = ()
    hidden: FrozenSet[str] = frozenset()

    @field_serializer('hidden')
    def serialize_hidden(self, hidden: FrozenSet[str]) -> List[str]:
        return sorted(hidden)

    @model_validator(mode='after')
    def validate_structure(self) -> 'Dag':
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError('Duplicate node names')
        known = set(self.nodes)
        seen = set()
        for tail, head in self.edges:
            if tail not in known or head not in known:
                raise ValueError(f'Edge {tail} -> {head} references an unknown node')
            if tail == head:
                raise ValueError(f'Self-loop on {tail}')
            if (tail, head) in seen:
                raise ValueError(f'Duplicate edge {tail} -> {head}')
            seen.add((tail, head))
        unknown_hidden = self.hidden - known
        if unknown_hidden:
            raise ValueError(f'Hidden nodes not in graph: {sorted(unknown_hidden)}')

        graph = _build_graph(self.nodes, self.edges)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise ValueError(
                f'Graph contains a cycle: {" -> ".join(t for t, _ in cycle)}'
            )
        return self

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Tuple[str, str]],
        nodes: Optional[Iterable[str]] = None,
        hidden: Iterable[str] = (),
    ) -> 'Dag':
        """Build a DAG, collecting nodes from the edge list when not given"""
        edges = tuple((str(t), str(h)) for t, h in edges)
        hidden = tuple(hidden)
        ordered: List[str] = list(nodes) if nodes is not None else []
        for tail, head in edges:
            for name in (tail, head):
                if name not in ordered:
                    ordered.append(name)
        for name in hidden:
            if name not in ordered:
                ordered.append(name)
        return cls(nodes=tuple(ordered), edges=edges, hidden=frozenset(hidden))

    @cached_property
    def graph(self) -> nx.DiGraph:
        return _build_graph(self.nodes, self.edges)

    @property
    def observed(self) -> Tuple[str, ...]:
        return tuple(n for n in self.nodes if n not in self.hidden)

    def parents(self, node: str) -> Tuple[str, ...]:
        self.require(node)
        return tuple(self.graph.predecessors(node))

    def children(self, node: str) -> Tuple[str, ...]:
        self.require(node)
        return tuple(self.graph.successors(node))

    def descendants(self, node: str) -> FrozenSet[str]:
        self.require(node)
        return frozenset(nx.descendants(self.graph, node))

    def topological_order(self) -> Tuple[str, ...]:
        return tuple(nx.lexicographical_topological_sort(self.graph))

    def require(self, *names: str) -> None:
        for name in names:
            if name not in self.graph:
                raise ArgumentError(f'Unknown node {name!r}')


class Independence(BaseModel):
    """Statement a _||_ b | given implied by d-separation"""

    model_config = ConfigDict(frozen=True)

    a: str
    b: str
    given: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return f'{self.a} _||_ {self.b} | {{{", ".join(self.given)}}}'


class OracleRelevance(BaseModel):
    """Ground-truth relevance of one feature, read off the graph"""

    model_config = ConfigDict(frozen=True)

    feature: str
    enc_relevant: bool
    dec_relevant: bool


def _build_graph(nodes: Iterable[str], edges: Iterable[Tuple[str, str]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from(edges)
    return graph
