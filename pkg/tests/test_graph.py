from itertools import chain, combinations, product

import numpy as np
import pytest
from pydantic import ValidationError

from encdec.exceptions import ArgumentError
from encdec.graph import (
    classify_cause,
    classify_effect,
    directed_paths,
    implied_independencies,
    is_d_separated,
    is_d_separated_bruteforce,
    is_d_separated_sets,
    oracle_relevance,
)
from encdec.models import Dag, EffectClass, Independence


def all_dags(nodes):
    """Every labeled DAG on ``nodes`` (each pair: no edge, forward or backward)"""
    pairs = list(combinations(nodes, 2))
    for states in product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (u, v), state in zip(pairs, states):
            if state == 1:
                edges.append((u, v))
            elif state == 2:
                edges.append((v, u))
        try:
            yield Dag(nodes=tuple(nodes), edges=tuple(edges))
        except ValidationError:
            continue


def random_dag(rng, n_nodes, density=0.4):
    nodes = [f'V{i}' for i in range(n_nodes)]
    order = rng.permutation(n_nodes)
    edges = [
        (nodes[order[i]], nodes[order[j]])
        for i in range(n_nodes)
        for j in range(i + 1, n_nodes)
        if rng.random() < density
    ]
    return Dag(nodes=tuple(nodes), edges=tuple(edges))


def queries(dag):
    for a, b in combinations(dag.nodes, 2):
        rest = [n for n in dag.nodes if n not in (a, b)]
        for z in chain.from_iterable(combinations(rest, k) for k in range(len(rest) + 1)):
            yield a, b, z


class TestDag:
    """Test cases for Dag construction"""

    def test_nodes_collected_in_edge_order(self):
        dag = Dag.from_edges([('S', 'X1'), ('X1', 'X2')], hidden=['H'])
        assert dag.nodes == ('S', 'X1', 'X2', 'H')
        assert dag.observed == ('S', 'X1', 'X2')
        assert dag.parents('X1') == ('S',)
        assert dag.children('S') == ('X1',)

    def test_rejects_cycle(self):
        with pytest.raises(ValidationError, match='cycle'):
            Dag.from_edges([('A', 'B'), ('B', 'C'), ('C', 'A')])

    def test_rejects_self_loop_and_duplicates(self):
        with pytest.raises(ValidationError):
            Dag.from_edges([('A', 'A')])
        with pytest.raises(ValidationError):
            Dag.from_edges([('A', 'B'), ('A', 'B')])
        with pytest.raises(ValidationError):
            Dag(nodes=('A', 'A'))

    def test_rejects_unknown_endpoint(self):
        with pytest.raises(ValidationError):
            Dag(nodes=('A',), edges=(('A', 'B'),))

    def test_back_edge_always_rejected(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            dag = random_dag(rng, int(rng.integers(3, 7)), density=0.5)
            order = dag.topological_order()
            for tail, head in dag.edges:
                assert order.index(tail) < order.index(head)
            if not dag.edges:
                continue
            tail, head = dag.edges[int(rng.integers(len(dag.edges)))]
            with pytest.raises(ValidationError, match='cycle'):
                Dag(nodes=dag.nodes, edges=dag.edges + ((head, tail),))

    def test_equal_dags_compare_equal(self):
        first = Dag.from_edges([('S', 'X1')])
        second = Dag.from_edges([('S', 'X1')])
        assert first == second
        assert first.graph.has_edge('S', 'X1')


class TestDSeparation:
    """Test cases for d-separation queries"""

    def test_chain(self):
        dag = Dag.from_edges([('X0', 'X1'), ('X1', 'X2')])
        assert not is_d_separated(dag, 'X0', 'X2')
        assert is_d_separated(dag, 'X0', 'X2', ['X1'])

    def test_collider(self):
        dag = Dag.from_edges([('X0', 'X1'), ('X2', 'X1')])
        assert is_d_separated(dag, 'X0', 'X2')
        assert not is_d_separated(dag, 'X0', 'X2', ['X1'])

    def test_collider_descendant_unblocks(self):
        dag = Dag.from_edges([('X0', 'X1'), ('X2', 'X1'), ('X1', 'D')])
        assert not is_d_separated(dag, 'X0', 'X2', ['D'])

    def test_fork(self, fork_dag):
        assert not is_d_separated(fork_dag, 'X1', 'X2')
        assert is_d_separated(fork_dag, 'X1', 'X2', ['S'])

    def test_sets(self):
        dag = Dag.from_edges([('A', 'M'), ('B', 'M'), ('M', 'C')])
        assert is_d_separated_sets(dag, ['A'], ['B'], [])
        assert not is_d_separated_sets(dag, ['A'], ['B', 'C'], [])
        assert is_d_separated_sets(dag, ['A', 'B'], ['C'], ['M'])

    def test_sets_must_be_disjoint_and_nonempty(self):
        dag = Dag.from_edges([('A', 'B')])
        with pytest.raises(ArgumentError, match='nonempty'):
            is_d_separated_sets(dag, [], ['B'])
        with pytest.raises(ArgumentError, match='disjoint'):
            is_d_separated_sets(dag, ['A'], ['A', 'B'])

    def test_rejects_bad_queries(self, chain_dag):
        with pytest.raises(ArgumentError, match='distinct'):
            is_d_separated(chain_dag, 'S', 'S')
        with pytest.raises(ArgumentError, match='Unknown node'):
            is_d_separated(chain_dag, 'S', 'Q')
        with pytest.raises(ArgumentError, match='conditioned'):
            is_d_separated(chain_dag, 'S', 'X2', ['S'])

    def test_pure_chain_separated_iff_middle_given(self):
        dag = Dag.from_edges([('a', 'm'), ('m', 'b')], nodes=['a', 'm', 'b', 'w'])
        for z in ([], ['w'], ['m'], ['m', 'w']):
            assert is_d_separated(dag, 'a', 'b', z) == ('m' in z)

    def test_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            dag = random_dag(rng, 5)
            for a, b, z in queries(dag):
                assert is_d_separated(dag, a, b, z) == is_d_separated(dag, b, a, z)

    def test_matches_bruteforce_on_all_four_node_dags(self):
        dags = list(all_dags(['A', 'B', 'C', 'D']))
        assert len(dags) == 543
        for dag in dags:
            for a, b, z in queries(dag):
                assert is_d_separated(dag, a, b, z) == is_d_separated_bruteforce(
                    dag, a, b, z
                ), (dag.edges, a, b, z)

    def test_matches_bruteforce_on_random_dags(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            dag = random_dag(rng, int(rng.integers(5, 7)))
            for a, b, z in queries(dag):
                assert is_d_separated(dag, a, b, z) == is_d_separated_bruteforce(
                    dag, a, b, z
                )

    @pytest.mark.slow
    def test_matches_bruteforce_on_many_random_dags(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            dag = random_dag(rng, int(rng.integers(5, 7)), density=float(rng.uniform(0.2, 0.7)))
            for a, b, z in queries(dag):
                assert is_d_separated(dag, a, b, z) == is_d_separated_bruteforce(
                    dag, a, b, z
                )


class TestImpliedIndependencies:
    """Test cases for implied_independencies"""

    def test_chain(self):
        dag = Dag.from_edges([('X0', 'X1'), ('X1', 'X2')])
        statements = implied_independencies(dag, dag.nodes)
        assert Independence(a='X0', b='X2', given=('X1',)) in statements
        assert len(statements) == 1

    def test_fully_connected(self):
        dag = Dag.from_edges([('A', 'B'), ('B', 'C'), ('A', 'C')])
        assert implied_independencies(dag, dag.nodes) == []

    def test_isolated_nodes(self):
        dag = Dag(nodes=('A', 'B'))
        assert implied_independencies(dag, dag.nodes) == [Independence(a='A', b='B')]

    def test_rendering(self):
        assert str(Independence(a='X0', b='X2', given=('X1',))) == 'X0 _||_ X2 | {X1}'


class TestEffects:
    """Test cases for directed paths and effect classification"""

    def test_directed_paths(self, shortcut_dag):
        paths = directed_paths(shortcut_dag, 'S', 'X3')
        assert sorted(paths) == [['S', 'X1', 'X2', 'X3'], ['S', 'X3']]
        assert directed_paths(shortcut_dag, 'X3', 'S') == []

    def test_chain_classification(self, chain_dag):
        observed = ['S', 'X1', 'X2']
        assert classify_effect(chain_dag, 'S', 'X1', observed) is EffectClass.DIRECT_EFFECT
        assert classify_effect(chain_dag, 'S', 'X2', observed) is EffectClass.INDIRECT_EFFECT
        assert classify_effect(chain_dag, 'X2', 'S', observed) is EffectClass.NON_EFFECT

    def test_unobserved_mediator_makes_effect_direct(self, chain_dag):
        assert (
            classify_effect(chain_dag, 'S', 'X2', ['S', 'X2'])
            is EffectClass.DIRECT_EFFECT
        )

    def test_shortcut_is_direct(self, shortcut_dag):
        observed = ['S', 'X1', 'X2', 'X3']
        assert classify_effect(shortcut_dag, 'S', 'X3', observed) is EffectClass.DIRECT_EFFECT
        assert classify_effect(shortcut_dag, 'S', 'X2', observed) is EffectClass.INDIRECT_EFFECT

    def test_cause_naming(self):
        dag = Dag.from_edges(
            [('amygdala', 'hippocampus'), ('hippocampus', 'explicit_memory')]
        )
        observed = dag.nodes
        assert (
            classify_cause(dag, 'explicit_memory', 'hippocampus', observed)
            is EffectClass.DIRECT_CAUSE
        )
        assert (
            classify_cause(dag, 'explicit_memory', 'amygdala', observed)
            is EffectClass.INDIRECT_CAUSE
        )
        assert (
            classify_cause(dag, 'amygdala', 'explicit_memory', observed)
            is EffectClass.NON_CAUSE
        )

    def test_non_effect_iff_no_directed_path(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            dag = random_dag(rng, 5)
            for c, x in product(dag.nodes, repeat=2):
                if c == x:
                    continue
                no_path = not directed_paths(dag, c, x)
                effect = classify_effect(dag, c, x, dag.nodes)
                assert (effect is EffectClass.NON_EFFECT) == no_path

    def test_direct_effects_never_separated_by_remaining_features(self):
        for dag in all_dags(['A', 'B', 'C', 'D']):
            for c, x in product(dag.nodes, repeat=2):
                if c == x:
                    continue
                if classify_effect(dag, c, x, dag.nodes) is EffectClass.DIRECT_EFFECT:
                    rest = [n for n in dag.nodes if n not in (c, x)]
                    assert not is_d_separated(dag, c, x, rest)

    def test_requires_observed_endpoints(self, chain_dag):
        with pytest.raises(ArgumentError, match='observed'):
            classify_effect(chain_dag, 'S', 'X2', ['S'])


class TestOracleRelevance:
    """Test cases for the ground-truth relevance oracle"""

    def _table(self, dag, condition, features):
        return {
            r.feature: (r.enc_relevant, r.dec_relevant)
            for r in oracle_relevance(dag, condition, features)
        }

    def test_chain(self, chain_dag):
        assert self._table(chain_dag, 'S', ['X1', 'X2']) == {
            'X1': (True, True),
            'X2': (True, False),
        }

    def test_collider(self, collider_dag):
        assert self._table(collider_dag, 'S', ['X1', 'X2']) == {
            'X1': (True, True),
            'X2': (False, True),
        }

    def test_fork_and_shortcut(self, fork_dag, shortcut_dag):
        assert self._table(fork_dag, 'S', ['X1', 'X2']) == {
            'X1': (True, True),
            'X2': (True, True),
        }
        assert self._table(shortcut_dag, 'S', ['X1', 'X2', 'X3']) == {
            'X1': (True, True),
            'X2': (True, True),
            'X3': (True, True),
        }

    def test_hidden_confounder(self):
        dag = Dag.from_edges(
            [('X2', 'X1'), ('H', 'X1'), ('H', 'R')], hidden=['H']
        )
        assert self._table(dag, 'R', ['X1', 'X2']) == {
            'X1': (True, True),
            'X2': (False, True),
        }

    def test_rejects_hidden_features_and_condition_as_feature(self):
        dag = Dag.from_edges([('S', 'H'), ('H', 'X1')], hidden=['H'])
        with pytest.raises(ArgumentError, match='Hidden'):
            oracle_relevance(dag, 'S', ['H', 'X1'])
        with pytest.raises(ArgumentError, match='among the features'):
            oracle_relevance(dag, 'S', ['S', 'X1'])
