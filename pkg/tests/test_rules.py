from itertools import product

import pytest

from encdec.models import Paradigm, RelevanceDecision
from encdec.rules import (
    HIDDEN_CONFOUNDER_CAVEAT,
    INDETERMINATE_NOTE,
    MODEL_TYPES,
    RULES,
    RULES_BY_ID,
    combined_inference,
    expected_rule,
    feature_statements,
    find_rule,
    interpret,
)
from encdec.workflows import partition

REL = RelevanceDecision.RELEVANT
IRR = RelevanceDecision.IRRELEVANT
IND = RelevanceDecision.INDETERMINATE

STIMULUS = Paradigm.STIMULUS
RESPONSE = Paradigm.RESPONSE

COMBINED_ROWS = [
    (STIMULUS, REL, REL, 'S5', 'IC1 effect of S'),
    (STIMULUS, REL, IRR, 'S6', 'IC1 indirect effect of S'),
    (STIMULUS, IRR, REL, 'S7', 'IC1 provides brain state context'),
    (STIMULUS, IRR, IRR, 'S8', 'IC1 neither effect nor provides brain state context'),
    (RESPONSE, REL, REL, 'R5', 'IC1: inconclusive'),
    (RESPONSE, REL, IRR, 'R6', 'IC1 no direct cause of R'),
    (RESPONSE, IRR, REL, 'R7', 'IC1 provides brain state context'),
    (RESPONSE, IRR, IRR, 'R8', 'IC1 neither cause nor provides brain state context'),
]

SINGLE_ROWS = [
    (STIMULUS, 'encoding', REL, 'S1', 'IC1 effect of S'),
    (STIMULUS, 'encoding', IRR, 'S2', 'IC1 no effect of S'),
    (STIMULUS, 'decoding', REL, 'S3', 'IC1: inconclusive'),
    (STIMULUS, 'decoding', IRR, 'S4', 'IC1: inconclusive'),
    (RESPONSE, 'encoding', REL, 'R1', 'IC1: inconclusive'),
    (RESPONSE, 'encoding', IRR, 'R2', 'IC1 no cause of R'),
    (RESPONSE, 'decoding', REL, 'R3', 'IC1: inconclusive'),
    (RESPONSE, 'decoding', IRR, 'R4', 'IC1: inconclusive'),
]

SIX = ['IC1', 'IC2', 'IC3', 'IC4', 'IC5', 'IC6']


def texts(inferences):
    return [inference.text for inference in inferences]


class TestRuleTable:
    """Test cases for the rule table itself"""

    def test_sixteen_rules(self):
        assert len(RULES) == 16
        assert sorted(RULES_BY_ID) == sorted(
            [f'S{i}' for i in range(1, 9)] + [f'R{i}' for i in range(1, 9)]
        )

    @pytest.mark.parametrize('paradigm, enc, dec, rule_id, text', COMBINED_ROWS)
    def test_combined_rows(self, paradigm, enc, dec, rule_id, text):
        rule = find_rule(paradigm, 'combined', enc, dec)
        assert rule.rule_id == rule_id
        assert rule.render('IC1') == text

    @pytest.mark.parametrize('paradigm, model, decided, rule_id, text', SINGLE_ROWS)
    def test_single_model_rows(self, paradigm, model, decided, rule_id, text):
        if model == 'encoding':
            rule = find_rule(paradigm, model, encoding=decided)
        else:
            rule = find_rule(paradigm, model, decoding=decided)
        assert rule.rule_id == rule_id
        assert rule.render('IC1') == text

    def test_decoding_rules_are_inconclusive(self):
        for rule in RULES:
            if rule.model == 'decoding':
                assert rule.inconclusive

    def test_expected_rule(self):
        assert expected_rule(STIMULUS, True, False) == 'S6'
        assert expected_rule(RESPONSE, False, True) == 'R7'

    def test_model_types(self):
        assert MODEL_TYPES[STIMULUS]['encoding'] == 'causal encoding model P(X|S)'
        assert MODEL_TYPES[RESPONSE]['decoding'] == 'causal decoding model P(R|X)'


class TestFeatureStatements:
    """Every paradigm and decision pair yields a full statement list"""

    @pytest.mark.parametrize(
        'paradigm, enc, dec',
        list(product([STIMULUS, RESPONSE], [REL, IRR, IND], [REL, IRR, IND])),
    )
    def test_total(self, paradigm, enc, dec):
        statements = feature_statements(paradigm, 'IC1', enc, dec)
        assert [s.model for s in statements] == ['encoding', 'decoding', 'combined']
        combined = statements[-1]
        if IND in (enc, dec):
            assert combined.rule is None
            assert 'indeterminate' in combined.text
        else:
            assert combined.rule == expected_rule(paradigm, enc is REL, dec is REL)

    def test_indeterminate_side_gets_a_note(self):
        enc, dec, combined = feature_statements(STIMULUS, 'IC4', IND, REL)
        assert enc.rule is None
        assert enc.text == 'IC4: encoding relevance indeterminate, no encoding statement'
        assert dec.rule == 'S3'
        assert combined.text == (
            'IC4: excluded from the combined interpretation (indeterminate relevance)'
        )


class TestInterpret:
    """Test cases for whole-partition interpretation"""

    def test_one_combined_rule_per_determined_feature(self):
        part = partition(
            {'IC1': REL, 'IC2': IRR, 'IC3': IND},
            {'IC1': REL, 'IC2': REL, 'IC3': REL},
        )
        report = interpret(STIMULUS, part)
        assert report.combined_rule('IC1') == 'S5'
        assert report.combined_rule('IC2') == 'S7'
        assert report.combined_rule('IC3') is None
        assert report.notes == [INDETERMINATE_NOTE]
        assert report.condition_symbol == 'S'

    def test_response_carries_caveat(self):
        part = partition({'X1': REL}, {'X1': IRR})
        report = interpret(RESPONSE, part)
        assert report.combined_rule('X1') == 'R6'
        assert HIDDEN_CONFOUNDER_CAVEAT in report.notes
        assert report.condition_symbol == 'R'

    def test_statements_in_feature_order(self):
        part = partition({'b': IRR, 'a': IRR}, {'b': IRR, 'a': IRR})
        report = interpret(STIMULUS, part)
        assert [s.feature for s in report.statements] == ['b'] * 3 + ['a'] * 3


class TestCombinedInference:
    """Test cases for inferences drawn from both models"""

    def test_direct_effect_among_jointly_relevant(self):
        part = partition(
            {f: REL for f in SIX},
            {f: (REL if f in ('IC1', 'IC2') else IRR) for f in SIX},
        )
        inferences, warnings = combined_inference(STIMULUS, part, above_chance=True)
        assert not warnings
        assert texts(inferences) == [
            '{IC1, IC2, IC3, IC4, IC5, IC6} are effects of S',
            'above-chance decoding: at least one feature is an effect of S',
            '{IC3, IC4, IC5, IC6} are only indirect effects of S',
            'at least one member of {IC1, IC2} is a direct effect of S wrt the observed set',
        ]

    def test_warning_when_no_effect_decodes(self):
        part = partition({'X1': REL, 'X2': IRR}, {'X1': IRR, 'X2': IRR})
        inferences, warnings = combined_inference(STIMULUS, part)
        assert len(warnings) == 1
        assert warnings[0].startswith('Consistency warning: {X1} are effects of S')
        assert 'direct_effect' not in [i.kind for i in inferences]

    def test_indeterminate_suppresses_deduction(self):
        part = partition({'X1': REL, 'X2': REL}, {'X1': REL, 'X2': IND})
        inferences, warnings = combined_inference(STIMULUS, part)
        kinds = [i.kind for i in inferences]
        assert 'suppressed' in kinds
        assert 'direct_effect' not in kinds
        assert not warnings

    def test_brain_state_context(self):
        part = partition({'X1': REL, 'X2': IRR}, {'X1': REL, 'X2': REL})
        inferences, _ = combined_inference(STIMULUS, part, above_chance=False)
        assert '{X2} provide brain state context' in texts(inferences)
        assert 'decoding_effect' not in [i.kind for i in inferences]

    def test_nothing_relevant(self):
        part = partition({'X1': IRR}, {'X1': IRR})
        assert combined_inference(STIMULUS, part) == ([], [])

    def test_response_no_direct_cause(self):
        part = partition({'X1': REL, 'X2': REL}, {'X1': IRR, 'X2': REL})
        inferences, warnings = combined_inference(RESPONSE, part)
        assert texts(inferences) == ['X1 no direct cause of R wrt the observed set']
        assert inferences[0].rule == 'R6'
        assert not warnings
