"""Causal interpretation rules for encoding and decoding relevance

Single-model rules (S1-S4, R1-R4) read one side; combined rules (S5-S8,
R5-R8) read both. Statement text is fixed per rule id.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..models.analysis import (
    CausalReport,
    CombinedInference,
    FeaturePartition,
    Paradigm,
    RelevanceDecision,
    RuleStatement,
)

logger = logging.getLogger(__name__)

REL = RelevanceDecision.RELEVANT
IRR = RelevanceDecision.IRRELEVANT
IND = RelevanceDecision.INDETERMINATE

ENCODING = 'encoding'
DECODING = 'decoding'
COMBINED = 'combined'

HIDDEN_CONFOUNDER_CAVEAT = (
    'Hidden confounders cannot be ruled out in a response-based paradigm: '
    'features potentially being a cause and genuine causes cannot be distinguished.'
)
INDETERMINATE_NOTE = (
    'Features with a group p-value between alpha and beta are indeterminate; '
    'they receive no causal statement and are excluded from combined inferences.'
)


@dataclass(frozen=True)
class Rule:
    rule_id: str
    paradigm: Paradigm
    model: str
    encoding: Optional[RelevanceDecision]
    decoding: Optional[RelevanceDecision]
    conclusion: str  # as listed in the rule table
    template: str
    inconclusive: bool = False

    def render(self, feature: str) -> str:
        return self.template.format(feature=feature)


def _rule(rule_id, paradigm, model, enc, dec, conclusion, template=None):
    inconclusive = conclusion == 'inconclusive'
    if template is None:
        if inconclusive:
            template = '{feature}: inconclusive'
        elif conclusion.startswith('X '):
            template = '{feature}' + conclusion[1:]
        else:
            template = '{feature} ' + conclusion
    return Rule(rule_id, paradigm, model, enc, dec, conclusion, template, inconclusive)


S, R = Paradigm.STIMULUS, Paradigm.RESPONSE

RULES: Tuple[Rule, ...] = (
    _rule('S1', S, ENCODING, REL, None, 'X effect of S'),
    _rule('S2', S, ENCODING, IRR, None, 'X no effect of S'),
    _rule('S3', S, DECODING, None, REL, 'inconclusive'),
    _rule('S4', S, DECODING, None, IRR, 'inconclusive'),
    _rule('S5', S, COMBINED, REL, REL, 'X effect of S'),
    _rule('S6', S, COMBINED, REL, IRR, 'X indirect effect of S'),
    _rule('S7', S, COMBINED, IRR, REL, 'provides brain state context'),
    _rule(
        'S8', S, COMBINED, IRR, IRR, 'neither effect nor provides brain state context'
    ),
    _rule('R1', R, ENCODING, REL, None, 'inconclusive'),
    _rule('R2', R, ENCODING, IRR, None, 'X no cause of R'),
    _rule('R3', R, DECODING, None, REL, 'inconclusive'),
    _rule('R4', R, DECODING, None, IRR, 'inconclusive'),
    _rule('R5', R, COMBINED, REL, REL, 'inconclusive'),
    _rule('R6', R, COMBINED, REL, IRR, 'X no direct cause of R'),
    _rule('R7', R, COMBINED, IRR, REL, 'provides brain state context'),
    _rule(
        'R8', R, COMBINED, IRR, IRR, 'neither cause nor provides brain state context'
    ),
)

RULES_BY_ID: Dict[str, Rule] = {rule.rule_id: rule for rule in RULES}

MODEL_TYPES = {
    Paradigm.STIMULUS: {
        ENCODING: 'causal encoding model P(X|S)',
        DECODING: 'anti-causal decoding model P(S|X)',
    },
    Paradigm.RESPONSE: {
        ENCODING: 'anti-causal encoding model P(X|R)',
        DECODING: 'causal decoding model P(R|X)',
    },
}


def find_rule(
    paradigm: Paradigm,
    model: str,
    encoding: Optional[RelevanceDecision] = None,
    decoding: Optional[RelevanceDecision] = None,
) -> Optional[Rule]:
    for rule in RULES:
        if (
            rule.paradigm is paradigm
            and rule.model == model
            and rule.encoding == (encoding if model != DECODING else None)
            and rule.decoding == (decoding if model != ENCODING else None)
        ):
            return rule
    return None


def expected_rule(paradigm: Paradigm, enc_relevant: bool, dec_relevant: bool) -> str:
    """Combined rule id for a pair of ground-truth relevances"""
    rule = find_rule(
        paradigm,
        COMBINED,
        REL if enc_relevant else IRR,
        REL if dec_relevant else IRR,
    )
    return rule.rule_id


def _decisions(
    part: FeaturePartition, feature: str
) -> Tuple[RelevanceDecision, RelevanceDecision]:
    if feature in part.encoding and feature in part.decoding:
        return part.encoding[feature], part.decoding[feature]
    if feature in part.enc_dec:
        return REL, REL
    if feature in part.enc_only:
        return REL, IRR
    if feature in part.dec_only:
        return IRR, REL
    if feature in part.neither:
        return IRR, IRR
    return IND, IND


def _statement(rule: Rule, feature: str) -> RuleStatement:
    return RuleStatement(
        feature=feature,
        model=rule.model,
        rule=rule.rule_id,
        conclusion=rule.conclusion,
        text=rule.render(feature),
        inconclusive=rule.inconclusive,
    )


def _indeterminate(feature: str, model: str) -> RuleStatement:
    if model == COMBINED:
        text = f'{feature}: excluded from the combined interpretation (indeterminate relevance)'
    else:
        text = f'{feature}: {model} relevance indeterminate, no {model} statement'
    return RuleStatement(
        feature=feature,
        model=model,
        rule=None,
        conclusion='indeterminate',
        text=text,
        inconclusive=True,
    )


def feature_statements(
    paradigm: Paradigm, feature: str, enc: RelevanceDecision, dec: RelevanceDecision
) -> List[RuleStatement]:
    """Encoding, decoding and combined statements for one feature"""
    statements = []
    for model, decided in ((ENCODING, enc), (DECODING, dec)):
        if decided is IND:
            statements.append(_indeterminate(feature, model))
            continue
        rule = find_rule(paradigm, model, encoding=enc, decoding=dec)
        statements.append(_statement(rule, feature))

    if IND in (enc, dec):
        statements.append(_indeterminate(feature, COMBINED))
    else:
        statements.append(_statement(find_rule(paradigm, COMBINED, enc, dec), feature))
    return statements


def interpret(paradigm: Paradigm, part: FeaturePartition) -> CausalReport:
    """Apply the rule table to every feature of the partition"""
    statements = []
    for feature in part.features:
        enc, dec = _decisions(part, feature)
        statements.extend(feature_statements(paradigm, feature, enc, dec))

    notes = []
    if part.indeterminate:
        notes.append(INDETERMINATE_NOTE)
    if paradigm is Paradigm.RESPONSE:
        notes.append(HIDDEN_CONFOUNDER_CAVEAT)

    logger.info(
        f'Interpreted {len(part.features)} features ({paradigm.value}): '
        f'{len(part.indeterminate)} indeterminate'
    )
    return CausalReport(
        paradigm=paradigm,
        condition_symbol=paradigm.symbol,
        model_types=MODEL_TYPES[paradigm],
        partition=part,
        statements=statements,
        notes=notes,
    )


def _members(features: List[str]) -> str:
    return '{' + ', '.join(features) + '}'


def combined_inference(
    paradigm: Paradigm,
    part: FeaturePartition,
    above_chance: Optional[bool] = None,
) -> Tuple[List[CombinedInference], List[str]]:
    """Inferences drawn from both models jointly, plus consistency warnings

    ``above_chance`` is the outcome of the group-level test of decoding
    accuracy against chance (None when it was not run).
    """
    inferences: List[CombinedInference] = []
    warnings: List[str] = []

    if paradigm is Paradigm.RESPONSE:
        for feature in part.enc_only:
            rule = RULES_BY_ID['R6']
            inferences.append(
                CombinedInference(
                    kind='no_direct_cause',
                    features=[feature],
                    rule=rule.rule_id,
                    text=f'{feature} no direct cause of R wrt the observed set',
                )
            )
        return inferences, warnings

    x_enc = part.x_enc
    if x_enc:
        inferences.append(
            CombinedInference(
                kind='effects',
                features=x_enc,
                rule='S1',
                text=f'{_members(x_enc)} are effects of S',
            )
        )
    if above_chance:
        inferences.append(
            CombinedInference(
                kind='decoding_effect',
                features=list(part.features),
                text='above-chance decoding: at least one feature is an effect of S',
            )
        )
    if part.enc_only:
        inferences.append(
            CombinedInference(
                kind='indirect_effects',
                features=list(part.enc_only),
                rule='S6',
                text=f'{_members(part.enc_only)} are only indirect effects of S',
            )
        )
    if part.dec_only:
        inferences.append(
            CombinedInference(
                kind='brain_state_context',
                features=list(part.dec_only),
                rule='S7',
                text=f'{_members(part.dec_only)} provide brain state context',
            )
        )

    if not x_enc:
        return inferences, warnings
    if part.indeterminate:
        inferences.append(
            CombinedInference(
                kind='suppressed',
                features=list(part.indeterminate),
                text=(
                    'direct-effect deduction suppressed: relevance of '
                    f'{_members(part.indeterminate)} is indeterminate'
                ),
            )
        )
    elif part.enc_dec:
        inferences.append(
            CombinedInference(
                kind='direct_effect',
                features=list(part.enc_dec),
                text=(
                    f'at least one member of {_members(part.enc_dec)} '
                    'is a direct effect of S wrt the observed set'
                ),
            )
        )
    else:
        message = (
            f'Consistency warning: {_members(x_enc)} are effects of S but none is '
            'relevant in decoding, so every observed effect would be indirect; '
            'this points to a test error or violated assumptions'
        )
        logger.warning(message)
        warnings.append(message)
    return inferences, warnings
