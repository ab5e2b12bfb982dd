from .interpretation import (
    HIDDEN_CONFOUNDER_CAVEAT,
    INDETERMINATE_NOTE,
    MODEL_TYPES,
    RULES,
    RULES_BY_ID,
    Rule,
    combined_inference,
    expected_rule,
    feature_statements,
    find_rule,
    interpret,
)

__all__ = [
    'Rule',
    'RULES',
    'RULES_BY_ID',
    'MODEL_TYPES',
    'HIDDEN_CONFOUNDER_CAVEAT',
    'INDETERMINATE_NOTE',
    'find_rule',
    'expected_rule',
    'feature_statements',
    'interpret',
    'combined_inference',
]
