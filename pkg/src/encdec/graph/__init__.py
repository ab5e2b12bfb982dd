from .dsep import (
    implied_independencies,
    is_d_separated,
    is_d_separated_bruteforce,
    is_d_separated_sets,
)
from .effects import classify_cause, classify_effect, directed_paths, oracle_relevance

__all__ = [
    'is_d_separated',
    'is_d_separated_sets',
    'is_d_separated_bruteforce',
    'implied_independencies',
    'directed_paths',
    'classify_effect',
    'classify_cause',
    'oracle_relevance',
]
