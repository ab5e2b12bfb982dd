from .forest import (
    CrossValidation,
    DecisionTree,
    Forest,
    cross_validate,
    fit_forest,
    grow_tree,
    loo_accuracy,
    predict,
)
from .importance import ImportanceResult, permutation_importance, split_column

__all__ = [
    'DecisionTree',
    'Forest',
    'CrossValidation',
    'ImportanceResult',
    'grow_tree',
    'fit_forest',
    'predict',
    'cross_validate',
    'loo_accuracy',
    'permutation_importance',
    'split_column',
]
