from .hsic import gram_matrix, hsic_perm_test, hsic_statistic, median_heuristic
from .ks import ks_statistic_uniform, ks_uniformity_test
from .streams import derive_seed, stream
from .wilcoxon import wilcoxon_signed_rank, wilcoxon_z

__all__ = [
    'median_heuristic',
    'gram_matrix',
    'hsic_statistic',
    'hsic_perm_test',
    'ks_statistic_uniform',
    'ks_uniformity_test',
    'wilcoxon_signed_rank',
    'wilcoxon_z',
    'stream',
    'derive_seed',
]
