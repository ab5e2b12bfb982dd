from .sampler import (
    build_sem,
    default_mechanisms,
    sample,
    subject_cohort,
    subject_ids,
    subject_seed,
)

__all__ = [
    'build_sem',
    'default_mechanisms',
    'sample',
    'subject_cohort',
    'subject_ids',
    'subject_seed',
]
