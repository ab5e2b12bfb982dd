from .fixtures import Fixture, parse_fixture, parse_mechanism, read_dag, read_fixture, read_sem
from .reports import decisions_table, matrix_table, render_json, render_text, write_report
from .tables import (
    SubjectFile,
    read_cohort,
    read_pvalue_matrix,
    read_subject_csv,
    read_values,
    write_cohort,
    write_dataset,
    write_pvalue_matrix,
)

__all__ = [
    # Fixtures
    'Fixture',
    'parse_fixture',
    'parse_mechanism',
    'read_fixture',
    'read_dag',
    'read_sem',
    # Tables
    'SubjectFile',
    'read_subject_csv',
    'read_cohort',
    'write_dataset',
    'write_cohort',
    'read_pvalue_matrix',
    'write_pvalue_matrix',
    'read_values',
    # Reports
    'matrix_table',
    'decisions_table',
    'render_text',
    'render_json',
    'write_report',
]
