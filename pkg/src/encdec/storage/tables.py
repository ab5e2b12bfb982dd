"""CSV ingestion and export of subject datasets and p-value matrices"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError

from ..exceptions import ArgumentError, InputFormatError, SchemaMismatchError
from ..models.analysis import AnalysisSide, RelevanceMatrix
from ..models.data import Dataset

logger = logging.getLogger(__name__)

CONDITION_COLUMN = 'condition'
GROUP_ROW = 'KSp'


class SubjectFile(BaseModel):
    """A parsed subject CSV and the label mapping applied to its condition"""

    model_config = ConfigDict(frozen=True)

    path: Path
    dataset: Dataset
    labels: Tuple[str, str]

    @property
    def feature_names(self) -> List[str]:
        return list(self.dataset.feature_names)


def _read_text_frame(path: Path) -> pd.DataFrame:
    if not path.is_file():
        raise ArgumentError(f'File not found: {path}')
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise InputFormatError('File is empty', path=path, line=1)
    except pd.errors.ParserError as e:
        raise InputFormatError(f'Malformed CSV ({e})', path=path)
    if frame.empty:
        raise InputFormatError('No data rows', path=path, line=2)
    return frame


def _numeric_block(frame: pd.DataFrame, columns: Sequence[str], path: Path) -> np.ndarray:
    """Parse columns as finite floats; errors point at the first offending cell"""
    block = frame[list(columns)].apply(lambda col: col.str.strip())
    numbers = block.apply(pd.to_numeric, errors='coerce').to_numpy(dtype=float)
    bad = ~np.isfinite(numbers)
    if bad.any():
        rows, cols = np.nonzero(bad)
        row, col = int(rows[0]), int(cols[0])
        cell = block.iat[row, col]
        what = 'missing value' if cell == '' else f'non-numeric value {cell!r}'
        raise InputFormatError(what, path=path, line=row + 2, column=columns[col])
    return numbers


def _condition_codes(
    raw: pd.Series, path: Path, labels: Optional[Tuple[str, str]]
) -> Tuple[np.ndarray, Tuple[str, str]]:
    """Map condition labels to 0/1; {0,1} stay as they are, other pairs by first occurrence

    Classifier ties go to the sorted-first label (``Dataset.tie_class``)
    whichever code it received.
    """
    values = raw.str.strip()
    for row, value in enumerate(values):
        if value == '':
            raise InputFormatError(
                'missing condition label', path=path, line=row + 2, column=CONDITION_COLUMN
            )

    if labels is None:
        distinct = list(dict.fromkeys(values))
        if set(distinct) <= {'0', '1'}:
            labels = ('0', '1')
        elif len(distinct) == 2:
            labels = (distinct[0], distinct[1])
        elif len(distinct) < 2:
            raise ArgumentError(
                f'{path}: condition column has a single class {distinct}; '
                'both classes are required'
            )
        else:
            raise InputFormatError(
                f'condition column has {len(distinct)} distinct labels, expected 2',
                path=path,
                column=CONDITION_COLUMN,
            )

    codes = np.empty(len(values), dtype=np.int64)
    for row, value in enumerate(values):
        if value not in labels:
            raise InputFormatError(
                f'unexpected condition label {value!r} (labels are {list(labels)})',
                path=path,
                line=row + 2,
                column=CONDITION_COLUMN,
            )
        codes[row] = labels.index(value)
    return codes, labels


def read_subject_csv(
    path: Path,
    subject: Optional[str] = None,
    labels: Optional[Tuple[str, str]] = None,
) -> SubjectFile:
    """Read ``condition,feat1,...,featd``; the subject id defaults to the file stem"""
    path = Path(path)
    frame = _read_text_frame(path)
    columns = [str(c).strip() for c in frame.columns]
    frame.columns = columns
    if columns[0] != CONDITION_COLUMN:
        raise InputFormatError(
            f'first column must be named {CONDITION_COLUMN!r}, found {columns[0]!r}',
            path=path,
            line=1,
        )
    feature_names = columns[1:]
    if not feature_names:
        raise InputFormatError('no feature columns', path=path, line=1)
    if len(set(feature_names)) != len(feature_names):
        raise InputFormatError('duplicate feature column names', path=path, line=1)

    codes, labels = _condition_codes(frame[CONDITION_COLUMN], path, labels)
    features = _numeric_block(frame, feature_names, path)
    try:
        dataset = Dataset(
            subject=subject or path.stem,
            condition=codes,
            features=features,
            feature_names=feature_names,
            labels=labels,
        )
    except ValidationError as e:
        raise ArgumentError(f'{path}: {e.errors()[0]["msg"]}') from e
    logger.info(f'Read {path}: {dataset.n} trials, {dataset.d} features')
    return SubjectFile(path=path, dataset=dataset, labels=labels)


def read_cohort(paths: Iterable[Path]) -> List[SubjectFile]:
    """Read subject files that must share one schema and one label pair"""
    files: List[SubjectFile] = []
    for path in paths:
        first = files[0] if files else None
        current = read_subject_csv(
            Path(path), labels=first.labels if first is not None else None
        )
        if first is not None and current.feature_names != first.feature_names:
            raise SchemaMismatchError(
                first.path,
                current.path,
                f'features {current.feature_names} vs {first.feature_names}',
            )
        if any(f.dataset.subject == current.dataset.subject for f in files):
            raise ArgumentError(
                f'Duplicate subject id {current.dataset.subject!r} ({current.path})'
            )
        files.append(current)
    if not files:
        raise ArgumentError('At least one subject file is required')
    return files


def write_dataset(data: Dataset, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data.to_frame().to_csv(path, index=False, lineterminator='\n')
    return path


def write_cohort(cohort: Sequence[Dataset], out_dir: Path) -> List[Path]:
    """One ``<subject>.csv`` per dataset"""
    out_dir = Path(out_dir)
    paths = [write_dataset(data, out_dir / f'{data.subject}.csv') for data in cohort]
    logger.info(f'Wrote {len(paths)} subject files to {out_dir}')
    return paths


def read_pvalue_matrix(path: Path, side: AnalysisSide) -> RelevanceMatrix:
    """Subjects x features p-values; a trailing ``KSp`` row is ignored"""
    path = Path(path)
    frame = _read_text_frame(path)
    columns = [str(c).strip() for c in frame.columns]
    frame.columns = columns
    if len(columns) < 2:
        raise InputFormatError('need a subject column and feature columns', path=path, line=1)

    subjects = frame[columns[0]].str.strip()
    keep = subjects != GROUP_ROW
    frame, subjects = frame[keep], subjects[keep]
    if frame.empty:
        raise InputFormatError('No subject rows', path=path, line=2)

    features = columns[1:]
    values = _numeric_block(frame.reset_index(drop=True), features, path)
    outside = (values < 0.0) | (values > 1.0)
    if outside.any():
        rows, cols = np.nonzero(outside)
        row, col = int(rows[0]), int(cols[0])
        raise InputFormatError(
            f'p-value {values[row, col]} outside [0, 1]',
            path=path,
            line=int(np.flatnonzero(keep.to_numpy())[row]) + 2,
            column=features[col],
        )
    try:
        return RelevanceMatrix(
            side=AnalysisSide(side),
            subjects=list(subjects),
            features=features,
            values=values.tolist(),
        )
    except ValidationError as e:
        raise ArgumentError(f'{path}: {e.errors()[0]["msg"]}') from e


def write_pvalue_matrix(matrix: RelevanceMatrix, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix.to_frame().to_csv(path, lineterminator='\n')
    return path


def read_values(source: str) -> List[float]:
    """Real values from a CSV file (one optional header row) or a comma-separated literal"""
    path = Path(source)
    if not path.is_file():
        try:
            return [float(t) for t in source.replace(';', ',').split(',') if t.strip()]
        except ValueError as e:
            raise ArgumentError(
                f'Expected a file or comma-separated numbers, got {source!r}'
            ) from e

    frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    rows = [[cell.strip() for cell in row if cell.strip()] for row in frame.to_numpy()]
    values: List[float] = []
    for line, row in enumerate(rows, start=1):
        numbers = pd.to_numeric(pd.Series(row, dtype=str), errors='coerce')
        if numbers.isna().any():
            if line == 1 and numbers.isna().all():
                continue
            raise InputFormatError(
                f'non-numeric value {row[int(numbers.isna().to_numpy().argmax())]!r}',
                path=path,
                line=line,
            )
        values.extend(float(v) for v in numbers)
    return values
