import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..exceptions import ArgumentError, InputFormatError
from ..models.analysis import ForestConfig, Paradigm, PermutationScheme, Smoothing

logger = logging.getLogger(__name__)

_NONE_VALUES = {'', 'none', 'null'}


class AppSettings:
    """Process-level settings read from the environment"""

    def __init__(self):
        self.log_level = os.getenv('ENCDEC_LOG_LEVEL', 'INFO').upper()
        self.log_file = os.getenv('ENCDEC_LOG_FILE') or None
        self.n_jobs = int(os.getenv('ENCDEC_N_JOBS', '1'))
        self.output_dir = Path(os.getenv('ENCDEC_OUTPUT_DIR', 'reports'))


def get_settings(env_file: Optional[Path] = None) -> AppSettings:
    """Load ``.env`` (without overriding the environment) and read settings"""
    load_dotenv(env_file or Path.cwd() / '.env', override=False)
    return AppSettings()


class RunConfig(BaseModel):
    """Everything that determines an analysis run; echoed into every report"""

    model_config = ConfigDict(frozen=True, extra='forbid')

    paradigm: Paradigm = Paradigm.STIMULUS
    alpha: float = Field(0.05, gt=0, lt=1)
    beta: float = Field(0.10, gt=0, lt=1)
    n_perm_hsic: int = Field(1000, ge=1)
    n_perm_importance: int = Field(1000, ge=1)
    n_mc_ks: int = Field(100_000, ge=1)
    n_trees: int = Field(100, ge=1)
    mtry: Optional[int] = Field(None, ge=1)
    cv_folds: Optional[int] = Field(None, ge=2)
    permutation_scheme: PermutationScheme = PermutationScheme.CONDITIONAL
    seed: int = Field(0, ge=0)
    smoothing: Smoothing = Smoothing.ADD_ONE
    chance_level: float = Field(50.0, ge=0, le=100)
    decoding_gate: bool = True
    n_jobs: int = Field(1, ge=-1)
    output_dir: Path = Path('reports')
    report_name: str = Field('report', min_length=1)

    @model_validator(mode='after')
    def validate_thresholds(self) -> 'RunConfig':
        if not self.alpha < self.beta:
            raise ValueError(f'alpha ({self.alpha}) must be smaller than beta ({self.beta})')
        if self.n_jobs == 0:
            raise ValueError('n_jobs must be positive or -1')
        return self

    @property
    def forest(self) -> ForestConfig:
        return ForestConfig(
            n_trees=self.n_trees,
            mtry=self.mtry,
            cv_folds=self.cv_folds,
            permutation=self.permutation_scheme,
        )

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode='json')


def parse_run_config(
    values: Mapping[str, Optional[str]],
    defaults: Optional[Mapping[str, Any]] = None,
    source: Optional[Path] = None,
) -> RunConfig:
    merged: Dict[str, Any] = dict(defaults or {})
    for key, value in values.items():
        name = key.strip().lower()
        if value is None:
            raise InputFormatError(f'Key {key!r} has no value', path=source)
        value = value.strip()
        merged[name] = None if value.lower() in _NONE_VALUES else value
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        problems = '; '.join(
            f'{".".join(str(p) for p in err["loc"]) or "config"}: {err["msg"]}'
            for err in e.errors()
        )
        where = f'{source}: ' if source else ''
        raise ArgumentError(f'{where}invalid configuration ({problems})') from e


def load_run_config(
    path: Optional[Path] = None, defaults: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Read a flat ``key = value`` config file; unknown keys are errors"""
    if path is None:
        return parse_run_config({}, defaults)
    path = Path(path)
    if not path.is_file():
        raise ArgumentError(f'Config file not found: {path}')
    values = dotenv_values(path)
    logger.info(f'Loaded {len(values)} settings from {path}')
    return parse_run_config(values, defaults, source=path)
