import pathlib

import numpy as np
import pytest
from dotenv import load_dotenv

from encdec.config.settings import RunConfig
from encdec.models import Dag, Dataset, Paradigm
from encdec.storage.fixtures import read_fixture
from encdec.synth import subject_cohort

ROOT = pathlib.Path(__file__).parent.parent
FIXTURES = ROOT / 'fixtures'
DATA = pathlib.Path(__file__).parent / 'data'

env_file = ROOT / '.env'
if env_file.exists():
    load_dotenv(env_file)


def make_dataset(condition, features, names=None, subject='subject') -> Dataset:
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features.reshape(-1, 1)
    names = names or [f'X{j + 1}' for j in range(features.shape[1])]
    return Dataset(
        subject=subject, condition=condition, features=features, feature_names=names
    )


@pytest.fixture
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture
def data_dir() -> pathlib.Path:
    return DATA


@pytest.fixture
def chain_dag() -> Dag:
    return Dag.from_edges([('S', 'X1'), ('X1', 'X2')])


@pytest.fixture
def fork_dag() -> Dag:
    return Dag.from_edges([('S', 'X1'), ('S', 'X2')])


@pytest.fixture
def collider_dag() -> Dag:
    return Dag.from_edges([('S', 'X1'), ('X2', 'X1')])


@pytest.fixture
def shortcut_dag() -> Dag:
    return Dag.from_edges([('S', 'X1'), ('X1', 'X2'), ('X2', 'X3'), ('S', 'X3')])


@pytest.fixture
def fast_config(tmp_path) -> RunConfig:
    """Small permutation and Monte Carlo counts for quick end-to-end runs"""
    return RunConfig(
        paradigm=Paradigm.STIMULUS,
        n_perm_hsic=99,
        n_perm_importance=49,
        n_mc_ks=2000,
        n_trees=15,
        cv_folds=5,
        seed=11,
        output_dir=tmp_path / 'reports',
    )


@pytest.fixture
def fork_cohort():
    """Eight subjects from the fork fixture; both features strongly tied to S"""
    sem = read_fixture(FIXTURES / 'fork.sem').to_sem()
    return subject_cohort(sem, n_subjects=8, n_per_subject=80, seed=5)


@pytest.fixture
def dataset_factory():
    return make_dataset
