from pathlib import Path

import pytest

from encdec.config import RunConfig, get_settings, load_run_config, parse_run_config
from encdec.exceptions import ArgumentError, InputFormatError
from encdec.models import Paradigm, PermutationScheme, Smoothing
from encdec.services import AnalysisService


class TestRunConfig:
    """Test cases for run configuration files"""

    def test_defaults(self):
        config = RunConfig()
        assert config.alpha == 0.05
        assert config.beta == 0.10
        assert config.n_mc_ks == 100_000
        assert config.cv_folds is None
        assert config.forest.resolve_mtry(9) == 3
        assert config.forest.permutation is PermutationScheme.CONDITIONAL

    def test_example_file(self, fixtures_dir):
        config = load_run_config(fixtures_dir / 'analysis.conf')
        assert config.paradigm is Paradigm.STIMULUS
        assert config.mtry is None
        assert config.cv_folds == 10
        assert config.smoothing is Smoothing.ADD_ONE
        assert config.decoding_gate is True
        assert config.permutation_scheme is PermutationScheme.CONDITIONAL

    def test_keys_are_case_insensitive(self):
        config = parse_run_config({'ALPHA': '0.01', 'Paradigm': 'response'})
        assert config.alpha == 0.01
        assert config.paradigm is Paradigm.RESPONSE

    def test_global_permutation_scheme(self):
        config = parse_run_config({'permutation_scheme': 'global'})
        assert config.forest.permutation is PermutationScheme.GLOBAL
        with pytest.raises(ArgumentError):
            parse_run_config({'permutation_scheme': 'blockwise'})

    def test_unknown_key_is_an_error(self, tmp_path):
        path = tmp_path / 'bad.conf'
        path.write_text('alpha = 0.05\nn_perms = 10\n', encoding='utf-8')
        with pytest.raises(ArgumentError, match='n_perms'):
            load_run_config(path)

    def test_thresholds_ordered(self):
        with pytest.raises(ArgumentError, match='smaller than beta'):
            parse_run_config({'alpha': '0.2', 'beta': '0.1'})

    def test_key_without_value(self, tmp_path):
        path = tmp_path / 'bad.conf'
        path.write_text('alpha\n', encoding='utf-8')
        with pytest.raises(InputFormatError, match='no value'):
            load_run_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ArgumentError, match='not found'):
            load_run_config(tmp_path / 'absent.conf')

    def test_echo_is_json_ready(self):
        echo = RunConfig(output_dir=Path('out')).echo()
        assert echo['output_dir'] == 'out'
        assert echo['paradigm'] == 'stimulus'


class TestOverrides:
    """Command-line values over the config file over environment defaults"""

    def test_precedence(self, tmp_path):
        path = tmp_path / 'run.conf'
        path.write_text('seed = 5\nn_jobs = 2\n', encoding='utf-8')
        service = AnalysisService(defaults={'n_jobs': 4, 'output_dir': 'env-reports'})
        config = service.load_config(path, seed=9, output_dir=None)
        assert config.seed == 9
        assert config.n_jobs == 2
        assert config.output_dir == Path('env-reports')

    def test_invalid_override(self):
        with pytest.raises(ArgumentError, match='override'):
            AnalysisService().load_config(None, seed=-1)


class TestAppSettings:
    """Test cases for environment settings"""

    def test_env_file(self, tmp_path, monkeypatch):
        for name in ('ENCDEC_LOG_LEVEL', 'ENCDEC_N_JOBS', 'ENCDEC_OUTPUT_DIR'):
            # registered first so teardown removes what load_dotenv sets
            monkeypatch.setenv(name, '')
            monkeypatch.delenv(name)
        env = tmp_path / '.env'
        env.write_text('ENCDEC_N_JOBS=3\nENCDEC_LOG_LEVEL=debug\n', encoding='utf-8')
        settings = get_settings(env)
        assert settings.n_jobs == 3
        assert settings.log_level == 'DEBUG'
        assert settings.output_dir == Path('reports')

    def test_environment_wins_over_env_file(self, tmp_path, monkeypatch):
        monkeypatch.setenv('ENCDEC_N_JOBS', '2')
        env = tmp_path / '.env'
        env.write_text('ENCDEC_N_JOBS=6\n', encoding='utf-8')
        assert get_settings(env).n_jobs == 2
