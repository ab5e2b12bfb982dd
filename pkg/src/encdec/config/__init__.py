from .settings import (
    AppSettings,
    RunConfig,
    get_settings,
    load_run_config,
    parse_run_config,
)

__all__ = [
    'AppSettings',
    'RunConfig',
    'get_settings',
    'load_run_config',
    'parse_run_config',
]
