# ruff: noqa: F401
from .commands import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, CliCommand, run_command
from .config import RunConfig, config_from_mapping, config_hash, dump_config, parse_config
from .main import main, parse_command
from .outputs import verify_artifacts, write_json_artifact, write_outputs

__all__ = [
    "CliCommand",
    "EXIT_IO",
    "EXIT_NUMERIC",
    "EXIT_OK",
    "EXIT_USAGE",
    "RunConfig",
    "config_from_mapping",
    "config_hash",
    "dump_config",
    "main",
    "parse_command",
    "parse_config",
    "run_command",
    "verify_artifacts",
    "write_json_artifact",
    "write_outputs",
]
