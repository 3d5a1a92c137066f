import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from sysid.cli.plot import gnuplot_script, svg_plot
from sysid.errors import ArtifactIOError
from sysid.models.experiment import RAW_HEADER, ExperimentResult
from sysid.utils.file import atomic_write, file_digest, format_csv, read_text
from sysid.utils.misc import JSONObject, canonical_json, content_hash, to_jsonable
from sysid.utils.types import FilePath

__all__ = ["SCHEMA_VERSION", "verify_artifacts", "write_json_artifact", "write_outputs"]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SUMMARY_NAME = "summary.json"
RAW_NAME = "raw.csv"
GNUPLOT_NAME = "plot.gp"
SVG_NAME = "plot.svg"


def raw_csv(result: ExperimentResult) -> str:
    """
    One row per trial under the fixed header `T,trial,error,lambda_min_YT,selfnorm`

    Examples:
        >>> raw_csv(ExperimentResult(kind="rate", summary={})).splitlines()[0]
        'T,trial,error,lambda_min_YT,selfnorm'
    """
    header = ",".join(RAW_HEADER)
    if not result.records:
        return header + "\n"
    rows = np.array([record.as_row() for record in result.records], dtype=np.float64)
    return format_csv(rows, header=header)


def _provenance(seed: int, config_digest: str) -> list[str]:
    return [f"seed={seed}", f"config_hash={config_digest}"]


def write_json_artifact(path: FilePath, payload: Any, seed: int, config: JSONObject) -> Path:
    """Canonical JSON with the seed, the config echo and its hash embedded"""
    document = {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "config": config,
        "config_hash": content_hash(config),
        "result": to_jsonable(payload),
    }
    return atomic_write(path, canonical_json(document))


def write_outputs(directory: FilePath, result: ExperimentResult, seed: int, config: JSONObject) -> dict[str, Path]:
    """
    Write `raw.csv`, `plot.gp`, `plot.svg` and finally `summary.json` into `directory`

    `summary.json` is canonical JSON without timestamps or thread counts, it echoes the config, its hash and the seed,
    and lists the sha256 digest of every other artifact. Rerunning with the same inputs rewrites identical bytes.

    Returns:
        dict[str, Path]: Artifact name to path
    """
    directory = Path(directory)
    config_digest = content_hash(config)
    provenance = _provenance(seed, config_digest)
    paths = {
        RAW_NAME: atomic_write(directory / RAW_NAME, raw_csv(result)),
        GNUPLOT_NAME: atomic_write(directory / GNUPLOT_NAME, gnuplot_script(result, header=provenance)),
        SVG_NAME: atomic_write(directory / SVG_NAME, svg_plot(result, header=provenance)),
    }
    summary = {
        "schema_version": SCHEMA_VERSION,
        "kind": result.kind,
        "seed": seed,
        "config": config,
        "config_hash": config_digest,
        "results": to_jsonable(result.summary),
        "artifacts": {name: file_digest(path) for name, path in sorted(paths.items())},
    }
    paths[SUMMARY_NAME] = atomic_write(directory / SUMMARY_NAME, canonical_json(summary))
    logger.info("wrote %s", ", ".join(str(path) for path in paths.values()))
    return paths


def verify_artifacts(directory: FilePath) -> list[str]:
    """
    Re-hash the config echo and every artifact listed in `summary.json`

    Returns:
        list[str]: One message per mismatch, empty when everything matches
    """
    directory = Path(directory)
    try:
        summary = json.loads(read_text(directory / SUMMARY_NAME))
    except json.JSONDecodeError as error:
        raise ArtifactIOError(f"`{directory / SUMMARY_NAME}` is not valid JSON: {error}") from error
    problems = []
    if summary.get("schema_version") != SCHEMA_VERSION:
        problems.append(f"schema_version {summary.get('schema_version')!r} is not {SCHEMA_VERSION}")
    if content_hash(summary.get("config")) != summary.get("config_hash"):
        problems.append("config_hash does not match the config echo")
    for name, digest in sorted(summary.get("artifacts", {}).items()):
        path = directory / name
        if not path.exists():
            problems.append(f"{name} is missing")
        elif file_digest(path) != digest:
            problems.append(f"{name} does not match its recorded digest")
    for problem in problems:
        logger.warning("%s: %s", directory, problem)
    return problems
