import dataclasses
import json
import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from sysid.bounds.constants import BoundConstants
from sysid.cli.defaults import (
    BLOCK_KEYS,
    COMPOSITE_KEYS,
    DEFAULT_DELTA,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_T,
    EXPERIMENT_MAP,
    RANDOM_KEYS,
    SECTION_KEYS,
)
from sysid.errors import ConfigError, SysIdError
from sysid.experiments.trials import ExperimentConfig, resolve_threads
from sysid.linalg.jordan import JordanSpec
from sysid.models.system import NoiseModel, SystemSpec, TaggedBlock
from sysid.simulation.composite import build_composite, random_similarity, random_stable_system
from sysid.utils.file import read_matrix_csv, read_text
from sysid.utils.misc import JSONObject, content_hash
from sysid.utils.types import FilePath, FloatArray, as_matrix

__all__ = [
    "CompositeBlueprint",
    "RunConfig",
    "RunSection",
    "SystemSection",
    "config_from_mapping",
    "config_hash",
    "dump_config",
    "parse_config",
]

logger = logging.getLogger(__name__)

Matrix = tuple[tuple[float, ...], ...]
Eigenvalue = float | tuple[float, float]
JordanPairs = tuple[tuple[Eigenvalue, int], ...]


@dataclass(frozen=True)
class BlockSection:
    jordan: JordanPairs
    tag: str


@dataclass(frozen=True)
class CompositeBlueprint:
    """Tagged Jordan blocks joined by an optional random similarity"""

    blocks: tuple[BlockSection, ...]
    similarity_seed: Optional[int] = None
    conditioning: float = 1.0


@dataclass(frozen=True)
class RandomSection:
    """A random regular stable system"""

    d: int
    rho_max: float
    seed: int = 0
    conditioning: float = 2.0


@dataclass(frozen=True)
class SystemSection:
    """
    The `[system]` table: exactly one of `A` (inline or CSV path), `jordan`, `composite` or `random`

    Attributes:
        A (Matrix | str, optional): Dynamics, inline rows or a CSV path relative to the config file
        B (Matrix | str, optional): Input matrix
        x0 (tuple[float, ...], optional): Initial state
        jordan (JordanPairs, optional): (eigenvalue, size) pairs, complex eigenvalues as [re, im]
        similarity_seed (int, optional): Seed of the random similarity applied to `jordan`
        conditioning (float): Condition number of that similarity
        composite (CompositeBlueprint, optional): Tagged blocks
        random (RandomSection, optional): Random stable system
    """

    A: Optional[Matrix | str] = None
    B: Optional[Matrix | str] = None
    x0: Optional[tuple[float, ...]] = None
    jordan: Optional[JordanPairs] = None
    similarity_seed: Optional[int] = None
    conditioning: float = 1.0
    composite: Optional[CompositeBlueprint] = None
    random: Optional[RandomSection] = None

    def build(self, base_dir: Path) -> SystemSpec:
        B = None if self.B is None else _load_matrix(self.B, base_dir)
        if self.A is not None:
            return SystemSpec.from_matrix(_load_matrix(self.A, base_dir), B=B, x0=self.x0)
        if self.jordan is not None:
            spec = _jordan(self.jordan)
            similarity = None
            if self.similarity_seed is not None:
                similarity = random_similarity(spec.dim, self.similarity_seed, self.conditioning)
            system = SystemSpec.from_jordan(spec, similarity, B=B)
        elif self.composite is not None:
            blocks = [TaggedBlock(_jordan(block.jordan), block.tag) for block in self.composite.blocks]
            system = build_composite(blocks, self.composite.similarity_seed, self.composite.conditioning)
            system = system.with_inputs(B)
        else:
            assert self.random is not None
            section = self.random
            system = random_stable_system(section.d, section.rho_max, section.seed, section.conditioning)
            system = system.with_inputs(B)
        return system if self.x0 is None else dataclasses.replace(system, x0=np.asarray(self.x0))


@dataclass(frozen=True)
class RunSection:
    T: int = DEFAULT_T
    T_grid: Optional[tuple[int, ...]] = None
    trials: Optional[int] = None
    seed: int = 0
    delta: float = DEFAULT_DELTA
    output_dir: str = DEFAULT_OUTPUT_DIR
    threads: Optional[int] = None


@dataclass(frozen=True)
class ExperimentSection:
    kind: Optional[str] = None
    options: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class RunConfig:
    """
    A parsed configuration file

    Attributes:
        system (SystemSection, optional): The system, experiments with a built in system do not need one
        noise (NoiseModel): Noise distribution
        run (RunSection): Horizons, trials, seed, δ and output location
        constants (BoundConstants): Bound constants and numerical knobs
        experiment (ExperimentSection): Experiment kind and its options
        base_dir (Path): Directory relative paths are resolved against, not part of the configuration itself
    """

    system: Optional[SystemSection] = None
    noise: NoiseModel = field(default_factory=NoiseModel)
    run: RunSection = field(default_factory=RunSection)
    constants: BoundConstants = field(default_factory=BoundConstants)
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    base_dir: Path = field(default=Path("."), compare=False)

    def build_system(self) -> SystemSpec:
        if self.system is None:
            raise ConfigError(["system: this command needs a [system] table"])
        return self.system.build(self.base_dir)

    def with_overrides(
        self,
        seed: Optional[int] = None,
        delta: Optional[float] = None,
        trials: Optional[int] = None,
        output_dir: Optional[str] = None,
    ) -> "RunConfig":
        """Copy with command line overrides applied, validated like the file values"""
        problems: list[str] = []
        if trials is not None and trials < 1:
            problems.append(f"--trials must be at least 1, got {trials}")
        if delta is not None and not 0 < delta < 1:
            problems.append(f"--delta must lie in (0, 1), got {delta}")
        if problems:
            raise ConfigError(problems)
        run = dataclasses.replace(
            self.run,
            seed=self.run.seed if seed is None else seed,
            delta=self.run.delta if delta is None else delta,
            trials=self.run.trials if trials is None else trials,
            output_dir=self.run.output_dir if output_dir is None else output_dir,
        )
        return dataclasses.replace(self, run=run)

    def output_path(self) -> Path:
        path = Path(self.run.output_dir)
        return path if path.is_absolute() else self.base_dir / path

    def experiment_config(self, kind: str, progress: bool = False) -> ExperimentConfig:
        """
        The ExperimentConfig of `kind`, missing grid, trials and options taken from the experiment defaults
        """
        if kind not in EXPERIMENT_MAP:
            raise ConfigError([f"experiment.kind: unknown experiment `{kind}`, choose from {sorted(EXPERIMENT_MAP)}"])
        defaults = EXPERIMENT_MAP[kind]
        system = None
        if defaults["needs_system"] or self.system is not None:
            system = self.build_system()
        try:
            return ExperimentConfig(
                system=system,
                noise=self.noise,
                T_grid=self.run.T_grid or tuple(defaults["T_grid"]),
                trials=self.run.trials or defaults["trials"],
                seed=self.run.seed,
                delta=self.run.delta,
                output_dir=self.output_path(),
                threads=resolve_threads(self.run.threads),
                progress=progress,
                constants=self.constants,
                options={**defaults["options"], **self.experiment.options},
            )
        except SysIdError as error:
            raise ConfigError([f"run: {error}"]) from error


def parse_config(path: FilePath) -> RunConfig:
    """
    Read a TOML (or, by extension, JSON) configuration

    Raises:
        ConfigError: The file does not parse, or lists every semantic problem found
        ArtifactIOError: The file cannot be read
    """
    path = Path(path)
    text = read_text(path)
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except json.JSONDecodeError as error:
        raise ConfigError([f"{path}: line {error.lineno}, column {error.colno}: {error.msg}"]) from error
    except tomllib.TOMLDecodeError as error:
        raise ConfigError([f"{path}: {error}"]) from error
    if not isinstance(data, dict):
        raise ConfigError([f"{path}: the top level must be a table"])
    config = config_from_mapping(data, path.parent)
    logger.debug("parsed %s", path)
    return config


class _Collector:
    """Gathers problems while the sections are converted"""

    def __init__(self) -> None:
        self.problems: list[str] = []

    def add(self, field_name: str, message: str) -> None:
        self.problems.append(f"{field_name}: {message}")

    def table(self, data: Any, name: str, allowed: set[str]) -> dict[str, Any]:
        if data is None:
            return {}
        if not isinstance(data, dict):
            self.add(name, "expected a table")
            return {}
        for key in sorted(set(data) - allowed):
            self.add(f"{name}.{key}", "unknown key")
        return {key: value for key, value in data.items() if key in allowed}

    def integer(self, value: Any, name: str, minimum: Optional[int] = None) -> Optional[int]:
        if isinstance(value, bool) or not isinstance(value, int):
            self.add(name, f"expected an integer, got {value!r}")
            return None
        if minimum is not None and value < minimum:
            self.add(name, f"must be at least {minimum}, got {value}")
            return None
        return value

    def number(self, value: Any, name: str) -> Optional[float]:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add(name, f"expected a number, got {value!r}")
            return None
        return float(value)

    def matrix(self, value: Any, name: str) -> Optional[Matrix | str]:
        if isinstance(value, str):
            return value
        try:
            matrix = as_matrix(value, name=name)
        except (SysIdError, TypeError, ValueError) as error:
            self.add(name, f"expected rows of numbers or a CSV path ({error})")
            return None
        return tuple(tuple(float(item) for item in row) for row in matrix)

    def jordan(self, value: Any, name: str) -> Optional[JordanPairs]:
        if not isinstance(value, list) or not value:
            self.add(name, "expected a non-empty list of [eigenvalue, size] pairs")
            return None
        pairs: list[tuple[Eigenvalue, int]] = []
        for index, pair in enumerate(value):
            where = f"{name}[{index}]"
            if not isinstance(pair, list) or len(pair) != 2:
                self.add(where, "expected [eigenvalue, size]")
                continue
            eigenvalue, size = pair
            parsed_size = self.integer(size, f"{where}.size", minimum=1)
            parsed_value: Optional[Eigenvalue]
            if isinstance(eigenvalue, list) and len(eigenvalue) == 2:
                real, imag = self.number(eigenvalue[0], where), self.number(eigenvalue[1], where)
                parsed_value = None if real is None or imag is None else (real, imag)
            else:
                parsed_value = self.number(eigenvalue, where)
            if parsed_value is not None and parsed_size is not None:
                pairs.append((parsed_value, parsed_size))
        return tuple(pairs)


def _jordan(pairs: JordanPairs) -> JordanSpec:
    return JordanSpec.from_pairs(
        (complex(*value) if isinstance(value, tuple) else complex(value), size) for value, size in pairs
    )


def _load_matrix(source: Matrix | str, base_dir: Path) -> FloatArray:
    if isinstance(source, str):
        path = Path(source)
        return read_matrix_csv(path if path.is_absolute() else base_dir / path)
    return as_matrix(np.array(source, dtype=np.float64))


def _system(data: dict[str, Any], collector: _Collector) -> Optional[SystemSection]:
    if not data:
        return None
    values: dict[str, Any] = {}
    for key in ("A", "B"):
        if key in data:
            values[key] = collector.matrix(data[key], f"system.{key}")
    if "x0" in data:
        x0 = data["x0"]
        if not isinstance(x0, list):
            collector.add("system.x0", "expected a list of numbers")
            values["x0"] = None
        else:
            parsed = [collector.number(item, "system.x0") for item in x0]
            values["x0"] = None if None in parsed else tuple(parsed)
    if "jordan" in data:
        values["jordan"] = collector.jordan(data["jordan"], "system.jordan")
    if "similarity_seed" in data:
        values["similarity_seed"] = collector.integer(data["similarity_seed"], "system.similarity_seed")
    if "conditioning" in data:
        values["conditioning"] = collector.number(data["conditioning"], "system.conditioning")
    if "composite" in data:
        values["composite"] = _composite(data["composite"], collector)
    if "random" in data:
        values["random"] = _random(data["random"], collector)

    sources = [key for key in ("A", "jordan", "composite", "random") if key in data]
    if len(sources) != 1:
        collector.add("system", f"give exactly one of A, jordan, composite or random, got {sources or 'none'}")
    if ("similarity_seed" in data or "conditioning" in data) and "jordan" not in data:
        collector.add("system.similarity_seed", "only applies together with system.jordan")
    if any(value is None for value in values.values()):
        return None
    try:
        return SystemSection(**values)
    except TypeError as error:
        collector.add("system", str(error))
        return None


def _composite(value: Any, collector: _Collector) -> Optional[CompositeBlueprint]:
    data = collector.table(value, "system.composite", COMPOSITE_KEYS)
    blocks_data = data.get("blocks")
    if not isinstance(blocks_data, list) or not blocks_data:
        collector.add("system.composite.blocks", "expected a non-empty list of blocks")
        return None
    blocks = []
    for index, block_data in enumerate(blocks_data):
        name = f"system.composite.blocks[{index}]"
        block = collector.table(block_data, name, BLOCK_KEYS)
        pairs = collector.jordan(block.get("jordan"), f"{name}.jordan")
        tag = block.get("tag")
        if tag not in ("S0", "S1", "S2"):
            collector.add(f"{name}.tag", f"expected S0, S1 or S2, got {tag!r}")
        elif pairs is not None:
            blocks.append(BlockSection(jordan=pairs, tag=tag))
    seed = data.get("similarity_seed")
    if seed is not None:
        seed = collector.integer(seed, "system.composite.similarity_seed")
    conditioning = collector.number(data.get("conditioning", 1.0), "system.composite.conditioning")
    if len(blocks) != len(blocks_data) or conditioning is None:
        return None
    return CompositeBlueprint(blocks=tuple(blocks), similarity_seed=seed, conditioning=conditioning)


def _random(value: Any, collector: _Collector) -> Optional[RandomSection]:
    data = collector.table(value, "system.random", RANDOM_KEYS)
    d = collector.integer(data.get("d"), "system.random.d", minimum=1)
    rho_max = collector.number(data.get("rho_max"), "system.random.rho_max")
    seed = collector.integer(data.get("seed", 0), "system.random.seed")
    conditioning = collector.number(data.get("conditioning", 2.0), "system.random.conditioning")
    if d is None or rho_max is None or seed is None or conditioning is None:
        return None
    return RandomSection(d=d, rho_max=rho_max, seed=seed, conditioning=conditioning)


def _run(data: dict[str, Any], collector: _Collector) -> RunSection:
    values: dict[str, Any] = {}
    if "T" in data:
        values["T"] = collector.integer(data["T"], "run.T", minimum=1)
    if "T_grid" in data:
        grid = data["T_grid"]
        if not isinstance(grid, list) or not grid or any(isinstance(T, bool) or not isinstance(T, int) for T in grid):
            collector.add("run.T_grid", "expected a non-empty list of integers")
            values["T_grid"] = None
        elif any(T < 1 for T in grid):
            collector.add("run.T_grid", "horizons must be positive")
        elif any(later <= earlier for earlier, later in zip(grid, grid[1:])):
            collector.add("run.T_grid", f"must be strictly ascending, got {grid}")
        else:
            values["T_grid"] = tuple(grid)
    for key, minimum in (("trials", 1), ("threads", 1)):
        if key in data:
            values[key] = collector.integer(data[key], f"run.{key}", minimum=minimum)
    if "seed" in data:
        values["seed"] = collector.integer(data["seed"], "run.seed")
    if "delta" in data:
        delta = collector.number(data["delta"], "run.delta")
        if delta is not None and not 0 < delta < 1:
            collector.add("run.delta", f"must lie in (0, 1), got {delta}")
        values["delta"] = delta
    if "output_dir" in data:
        if isinstance(data["output_dir"], str):
            values["output_dir"] = data["output_dir"]
        else:
            collector.add("run.output_dir", "expected a path string")
    return RunSection(**{key: value for key, value in values.items() if value is not None})


def _validated(factory: Any, data: dict[str, Any], section: str, collector: _Collector) -> Any:
    try:
        return factory(**data)
    except (SysIdError, TypeError, ValueError) as error:
        collector.add(section, str(error))
        return factory()


def _experiment(data: dict[str, Any], collector: _Collector) -> ExperimentSection:
    kind = data.get("kind")
    if kind is not None and kind not in EXPERIMENT_MAP:
        collector.add("experiment.kind", f"unknown experiment `{kind}`, choose from {sorted(EXPERIMENT_MAP)}")
        kind = None
    options = data.get("options", {})
    if not isinstance(options, dict):
        collector.add("experiment.options", "expected a table")
        options = {}
    return ExperimentSection(kind=kind, options=dict(options))


def config_from_mapping(data: dict[str, Any], base_dir: FilePath = ".") -> RunConfig:
    """
    Validate a parsed configuration, reporting every problem at once

    Examples:
        >>> config = config_from_mapping({"system": {"A": [[0.5]]}, "run": {"T": 200}})
        >>> config.run.delta, config.constants.R, config.build_system().initial_state
        (0.05, 1.0, array([0.]))
    """
    collector = _Collector()
    for key in sorted(set(data) - set(SECTION_KEYS)):
        collector.add(key, "unknown section")
    sections = {name: collector.table(data.get(name), name, keys) for name, keys in SECTION_KEYS.items()}

    system = _system(sections["system"], collector)
    run = _run(sections["run"], collector)
    noise = _validated(NoiseModel, sections["noise"], "noise", collector)
    constants = _validated(BoundConstants, sections["constants"], "constants", collector)
    experiment = _experiment(sections["experiment"], collector)
    if collector.problems:
        raise ConfigError(collector.problems)
    return RunConfig(
        system=system, noise=noise, run=run, constants=constants, experiment=experiment, base_dir=Path(base_dir)
    )


def _drop_none(values: dict[str, Any]) -> dict[str, Any]:
    return {key: value for key, value in values.items() if value is not None}


def _dump_pairs(pairs: JordanPairs) -> list[list[Any]]:
    return [[list(value) if isinstance(value, tuple) else value, size] for value, size in pairs]


def _dump_matrix(value: Optional[Matrix | str]) -> Any:
    return value if value is None or isinstance(value, str) else [list(row) for row in value]


def dump_config(config: RunConfig) -> JSONObject:
    """
    Plain dict form of a configuration, `config_from_mapping` turns it back into an equal RunConfig
    """
    result: dict[str, Any] = {}
    if config.system is not None:
        system = config.system
        section: dict[str, Any] = {
            "A": _dump_matrix(system.A),
            "B": _dump_matrix(system.B),
            "x0": None if system.x0 is None else list(system.x0),
            "jordan": None if system.jordan is None else _dump_pairs(system.jordan),
        }
        if system.jordan is not None:
            section.update(similarity_seed=system.similarity_seed, conditioning=system.conditioning)
        if system.composite is not None:
            section["composite"] = _drop_none(
                {
                    "blocks": [
                        {"jordan": _dump_pairs(block.jordan), "tag": block.tag} for block in system.composite.blocks
                    ],
                    "similarity_seed": system.composite.similarity_seed,
                    "conditioning": system.composite.conditioning,
                }
            )
        if system.random is not None:
            section["random"] = dataclasses.asdict(system.random)
        result["system"] = _drop_none(section)
    noise = dataclasses.asdict(config.noise)
    noise["family"] = config.noise.family.value
    result["noise"] = noise
    run = _drop_none(dataclasses.asdict(config.run))
    if "T_grid" in run:
        run["T_grid"] = list(run["T_grid"])
    result["run"] = run
    result["constants"] = _drop_none(dataclasses.asdict(config.constants))
    result["experiment"] = _drop_none({"kind": config.experiment.kind, "options": dict(config.experiment.options)})
    return result


def config_hash(config: RunConfig) -> str:
    """sha256 of the canonical JSON form of `dump_config`"""
    return content_hash(dump_config(config))
