import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Sequence, TypeVar

import numpy as np
from tqdm import tqdm

from sysid.bounds.constants import BoundConstants
from sysid.errors import PreconditionError
from sysid.models.experiment import CellSummary
from sysid.models.system import NoiseModel, SystemSpec
from sysid.utils.types import FloatArray

__all__ = ["ExperimentConfig", "resolve_threads", "run_cells", "summarize_cell", "THREADS_ENV"]

logger = logging.getLogger(__name__)

THREADS_ENV = "SYSID_THREADS"

Result = TypeVar("Result")


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Inputs of a Monte Carlo experiment

    Attributes:
        system (SystemSpec, optional): The system, experiments with a fixed system ignore it
        noise (NoiseModel): Noise distribution
        T_grid (tuple[int, ...]): Strictly ascending horizons
        trials (int): Trials per horizon
        seed (int): Experiment seed, every cell stream derives from it
        delta (float): Confidence level of the checked inequalities
        output_dir (Path, optional): Where artifacts go
        threads (int): Worker threads, 1 runs inline
        progress (bool): Show progress bars
        constants (BoundConstants): Bound constants and numerical knobs
        options (Mapping[str, Any]): Experiment specific settings
    """

    system: Optional[SystemSpec] = None
    noise: NoiseModel = field(default_factory=NoiseModel)
    T_grid: tuple[int, ...] = (250, 500, 1000, 2000, 4000)
    trials: int = 200
    seed: int = 0
    delta: float = 0.05
    output_dir: Optional[Path] = None
    threads: int = 1
    progress: bool = False
    constants: BoundConstants = field(default_factory=BoundConstants)
    options: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "T_grid", tuple(int(T) for T in self.T_grid))
        problems = []
        if not self.T_grid or any(T < 1 for T in self.T_grid):
            problems.append("T_grid must hold positive horizons")
        if any(later <= earlier for earlier, later in zip(self.T_grid, self.T_grid[1:])):
            problems.append(f"T_grid must be strictly ascending, got {list(self.T_grid)}")
        if self.trials < 1:
            problems.append(f"trials must be at least 1, got {self.trials}")
        if not 0 < self.delta < 1:
            problems.append(f"delta must lie in (0, 1), got {self.delta}")
        if self.threads < 1:
            problems.append(f"threads must be at least 1, got {self.threads}")
        if problems:
            raise PreconditionError("; ".join(problems))

    def option(self, name: str, default: Any) -> Any:
        return self.options.get(name, default)

    def require_system(self) -> SystemSpec:
        if self.system is None:
            raise PreconditionError("This experiment needs a system")
        return self.system


def resolve_threads(requested: Optional[int] = None) -> int:
    """
    Worker thread count: the CPU count, capped by $SYSID_THREADS and by `requested`
    """
    available = os.cpu_count() or 1
    env_value = os.environ.get(THREADS_ENV)
    if env_value:
        try:
            available = min(available, max(1, int(env_value)))
        except ValueError:
            logger.warning("ignoring %s=%r, not an integer", THREADS_ENV, env_value)
    if requested is not None:
        available = min(available, max(1, requested))
    return available


def run_cells(
    cells: Sequence[tuple[int, int]],
    task: Callable[[int, int], Result],
    threads: int = 1,
    progress: bool = False,
    description: str = "trials",
) -> list[Result]:
    """
    Evaluate `task(T, trial)` for every cell, results in the order of `cells`

    Each task owns its random stream, so the results do not depend on the thread count.
    """

    def evaluate(cell: tuple[int, int]) -> Result:
        return task(*cell)

    with tqdm(total=len(cells), desc=description, unit="trial", disable=not progress) as bar:
        if threads <= 1:
            results = []
            for cell in cells:
                results.append(evaluate(cell))
                bar.update()
            return results
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ordered = []
            for result in pool.map(evaluate, cells):
                ordered.append(result)
                bar.update()
            return ordered


def grid_cells(T_grid: Sequence[int], trials: int) -> list[tuple[int, int]]:
    return [(T, trial) for T in T_grid for trial in range(trials)]


def binomial_stderr(frequency: float, n: int) -> float:
    return float(np.sqrt(frequency * (1.0 - frequency) / n)) if n else float("nan")


def summarize_cell(T: int, errors: FloatArray, violations: Optional[Mapping[str, FloatArray]] = None) -> CellSummary:
    """
    Quantiles of the errors at one horizon and the violation frequency of each named inequality

    Args:
        T (int): Horizon
        errors (FloatArray): One error per trial
        violations (Mapping[str, FloatArray], optional): Boolean violation flag per trial for each inequality
    """
    errors = np.asarray(errors, dtype=np.float64)
    q10, median, q90 = np.quantile(errors, [0.1, 0.5, 0.9])
    frequencies = {name: float(np.mean(flags)) for name, flags in (violations or {}).items()}
    stderr = {name: binomial_stderr(value, len(errors)) for name, value in frequencies.items()}
    return CellSummary(
        T=T,
        median_error=float(median),
        q10=float(q10),
        q90=float(q90),
        mean=float(errors.mean()),
        violation_freq=frequencies,
        violation_stderr=stderr,
    )
