import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from sysid.errors import ArtifactIOError, DimensionError, PreconditionError
from sysid.utils.file import atomic_write, format_csv, read_matrix_csv, read_text
from sysid.utils.misc import canonical_json
from sysid.utils.types import FilePath, FloatArray, as_matrix

__all__ = ["Trajectory"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    A simulated state sequence with the noise that produced it

    Attributes:
        states (FloatArray): (T + 1) x d, rows X_0 .. X_T, or z_t = A^{-t} X_t when `scaled`
        noises (FloatArray, optional): T x d, rows η_1 .. η_T
        inputs (FloatArray, optional): T x p, rows U_0 .. U_{T-1}
        seed (int): Seed of the generating stream
        scaled (bool): States are stored in the z_t representation
    """

    states: FloatArray
    noises: Optional[FloatArray] = None
    inputs: Optional[FloatArray] = None
    seed: int = 0
    scaled: bool = False

    def __post_init__(self) -> None:
        states = as_matrix(self.states, name="states")
        if states.shape[0] < 2:
            raise DimensionError("A trajectory needs at least two states")
        object.__setattr__(self, "states", states)
        T, d = states.shape[0] - 1, states.shape[1]
        if self.noises is not None:
            noises = np.asarray(self.noises, dtype=np.float64)
            if noises.size != T * d:
                raise DimensionError(f"Expected {T} x {d} noises, got shape {noises.shape}")
            object.__setattr__(self, "noises", noises.reshape(T, d))
        if self.inputs is not None:
            inputs = as_matrix(self.inputs, name="inputs")
            if inputs.shape[0] != T:
                raise DimensionError(f"Expected {T} input rows, got {inputs.shape[0]}")
            object.__setattr__(self, "inputs", inputs)

    @property
    def T(self) -> int:
        return int(self.states.shape[0] - 1)

    @property
    def dim(self) -> int:
        return int(self.states.shape[1])

    @property
    def input_dim(self) -> int:
        return 0 if self.inputs is None else int(self.inputs.shape[1])

    @property
    def current(self) -> FloatArray:
        """X_0 .. X_{T-1}"""
        return self.states[:-1]

    @property
    def following(self) -> FloatArray:
        """X_1 .. X_T"""
        return self.states[1:]

    def regressors(self) -> FloatArray:
        """Rows [X_t, U_t] for t = 0 .. T-1"""
        if self.inputs is None:
            return self.current
        return np.hstack([self.current, self.inputs])

    def require_noises(self) -> FloatArray:
        if self.noises is None:
            raise PreconditionError("The trajectory carries no noise record")
        return self.noises

    def require_unscaled(self) -> None:
        if self.scaled:
            raise PreconditionError("Expected states X_t, got the scaled representation z_t")

    def to_csv(self, path: FilePath, metadata: Optional[dict[str, Any]] = None) -> tuple[Path, Path, Path]:
        """
        Write `<stem>.csv` (states and inputs), `<stem>.noise.csv` and a `<stem>.json` sidecar

        The state file has the header `t,x1..xd[,u1..up]`. Inputs exist for t < T only, the row for t = T repeats
        zeros in the input columns.

        Returns:
            tuple[Path, Path, Path]: The state file, the noise file and the sidecar
        """
        base = Path(path)
        stem = base.name.removesuffix(".csv")
        state_path = base.with_name(f"{stem}.csv")
        noise_path = base.with_name(f"{stem}.noise.csv")
        sidecar_path = base.with_name(f"{stem}.json")

        steps = np.arange(self.T + 1, dtype=np.float64)[:, None]
        columns = [steps, self.states]
        header = ["t", *(f"x{i + 1}" for i in range(self.dim))]
        if self.inputs is not None:
            columns.append(np.vstack([self.inputs, np.zeros((1, self.input_dim))]))
            header.extend(f"u{i + 1}" for i in range(self.input_dim))
        atomic_write(state_path, format_csv(np.hstack(columns), ",".join(header)))

        noises = self.noises if self.noises is not None else np.zeros((self.T, self.dim))
        noise_header = ",".join(["t", *(f"e{i + 1}" for i in range(self.dim))])
        atomic_write(noise_path, format_csv(np.hstack([steps[1:], noises]), noise_header))

        sidecar = {
            "T": self.T,
            "dim": self.dim,
            "input_dim": self.input_dim,
            "seed": self.seed,
            "scaled": self.scaled,
            "has_noise": self.noises is not None,
            "states": state_path.name,
            "noises": noise_path.name,
            **(metadata or {}),
        }
        atomic_write(sidecar_path, canonical_json(sidecar))
        logger.info("trajectory with T=%d written to %s", self.T, state_path)
        return state_path, noise_path, sidecar_path

    @classmethod
    def from_csv(cls, path: FilePath) -> "Trajectory":
        """Read a trajectory written by `to_csv`, given the state file or the sidecar"""
        base = Path(path)
        stem = base.name.removesuffix(".csv").removesuffix(".json")
        sidecar_path = base.with_name(f"{stem}.json")
        try:
            sidecar = json.loads(read_text(sidecar_path))
        except json.JSONDecodeError as error:
            raise ArtifactIOError(f"`{sidecar_path}` is not valid JSON: {error}") from error

        table = read_matrix_csv(base.with_name(sidecar["states"]), skip_header=True)
        dim, input_dim = int(sidecar["dim"]), int(sidecar["input_dim"])
        if table.shape[1] != 1 + dim + input_dim:
            raise DimensionError(f"Expected {1 + dim + input_dim} columns in the state file, got {table.shape[1]}")
        states = table[:, 1 : 1 + dim]
        inputs = table[:-1, 1 + dim :] if input_dim else None

        noises = None
        if sidecar.get("has_noise", True):
            noises = read_matrix_csv(base.with_name(sidecar["noises"]), skip_header=True)[:, 1:]
        return cls(
            states=states,
            noises=noises,
            inputs=inputs,
            seed=int(sidecar["seed"]),
            scaled=bool(sidecar["scaled"]),
        )
