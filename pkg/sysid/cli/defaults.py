from typing import Any, TypedDict


class Experiment(TypedDict):
    name: str
    T_grid: list[int]
    trials: int
    needs_system: bool
    options: dict[str, Any]


EXPERIMENT_MAP: dict[str, Experiment] = {
    "rate": {
        "name": "Rate sweep",
        "T_grid": [250, 500, 1000, 2000, 4000],
        "trials": 200,
        "needs_system": True,
        "options": {},
    },
    "inconsistency": {
        "name": "Inconsistency of OLS for irregular systems",
        "T_grid": [1000],
        "trials": 2000,
        "needs_system": False,
        "options": {"T": 1000, "a": 1.1, "threshold": 0.05},
    },
    "spectrum": {
        "name": "Covariance spectrum growth",
        "T_grid": [50, 100, 150, 200, 250, 300],
        "trials": 100,
        "needs_system": False,
        "options": {"a": 1.1},
    },
    "concentration": {
        "name": "Concentration coverage",
        "T_grid": [4096],
        "trials": 1000,
        "needs_system": True,
        "options": {"deltas": [0.05, 0.1]},
    },
    "structure": {
        "name": "Gramian and covariance structure",
        "T_grid": [60, 90, 120, 150, 180],
        "trials": 50,
        "needs_system": False,
        "options": {},
    },
}

SECTION_KEYS: dict[str, set[str]] = {
    "system": {"A", "B", "x0", "jordan", "similarity_seed", "conditioning", "composite", "random"},
    "noise": {"family", "scale", "alpha", "b", "m", "delta_trunc"},
    "run": {"T", "T_grid", "trials", "seed", "delta", "output_dir", "threads"},
    "constants": {
        "universal_C",
        "universal_c",
        "R",
        "boundary_C",
        "overflow_log_cap",
        "psi_samples",
        "psi_seed",
        "psi_tail",
        "outbox_grid",
        "beta0_tol",
        "beta0_scan_cap",
    },
    "experiment": {"kind", "options"},
}

COMPOSITE_KEYS = {"blocks", "similarity_seed", "conditioning"}
BLOCK_KEYS = {"jordan", "tag"}
RANDOM_KEYS = {"d", "rho_max", "seed", "conditioning"}

DEFAULT_T = 1000
DEFAULT_DELTA = 0.05
DEFAULT_OUTPUT_DIR = "sysid-out"
