# ruff: noqa: F401
from .concentration import ConcentrationReport, InequalityCoverage, concentration_suite, selfnorm_radius
from .fitting import fit_linear_slope, fit_loglog_slope, fit_semilog_slope, histogram_modes
from .inconsistency import InconsistencyReport, inconsistency_experiment, run_inconsistency
from .rate import RateSweep, run_rate_sweep
from .spectrum import SpectrumGrowth, run_spectrum_growth, spectrum_growth_experiment
from .structure import StructureReport, run_structure_checks, structure_checks
from .trials import ExperimentConfig, resolve_threads, run_cells, summarize_cell

__all__ = [
    "ConcentrationReport",
    "ExperimentConfig",
    "InconsistencyReport",
    "InequalityCoverage",
    "RateSweep",
    "SpectrumGrowth",
    "StructureReport",
    "concentration_suite",
    "fit_linear_slope",
    "fit_loglog_slope",
    "fit_semilog_slope",
    "histogram_modes",
    "inconsistency_experiment",
    "resolve_threads",
    "run_cells",
    "run_inconsistency",
    "run_rate_sweep",
    "run_spectrum_growth",
    "run_structure_checks",
    "selfnorm_radius",
    "spectrum_growth_experiment",
    "structure_checks",
    "summarize_cell",
]
