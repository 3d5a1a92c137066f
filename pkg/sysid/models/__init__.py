# ruff: noqa: F401
from .experiment import RAW_HEADER, CellSummary, ExperimentResult, McSummary, PlotSeries, RateFit, TrialRecord
from .reports import BlockBound, BoundReport, CovarianceDiagnostics, EstimateReport, LowerBound, NotationTable
from .system import NoiseFamily, NoiseModel, SystemSpec, TaggedBlock
from .trajectory import Trajectory

__all__ = [
    "RAW_HEADER",
    "BlockBound",
    "BoundReport",
    "CellSummary",
    "CovarianceDiagnostics",
    "EstimateReport",
    "ExperimentResult",
    "LowerBound",
    "McSummary",
    "NoiseFamily",
    "NoiseModel",
    "NotationTable",
    "PlotSeries",
    "RateFit",
    "SystemSpec",
    "TaggedBlock",
    "Trajectory",
    "TrialRecord",
]
