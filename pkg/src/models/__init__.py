from src.models.experiment import ElasticMethod, ExperimentConfig, Family, OutputFormat, Suite, TransformKind
from src.models.outputs import (
    CheckResult,
    CheckStatus,
    CommandTable,
    DriftedLaw,
    McEstimate,
    MomentRecord,
    NormalizationReport,
    VerificationReport,
)
from src.models.params import ClockKind, ClockSpec, Composition, GcpParams
from src.models.paths import ClockPath, StepPath

__all__ = [
    "CheckResult",
    "CheckStatus",
    "ClockKind",
    "ClockPath",
    "ClockSpec",
    "CommandTable",
    "Composition",
    "DriftedLaw",
    "ElasticMethod",
    "ExperimentConfig",
    "Family",
    "GcpParams",
    "McEstimate",
    "MomentRecord",
    "NormalizationReport",
    "OutputFormat",
    "StepPath",
    "Suite",
    "TransformKind",
    "VerificationReport",
]
