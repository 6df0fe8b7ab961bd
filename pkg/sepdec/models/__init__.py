from .core_types import ClassParams, CyclicIndex, Tolerances, cyc, renormalize, validate
from .schemas import (
    CheckReport,
    ComplexValue,
    CycleIdentityReport,
    DecompositionDocument,
    DeltaSolution,
    FuzzFailure,
    FuzzSummary,
    GenSpec,
    InstanceDocument,
    MatrixDump,
    SpectralReport,
    StructuralReport,
    StructuralSummary,
    ThetaData,
    VerificationReport,
)

__all__ = [
    "CheckReport",
    "ClassParams",
    "ComplexValue",
    "CycleIdentityReport",
    "CyclicIndex",
    "DecompositionDocument",
    "DeltaSolution",
    "FuzzFailure",
    "FuzzSummary",
    "GenSpec",
    "InstanceDocument",
    "MatrixDump",
    "SpectralReport",
    "StructuralReport",
    "StructuralSummary",
    "ThetaData",
    "Tolerances",
    "VerificationReport",
    "cyc",
    "renormalize",
    "validate",
]
