from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, model_validator

from sepdec.models.core_types import ClassParams, Tolerances, validate

GenKind = Literal["uniform", "ppt", "perturbed", "random"]
CheckMethod = Literal["structural", "spectral", "both"]


class ComplexValue(BaseModel):
    re: FiniteFloat
    im: FiniteFloat

    @classmethod
    def of(cls, value: complex) -> "ComplexValue":
        return cls(re=float(value.real), im=float(value.imag))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


class InstanceDocument(BaseModel):
    n: int
    x: list[list[ComplexValue]]
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "InstanceDocument":
        if len(self.x) != self.n or any(len(row) != self.n for row in self.x):
            raise ValueError(f"x must be a {self.n}x{self.n} table")
        return self

    def table(self) -> list[list[complex]]:
        return [[entry.to_complex() for entry in row] for row in self.x]

    @classmethod
    def from_params(cls, params: ClassParams) -> "InstanceDocument":
        return cls(
            n=params.n,
            x=[[ComplexValue.of(value) for value in row] for row in params.x],
            label=params.label,
        )

    def to_params(self, tolerances: Tolerances | None = None) -> ClassParams:
        return validate(self.table(), tolerances, self.label)


class GenSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    kind: GenKind
    seed: int = Field(default=0, ge=0, lt=2**64)
    epsilon: Optional[FiniteFloat] = Field(default=None, ge=0)
    label: Optional[str] = None


class MatrixDump(BaseModel):
    n: int
    mat: list[ComplexValue]


class StructuralReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    is_ppt: bool
    max_minor_residual: float
    # (m, j, k, p, q): rows {j, p} and columns {k, q} of A_m, all 1-based
    worst_witness: Optional[tuple[int, int, int, int, int]] = None
    worst_minor_value: float = 0.0
    per_m_min_eig: list[float]


class CycleIdentityReport(BaseModel):
    order3_residual: float
    order4_residual: float


class SpectralReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    min_eigenvalue: float
    eigenvalues: list[float]
    is_ppt: bool


class ThetaData(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta: list[float]
    consistency_residual: float
    sum_defect_k: int


class DeltaSolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta: list[float]
    free_constant: float
    kappa: list[int]
    winding: int = 0
    congruence_residual: float = 0.0


class StructuralSummary(BaseModel):
    is_ppt: bool
    max_minor_residual: float
    witness: Optional[list[int]] = None
    theta: Optional[list[float]] = None
    sum_defect_k: Optional[int] = None


class CheckReport(BaseModel):
    method: CheckMethod
    is_ppt: bool
    borderline: bool = False
    structural: Optional[StructuralSummary] = None
    spectral: Optional[SpectralReport] = None


class DecompositionTermDocument(BaseModel):
    p: FiniteFloat
    a: list[ComplexValue]
    b: list[ComplexValue]


class ResidualsDocument(BaseModel):
    reconstruction: float
    max_rank1: float


class DecompositionDocument(BaseModel):
    n: int
    terms: list[DecompositionTermDocument]
    residuals: ResidualsDocument
    free_constant: float
    winding: int = 0

    @model_validator(mode="after")
    def _check_lengths(self) -> "DecompositionDocument":
        for term in self.terms:
            if len(term.a) != self.n or len(term.b) != self.n:
                raise ValueError(f"every term vector must have length {self.n}")
        return self


class VerificationReport(BaseModel):
    passed: bool
    reconstruction_frobenius: float
    trace_defect: float
    weight_sum: float
    min_weight: float
    max_norm_defect_a: float
    max_norm_defect_b: float
    failures: list[str] = Field(default_factory=list)


class FuzzFailure(BaseModel):
    spec: GenSpec
    reason: str


class FuzzSummary(BaseModel):
    total: int = 0
    agreements: int = 0
    borderline: int = 0
    structural_ppt: int = 0
    spectral_ppt: int = 0
    decomposed: int = 0
    failures: list[FuzzFailure] = Field(default_factory=list)
    ppt_random_hits: list[GenSpec] = Field(default_factory=list)
