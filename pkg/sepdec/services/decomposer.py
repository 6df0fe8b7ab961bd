"""Explicit separable decomposition of structurally PPT class instances.

Mixing the eigenvectors with U = diag(e^{i delta}) . DFT / sqrt(n) leaves rho
unchanged for any delta; choosing delta from the cyclic second-difference
system 2 delta_i - delta_{i+1} - delta_{i-1} = theta_i (mod 2 pi) makes every
mixed vector |Z_l> a product vector.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from sepdec.config import settings
from sepdec.exceptions import (
    BadShape,
    MixIdentityViolated,
    NotPPT,
    RankOneFailure,
    SumDefect,
    VerificationFailure,
)
from sepdec.models.core_types import ClassParams, Tolerances
from sepdec.models.schemas import (
    ComplexValue,
    DecompositionDocument,
    DecompositionTermDocument,
    DeltaSolution,
    ResidualsDocument,
    ThetaData,
    VerificationReport,
)
from sepdec.services.ppt_structure import TWO_PI, StructureAnalyzer, wrap_angle
from sepdec.services.state_builder import StateBuilder

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MixingUnitary:
    U: np.ndarray
    delta: DeltaSolution

    def __post_init__(self) -> None:
        U = np.array(self.U, dtype=np.complex128, copy=True)
        U.flags.writeable = False
        object.__setattr__(self, "U", U)

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(self.U.conj().T @ self.U - np.eye(self.n))))


class Rank1Factor(NamedTuple):
    phi: np.ndarray
    psi: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class DecompositionTerm:
    p: float
    a: np.ndarray
    b: np.ndarray

    def product_vector(self) -> np.ndarray:
        return np.kron(self.a, self.b)


@dataclass(frozen=True)
class DecompositionResiduals:
    reconstruction_frobenius: float
    max_rank1_residual: float


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    n: int
    terms: tuple[DecompositionTerm, ...]
    residuals: DecompositionResiduals
    free_constant: float = 0.0
    winding: int = 0
    delta: DeltaSolution | None = field(default=None)

    def to_document(self) -> DecompositionDocument:
        return DecompositionDocument(
            n=self.n,
            terms=[
                DecompositionTermDocument(
                    p=term.p,
                    a=[ComplexValue.of(value) for value in term.a],
                    b=[ComplexValue.of(value) for value in term.b],
                )
                for term in self.terms
            ],
            residuals=ResidualsDocument(
                reconstruction=self.residuals.reconstruction_frobenius,
                max_rank1=self.residuals.max_rank1_residual,
            ),
            free_constant=self.free_constant,
            winding=self.winding,
        )

    @classmethod
    def from_document(cls, document: DecompositionDocument) -> "SeparableDecomposition":
        terms = tuple(
            DecompositionTerm(
                p=term.p,
                a=np.array([value.to_complex() for value in term.a]),
                b=np.array([value.to_complex() for value in term.b]),
            )
            for term in document.terms
        )
        return cls(
            n=document.n,
            terms=terms,
            residuals=DecompositionResiduals(
                reconstruction_frobenius=document.residuals.reconstruction,
                max_rank1_residual=document.residuals.max_rank1,
            ),
            free_constant=document.free_constant,
            winding=document.winding,
        )


def cyclic_laplacian(n: int) -> np.ndarray:
    """circ(2, -1, 0, ..., 0, -1); for n = 2 the two off-diagonals coincide."""
    eye = np.eye(n)
    return 2.0 * eye - np.roll(eye, 1, axis=1) - np.roll(eye, -1, axis=1)


def mixing_matrix(delta: Sequence[float]) -> np.ndarray:
    n = len(delta)
    index = np.arange(n)
    # u_kl = exp(i((k-1)(l-1) 2pi/n + delta_k)) / sqrt(n)
    phases = np.outer(index, index) * (TWO_PI / n) + np.asarray(delta, dtype=float)[:, None]
    return np.exp(1j * phases) / math.sqrt(n)


def factor_rank1(B: np.ndarray) -> Rank1Factor:
    left, singular, right = scipy.linalg.svd(B)
    phi = left[:, 0] * singular[0]
    psi = right[0, :]
    norm = np.linalg.norm(B)
    residual = float(np.linalg.norm(B - np.outer(phi, psi)) / norm) if norm > 0 else 0.0
    return Rank1Factor(phi=phi, psi=psi, residual=residual)


def entrywise_residual(B: np.ndarray) -> float:
    phi = B[:, 0]
    psi = B[0, :] / B[0, 0]
    return float(np.linalg.norm(B - np.outer(phi, psi)) / np.linalg.norm(B))


class Decomposer:
    def __init__(self, tolerances: Tolerances | None = None) -> None:
        self.tol = tolerances or settings.tolerances()
        self.state_builder = StateBuilder(self.tol)
        self.structure = StructureAnalyzer(self.tol)

    def solve_delta(
        self, theta: ThetaData, free_constant: float = 0.0, winding: int = 0
    ) -> DeltaSolution:
        angles = np.asarray(theta.theta, dtype=float)
        n = angles.size
        k = theta.sum_defect_k
        defect = abs(float(angles.sum()) - TWO_PI * k)
        if defect > self.tol.residual_tol:
            raise SumDefect(
                "theta angles do not sum to a multiple of 2 pi",
                theta_sum=float(angles.sum()),
                defect=defect,
            )

        t = winding % n
        kappa = np.zeros(n, dtype=int)
        kappa[0] -= k + t
        kappa[-1] += t
        rhs = angles + TWO_PI * kappa

        # pin delta_1; rows 2..n form the Dirichlet path Laplacian tridiag(-1, 2, -1)
        size = n - 1
        banded = np.zeros((3, size))
        banded[0, 1:] = -1.0
        banded[1, :] = 2.0
        banded[2, :-1] = -1.0
        interior = scipy.linalg.solve_banded((1, 1), banded, rhs[1:])
        delta = free_constant + np.concatenate(([0.0], interior))

        congruence = cyclic_laplacian(n) @ delta - angles
        residual = max(abs(wrap_angle(float(value))) for value in congruence)
        if residual > self.tol.residual_tol:
            raise SumDefect(
                "delta does not satisfy the second-difference congruence",
                congruence_residual=residual,
            )
        return DeltaSolution(
            delta=[float(value) for value in delta],
            free_constant=float(free_constant),
            kappa=[int(value) for value in kappa],
            winding=t,
            congruence_residual=residual,
        )

    def build_unitary(self, delta: DeltaSolution, n: int | None = None) -> MixingUnitary:
        n = n or len(delta.delta)
        if n != len(delta.delta):
            raise BadShape("delta length does not match n", n=n, length=len(delta.delta))
        unitary = MixingUnitary(U=mixing_matrix(delta.delta), delta=delta)
        defect = unitary.unitarity_defect()
        if defect > self.tol.residual_tol:
            logger.warning("mixing matrix departs from unitarity by %.3e", defect)
        return unitary

    def compute_B(self, params: ClassParams, unitary: MixingUnitary) -> np.ndarray:
        """Stack of B_1..B_n, shape (n, n, n); B_l[r][s] = u_{s-r+1, l} x_{s-r+1}^r."""
        n = params.n
        if unitary.n != n or len(unitary.delta.delta) != n:
            raise BadShape("mixing unitary does not match the instance", n=n, size=unitary.n)
        # entry rule from delta, identity check against the stored U
        u = mixing_matrix(unitary.delta.delta)
        r = np.arange(n)[:, None]
        s = np.arange(n)[None, :]
        k = (s - r) % n
        blocks = np.moveaxis(u[k, :], -1, 0) * params.x[k, r][None, :, :]

        mixed = unitary.U.T @ self.state_builder.mixing_vectors(params)
        gap = float(np.max(np.abs(blocks.reshape(n, n * n) - mixed)))
        if not self.tol.within(gap, float(np.max(np.abs(mixed)))):
            raise MixIdentityViolated(
                "entry rule for B_l disagrees with the mixed eigenvectors", gap=gap
            )
        return blocks

    def b_minor_residual(self, blocks: np.ndarray, seed: int = 0) -> float:
        """Largest relative 2x2 minor over all B_l; sampled above the exhaustive limit."""
        n = blocks.shape[-1]
        if n <= settings.exhaustive_minor_limit:
            rows_a, rows_b = np.triu_indices(n, k=1)
            direct = np.einsum("lpq,lrs->lprqs", blocks, blocks)
            crossed = np.einsum("lps,lrq->lprqs", blocks, blocks)
            gaps = np.abs(direct - crossed) / np.maximum(
                np.maximum(np.abs(direct), np.abs(crossed)), np.finfo(float).tiny
            )
            return float(np.max(gaps[:, rows_a, rows_b][:, :, rows_a, rows_b]))
        rng = np.random.default_rng(seed)
        size = settings.minor_sample_size
        l, p, r, q, s = (rng.integers(0, n, size) for _ in range(5))
        direct = blocks[l, p, q] * blocks[l, r, s]
        crossed = blocks[l, p, s] * blocks[l, r, q]
        scale = np.maximum(np.maximum(np.abs(direct), np.abs(crossed)), np.finfo(float).tiny)
        return float(np.max(np.abs(direct - crossed) / scale))

    def decompose(
        self, params: ClassParams, free_constant: float = 0.0, winding: int = 0
    ) -> SeparableDecomposition:
        theta = self._theta_for(params)
        return self._decompose_with(params, theta, free_constant, winding)

    def enumerate_gauge(
        self,
        params: ClassParams,
        constants: Sequence[float],
        windings: Sequence[int] | None = None,
    ) -> list[SeparableDecomposition]:
        windings = [0] * len(constants) if windings is None else list(windings)
        if len(windings) != len(constants):
            raise BadShape(
                "one winding per gauge constant is required",
                constants=len(constants),
                windings=len(windings),
            )
        theta = self._theta_for(params)
        return [
            self._decompose_with(params, theta, constant, winding)
            for constant, winding in zip(constants, windings)
        ]

    def _theta_for(self, params: ClassParams) -> ThetaData:
        report = self.structure.check_minor_relations(params)
        if not report.is_ppt:
            raise NotPPT(
                "state is not PPT; no separable decomposition exists",
                max_minor_residual=report.max_minor_residual,
                witness=list(report.worst_witness) if report.worst_witness else None,
            )
        return self.structure.extract_theta(params, report)

    def _decompose_with(
        self, params: ClassParams, theta: ThetaData, free_constant: float, winding: int
    ) -> SeparableDecomposition:
        delta = self.solve_delta(theta, free_constant, winding)
        unitary = self.build_unitary(delta, params.n)
        blocks = self.compute_B(params, unitary)

        terms = []
        worst = 0.0
        for index, B in enumerate(blocks, start=1):
            factor = factor_rank1(B)
            logger.debug(
                "B_%d rank-one residual svd=%.3e entrywise=%.3e",
                index,
                factor.residual,
                entrywise_residual(B),
            )
            if factor.residual > self.tol.residual_tol:
                raise RankOneFailure(
                    f"B_{index} is not rank one despite the structural PPT verdict",
                    l=index,
                    residual=factor.residual,
                )
            worst = max(worst, factor.residual)
            terms.append(
                DecompositionTerm(
                    p=float(np.linalg.norm(B) ** 2),
                    a=factor.phi / np.linalg.norm(factor.phi),
                    b=factor.psi / np.linalg.norm(factor.psi),
                )
            )

        draft = SeparableDecomposition(
            n=params.n,
            terms=tuple(terms),
            residuals=DecompositionResiduals(0.0, worst),
            free_constant=float(free_constant),
            winding=delta.winding,
            delta=delta,
        )
        report = self.verify_decomposition(draft, params)
        if not report.passed:
            raise VerificationFailure(
                "decomposition does not reproduce rho", failures=report.failures
            )
        logger.info(
            "decomposed n=%d gauge=%.4f winding=%d reconstruction=%.3e",
            params.n,
            free_constant,
            delta.winding,
            report.reconstruction_frobenius,
        )
        return SeparableDecomposition(
            n=params.n,
            terms=draft.terms,
            residuals=DecompositionResiduals(report.reconstruction_frobenius, worst),
            free_constant=draft.free_constant,
            winding=draft.winding,
            delta=delta,
        )

    def verify_decomposition(
        self, decomp: SeparableDecomposition, params: ClassParams
    ) -> VerificationReport:
        n = params.n
        rho = self.state_builder.build_rho(params).mat
        failures: list[str] = []
        if decomp.n != n or len(decomp.terms) != n:
            failures.append("term_count")
        if any(term.a.shape != (n,) or term.b.shape != (n,) for term in decomp.terms):
            failures.append("dimension")
            return VerificationReport(
                passed=False,
                reconstruction_frobenius=math.inf,
                trace_defect=math.inf,
                weight_sum=float(sum(term.p for term in decomp.terms)),
                min_weight=float(min((term.p for term in decomp.terms), default=0.0)),
                max_norm_defect_a=math.inf,
                max_norm_defect_b=math.inf,
                failures=failures,
            )

        reconstruction = np.zeros_like(rho)
        for term in decomp.terms:
            vector = term.product_vector()
            reconstruction += term.p * np.outer(vector, vector.conj())

        frobenius = float(np.linalg.norm(reconstruction - rho))
        trace_defect = float(np.trace(reconstruction).real - np.trace(rho).real)
        weights = [term.p for term in decomp.terms]
        weight_sum = float(sum(weights))
        min_weight = float(min(weights, default=0.0))
        defect_a = max((abs(np.linalg.norm(term.a) - 1.0) for term in decomp.terms), default=0.0)
        defect_b = max((abs(np.linalg.norm(term.b) - 1.0) for term in decomp.terms), default=0.0)

        if not self.tol.within(frobenius, float(np.max(np.abs(rho)))):
            failures.append("reconstruction")
        if min_weight <= 0.0 or abs(weight_sum - 1.0) > self.tol.residual_tol:
            failures.append("weights")
        if defect_a > self.tol.residual_tol:
            failures.append("normalization_a")
        if defect_b > self.tol.residual_tol:
            failures.append("normalization_b")

        return VerificationReport(
            passed=not failures,
            reconstruction_frobenius=frobenius,
            trace_defect=trace_defect,
            weight_sum=weight_sum,
            min_weight=min_weight,
            max_norm_defect_a=float(defect_a),
            max_norm_defect_b=float(defect_b),
            failures=failures,
        )


decomposer = Decomposer()
