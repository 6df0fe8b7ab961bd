"""Structural PPT test for the shifted-diagonal state class.

The quadratic form <Y|rho^T1|Y> splits into n independent blocks; block m is
the Hermitian matrix A_m with A_m[j][k] = x_l^j conj(x_l^k), l = cyc(m - j - k).
The state is PPT exactly when every A_m is PSD, which for this class forces
every A_m to be rank one, i.e. all of its 2x2 minors vanish.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from sepdec.config import settings
from sepdec.exceptions import BadS, InconsistentTheta, NotPPT
from sepdec.models.core_types import ClassParams, CyclicIndex, Tolerances, cyc
from sepdec.models.schemas import CycleIdentityReport, StructuralReport, ThetaData
from sepdec.services.state_builder import StateBuilder

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def wrap_angle(angle: float | np.ndarray) -> float | np.ndarray:
    """Principal representative in (-pi, pi], elementwise for arrays."""
    return math.pi - ((math.pi - angle) % TWO_PI)


@dataclass(frozen=True, eq=False)
class StructureMatrix:
    m: CyclicIndex
    A: np.ndarray

    def __post_init__(self) -> None:
        A = np.array(self.A, dtype=np.complex128, copy=True)
        A.flags.writeable = False
        object.__setattr__(self, "A", A)


def _relative_gap(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    scale = np.maximum(np.abs(first), np.abs(second))
    return np.abs(first - second) / np.maximum(scale, np.finfo(float).tiny)


class StructureAnalyzer:
    def __init__(self, tolerances: Tolerances | None = None) -> None:
        self.tol = tolerances or settings.tolerances()
        self.state_builder = StateBuilder(self.tol)

    def _block(self, params: ClassParams, m: int) -> np.ndarray:
        n = params.n
        j = np.arange(n)[:, None]
        k = np.arange(n)[None, :]
        # zero-based l for l = m - (j+1) - (k+1)
        l = (m - j - k - 3) % n
        return params.x[l, j] * np.conj(params.x[l, k])

    def assemble_A(self, params: ClassParams, m: CyclicIndex | int) -> StructureMatrix:
        index = m if isinstance(m, CyclicIndex) else cyc(m, params.n)
        return StructureMatrix(m=index, A=self._block(params, index.value))

    def assemble_all(self, params: ClassParams) -> np.ndarray:
        """Stack of A_1..A_n, shape (n, n, n), first axis m - 1."""
        return np.stack([self._block(params, m) for m in range(1, params.n + 1)])

    def check_minor_relations(self, params: ClassParams) -> StructuralReport:
        n = params.n
        blocks = self.assemble_all(params)
        upper = np.triu(np.ones((n, n), dtype=bool), k=1)
        # axes (p, r, q, s): rows {p, r}, columns {q, s}
        mask = upper[:, :, None, None] & upper[None, None, :, :]

        worst = 0.0
        worst_at: tuple[int, int, int, int, int] | None = None
        worst_value = 0.0
        for m0, A in enumerate(blocks):
            direct = np.einsum("pq,rs->prqs", A, A)
            crossed = np.einsum("ps,rq->prqs", A, A)
            gaps = np.where(mask, _relative_gap(direct, crossed), 0.0)
            flat = int(np.argmax(gaps))
            if gaps.flat[flat] > worst:
                p, r, q, s = np.unravel_index(flat, gaps.shape)
                worst = float(gaps.flat[flat])
                worst_at = (m0 + 1, int(p) + 1, int(q) + 1, int(r) + 1, int(s) + 1)
                worst_value = float(abs(direct[p, r, q, s] - crossed[p, r, q, s]))

        per_m_min_eig = [float(values[0]) for values in self.state_builder.spectrum(blocks)]
        is_ppt = worst <= self.tol.residual_tol
        if is_ppt and min(per_m_min_eig) < -self.tol.psd_tol:
            logger.warning(
                "minors vanish but an A_m has eigenvalue %.3e; tolerance band too loose",
                min(per_m_min_eig),
            )
        logger.info("structural test n=%d is_ppt=%s residual=%.3e", n, is_ppt, worst)
        return StructuralReport(
            is_ppt=is_ppt,
            max_minor_residual=worst,
            worst_witness=None if is_ppt else worst_at,
            worst_minor_value=worst_value,
            per_m_min_eig=per_m_min_eig,
        )

    def extract_theta(
        self, params: ClassParams, report: StructuralReport | None = None
    ) -> ThetaData:
        report = report or self.check_minor_relations(params)
        if not report.is_ppt:
            raise NotPPT(
                "state fails the structural PPT test; theta is undefined",
                max_minor_residual=report.max_minor_residual,
                witness=list(report.worst_witness) if report.worst_witness else None,
            )

        n = params.n
        x = params.x
        m = np.arange(n)[:, None]
        j = np.arange(n)[None, :]
        ratios = (x[(m + 1) % n, j] * x[(m - 1) % n, (j + 1) % n]) / (
            x[m, j] * x[m, (j + 1) % n]
        )
        theta = wrap_angle(np.angle(ratios[:, 0]))
        consistency = float(np.max(np.abs(np.angle(ratios / ratios[:, :1]))))
        if consistency > self.tol.residual_tol:
            raise InconsistentTheta(
                "theta_m depends on the base index although the minors vanish",
                consistency_residual=consistency,
            )

        sum_defect_k = int(round(float(theta.sum()) / TWO_PI))
        return ThetaData(
            theta=[float(value) for value in theta],
            consistency_residual=consistency,
            sum_defect_k=sum_defect_k,
        )

    def derive_theta_s(self, theta: ThetaData, s: int, m: CyclicIndex | int) -> float:
        n = len(theta.theta)
        if not 1 <= s <= n // 2:
            raise BadS(f"s must lie in 1..{n // 2}", s=s, n=n)
        centre = m.value if isinstance(m, CyclicIndex) else cyc(m, n).value
        if s == 1:
            return theta.theta[centre - 1]
        # s theta_m + (s-1)(theta_{m-1} + theta_{m+1}) + ... + (theta_{m-s+1} + theta_{m+s-1})
        total = sum(
            (s - abs(t)) * theta.theta[cyc(centre + t, n).offset] for t in range(1 - s, s)
        )
        return wrap_angle(total)

    def extract_theta_direct(
        self, params: ClassParams, s: int, m: CyclicIndex | int, j: int = 1
    ) -> float:
        """arg(x_{m+s}^j x_{m-s}^{j+s} / (x_m^j x_m^{j+s}))."""
        n = params.n
        centre = m.value if isinstance(m, CyclicIndex) else cyc(m, n).value
        ratio = (params.entry(centre + s, j) * params.entry(centre - s, j + s)) / (
            params.entry(centre, j) * params.entry(centre, j + s)
        )
        return float(wrap_angle(float(np.angle(ratio))))

    def verify_block_decomposition(self, params: ClassParams) -> bool:
        rho_pt = self.state_builder.partial_transpose(self.state_builder.build_rho(params))
        full = np.sort(self.state_builder.spectrum(rho_pt.mat))
        blocks = np.sort(self.state_builder.spectrum(self.assemble_all(params)).reshape(-1))
        gap = float(np.max(np.abs(full - blocks)))
        scale = float(np.max(np.abs(full)))
        return self.tol.within(gap, scale)

    def check_cycle_identities(self, params: ClassParams) -> CycleIdentityReport:
        order3 = 0.0
        order4 = 0.0
        for A in self.assemble_all(params):
            d = np.real(np.diag(A))
            cycle3 = np.einsum("ij,jk,ki->ijk", A, A, A)
            diag3 = np.einsum("i,j,k->ijk", d, d, d)
            order3 = max(order3, float(np.max(_relative_gap(cycle3, diag3))))
            cycle4 = np.einsum("il,lk,kj,ji->ijkl", A, A, A, A)
            diag4 = np.einsum("i,j,k,l->ijkl", d, d, d, d)
            order4 = max(order4, float(np.max(_relative_gap(cycle4, diag4))))
        return CycleIdentityReport(order3_residual=order3, order4_residual=order4)

    def product_identity_residual(self, params: ClassParams) -> float:
        """Max relative gap of prod_m A_m[j][j] A_m[k][k] against prod_m |A_m[j][k]|^2."""
        blocks = self.assemble_all(params)
        log_diag = np.log(np.real(np.diagonal(blocks, axis1=1, axis2=2)))
        lhs = log_diag.sum(axis=0)[:, None] + log_diag.sum(axis=0)[None, :]
        rhs = 2.0 * np.log(np.abs(blocks)).sum(axis=0)
        return float(np.max(np.abs(np.expm1(lhs - rhs))))

    def rank_one_residual(self, params: ClassParams) -> list[float]:
        residuals = []
        for A in self.assemble_all(params):
            values, vectors = np.linalg.eigh(A)
            w = vectors[:, -1] * np.sqrt(max(values[-1], 0.0))
            residuals.append(
                float(np.linalg.norm(A - np.outer(w, w.conj())) / np.linalg.norm(A))
            )
        return residuals


structure_analyzer = StructureAnalyzer()
