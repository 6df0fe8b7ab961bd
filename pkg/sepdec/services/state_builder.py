import logging
from dataclasses import dataclass

import numpy as np

from sepdec.config import settings
from sepdec.exceptions import BadShape, EigensolverFailure
from sepdec.models.core_types import ClassParams, Tolerances
from sepdec.models.schemas import ComplexValue, MatrixDump, SpectralReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """n^2 x n^2 operator; basis |a>|b> sits at row (a-1)*n + (b-1)."""

    n: int
    mat: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.mat, dtype=np.complex128, copy=True)
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.mat - self.mat.conj().T)))


def _side_of(mat: np.ndarray) -> int:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise BadShape("operator must be a square matrix", shape=list(mat.shape))
    n = int(round(np.sqrt(mat.shape[0])))
    if n < 2 or n * n != mat.shape[0]:
        raise BadShape("operator dimension must be n^2 with n >= 2", dim=mat.shape[0])
    return n


class StateBuilder:
    def __init__(self, tolerances: Tolerances | None = None) -> None:
        self.tol = tolerances or settings.tolerances()

    def mixing_vectors(self, params: ClassParams) -> np.ndarray:
        """Rows are the unnormalized eigenvectors |X_l> = sum_j x_l^j |j>|j+l-1>."""
        n = params.n
        j = np.arange(n)
        l = np.arange(n)[:, None]
        columns = j[None, :] * n + (j[None, :] + l) % n
        vectors = np.zeros((n, n * n), dtype=np.complex128)
        vectors[l, columns] = params.x
        return vectors

    def build_rho(self, params: ClassParams) -> DensityOperator:
        vectors = self.mixing_vectors(params)
        return DensityOperator(n=params.n, mat=vectors.T @ vectors.conj())

    def partial_transpose(self, rho: DensityOperator | np.ndarray) -> DensityOperator:
        mat = rho.mat if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=np.complex128)
        n = _side_of(mat)
        # ((a, b), (c, d)) -> ((c, b), (a, d))
        swapped = mat.reshape(n, n, n, n).transpose(2, 1, 0, 3).reshape(n * n, n * n)
        return DensityOperator(n=n, mat=swapped)

    def spectrum(self, mat: np.ndarray) -> np.ndarray:
        try:
            return np.linalg.eigvalsh(mat)
        except np.linalg.LinAlgError as exc:
            raise EigensolverFailure(f"eigensolver did not converge: {exc}") from exc

    def spectral_ppt(self, params: ClassParams) -> SpectralReport:
        transposed = self.partial_transpose(self.build_rho(params))
        eigenvalues = np.sort(self.spectrum(transposed.mat))
        min_eigenvalue = float(eigenvalues[0])
        is_ppt = min_eigenvalue >= -self.tol.psd_tol
        logger.debug("spectral oracle n=%d min eigenvalue %.3e", params.n, min_eigenvalue)
        return SpectralReport(
            min_eigenvalue=min_eigenvalue,
            eigenvalues=[float(value) for value in eigenvalues],
            is_ppt=is_ppt,
        )

    def dump(self, operator: DensityOperator) -> MatrixDump:
        return MatrixDump(
            n=operator.n, mat=[ComplexValue.of(value) for value in operator.mat.reshape(-1)]
        )


state_builder = StateBuilder()
