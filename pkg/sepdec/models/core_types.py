"""Shared domain types: cyclic indices, tolerances and the class parameter table.

All subscripts and superscripts of the state class live on the 1-based residues
{1, ..., n}; every index expression goes through :func:`cyc`.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from sepdec.exceptions import BadShape, BadTrace, InvalidDocument, ZeroEntry


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True)

    zero_threshold: float = 1e-12
    residual_tol: float = 1e-9
    psd_tol: float = 1e-10

    @model_validator(mode="after")
    def _check_ordering(self) -> "Tolerances":
        if min(self.zero_threshold, self.residual_tol, self.psd_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.residual_tol <= self.zero_threshold:
            raise ValueError("residual_tol must exceed zero_threshold")
        return self

    def relative(self, residual: float, scale: float) -> float:
        """Residual measured against the largest magnitude of the compared quantities."""
        return float(residual) / max(float(scale), self.zero_threshold)

    def within(self, residual: float, scale: float = 1.0) -> bool:
        return self.relative(residual, scale) <= self.residual_tol


@dataclass(frozen=True)
class CyclicIndex:
    value: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise BadShape("cyclic modulus must be at least 2", n=self.n)
        if not 1 <= self.value <= self.n:
            raise ValueError(f"{self.value} is not a residue representative in 1..{self.n}")

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    @property
    def offset(self) -> int:
        """Zero-based array position."""
        return self.value - 1

    def shift(self, by: int) -> "CyclicIndex":
        return cyc(self.value + by, self.n)


def cyc(i: int, n: int) -> CyclicIndex:
    return CyclicIndex(((int(i) - 1) % n) + 1, n)


def offset(i: int, n: int) -> int:
    """Zero-based position of cyc(i, n); usable on numpy integer arrays too."""
    return (i - 1) % n


@dataclass(frozen=True, eq=False)
class ClassParams:
    """Validated coefficient table; ``x[l-1, j-1]`` holds x_l^j."""

    n: int
    x: np.ndarray
    label: str | None = None

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=np.complex128, copy=True)
        x.flags.writeable = False
        object.__setattr__(self, "x", x)

    @property
    def lam(self) -> np.ndarray:
        lam = np.sum(np.abs(self.x) ** 2, axis=1)
        lam.flags.writeable = False
        return lam

    @property
    def v(self) -> np.ndarray:
        v = self.x / np.sqrt(self.lam)[:, None]
        v.flags.writeable = False
        return v

    def entry(self, l: int, j: int) -> complex:
        """x_l^j with both indices reduced cyclically."""
        return complex(self.x[offset(l, self.n), offset(j, self.n)])


def validate(
    table: Any, tolerances: Tolerances | None = None, label: str | None = None
) -> ClassParams:
    tol = tolerances or Tolerances()
    try:
        x = np.asarray(table, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise BadShape(f"coefficient table is not numeric: {exc}") from exc

    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise BadShape("coefficient table must be square", shape=list(x.shape))
    n = x.shape[0]
    if n < 2:
        raise BadShape("coefficient table needs n >= 2", n=n)
    if not np.all(np.isfinite(x)):
        raise InvalidDocument("coefficient table contains NaN or Inf")

    magnitudes = np.abs(x)
    zeros = np.argwhere(magnitudes <= tol.zero_threshold)
    if zeros.size:
        l, j = (int(i) + 1 for i in zeros[0])
        raise ZeroEntry(
            f"x_{l}^{j} vanishes; the class requires every coefficient to be nonzero",
            l=l,
            j=j,
            magnitude=float(magnitudes[l - 1, j - 1]),
        )

    lam = np.sum(magnitudes**2, axis=1)
    trace = float(lam.sum())
    if abs(trace - 1.0) > tol.residual_tol:
        raise BadTrace("sum of |x_l^j|^2 must be 1", trace=trace)
    if np.any(lam >= 1.0) or np.any(lam <= 0.0):
        raise BadTrace("every lambda_l must lie strictly between 0 and 1", lam=lam.tolist())

    return ClassParams(n=n, x=x, label=label)


def renormalize(table: Any) -> np.ndarray:
    x = np.asarray(table, dtype=np.complex128)
    norm = np.sqrt(np.sum(np.abs(x) ** 2))
    if norm == 0 or not np.isfinite(norm):
        raise BadTrace("cannot renormalize a zero or non-finite table")
    return x / norm
