"""Seeded instance generation.

Every random draw goes through ``numpy.random.Generator(PCG64(seed))`` so an
equal GenSpec yields bitwise-identical tables. Perturbation choices use the
independent stream ``PCG64([seed, 1])``.
"""

import logging
import math
from typing import Literal

import numpy as np

from sepdec.config import settings
from sepdec.exceptions import BadGenSpec, DegenerateDraw
from sepdec.models.core_types import ClassParams, Tolerances, renormalize, validate
from sepdec.models.schemas import GenSpec

logger = logging.getLogger(__name__)

MIN_MAGNITUDE = 0.2
MAX_MAGNITUDE = 1.0
PERTURB_STREAM = 1

Kick = Literal["phase", "magnitude"]


def ppt_table(phi: np.ndarray, psi: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """x_l^j = C e^{-i delta_l} phi_j psi_{j+l-1}, normalized to unit trace.

    With these delta factors every mixed coefficient matrix B_l is an outer
    product, so the table is PPT by construction.
    """
    n = len(phi)
    l = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    table = np.exp(-1j * np.asarray(delta))[:, None] * phi[j] * psi[(j + l) % n]
    return renormalize(table)


class InstanceGenerator:
    def __init__(self, tolerances: Tolerances | None = None) -> None:
        self.tol = tolerances or settings.tolerances()

    def _check_n(self, n: int) -> None:
        if n < 2:
            raise BadGenSpec("instances need n >= 2", n=n)

    def _rng(self, seed: int | list[int]) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(seed))

    def _draw_vector(self, rng: np.random.Generator, n: int) -> np.ndarray:
        magnitudes = rng.uniform(MIN_MAGNITUDE, MAX_MAGNITUDE, n)
        phases = rng.uniform(0.0, 2.0 * math.pi, n)
        return magnitudes * np.exp(1j * phases)

    def _accept(self, table: np.ndarray) -> bool:
        return bool(np.min(np.abs(table)) > self.tol.zero_threshold)

    def gen_uniform(self, n: int, label: str | None = None) -> ClassParams:
        self._check_n(n)
        return validate(np.full((n, n), 1.0 / n, dtype=np.complex128), self.tol, label)

    def gen_ppt(self, n: int, seed: int, label: str | None = None) -> ClassParams:
        self._check_n(n)
        rng = self._rng(seed)
        for attempt in range(settings.max_draw_attempts):
            phi = self._draw_vector(rng, n)
            psi = self._draw_vector(rng, n)
            delta = rng.uniform(0.0, 2.0 * math.pi, n)
            table = ppt_table(phi, psi, delta)
            if self._accept(table):
                return validate(table, self.tol, label)
            logger.warning("gen_ppt n=%d seed=%d attempt %d underflowed", n, seed, attempt + 1)
        raise DegenerateDraw("no admissible draw within the retry budget", n=n, seed=seed)

    def gen_perturbed(
        self,
        n: int,
        seed: int,
        epsilon: float,
        kick: Kick | None = None,
        label: str | None = None,
    ) -> ClassParams:
        if epsilon < 0 or not math.isfinite(epsilon):
            raise BadGenSpec("epsilon must be a finite non-negative number", epsilon=epsilon)
        base = self.gen_ppt(n, seed, label)
        if epsilon == 0:
            return base

        rng = self._rng([seed, PERTURB_STREAM])
        l, j = (int(value) for value in rng.integers(0, n, 2))
        chosen = kick or ("phase" if rng.integers(0, 2) == 0 else "magnitude")
        table = np.array(base.x)
        table[l, j] *= np.exp(1j * epsilon) if chosen == "phase" else (1.0 + epsilon)
        logger.debug("perturbed x_%d^%d with %s kick %.3e", l + 1, j + 1, chosen, epsilon)
        return validate(renormalize(table), self.tol, label)

    def gen_random(self, n: int, seed: int, label: str | None = None) -> ClassParams:
        self._check_n(n)
        rng = self._rng(seed)
        for attempt in range(settings.max_draw_attempts):
            table = renormalize(self._draw_vector(rng, n * n).reshape(n, n))
            if self._accept(table):
                return validate(table, self.tol, label)
            logger.warning("gen_random n=%d seed=%d attempt %d underflowed", n, seed, attempt + 1)
        raise DegenerateDraw("no admissible draw within the retry budget", n=n, seed=seed)

    def gen_w2(self) -> ClassParams:
        """lambda = (0.9, 0.1) with v_l = (1, 1)/sqrt(2); NPT."""
        table = np.array(
            [[math.sqrt(0.45), math.sqrt(0.45)], [math.sqrt(0.05), math.sqrt(0.05)]],
            dtype=np.complex128,
        )
        return validate(table, self.tol, "W(2)")

    def generate(self, spec: GenSpec) -> ClassParams:
        if spec.kind == "uniform":
            return self.gen_uniform(spec.n, spec.label)
        if spec.kind == "ppt":
            return self.gen_ppt(spec.n, spec.seed, spec.label)
        if spec.kind == "perturbed":
            if spec.epsilon is None:
                raise BadGenSpec("kind 'perturbed' needs epsilon")
            return self.gen_perturbed(spec.n, spec.seed, spec.epsilon, label=spec.label)
        return self.gen_random(spec.n, spec.seed, spec.label)


instance_generator = InstanceGenerator()
