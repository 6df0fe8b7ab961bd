import asyncio
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from sepdec.config import settings
from sepdec.exceptions import SepDecError
from sepdec.models.core_types import Tolerances
from sepdec.models.schemas import FuzzFailure, FuzzSummary, GenKind, GenSpec
from sepdec.services.decomposer import Decomposer
from sepdec.services.instance_gen import InstanceGenerator
from sepdec.services.ppt_structure import StructureAnalyzer
from sepdec.services.state_builder import StateBuilder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InstanceOutcome:
    spec: GenSpec
    structural_ppt: bool = False
    spectral_ppt: bool = False
    minor_residual: float = 0.0
    min_eigenvalue: float = 0.0
    borderline: bool = False
    decomposed: bool = False
    failure: Optional[str] = None

    @property
    def agrees(self) -> bool:
        return self.structural_ppt == self.spectral_ppt


class FuzzService:
    def __init__(self, tolerances: Tolerances | None = None) -> None:
        self.tol = tolerances or settings.tolerances()
        self.generator = InstanceGenerator(self.tol)
        self.structure = StructureAnalyzer(self.tol)
        self.state_builder = StateBuilder(self.tol)
        self.decomposer = Decomposer(self.tol)

    def evaluate(self, spec: GenSpec) -> InstanceOutcome:
        try:
            params = self.generator.generate(spec)
            structural = self.structure.check_minor_relations(params)
            spectral = self.state_builder.spectral_ppt(params)
        except SepDecError as exc:
            return InstanceOutcome(spec=spec, failure=f"evaluation raised {exc.code}: {exc}")

        borderline = settings.in_band(structural.max_minor_residual) or settings.in_band(
            -spectral.min_eigenvalue
        )
        outcome = dict(
            spec=spec,
            structural_ppt=structural.is_ppt,
            spectral_ppt=spectral.is_ppt,
            minor_residual=structural.max_minor_residual,
            min_eigenvalue=spectral.min_eigenvalue,
            borderline=borderline,
        )
        if borderline:
            logger.warning(
                "borderline instance %s: minor residual %.3e, min eigenvalue %.3e",
                spec.model_dump(exclude_none=True),
                structural.max_minor_residual,
                spectral.min_eigenvalue,
            )
        elif structural.is_ppt != spectral.is_ppt:
            return InstanceOutcome(**outcome, failure="structural and spectral verdicts disagree")

        if spec.kind == "ppt" and not structural.is_ppt:
            return InstanceOutcome(**outcome, failure="constructed PPT instance failed the minors")
        if not structural.is_ppt:
            return InstanceOutcome(**outcome)

        try:
            self.decomposer.decompose(params)
        except SepDecError as exc:
            return InstanceOutcome(**outcome, failure=f"decompose raised {exc.code}: {exc}")
        if not spectral.is_ppt and not borderline:
            return InstanceOutcome(
                **outcome, decomposed=True, failure="decomposed a spectrally NPT state"
            )
        return InstanceOutcome(**outcome, decomposed=True)

    async def run_campaign(
        self,
        n_values: Iterable[int],
        seeds: Iterable[int],
        kinds: Iterable[GenKind],
        epsilon: float = 0.5,
    ) -> FuzzSummary:
        seeds = list(seeds)
        specs = [
            GenSpec(n=n, kind=kind, seed=seed, epsilon=epsilon if kind == "perturbed" else None)
            for kind in kinds
            for n in n_values
            for seed in seeds
        ]
        total = len(specs)
        if total == 0:
            return FuzzSummary()

        semaphore = asyncio.Semaphore(settings.fuzz_workers)

        async def process(spec: GenSpec) -> InstanceOutcome:
            async with semaphore:
                return await asyncio.to_thread(self.evaluate, spec)

        tasks = [asyncio.create_task(process(spec)) for spec in specs]
        outcomes: list[InstanceOutcome] = []
        for completed, task in enumerate(asyncio.as_completed(tasks), start=1):
            outcomes.append(await task)
            if completed % 200 == 0:
                logger.info("fuzz progress %d/%d instances", completed, total)

        outcomes.sort(key=lambda item: (item.spec.kind, item.spec.n, item.spec.seed))
        summary = FuzzSummary(
            total=total,
            agreements=sum(1 for item in outcomes if item.agrees),
            borderline=sum(1 for item in outcomes if item.borderline),
            structural_ppt=sum(1 for item in outcomes if item.structural_ppt),
            spectral_ppt=sum(1 for item in outcomes if item.spectral_ppt),
            decomposed=sum(1 for item in outcomes if item.decomposed),
            failures=[
                FuzzFailure(spec=item.spec, reason=item.failure)
                for item in outcomes
                if item.failure is not None
            ],
            ppt_random_hits=[
                item.spec
                for item in outcomes
                if item.spec.kind == "random" and item.structural_ppt
            ],
        )
        logger.info(
            "fuzz campaign: %d instances, %d agreements, %d borderline, %d failures",
            summary.total,
            summary.agreements,
            summary.borderline,
            len(summary.failures),
        )
        return summary


fuzz_service = FuzzService()
