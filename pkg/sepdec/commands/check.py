import argparse
import logging
from pathlib import Path

from sepdec.commands.common import service_for
from sepdec.config import settings
from sepdec.exceptions import MethodDisagreement
from sepdec.models.core_types import Tolerances
from sepdec.models.schemas import CheckReport, StructuralSummary
from sepdec.services.file_service import file_service
from sepdec.services.ppt_structure import StructureAnalyzer, structure_analyzer
from sepdec.services.state_builder import StateBuilder, state_builder

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("check", parents=[common], help="decide PPT for an instance")
    parser.add_argument("instance", type=Path)
    parser.add_argument("--method", choices=["structural", "spectral", "both"], default="both")
    parser.add_argument("--dump-rho", type=Path, default=None, help="write rho^T1 as JSON")
    parser.add_argument("-o", "--output", default=None)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, tolerances: Tolerances) -> int:
    params = await file_service.read_instance(args.instance, tolerances)
    structure = service_for(args, structure_analyzer, StructureAnalyzer, tolerances)
    builder = service_for(args, state_builder, StateBuilder, tolerances)

    structural = None
    spectral = None
    summary = None
    if args.method in ("structural", "both"):
        structural = structure.check_minor_relations(params)
        theta = structure.extract_theta(params, structural) if structural.is_ppt else None
        summary = StructuralSummary(
            is_ppt=structural.is_ppt,
            max_minor_residual=structural.max_minor_residual,
            witness=list(structural.worst_witness) if structural.worst_witness else None,
            theta=theta.theta if theta else None,
            sum_defect_k=theta.sum_defect_k if theta else None,
        )
    if args.method in ("spectral", "both"):
        spectral = builder.spectral_ppt(params)

    borderline = (
        structural is not None and settings.in_band(structural.max_minor_residual)
    ) or (spectral is not None and settings.in_band(-spectral.min_eigenvalue))
    is_ppt = structural.is_ppt if structural is not None else spectral.is_ppt
    report = CheckReport(
        method=args.method,
        is_ppt=is_ppt,
        borderline=borderline,
        structural=summary,
        spectral=spectral,
    )
    await file_service.write_document(report, args.output)

    if args.dump_rho is not None:
        rho_pt = builder.partial_transpose(builder.build_rho(params))
        await file_service.write_document(builder.dump(rho_pt), args.dump_rho)

    if structural is not None and spectral is not None and structural.is_ppt != spectral.is_ppt:
        if not borderline:
            raise MethodDisagreement(
                "structural and spectral verdicts disagree outside the tolerance band",
                max_minor_residual=structural.max_minor_residual,
                min_eigenvalue=spectral.min_eigenvalue,
            )
        logger.warning("verdicts disagree inside the tolerance band; using the structural one")
    return 0 if is_ppt else 1
