import argparse
from pathlib import Path

from sepdec.commands.common import service_for
from sepdec.models.core_types import Tolerances
from sepdec.services.decomposer import Decomposer, SeparableDecomposition, decomposer
from sepdec.services.file_service import file_service


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "verify", parents=[common], help="check a decomposition against its instance"
    )
    parser.add_argument("instance", type=Path)
    parser.add_argument("decomposition", type=Path)
    parser.add_argument("-o", "--output", default=None)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, tolerances: Tolerances) -> int:
    params = await file_service.read_instance(args.instance, tolerances)
    document = await file_service.read_decomposition(args.decomposition)
    decomposition = SeparableDecomposition.from_document(document)
    service = service_for(args, decomposer, Decomposer, tolerances)
    report = service.verify_decomposition(decomposition, params)
    await file_service.write_document(report, args.output)
    return 0 if report.passed else 1
