import argparse
from pathlib import Path

from sepdec.commands.common import service_for
from sepdec.models.core_types import Tolerances
from sepdec.services.decomposer import Decomposer, decomposer
from sepdec.services.file_service import file_service


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "decompose", parents=[common], help="emit a separable pure-state decomposition"
    )
    parser.add_argument("instance", type=Path)
    parser.add_argument("--free-delta", type=float, default=0.0, help="gauge constant delta_1")
    parser.add_argument("--winding", type=int, default=0, help="discrete delta solution index")
    parser.add_argument("-o", "--output", default=None)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, tolerances: Tolerances) -> int:
    params = await file_service.read_instance(args.instance, tolerances)
    service = service_for(args, decomposer, Decomposer, tolerances)
    decomposition = service.decompose(params, args.free_delta, args.winding)
    await file_service.write_document(decomposition.to_document(), args.output)
    return 0
