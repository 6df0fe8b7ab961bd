import argparse

from pydantic import ValidationError

from sepdec.commands.common import service_for
from sepdec.exceptions import BadGenSpec
from sepdec.models.core_types import Tolerances
from sepdec.models.schemas import GenSpec, InstanceDocument
from sepdec.services.file_service import file_service
from sepdec.services.instance_gen import InstanceGenerator, instance_generator


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("generate", parents=[common], help="write a class instance")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument(
        "--kind", choices=["uniform", "ppt", "perturbed", "random"], default="ppt"
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--epsilon", type=float, default=None)
    parser.add_argument("--label", default=None)
    parser.add_argument("-o", "--output", default=None)
    parser.set_defaults(handler=handle)


async def handle(args: argparse.Namespace, tolerances: Tolerances) -> int:
    try:
        spec = GenSpec(
            n=args.n, kind=args.kind, seed=args.seed, epsilon=args.epsilon, label=args.label
        )
    except ValidationError as exc:
        raise BadGenSpec(
            "invalid generator arguments", errors=[error["msg"] for error in exc.errors()]
        ) from exc

    generator = service_for(args, instance_generator, InstanceGenerator, tolerances)
    params = generator.generate(spec)
    await file_service.write_document(InstanceDocument.from_params(params), args.output)
    return 0
