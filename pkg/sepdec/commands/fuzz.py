import argparse
from typing import get_args

from pydantic import ValidationError

from sepdec.commands.common import service_for
from sepdec.exceptions import BadGenSpec, UsageError
from sepdec.models.core_types import Tolerances
from sepdec.models.schemas import GenKind
from sepdec.services.file_service import file_service
from sepdec.services.fuzz_service import FuzzService, fuzz_service


def register(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "fuzz", parents=[common], help="structural vs spectral equivalence campaign"
    )
    parser.add_argument("--n-min", type=int, default=2)
    parser.add_argument("--n-max", type=int, default=6)
    parser.add_argument("--seeds", type=int, default=50, help="number of seeds per (kind, n)")
    parser.add_argument("--seed-start", type=int, default=0)
    parser.add_argument("--kinds", default="ppt,random")
    parser.add_argument("--epsilon", type=float, default=0.5)
    parser.add_argument("-o", "--output", default=None)
    parser.set_defaults(handler=handle)


def parse_kinds(raw: str) -> list[str]:
    kinds = [kind.strip() for kind in raw.split(",") if kind.strip()]
    unknown = sorted(set(kinds) - set(get_args(GenKind)))
    if unknown:
        raise UsageError(f"unknown kinds: {', '.join(unknown)}", kinds=unknown)
    return kinds


async def handle(args: argparse.Namespace, tolerances: Tolerances) -> int:
    if args.n_min < 2 or args.n_max < args.n_min:
        raise UsageError("need 2 <= n-min <= n-max", n_min=args.n_min, n_max=args.n_max)
    if args.seeds < 0 or args.seed_start < 0:
        raise UsageError("seed count and start must be non-negative")
    kinds = parse_kinds(args.kinds)

    service = service_for(args, fuzz_service, FuzzService, tolerances)
    try:
        summary = await service.run_campaign(
            range(args.n_min, args.n_max + 1),
            range(args.seed_start, args.seed_start + args.seeds),
            kinds,
            epsilon=args.epsilon,
        )
    except ValidationError as exc:
        raise BadGenSpec(
            "invalid campaign arguments", errors=[error["msg"] for error in exc.errors()]
        ) from exc
    await file_service.write_document(summary, args.output)
    return 1 if summary.failures else 0
