import argparse
from typing import Callable, TypeVar

from sepdec.models.core_types import Tolerances

Service = TypeVar("Service")


def service_for(
    args: argparse.Namespace,
    default: Service,
    factory: Callable[[Tolerances], Service],
    tolerances: Tolerances,
) -> Service:
    """The module-level service, or a fresh one when --tol overrides the configured tolerance."""
    return default if args.tol is None else factory(tolerances)
