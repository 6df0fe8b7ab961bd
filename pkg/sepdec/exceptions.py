"""Error hierarchy shared by the services and the command line.

Every error carries a machine code and a detail mapping; the class decides the
process exit code used by ``sepdec.main``.
"""

from typing import Any


class SepDecError(Exception):
    exit_code = 3
    code = "Internal"

    def __init__(self, message: str, **detail: Any) -> None:
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_dict(self) -> dict[str, Any]:
        return {"error": self.code, "detail": {"message": self.message, **self.detail}}


class InputError(SepDecError):
    exit_code = 2
    code = "InputError"


class VerdictError(SepDecError):
    exit_code = 1
    code = "VerdictError"


class NumericalError(SepDecError):
    exit_code = 3
    code = "NumericalError"


class BadShape(InputError):
    code = "BadShape"


class ZeroEntry(InputError):
    code = "ZeroEntry"


class BadTrace(InputError):
    code = "BadTrace"


class BadS(InputError):
    code = "BadS"


class InvalidDocument(InputError):
    code = "InvalidDocument"


class BadGenSpec(InputError):
    code = "BadGenSpec"


class BadConfig(InputError):
    code = "BadConfig"


class NotPPT(VerdictError):
    code = "NotPPT"


class SumDefect(VerdictError):
    code = "SumDefect"


class EigensolverFailure(NumericalError):
    code = "EigensolverFailure"


class InconsistentTheta(NumericalError):
    code = "InconsistentTheta"


class MixIdentityViolated(NumericalError):
    code = "MixIdentityViolated"


class RankOneFailure(NumericalError):
    code = "RankOneFailure"


class DegenerateDraw(NumericalError):
    code = "DegenerateDraw"


class MethodDisagreement(NumericalError):
    code = "MethodDisagreement"


class VerificationFailure(NumericalError):
    code = "VerificationFailure"


class UsageError(InputError):
    code = "Usage"
