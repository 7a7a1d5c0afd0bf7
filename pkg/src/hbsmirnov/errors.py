"""Exception hierarchy.

Every error carries a ``kind`` (used verbatim in CLI error objects) and the
process exit code the CLI maps it to: 1 for a negative mathematical verdict,
2 for invalid input, 3 for numerical failure.
"""


class HbError(Exception):
    exit_code = 3

    def __init__(self, detail="", **info):
        super().__init__(detail)
        self.detail = detail
        self.info = info

    @property
    def kind(self):
        return type(self).__name__


class InputError(HbError):
    exit_code = 2


class NumericalError(HbError):
    exit_code = 3


class VerdictError(HbError):
    exit_code = 1


class NonConvergence(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class RootOnNode(NumericalError):
    pass


class RouteMismatch(NumericalError):
    pass


class CertificationFailure(NumericalError):
    pass


class TooCloseToBoundary(InputError):
    pass


class NotCoprime(InputError):
    pass


class PoleNearBoundary(InputError):
    pass


class GridMismatch(InputError):
    pass


class NegativeWeight(InputError):
    pass


class NotNonnegative(InputError):
    pass


class ZeroFunction(InputError):
    pass


class NotInBall(InputError):
    pass


class InnerInput(InputError):
    pass


class RootNotUnimodular(InputError):
    pass


class NotH2(VerdictError):
    pass


class NotInSpace(VerdictError):
    pass


class NotMultiplier(VerdictError):
    pass


class InvalidInput(InputError):
    pass
