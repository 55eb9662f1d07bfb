"""Exception hierarchy. Each class maps to one CLI exit category."""


class Su11Error(Exception):
    exit_code = 1


class ScenarioError(Su11Error, ValueError):
    """Malformed or physically invalid scenario input."""

    exit_code = 2


class PhysicsError(Su11Error, ValueError):
    exit_code = 3


class DegenerateDenominatorError(PhysicsError):
    pass


class NearZeroReflectivityError(PhysicsError):
    pass


class NoPeakError(PhysicsError):
    pass


class BalancedRequiredError(PhysicsError):
    pass


class EtaBoundaryError(PhysicsError):
    pass


class NonPositiveInformationError(PhysicsError):
    pass


class OracleError(Su11Error):
    exit_code = 4


class CutoffTooSmallError(OracleError):
    def __init__(self, message, tail_mass=None, cutoff=None):
        super().__init__(message)
        self.tail_mass = tail_mass
        self.cutoff = cutoff


class TailOverflowError(CutoffTooSmallError):
    pass


class DegenerateParameterError(OracleError):
    pass


class UnknownFigureError(Su11Error, KeyError):
    exit_code = 2

    def __str__(self):
        return str(self.args[0]) if self.args else ""
