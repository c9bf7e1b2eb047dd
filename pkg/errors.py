"""
Exception hierarchy for the sklyanin toolkit.

Input problems map to CLI exit code 2 / HTTP 400, failed identities to exit code 1.
"""


class SklyaninError(Exception):
    """Base class for every error raised by this package"""


class InputError(SklyaninError, ValueError):
    """Malformed or out-of-range input (Cartan type, leg indices, bases)"""


class LatticeError(InputError):
    """Vector outside the declared lattice or not convertible between bases"""


class DataFormatError(InputError):
    """Malformed singularity-data document"""


class ConeError(InputError):
    """Degenerate cone or missing binomial relation"""


class NumericalError(SklyaninError, ArithmeticError):
    """Numerical evaluation refused or failed"""


class SeriesCapError(NumericalError):
    """Theta series did not reach its tolerance within the term cap"""


class PoleProximityError(NumericalError):
    """Evaluation point too close to a lattice zero, pole or dynamical wall"""


class ContourError(NumericalError):
    """Quadrature produced non-finite samples"""


class GenusError(SklyaninError, ArithmeticError):
    """Non-integral or negative genus, or an adjunction parity violation"""


class VerificationError(SklyaninError, AssertionError):
    """An identity that the computation asserts internally did not hold"""
