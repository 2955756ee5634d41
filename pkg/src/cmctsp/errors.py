"""Exception hierarchy.

Two families matter to callers: :class:`InputError` for malformed complexes,
signals or arguments (CLI exit code 2) and :class:`NumericalError` for
failures of the linear-algebra layer or of a numerical precondition
(CLI exit code 3).
"""

from __future__ import annotations


class CMCError(Exception):
    """Base class for every error raised by this package."""


class InputError(CMCError):
    """Invalid user input: complex description, signal file or argument."""


class NumericalError(CMCError):
    """A numerical precondition failed or a kernel did not converge."""


# --- complex validation -------------------------------------------------

class ValidationError(InputError):
    pass


class DuplicateId(ValidationError):
    pass


class DanglingReference(ValidationError):
    pass


class OrderViolation(ValidationError):
    pass


class ScopeError(ValidationError):
    """A cell references faces outside its layer scope."""


class MultiLayerCell(ScopeError):
    """A cross-cell touches more than two layers."""


class OrientationError(ValidationError):
    pass


class UnknownLayer(InputError):
    pass


class InvalidOrderPair(InputError):
    pass


class UnsupportedOrderPair(InputError):
    pass


class IndexMismatch(InputError):
    pass


class UnknownCellId(InputError):
    pass


class ParseError(InputError):
    """Malformed file; the message carries the file and record location."""


class GammaTooLarge(InputError):
    pass


class DegenerateConfig(InputError):
    pass


# --- numerics -----------------------------------------------------------

class NotSymmetric(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class BlockMismatch(NumericalError):
    pass


class DependentCells(NumericalError):
    pass


class InfeasibleEpsilon(NumericalError):
    pass


class ZeroSignal(NumericalError):
    pass


class ZeroReference(NumericalError):
    pass


class ZeroHarmonic(NumericalError):
    pass
