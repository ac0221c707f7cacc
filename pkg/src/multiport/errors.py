"""Exception types shared across the package."""


class MultiportError(ValueError):
    """Base class for all argument/contract violations raised by this package."""


class InvalidModeError(MultiportError):
    """A mode index lies outside the valid range 1..n."""


class InvalidArrangementError(MultiportError):
    """An occupation/assignment list violates its invariants."""


class ParticleMismatchError(MultiportError):
    """Input and output arrangements disagree on particle number or mode count."""


class InvalidFermionStateError(MultiportError):
    """A fermionic arrangement has more than one particle in a mode."""


class ShapeError(MultiportError):
    """A matrix has the wrong shape for the requested operation."""


class SizeError(MultiportError):
    """A problem size exceeds the configured practical bound."""


class InvalidPeriodError(MultiportError):
    """A claimed period length does not divide the number of modes."""


class MatrixFileError(MultiportError):
    """A matrix file is malformed or inconsistent with the declared size."""


class SoundnessViolationError(RuntimeError):
    """A law-predicted suppression disagrees with the exact probability.

    This cannot happen for a correct implementation on an exact Fourier
    matrix; raising loudly beats silently mis-tagging a grid.
    """
