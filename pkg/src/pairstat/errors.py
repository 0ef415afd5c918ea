"""Exception hierarchy shared by all pairstat modules.

Every error raised by the library derives from ``PairstatError`` so that
callers (and the CLI) can distinguish contract violations from ordinary
Python errors.  Numerical degeneracies (empty pair subsets, zero
variances, ...) are NOT errors: they are reported as NaN result cells.
"""


class PairstatError(Exception):
    """Base class for all pairstat errors."""


class DomainError(PairstatError):
    """An argument lies outside the mathematical domain of a function."""


class NonConvergence(PairstatError):
    """An iterative numerical scheme failed to converge within its cap."""


class EmptyMatrix(PairstatError):
    """An input matrix has zero rows or zero columns."""


class NonIntegerCategoryLabel(PairstatError):
    """A categorical/dichotomous entry is not integer-valued."""


class NegativeLabel(PairstatError):
    """A categorical/dichotomous entry is a negative label."""


class LabelOutOfRange(PairstatError):
    """An observed label is >= the declared category count."""


class KindMismatch(PairstatError):
    """The requested test does not accept the given matrix kind(s)."""


class SampleCountMismatch(PairstatError):
    """Two input matrices disagree on their number of samples."""


class UnsupportedOutputForTest(PairstatError):
    """A requested output name does not belong to the chosen test."""


class TableTooLarge(PairstatError):
    """Exact Mann-Whitney U table requested beyond the group-size cap."""


class ExactModeWithTies(PairstatError):
    """Exact Mann-Whitney U mode forced on data containing ties."""


class UnknownMethod(PairstatError):
    """Unknown multiple-testing correction method."""


class NonSquareSymmetric(PairstatError):
    """Symmetric adjustment requested on a non-square matrix."""


class TooLarge(PairstatError):
    """Brute-force enumeration requested beyond its feasibility cap."""


class InfeasibleSimulation(PairstatError):
    """Simulation constraints cannot be satisfied (e.g. c > present count)."""
