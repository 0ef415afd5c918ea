"""Parallel pairwise statistical testing with per-pair missing-value removal.

The package computes seven statistical tests between every pair of
features drawn from dense feature-by-sample matrices, removing missing
entries pairwise, and returns full result matrices (statistics,
p-values, adjusted p-values, effect sizes).  The hot path is compiled
with numba and parallelized over deterministic feature partitions; a
pure numpy/scipy reference implementation, a synthetic data generator,
delimited file I/O, and a command-line front end round out the public
surface.
"""

from .adjust import adjust
from .datamodel import (
    BASE_OUTPUTS,
    EFFECTS_BY_TEST,
    KINDS,
    KINDS_BY_TEST,
    TESTS,
    DataMatrix,
    ResultSet,
    TestRequest,
    make_matrix,
    outputs_for,
)
from .engine import run
from .errors import (
    DomainError,
    EmptyMatrix,
    ExactModeWithTies,
    InfeasibleSimulation,
    KindMismatch,
    LabelOutOfRange,
    NegativeLabel,
    NonConvergence,
    NonIntegerCategoryLabel,
    NonSquareSymmetric,
    PairstatError,
    SampleCountMismatch,
    TableTooLarge,
    TooLarge,
    UnknownMethod,
    UnsupportedOutputForTest,
)
from .matio import read_matrix, write_matrix
from .oracle import oracle_run, permutation_mwu
from .simulate import simulate_matrix

__version__ = "0.1.0"

__all__ = [
    "BASE_OUTPUTS",
    "EFFECTS_BY_TEST",
    "KINDS",
    "KINDS_BY_TEST",
    "TESTS",
    "DataMatrix",
    "DomainError",
    "EmptyMatrix",
    "ExactModeWithTies",
    "InfeasibleSimulation",
    "KindMismatch",
    "LabelOutOfRange",
    "NegativeLabel",
    "NonConvergence",
    "NonIntegerCategoryLabel",
    "NonSquareSymmetric",
    "PairstatError",
    "ResultSet",
    "SampleCountMismatch",
    "TableTooLarge",
    "TestRequest",
    "TooLarge",
    "UnknownMethod",
    "UnsupportedOutputForTest",
    "adjust",
    "make_matrix",
    "oracle_run",
    "outputs_for",
    "permutation_mwu",
    "read_matrix",
    "run",
    "simulate_matrix",
    "write_matrix",
    "__version__",
]
