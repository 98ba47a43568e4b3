"""Degree thresholds for Sendov's conjecture and numerical checks of the
inequalities behind them."""
from .errors import (
    ConvergenceError,
    DegreeOverflowError,
    DomainError,
    InvalidRowError,
    RejectionBudgetError,
    SendovError,
    ThresholdOverflowError,
)
from .polycore import Polynomial, bombieri_inner, derivative, evaluate, from_roots, multiaffine_form
from .rootsolver import Disk, RootSet, all_roots, smallest_enclosing_disk

__version__ = "0.1.0"
