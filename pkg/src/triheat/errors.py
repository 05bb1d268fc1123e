"""Exception hierarchy shared by all modules.

Every class subclasses :class:`TriheatError`; domain violations additionally subclass
``ValueError`` so generic callers can catch them the usual way.
"""


class TriheatError(Exception):
    pass


class DomainError(TriheatError, ValueError):
    """Argument outside the domain of a function or constructor."""


class QuadratureError(TriheatError, ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance."""


class DegenerateTriangleError(DomainError):
    pass


class LevelTooLowError(DomainError):
    """Requested Psi level is at or below the equilateral minimum 3*sqrt(3)."""


class BracketError(TriheatError, ArithmeticError):
    """A root could not be bracketed; indicates numerical inconsistency."""


class SolverError(TriheatError, RuntimeError):
    """Linear solve or time stepping failed."""


class TruncationError(TriheatError, RuntimeError):
    """A Monte Carlo path hit the hard time cap without exiting."""


class IllConditionedError(TriheatError, ValueError):
    """Least-squares window gives an ill-conditioned design."""


class BadFitError(TriheatError, ValueError):
    """Fitted coefficients are unphysical (negative area or perimeter)."""


class InconsistentTripleError(TriheatError, ValueError):
    """The invariant triple is not attained by any triangle."""


class NonMonotoneError(TriheatError, ArithmeticError):
    """Phi is not monotone along a Psi level segment: a numerical red flag."""
