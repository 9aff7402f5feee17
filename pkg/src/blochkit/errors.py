"""Exception hierarchy.

Every numerical failure mode gets its own class so callers (and tests) can tell
an out-of-domain argument from a solver that did not converge.  All of them
derive from ``BlochkitError``; the argument-checking ones also derive from
``ValueError`` so they behave normally in generic code.
"""

from __future__ import annotations


class BlochkitError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BlochkitError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RangeError(BlochkitError, ValueError):
    """A size or parameter exceeds the supported range (e.g. degree cap)."""


class SingularityError(BlochkitError, ValueError):
    """Evaluation was requested too close to a pole, zero or branch point."""


class BranchError(BlochkitError, ArithmeticError):
    """A square-root branch selection rule failed (wrong root candidate)."""


class PathError(BlochkitError, ValueError):
    """An integration contour cannot keep the required clearance."""


class NoSolutionError(BlochkitError, ValueError):
    """A solve was requested for a target outside the attainable range."""


class ConvergenceError(BlochkitError, ArithmeticError):
    """An iterative solver exhausted its budget before reaching tolerance."""


class RootCountError(BlochkitError, ArithmeticError):
    """A polynomial solve produced the wrong number of roots in the disk."""


class ContinuationError(BlochkitError, ArithmeticError):
    """Fiber tracking failed (step size underflow or lost correspondence)."""


class CollisionError(BlochkitError, ArithmeticError):
    """Two tracked fiber paths approached within the collision threshold."""


class StructureError(BlochkitError, ArithmeticError):
    """A combinatorial consistency check failed (e.g. sheet graph not a tree)."""


class DegenerateError(BlochkitError, ValueError):
    """The configuration violates a genericity assumption of the construction."""
