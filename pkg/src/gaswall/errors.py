"""Exception types shared across the package.

Domain violations (bad arguments, wrong kernel kind, degenerate input) raise
plain ValueError so they compose naturally with numpy/scipy call sites.  The
two classes below mark *numerical* failures: an iteration that ran out of
budget, or a root bracket that could not be established.
"""


class ConvergenceError(RuntimeError):
    """An adaptive quadrature or series refinement hit its budget without
    reaching the requested tolerance."""


class BracketError(RuntimeError):
    """A root could not be bracketed within the allowed search range.

    For critical-radius searches this typically means the confining
    potential grows too slowly for the gas to have a finite pulled support.
    """
