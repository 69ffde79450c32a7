"""Exception types shared across the package."""


class StablabError(Exception):
    """Base class for all computation errors."""


class EnumerationOverflow(StablabError):
    """Coset enumeration did not close within the allowed number of cosets."""


class NotClosed(StablabError):
    """A coset action is incomplete (holes in the table)."""


class CapExceeded(StablabError):
    """A table-based computation would exceed the configured size cap."""


class NotCentral(StablabError):
    """A purported central extension has a non-central kernel."""


class DimensionMismatch(StablabError):
    """Matrix tuple does not match the presentation's generator count."""


class NoConvergence(StablabError):
    """Solver failed to converge.  Usually reported as a status, not raised."""


class DecompositionFailure(StablabError):
    """Numerical block diagonalization did not reach irreducible blocks."""


class ThresholdViolation(StablabError):
    """The epsilon+delta margin against the alpha threshold fails."""


class DualityViolation(StablabError):
    """A Poincare polynomial is not palindromic for its stated dimension."""


class UnknownEntry(StablabError):
    """Symmetric-space catalog lookup failed."""


class ParseError(StablabError):
    """Malformed presentation or extension file."""
