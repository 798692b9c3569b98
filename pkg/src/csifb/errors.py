"""Exception hierarchy shared by all csifb sub-packages.

The CLI maps `ConfigError` to exit code 2 and every other exception to
exit code 1 (see `csifb.main`).
"""


class CsifbError(Exception):
    """Base class for all simulator errors."""


class ConfigError(CsifbError):
    """Invalid experiment document, CLI flag or environment setting."""


class DimensionError(CsifbError, ValueError):
    """Shape, length or range precondition violated."""


class NotPositiveSemidefiniteError(CsifbError, ValueError):
    """A correlation or covariance factor has a negative eigenvalue."""


class UnboundModelError(CsifbError):
    """The SCF representation was requested without a covariance model."""


class FrameError(CsifbError, ValueError):
    """A binary feedback frame is truncated or inconsistent."""


class BudgetError(CsifbError, ValueError):
    """No number of kept coefficients fits the requested bit budget."""
