"""Exception hierarchy for ainfree.

Verification failures are not exceptions; they end up in reports.
Everything raised here means the input or the request itself is unusable.
"""


class AinfreeError(Exception):
    """Base class for every error raised by the library"""


class InputError(AinfreeError, ValueError):
    """Malformed file, argument or request"""


class DimensionMismatch(InputError):
    pass


class ScalarKindMismatch(InputError):
    pass


class TreeError(InputError):
    """Invalid plane tree, tree text or vertex address"""


class EndpointMismatch(InputError):
    """Word or composite whose objects do not chain up"""


class DegreeError(InputError):
    """Inhomogeneous data, or a map that does not have its declared degree"""


class BudgetExceeded(AinfreeError):
    """Result would need more leaves or a larger arity than the free category was built with"""


class TruncationError(AinfreeError):
    """Component requested beyond the truncation level of an A_N object"""


class NotAChainMap(AinfreeError):
    pass


class PreconditionError(AinfreeError):
    """A theorem's hypothesis does not hold for the supplied data"""
