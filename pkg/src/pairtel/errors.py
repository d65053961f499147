"""Exception types shared across the package."""


class TruncationError(ValueError):
    """A Fock truncation is too small for the requested accuracy.

    Carries ``suggested_n_max``, the smallest truncation order estimated to
    satisfy the request.
    """

    def __init__(self, message, suggested_n_max=None):
        super().__init__(message)
        self.suggested_n_max = suggested_n_max


class ConvergenceError(RuntimeError):
    """An adaptive series hit its hard cap before meeting tolerance."""

    def __init__(self, message, partial_value=None):
        super().__init__(message)
        self.partial_value = partial_value


class QuadratureResolutionError(RuntimeError):
    """The outermost-ring residual of a disk quadrature exceeds tolerance."""

    def __init__(self, message, suggested_radius=None, suggested_n_radial=None):
        super().__init__(message)
        self.suggested_radius = suggested_radius
        self.suggested_n_radial = suggested_n_radial


class SeriesRangeError(RuntimeError):
    """A fidelity series evaluated outside [0, 1] beyond tolerance slack.

    This signals an implementation bug, never a legitimate physical value.
    """


class NonUnimodalScanError(RuntimeError):
    """A verification scan found more than one interior maximum.

    Carries the scan abscissae/values so the caller can inspect them.
    """

    def __init__(self, message, scan_x=None, scan_f=None):
        super().__init__(message)
        self.scan_x = scan_x
        self.scan_f = scan_f
