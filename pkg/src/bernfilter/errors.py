"""Exception types raised across the package."""


class BernfilterError(ValueError):
    """Base class for all package errors."""


class GraphError(BernfilterError):
    """Malformed graph input (bad indices, empty graph)."""


class FilterError(BernfilterError):
    """Invalid coefficients, orders, or filter evaluations."""


class OracleCapError(BernfilterError):
    """Graph too large for the dense spectral oracle."""


class DatasetError(BernfilterError):
    """Missing, inconsistent, or non-finite data on disk."""


class DivergenceError(BernfilterError):
    """Training produced a non-finite loss."""
