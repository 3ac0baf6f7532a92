"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid input: NaN or negative e-value, bad shape, malformed file."""


class SizeGuardError(RuntimeError):
    """Input exceeds the hard size limit of a brute-force code path."""
