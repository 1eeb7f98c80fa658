class InvalidParameter(ValueError):
    pass


class SizeLimitError(ValueError):
    pass


class SamplingFailure(RuntimeError):
    pass


class NumericalFailure(RuntimeError):
    pass


class DegenerateProjection(NumericalFailure):
    """A row of the eigenvector block has (numerically) zero norm."""


class ConfigError(ValueError):
    pass
