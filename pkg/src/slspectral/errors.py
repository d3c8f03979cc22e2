"""Shared exception types."""


class SLSpectralError(Exception):
    """Base class for solver failures."""


class InputError(SLSpectralError):
    """Bad problem description (file, expression, boundary rows)."""


class NumericalError(SLSpectralError):
    """A numerical stage failed; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
