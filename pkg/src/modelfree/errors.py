"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid configuration (bad grid, misaligned windows, unknown scenario key...)."""


class NotReadyError(RuntimeError):
    """An operation needs more samples than the window currently holds."""


class DivergenceError(RuntimeError):
    """A simulated state or control signal became non-finite.

    Carries the step index at which the blow-up was detected.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step
