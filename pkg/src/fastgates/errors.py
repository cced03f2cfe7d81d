"""Exception types shared across the package."""


class FastGateError(Exception):
    """Base class for package errors."""


class NumericalError(FastGateError):
    """A numerical routine failed to converge or produced invalid output."""


class OverlapError(FastGateError):
    """Expanded pulse-pair groups overlap in time at the given repetition rate."""

    def __init__(self, first_group: int, second_group: int, gap: float, period: float):
        self.first_group = first_group
        self.second_group = second_group
        self.gap = gap
        self.period = period
        super().__init__(
            f"groups {first_group} and {second_group} overlap: event gap "
            f"{gap:.3e} s is below the repetition period {period:.3e} s")


class InfeasibleError(FastGateError):
    """No feasible pulse scheme exists for the requested problem."""
