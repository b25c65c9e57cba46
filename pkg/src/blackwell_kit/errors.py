"""Exception types shared across the package."""


class ChannelError(Exception):
    """Base class for domain errors raised by blackwell_kit."""


class NonStochastic(ChannelError):
    def __init__(self, row: int, deviation: float):
        self.row = row
        self.deviation = deviation
        super().__init__(f"row {row} is not a probability vector (deviation {deviation:.3g})")


class DimensionMismatch(ChannelError):
    pass


class NoConvergence(ChannelError):
    def __init__(self, iterations: int, gap: float):
        self.iterations = iterations
        self.gap = gap
        super().__init__(f"no convergence after {iterations} iterations (gap {gap:.3g})")


class TooLarge(ChannelError):
    pass


class BadAlpha(ChannelError):
    pass


class BadWeights(ChannelError):
    pass


class NotUniformityPreserving(ChannelError):
    def __init__(self, column: int):
        self.column = column
        super().__init__(f"a -> a*{column} is not a permutation")


class NotBalanced(ChannelError):
    def __init__(self, deviation: float):
        self.deviation = deviation
        super().__init__(f"measure is not balanced (mean deviates from uniform by {deviation:.3g})")


class ParseError(ChannelError):
    pass
