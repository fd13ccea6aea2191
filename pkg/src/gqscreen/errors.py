"""Exception types shared across the toolkit."""


class GqscreenError(Exception):
    """Base class for toolkit errors."""


class NotThickError(GqscreenError, ValueError):
    """Raised when an operation that needs a thick order gets s or t below 2."""

    def __init__(self, s, t):
        super().__init__(f"order ({s},{t}) is not thick")
        self.s = s
        self.t = t


class InfeasibleError(GqscreenError, ValueError):
    """An arithmetic condition that a GQ must satisfy does not hold."""


class ResourceLimitError(GqscreenError):
    """A computation was refused because its input exceeds the desk-scale bound."""


class IntransitiveError(GqscreenError, ValueError):
    pass


class NotSelfPairedError(GqscreenError, ValueError):
    pass
