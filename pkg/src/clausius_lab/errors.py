"""Failure types shared across the numerical modules."""


class NumericalFailure(RuntimeError):
    """A computation could not reach its accuracy target.

    Raised instead of returning a silently inaccurate value. ``diagnostics``
    carries whatever the failing routine knew (achieved error, truncation
    sizes, offending eigenvalues, ...).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if self.diagnostics:
            details = ", ".join(f"{k}={v!r}" for k, v in sorted(self.diagnostics.items()))
            return f"{base} ({details})"
        return base
