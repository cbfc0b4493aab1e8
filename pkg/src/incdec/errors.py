"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed instance, subset, ordering or parameter."""


class CapacityError(InputError):
    """Ground set too large for an exhaustive routine.

    Carries the cap that was exceeded and the flag that raises it so the CLI
    can print an actionable message.
    """

    def __init__(self, what: str, n: int, cap: int, flag: str):
        self.what = what
        self.n = n
        self.cap = cap
        self.flag = flag
        super().__init__(f"{what}: n={n} exceeds cap {cap} (raise with {flag})")


class PreconditionError(ValueError):
    """Input violates a mathematical precondition (e.g. non-monotone oracle)."""
