"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input.  ``problems`` lists ``(field, message)`` pairs, one per offending field."""

    def __init__(self, problems, message=None):
        if isinstance(problems, tuple) and len(problems) == 2 and isinstance(problems[0], str):
            problems = [problems]
        self.problems = list(problems)
        if message is None:
            message = "; ".join(f"{field}: {msg}" for field, msg in self.problems)
        super().__init__(message)

    @property
    def fields(self):
        return [field for field, _ in self.problems]


class SizeError(RuntimeError):
    """An enumeration or grid would exceed its configured cap."""

    def __init__(self, count, cap, level=None, what="enumeration"):
        self.count = count
        self.cap = cap
        self.level = level
        where = "" if level is None else f" at level {level}"
        super().__init__(f"{what} size {count} exceeds cap {cap}{where}")


class UseStatisticalError(RuntimeError):
    """Exact evaluation is out of reach; the caller should use the Monte Carlo route."""


class WitnessError(RuntimeError):
    """No integer witness was found although the volume condition guarantees one."""
