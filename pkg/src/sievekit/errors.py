class GuardExceeded(ValueError):
    """An exhaustive search would exceed a size guard."""

    def __init__(self, guard, limit, actual):
        super().__init__(f"guard {guard} exceeded: {actual} > {limit}")
        self.guard = guard
        self.limit = limit
        self.actual = actual


class MalformedError(ValueError):
    """Input data that does not have the declared shape (bad sieve, bad ideal, ...)."""


class Violation:
    """One failed axiom: an axiom id plus ordered witness fields."""

    __slots__ = ("axiom", "fields")

    def __init__(self, axiom, **fields):
        self.axiom = axiom
        self.fields = fields

    def __getitem__(self, key):
        return self.fields[key]

    def to_dict(self):
        return {"axiom": self.axiom, **self.fields}

    def __eq__(self, other):
        return isinstance(other, Violation) and self.to_dict() == other.to_dict()

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.fields.items())
        return f"Violation({self.axiom!r}, {inner})"
