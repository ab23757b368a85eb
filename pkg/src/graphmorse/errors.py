class ContractError(ValueError):
    """An operation was called outside its documented preconditions."""


class InvariantViolation(AssertionError):
    """A mathematical identity that must hold was found broken."""
